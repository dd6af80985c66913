#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "json.hpp"
#include "lsf/dataset.hpp"
#include "lsf/lsf_index.hpp"
#include "lsf/ls_solver.hpp"

namespace lsf {

struct BenchReport {
    /// Fraction of queries with a planted near neighbor that got a valid answer.
    double recall = 0.0;
    double mean_candidates = 0.0;
    double mean_filters_probed = 0.0;
    double wall_time_per_query = 0.0;
    std::size_t queries = 0;
    std::size_t found = 0;
    /// Answers missing from the linear-scan result; always 0 unless broken.
    std::size_t unsound = 0;
    nlohmann::json parameters;
};

nlohmann::json to_json(const BenchReport& report);

/// Sphere benchmark: R repetitions of an LsfIndex planned for data.base.size()
/// points with `stats`, built one at a time with the seeds of
/// RepetitionEnsemble(config.seed) so that only one copy is in memory. A
/// query is answered by the first repetition that returns a point y with
/// <q, y> >= config.spec.params.beta (checked on the original coordinates).
/// Counters cover the repetitions consulted.
BenchReport run_recall_bench(const IndexConfig& config, const FilterFamilyStats& stats, const Dataset& data,
                             std::size_t repetitions, Execution exec = Execution::parallel);

/// Same with stats resolved from the config.
BenchReport run_recall_bench(const IndexConfig& config, const Dataset& data, std::size_t repetitions,
                             Execution exec = Execution::parallel);

/// l_s benchmark: repetition r is an LsIndex seeded
/// RepetitionEnsemble::repetition_seed(seed, r); answers are verified in the
/// source space against c r.
BenchReport run_ls_recall_bench(const LsPlan& plan, const Dataset& data, std::size_t repetitions, std::uint64_t seed,
                                Execution exec = Execution::parallel);

struct ScalingConfig {
    /// Dimension, alpha, beta, lambda and t of the planted benchmarks. beta is
    /// both the planning target and the acceptance threshold.
    GaussianFamilySpec spec;
    StatsMode mode = StatsMode::calibrated;
    std::uint64_t calibration_trials = 1'000'000;
    std::size_t queries = 100;
    std::size_t repetitions = 1;
    std::uint64_t seed = 0;
};

struct ScalingRow {
    std::uint64_t n = 0;
    double mean_candidates = 0.0;
    double mean_filters_probed = 0.0;
    /// mean_candidates + mean_filters_probed
    double work = 0.0;
    /// Linear-scan work: n.
    double brute_force = 0.0;
    double recall = 0.0;

    bool operator==(const ScalingRow&) const = default;
};

struct ScalingResult {
    std::vector<ScalingRow> rows;
    /// Least-squares slope of ln(work) against ln(n).
    double slope = 0.0;
    /// Query exponent of the planner stats used at every n.
    double rho_q = 0.0;
    FilterFamilyStats stats;
};

/// Runs planted sphere benchmarks at each n (ascending) with one set of
/// family stats; the dataset at n uses seed derive_seed(seed, {n}).
ScalingResult scaling_study(std::span<const std::uint64_t> n_grid, const ScalingConfig& config);

/// Least-squares slope of y against x. Throws RangeError for fewer than two
/// points or constant x.
double least_squares_slope(std::span<const double> x, std::span<const double> y);

inline constexpr const char* kScalingCsvHeader = "n,mean_candidates,mean_filters_probed,work,brute_force,recall";

void write_scaling_csv(std::ostream& os, std::span<const ScalingRow> rows);
std::vector<ScalingRow> parse_scaling_csv(std::istream& is);

}  // namespace lsf
