#include "lsf/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <istream>
#include <limits>
#include <memory>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace lsf {

namespace {

using QueryFn = std::function<QueryOutcome(std::size_t)>;

// Builds repetition r with `build`, then asks every still-unanswered query.
// `build` returns the per-query function for that repetition; the index it
// captures is dropped before the next repetition is built.
struct RepetitionRun {
    std::vector<std::vector<QueryOutcome>> outcomes;
    double query_seconds = 0.0;
};

RepetitionRun run_repetitions(std::size_t queries, std::size_t repetitions,
                              const std::function<QueryFn(std::size_t)>& build, Execution exec) {
    if (repetitions == 0) throw RangeError("benchmark needs at least one repetition");
    RepetitionRun run;
    run.outcomes.resize(queries);
    std::vector<bool> done(queries, false);
    for (std::size_t r = 0; r < repetitions; ++r) {
        std::vector<std::size_t> pending;
        for (std::size_t i = 0; i < queries; ++i) {
            if (!done[i]) pending.push_back(i);
        }
        if (pending.empty()) break;
        const QueryFn query = build(r);
        std::vector<QueryOutcome> results(pending.size());
        const auto start = std::chrono::steady_clock::now();
        const auto count = static_cast<std::ptrdiff_t>(pending.size());
#pragma omp parallel for schedule(dynamic, 1) if (exec == Execution::parallel)
        for (std::ptrdiff_t k = 0; k < count; ++k) results[k] = query(pending[k]);
        run.query_seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        for (std::size_t k = 0; k < pending.size(); ++k) {
            run.outcomes[pending[k]].push_back(results[k]);
            if (results[k].found) done[pending[k]] = true;
        }
    }
    return run;
}

BenchReport summarize(const Dataset& data, const RepetitionRun& run,
                      const std::function<bool(std::size_t, std::uint64_t)>& in_scan) {
    BenchReport report;
    report.queries = data.queries.size();
    std::vector<bool> has_truth(data.queries.size(), false);
    for (const auto& g : data.truth) {
        if (g.query_id < has_truth.size()) has_truth[g.query_id] = true;
    }
    std::size_t with_truth = 0;
    double candidates = 0.0;
    double probed = 0.0;
    for (std::size_t i = 0; i < data.queries.size(); ++i) {
        const QueryOutcome combined = combine_repetitions(run.outcomes[i]);
        candidates += static_cast<double>(combined.candidates_examined);
        probed += static_cast<double>(combined.filters_probed);
        if (combined.found) {
            if (!in_scan(i, *combined.found)) {
                ++report.unsound;
                continue;
            }
            ++report.found;
            if (has_truth[i]) ++with_truth;
        }
    }
    std::size_t truth_queries = 0;
    for (bool b : has_truth) truth_queries += b;
    const auto q = static_cast<double>(std::max<std::size_t>(1, data.queries.size()));
    report.recall = truth_queries ? static_cast<double>(with_truth) / static_cast<double>(truth_queries) : 0.0;
    report.mean_candidates = candidates / q;
    report.mean_filters_probed = probed / q;
    report.wall_time_per_query = run.query_seconds / q;
    return report;
}

std::vector<PointId> sequential_ids(std::size_t n) {
    std::vector<PointId> ids(n);
    for (std::size_t i = 0; i < n; ++i) ids[i] = i;
    return ids;
}

nlohmann::json plan_json(const IndexPlan& plan) {
    return {{"kappa1", plan.kappa1},
            {"tau", plan.tau},
            {"m1", plan.m1},
            {"kappa2", plan.kappa2},
            {"m2", plan.m2},
            {"n_target", plan.n_target},
            {"rho_q", plan.exponents.rho_q},
            {"rho_u", plan.exponents.rho_u},
            {"p1", plan.stats.p1},
            {"p2", plan.stats.p2},
            {"pq", plan.stats.pq},
            {"pu", plan.stats.pu}};
}

}  // namespace

nlohmann::json to_json(const BenchReport& report) {
    return {{"recall", report.recall},
            {"mean_candidates", report.mean_candidates},
            {"mean_filters_probed", report.mean_filters_probed},
            {"wall_time_per_query", report.wall_time_per_query},
            {"queries", report.queries},
            {"found", report.found},
            {"unsound", report.unsound},
            {"parameters", report.parameters}};
}

BenchReport run_recall_bench(const IndexConfig& config, const FilterFamilyStats& stats, const Dataset& data,
                             std::size_t repetitions, Execution exec) {
    if (data.base.empty()) throw RangeError("benchmark needs a non-empty base set");
    const IndexPlan plan = plan_parameters(std::max<std::size_t>(2, data.base.size()), stats);
    const double beta = config.spec.params.beta;
    const std::vector<PointId> ids = sequential_ids(data.base.size());

    const auto build = [&](std::size_t r) -> QueryFn {
        auto index = std::make_shared<LsfIndex>(plan, config.spec, RepetitionEnsemble::repetition_seed(config.seed, r));
        index->insert_batch(ids, data.base, exec);
        return [index, &data, beta](std::size_t i) {
            const Vector& q = data.queries[i];
            return index->query(q, [&](PointId id, std::span<const float>) {
                return inner_product(data.base[id], q) >= beta;
            });
        };
    };
    const RepetitionRun run = run_repetitions(data.queries.size(), repetitions, build, exec);
    BenchReport report = summarize(data, run, [&](std::size_t i, std::uint64_t id) {
        for (const ScanHit& h : linear_scan(data.base, data.queries[i], beta, Metric::inner_product)) {
            if (h.id == id) return true;
        }
        return false;
    });
    report.parameters = {{"kind", "sphere"},
                         {"n", data.base.size()},
                         {"d", config.spec.dimension},
                         {"alpha", config.spec.params.alpha},
                         {"beta", beta},
                         {"lambda", config.spec.params.lambda},
                         {"t", config.spec.t},
                         {"repetitions", repetitions},
                         {"seed", config.seed},
                         {"mode", config.mode == StatsMode::analytic ? "analytic" : "calibrated"},
                         {"plan", plan_json(plan)}};
    return report;
}

BenchReport run_recall_bench(const IndexConfig& config, const Dataset& data, std::size_t repetitions,
                             Execution exec) {
    return run_recall_bench(config, resolve_stats(config), data, repetitions, exec);
}

BenchReport run_ls_recall_bench(const LsPlan& plan, const Dataset& data, std::size_t repetitions, std::uint64_t seed,
                                Execution exec) {
    if (data.base.empty()) throw RangeError("benchmark needs a non-empty base set");
    const std::vector<PointId> ids = sequential_ids(data.base.size());
    const auto build = [&](std::size_t r) -> QueryFn {
        auto index = std::make_shared<LsIndex>(plan, RepetitionEnsemble::repetition_seed(seed, r));
        index->insert_batch(ids, data.base, exec);
        return [index, &data](std::size_t i) { return index->query(data.queries[i]); };
    };
    const RepetitionRun run = run_repetitions(data.queries.size(), repetitions, build, exec);
    const double limit = plan.nn.approximation * plan.nn.radius;
    BenchReport report = summarize(data, run, [&](std::size_t i, std::uint64_t id) {
        for (const ScanHit& h : linear_scan(data.base, data.queries[i], limit, Metric::ls, plan.nn.norm_order)) {
            if (h.id == id) return true;
        }
        return false;
    });
    report.parameters = {{"kind", "ls"},
                         {"n", data.base.size()},
                         {"d", plan.input_dim},
                         {"r", plan.nn.radius},
                         {"c", plan.nn.approximation},
                         {"s", plan.nn.norm_order},
                         {"lambda", plan.lambda},
                         {"scale", plan.scale},
                         {"alpha", plan.alpha},
                         {"beta", plan.beta},
                         {"margin", plan.margin},
                         {"embed_dim", plan.embed_dim},
                         {"t", plan.family.t},
                         {"repetitions", repetitions},
                         {"seed", seed},
                         {"plan", plan_json(plan.index_plan)}};
    return report;
}

// --- scaling ------------------------------------------------------------------

double least_squares_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw RangeError("slope needs at least two (x, y) pairs");
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    if (sxx == 0.0) throw RangeError("slope needs at least two distinct x values");
    return sxy / sxx;
}

ScalingResult scaling_study(std::span<const std::uint64_t> n_grid, const ScalingConfig& config) {
    if (n_grid.empty()) throw RangeError("scaling study needs a non-empty n grid");
    for (std::size_t i = 1; i < n_grid.size(); ++i) {
        if (n_grid[i] <= n_grid[i - 1]) throw RangeError("n grid must be strictly ascending");
    }
    IndexConfig index_config{config.spec, config.mode, config.calibration_trials, config.seed};
    ScalingResult result;
    result.stats = resolve_stats(index_config);
    result.rho_q = exponents_from_stats(result.stats).rho_q;

    std::vector<double> log_n, log_work;
    for (std::uint64_t n : n_grid) {
        DatasetSpec ds;
        ds.n = n;
        ds.d = config.spec.dimension;
        ds.kind = DatasetKind::sphere_planted;
        ds.alpha = config.spec.params.alpha;
        ds.queries = std::min<std::size_t>(config.queries, n);
        ds.seed = derive_seed(config.seed, {n});
        const Dataset data = generate_dataset(ds);
        const BenchReport report = run_recall_bench(index_config, result.stats, data, config.repetitions);
        ScalingRow row;
        row.n = n;
        row.mean_candidates = report.mean_candidates;
        row.mean_filters_probed = report.mean_filters_probed;
        row.work = report.mean_candidates + report.mean_filters_probed;
        row.brute_force = static_cast<double>(n);
        row.recall = report.recall;
        result.rows.push_back(row);
        log_n.push_back(std::log(static_cast<double>(n)));
        log_work.push_back(std::log(std::max(row.work, 1.0)));
    }
    if (result.rows.size() >= 2) result.slope = least_squares_slope(log_n, log_work);
    return result;
}

void write_scaling_csv(std::ostream& os, std::span<const ScalingRow> rows) {
    const auto old = os.precision(std::numeric_limits<double>::max_digits10);
    os << kScalingCsvHeader << '\n';
    for (const auto& r : rows) {
        os << r.n << ',' << r.mean_candidates << ',' << r.mean_filters_probed << ',' << r.work << ','
           << r.brute_force << ',' << r.recall << '\n';
    }
    os.precision(old);
}

std::vector<ScalingRow> parse_scaling_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != kScalingCsvHeader) throw std::runtime_error("scaling csv: bad header");
    std::vector<ScalingRow> rows;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        ScalingRow r;
        char c[5] = {};
        if (!(ls >> r.n >> c[0] >> r.mean_candidates >> c[1] >> r.mean_filters_probed >> c[2] >> r.work >> c[3] >>
              r.brute_force >> c[4] >> r.recall)) {
            throw std::runtime_error("scaling csv: malformed row: " + line);
        }
        for (char ch : c) {
            if (ch != ',') throw std::runtime_error("scaling csv: malformed row: " + line);
        }
        rows.push_back(r);
    }
    return rows;
}

}  // namespace lsf
