#pragma once

// Data-parallel inner loops. Every kernel has a serial reference in
// lsf::kernels::serial and an OpenMP version in lsf::kernels::parallel with
// identical results; tests compare the two and bench/ times them.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace lsf {

enum class Execution { serial, parallel };

namespace kernels {

/// Trials per Monte-Carlo chunk. Chunk c draws from substream (seed, c), so
/// counts depend only on (seed, trials), never on the thread schedule.
inline constexpr std::uint64_t kMonteCarloChunk = 1u << 15;

/// Integer hit counts from the two-dimensional Gaussian simulation.
/// For each trial Z = (Z1, Z2) ~ N(0, I), X = Z1 and, per correlation rho,
/// Y = rho Z1 + sqrt(1 - rho^2) Z2.
struct TailCounts {
    std::uint64_t trials = 0;
    /// joint[i]: X > update_threshold and Y(rho_i) > query_threshold.
    std::vector<std::uint64_t> joint;
    /// X > query_threshold.
    std::uint64_t query_marginal = 0;
    /// X > update_threshold.
    std::uint64_t update_marginal = 0;

    bool operator==(const TailCounts&) const = default;
};

namespace serial {

/// out[r] = <matrix row r, x> for a row-major rows x dim matrix.
void project_rows(std::span<const double> matrix, std::size_t dim, std::span<const double> x,
                  std::span<double> out);

TailCounts tail_counts(std::uint64_t seed, std::uint64_t trials, std::span<const double> correlations,
                       double query_threshold, double update_threshold);

}  // namespace serial

namespace parallel {

void project_rows(std::span<const double> matrix, std::size_t dim, std::span<const double> x,
                  std::span<double> out);

TailCounts tail_counts(std::uint64_t seed, std::uint64_t trials, std::span<const double> correlations,
                       double query_threshold, double update_threshold);

}  // namespace parallel

inline void project_rows(Execution exec, std::span<const double> matrix, std::size_t dim,
                         std::span<const double> x, std::span<double> out) {
    exec == Execution::parallel ? parallel::project_rows(matrix, dim, x, out)
                                : serial::project_rows(matrix, dim, x, out);
}

inline TailCounts tail_counts(Execution exec, std::uint64_t seed, std::uint64_t trials,
                              std::span<const double> correlations, double query_threshold,
                              double update_threshold) {
    return exec == Execution::parallel
               ? parallel::tail_counts(seed, trials, correlations, query_threshold, update_threshold)
               : serial::tail_counts(seed, trials, correlations, query_threshold, update_threshold);
}

}  // namespace kernels
}  // namespace lsf
