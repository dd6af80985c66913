#include "lsf/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lsf/rng.hpp"

namespace lsf::kernels {

namespace {

inline double dot(const double* row, const double* x, std::size_t dim) {
    double sum = 0.0;
#pragma omp simd reduction(+ : sum)
    for (std::size_t j = 0; j < dim; ++j) sum += row[j] * x[j];
    return sum;
}

void check_projection_shape(std::span<const double> matrix, std::size_t dim, std::span<const double> x,
                            std::span<double> out) {
    if (x.size() != dim || matrix.size() != out.size() * dim) {
        throw std::invalid_argument("project_rows: shape mismatch");
    }
}

struct Coefficients {
    std::vector<double> rho;
    std::vector<double> orth;
};

Coefficients coefficients(std::span<const double> correlations) {
    Coefficients c;
    for (double r : correlations) {
        if (!(r >= -1.0 && r <= 1.0)) throw std::invalid_argument("correlation must lie in [-1, 1]");
        c.rho.push_back(r);
        c.orth.push_back(std::sqrt(std::max(0.0, 1.0 - r * r)));
    }
    return c;
}

// Accumulates one chunk of trials into `acc` (joint counts first, then the
// two marginals).
void run_chunk(std::uint64_t seed, std::uint64_t chunk, std::uint64_t count, const Coefficients& c,
               double query_threshold, double update_threshold, std::uint64_t* acc) {
    RngStream rng(seed, {chunk});
    const std::size_t k = c.rho.size();
    for (std::uint64_t i = 0; i < count; ++i) {
        const double z1 = rng.normal();
        const double z2 = rng.normal();
        if (z1 > update_threshold) {
            for (std::size_t j = 0; j < k; ++j) {
                if (c.rho[j] * z1 + c.orth[j] * z2 > query_threshold) ++acc[j];
            }
            ++acc[k + 1];
        }
        if (z1 > query_threshold) ++acc[k];
    }
}

TailCounts finish(std::uint64_t trials, std::size_t k, const std::vector<std::uint64_t>& acc) {
    TailCounts out;
    out.trials = trials;
    out.joint.assign(acc.begin(), acc.begin() + static_cast<std::ptrdiff_t>(k));
    out.query_marginal = acc[k];
    out.update_marginal = acc[k + 1];
    return out;
}

}  // namespace

namespace serial {

void project_rows(std::span<const double> matrix, std::size_t dim, std::span<const double> x,
                  std::span<double> out) {
    check_projection_shape(matrix, dim, x, out);
    for (std::size_t r = 0; r < out.size(); ++r) out[r] = dot(matrix.data() + r * dim, x.data(), dim);
}

TailCounts tail_counts(std::uint64_t seed, std::uint64_t trials, std::span<const double> correlations,
                       double query_threshold, double update_threshold) {
    const Coefficients c = coefficients(correlations);
    const std::size_t k = c.rho.size();
    std::vector<std::uint64_t> acc(k + 2, 0);
    const std::uint64_t chunks = (trials + kMonteCarloChunk - 1) / kMonteCarloChunk;
    for (std::uint64_t chunk = 0; chunk < chunks; ++chunk) {
        const std::uint64_t count = std::min(kMonteCarloChunk, trials - chunk * kMonteCarloChunk);
        run_chunk(seed, chunk, count, c, query_threshold, update_threshold, acc.data());
    }
    return finish(trials, k, acc);
}

}  // namespace serial

namespace parallel {

void project_rows(std::span<const double> matrix, std::size_t dim, std::span<const double> x,
                  std::span<double> out) {
    check_projection_shape(matrix, dim, x, out);
    const auto rows = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(static) if (rows > 256)
    for (std::ptrdiff_t r = 0; r < rows; ++r) {
        out[static_cast<std::size_t>(r)] = dot(matrix.data() + static_cast<std::size_t>(r) * dim, x.data(), dim);
    }
}

TailCounts tail_counts(std::uint64_t seed, std::uint64_t trials, std::span<const double> correlations,
                       double query_threshold, double update_threshold) {
    const Coefficients c = coefficients(correlations);
    const std::size_t k = c.rho.size();
    std::vector<std::uint64_t> acc(k + 2, 0);
    const auto chunks = static_cast<std::int64_t>((trials + kMonteCarloChunk - 1) / kMonteCarloChunk);
#pragma omp parallel
    {
        std::vector<std::uint64_t> local(k + 2, 0);
#pragma omp for schedule(dynamic, 1) nowait
        for (std::int64_t chunk = 0; chunk < chunks; ++chunk) {
            const auto ch = static_cast<std::uint64_t>(chunk);
            const std::uint64_t count = std::min(kMonteCarloChunk, trials - ch * kMonteCarloChunk);
            run_chunk(seed, ch, count, c, query_threshold, update_threshold, local.data());
        }
#pragma omp critical
        for (std::size_t j = 0; j < local.size(); ++j) acc[j] += local[j];
    }
    return finish(trials, k, acc);
}

}  // namespace parallel

}  // namespace lsf::kernels
