#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lsf/core.hpp"
#include "lsf/kernels.hpp"
#include "lsf/rng.hpp"

namespace lsf {

/// One draw from the symmetric standard s-stable law with characteristic
/// function E[e^{itX}] = e^{-|t|^s} (Chambers-Mallows-Stuck). s = 1 gives a
/// standard Cauchy, s = 2 a normal with variance 2. Throws RangeError unless
/// 0 < s <= 2.
double sample_stable(double s, RngStream& rng);

/// Random Fourier features for k(x - y) = e^{-||x - y||_s^s}:
///   v(x)_j = sqrt(2 / l) cos(<a_j, x> + b_j),  then normalized,
/// with a_j having i.i.d. s-stable entries and b_j uniform on [0, 2 pi).
struct FeatureMap {
    std::size_t input_dim = 0;
    std::size_t output_dim = 0;
    double norm_order = 2.0;
    /// Row-major output_dim x input_dim.
    std::vector<double> projections;
    std::vector<double> phases;
};

/// Row j (its d stable entries, then its phase) is drawn from substream
/// (seed, j). Throws RangeError for d or l of zero or s outside (0, 2].
FeatureMap build_map(std::size_t d, std::size_t l, double s, std::uint64_t seed);

/// sqrt(2 / l) cos(<a_j, x> + b_j) without normalization.
Vector embed_unnormalized(const FeatureMap& map, VectorView x);

/// Unit-norm embedding. Throws RangeError if the unnormalized vector is zero.
Vector embed(const FeatureMap& map, VectorView x);

/// Embeds every point; the parallel version distributes points over threads
/// and returns the same vectors.
std::vector<Vector> embed_batch(const FeatureMap& map, std::span<const Vector> points,
                                Execution exec = Execution::parallel);

/// e^{-||delta||_s^s}.
double characteristic_kernel(VectorView delta, double s);

/// Kernel of a pair: characteristic_kernel(x - y, s).
double characteristic_kernel(VectorView x, VectorView y, double s);

/// Failure bound 6 e^{-l eps^2 / 128} on the embedding distorting a fixed
/// pair's kernel value by more than eps. Vacuous (> 1) for small l.
double kernel_deviation_bound(std::size_t l, double epsilon);

}  // namespace lsf
