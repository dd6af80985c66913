#include "lsf/feature_map.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace lsf {

namespace {

void check_order(double s) {
    if (!(s > 0.0 && s <= 2.0)) throw RangeError("norm order s must lie in (0, 2], got " + std::to_string(s));
}

}  // namespace

double sample_stable(double s, RngStream& rng) {
    check_order(s);
    const double theta = std::numbers::pi * (rng.uniform_open() - 0.5);
    if (s == 1.0) return std::tan(theta);
    const double w = rng.exponential();
    return std::sin(s * theta) / std::pow(std::cos(theta), 1.0 / s) *
           std::pow(std::cos((1.0 - s) * theta) / w, (1.0 - s) / s);
}

FeatureMap build_map(std::size_t d, std::size_t l, double s, std::uint64_t seed) {
    check_order(s);
    if (d == 0 || l == 0) throw RangeError("feature map needs d >= 1 and l >= 1");
    FeatureMap map;
    map.input_dim = d;
    map.output_dim = l;
    map.norm_order = s;
    map.projections.resize(l * d);
    map.phases.resize(l);
    for (std::size_t j = 0; j < l; ++j) {
        RngStream rng(seed, {j});
        for (std::size_t i = 0; i < d; ++i) map.projections[j * d + i] = sample_stable(s, rng);
        map.phases[j] = 2.0 * std::numbers::pi * rng.uniform();
    }
    return map;
}

Vector embed_unnormalized(const FeatureMap& map, VectorView x) {
    if (x.size() != map.input_dim) throw DimensionMismatch(map.input_dim, x.size());
    Vector out(map.output_dim);
    kernels::serial::project_rows(map.projections, map.input_dim, x, out);
    const double scale = std::sqrt(2.0 / static_cast<double>(map.output_dim));
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = scale * std::cos(out[j] + map.phases[j]);
    return out;
}

Vector embed(const FeatureMap& map, VectorView x) {
    Vector v = embed_unnormalized(map, x);
    const double norm = euclidean_norm(v);
    if (!(norm > 0.0)) throw RangeError("feature embedding is the zero vector");
    for (double& c : v) c /= norm;
    return v;
}

std::vector<Vector> embed_batch(const FeatureMap& map, std::span<const Vector> points, Execution exec) {
    std::vector<Vector> out(points.size());
    const auto n = static_cast<std::ptrdiff_t>(points.size());
#pragma omp parallel for schedule(dynamic, 16) if (exec == Execution::parallel)
    for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = embed(map, points[i]);
    return out;
}

double characteristic_kernel(VectorView delta, double s) {
    check_order(s);
    double sum = 0.0;
    for (double v : delta) sum += std::pow(std::abs(v), s);
    return std::exp(-sum);
}

double characteristic_kernel(VectorView x, VectorView y, double s) {
    require_same_dimension(x, y);
    Vector delta(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) delta[i] = x[i] - y[i];
    return characteristic_kernel(delta, s);
}

double kernel_deviation_bound(std::size_t l, double epsilon) {
    if (l == 0 || !(epsilon > 0.0)) throw RangeError("kernel_deviation_bound needs l >= 1 and epsilon > 0");
    return 6.0 * std::exp(-static_cast<double>(l) * epsilon * epsilon / 128.0);
}

}  // namespace lsf
