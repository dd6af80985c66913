#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "lsf/feature_map.hpp"

namespace lsf {
namespace {

std::vector<double> draws(double s, std::size_t n, std::uint64_t seed) {
    RngStream rng(seed);
    std::vector<double> out(n);
    for (double& x : out) x = sample_stable(s, rng);
    return out;
}

TEST(FeatureMap, GaussianCaseHasVarianceTwo) {
    const auto x = draws(2.0, 1'000'000, 1);
    double mean = 0.0, sq = 0.0;
    for (double v : x) {
        mean += v;
        sq += v * v;
    }
    mean /= x.size();
    EXPECT_NEAR(mean, 0.0, 0.01);
    EXPECT_NEAR(sq / x.size() - mean * mean, 2.0, 0.02);
}

TEST(FeatureMap, CauchyMedianAndQuartiles) {
    auto x = draws(1.0, 1'000'000, 2);
    std::sort(x.begin(), x.end());
    EXPECT_NEAR(x[x.size() / 2], 0.0, 0.01);
    // Standard Cauchy quartiles are -1 and 1.
    EXPECT_NEAR(x[x.size() / 4], -1.0, 0.02);
    EXPECT_NEAR(x[3 * x.size() / 4], 1.0, 0.02);
}

TEST(FeatureMap, EmpiricalCharacteristicFunction) {
    for (double s : {0.5, 1.0, 1.5, 2.0}) {
        const auto x = draws(s, 400'000, 3);
        for (double t : {0.3, 1.0, 2.0}) {
            double c = 0.0;
            for (double v : x) c += std::cos(t * v);
            EXPECT_NEAR(c / x.size(), std::exp(-std::pow(t, s)), 0.02) << s << ' ' << t;
        }
    }
    RngStream rng(0);
    EXPECT_THROW(sample_stable(0.0, rng), RangeError);
    EXPECT_THROW(sample_stable(2.5, rng), RangeError);
}

TEST(FeatureMap, KernelValues) {
    EXPECT_DOUBLE_EQ(characteristic_kernel(Vector{0.0, 0.0}, 1.0), 1.0);
    EXPECT_NEAR(characteristic_kernel(Vector{std::log(2.0), 0.0}, 1.0), 0.5, 1e-15);
    EXPECT_NEAR(characteristic_kernel(Vector{0.6, 0.8}, 2.0), std::exp(-1.0), 1e-15);
    EXPECT_NEAR(characteristic_kernel(Vector{1.0, 2.0}, Vector{0.4, 1.2}, 2.0), std::exp(-1.0), 1e-15);
}

TEST(FeatureMap, DeviationBound) {
    EXPECT_NEAR(kernel_deviation_bound(4096, 0.1), 6 * std::exp(-0.32), 1e-12);
    EXPECT_NEAR(kernel_deviation_bound(4096, 0.1), 4.36, 0.01);
    EXPECT_NEAR(kernel_deviation_bound(1u << 17, 0.1), 2.15e-4, 0.01e-4);
}

TEST(FeatureMap, BuildAndEmbed) {
    const FeatureMap map = build_map(5, 300, 1.5, 9);
    EXPECT_EQ(map.projections.size(), 1500u);
    EXPECT_EQ(map.phases.size(), 300u);
    for (double b : map.phases) {
        EXPECT_GE(b, 0.0);
        EXPECT_LT(b, 2 * std::numbers::pi);
    }
    const Vector x{0.1, -0.4, 2.0, 0.0, 1.0};
    const Vector raw = embed_unnormalized(map, x);
    for (std::size_t j = 0; j < 300; ++j) {
        double dot = map.phases[j];
        for (std::size_t i = 0; i < 5; ++i) dot += map.projections[j * 5 + i] * x[i];
        EXPECT_NEAR(raw[j], std::sqrt(2.0 / 300) * std::cos(dot), 1e-12);
    }
    EXPECT_NEAR(euclidean_norm(embed(map, x)), 1.0, 1e-12);
    EXPECT_THROW(embed(map, Vector{1.0}), std::invalid_argument);
    EXPECT_THROW(build_map(0, 10, 1.0, 1), RangeError);
    EXPECT_THROW(build_map(3, 10, 3.0, 1), RangeError);
}

TEST(FeatureMap, InnerProductApproximatesKernel) {
    const FeatureMap map = build_map(4, 1u << 14, 1.0, 21);
    const Vector x{0.3, -0.2, 0.5, 1.0};
    Vector y = x;
    // ||x - y||_1 = ln 2, so the kernel is 1/2.
    y[0] += std::log(2.0) / 2;
    y[3] -= std::log(2.0) / 2;
    EXPECT_NEAR(characteristic_kernel(x, y, 1.0), 0.5, 1e-12);
    EXPECT_NEAR(inner_product(embed(map, x), embed(map, y)), 0.5, 0.05);
}

TEST(FeatureMap, PhasesUniform) {
    const FeatureMap map = build_map(2, 10000, 2.0, 5);
    auto u = map.phases;
    for (double& v : u) v /= 2 * std::numbers::pi;
    std::sort(u.begin(), u.end());
    double ks = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        ks = std::max({ks, std::abs(u[i] - double(i) / u.size()), std::abs(u[i] - double(i + 1) / u.size())});
    }
    EXPECT_LT(ks, 1.358 / std::sqrt(10000.0));
}

TEST(FeatureMap, RowsFromSubstreams) {
    // Row j does not depend on l.
    const FeatureMap small = build_map(3, 10, 1.0, 4), big = build_map(3, 50, 1.0, 4);
    EXPECT_TRUE(std::equal(small.projections.begin(), small.projections.end(), big.projections.begin()));
    EXPECT_TRUE(std::equal(small.phases.begin(), small.phases.end(), big.phases.begin()));
}

TEST(FeatureMap, BatchSerialMatchesParallel) {
    const FeatureMap map = build_map(6, 512, 1.0, 3);
    RngStream rng(8);
    std::vector<Vector> pts(200, Vector(6));
    for (auto& p : pts) {
        for (double& v : p) v = rng.normal();
    }
    const auto a = embed_batch(map, pts, Execution::serial);
    const auto b = embed_batch(map, pts, Execution::parallel);
    EXPECT_EQ(a, b);
    EXPECT_EQ(a[17], embed(map, pts[17]));
}

}  // namespace
}  // namespace lsf
