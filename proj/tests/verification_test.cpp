#include <gtest/gtest.h>

#include <cmath>

#include "lsf/verification.hpp"

namespace lsf {
namespace {

VerificationOptions quick(std::uint64_t seed) {
    VerificationOptions o;
    o.seed = seed;
    o.tail_trials = 200000;
    o.stable_samples = 200000;
    o.lsh_pairs = 5000;
    return o;
}

TEST(Verification, DefaultSuitePasses) {
    const VerificationReport r = run_verification_suite(quick(1));
    EXPECT_EQ(r.checks.size(), 8u);
    for (const auto& c : r.checks) EXPECT_TRUE(c.passed) << c.name << ": " << c.detail;
    EXPECT_TRUE(r.all_passed());
    EXPECT_EQ(to_json(r).at("all_passed").get<bool>(), true);
}

TEST(Verification, CorruptedBoundIsCaught) {
    VerificationOptions o = quick(1);
    o.hooks.corrupt_collision_upper_bound = true;
    const VerificationReport r = run_verification_suite(o);
    EXPECT_FALSE(r.all_passed());
    for (const auto& c : r.checks) {
        if (c.name == "joint_tail_upper_bound") EXPECT_FALSE(c.passed);
    }
}

TEST(Verification, VerdictsStableAcrossSeeds) {
    const VerificationReport a = run_verification_suite(quick(2));
    const VerificationReport b = run_verification_suite(quick(3));
    ASSERT_EQ(a.checks.size(), b.checks.size());
    for (std::size_t i = 0; i < a.checks.size(); ++i) {
        EXPECT_EQ(a.checks[i].name, b.checks[i].name);
        EXPECT_EQ(a.checks[i].passed, b.checks[i].passed) << a.checks[i].name;
    }
}

TEST(Verification, Helpers) {
    EXPECT_NEAR(integrated_normal_tail(0.0), 0.5, 1e-12);
    EXPECT_NEAR(integrated_normal_tail(2.0), 0.5 * std::erfc(2.0 / std::sqrt(2.0)), 1e-12);
    EXPECT_GT(smoothed_standard_error(0, 1000), 0.0);
    EXPECT_NEAR(smoothed_standard_error(500, 1000000), std::sqrt(0.0005 * 0.9995 / 1e6), 1e-6);
}

}  // namespace
}  // namespace lsf
