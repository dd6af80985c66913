#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace lsf {

struct VerificationCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct VerificationReport {
    std::vector<VerificationCheck> checks;

    bool all_passed() const;
};

nlohmann::json to_json(const VerificationReport& report);

/// Negative-control switches for testing the suite itself.
struct VerificationHooks {
    /// Scale the joint-tail upper bound down by 1000 so its check must fail.
    bool corrupt_collision_upper_bound = false;
};

struct VerificationOptions {
    std::uint64_t seed = 1;
    /// Monte-Carlo trials per joint-tail estimate.
    std::uint64_t tail_trials = 1'000'000;
    /// Draws per stable characteristic-function estimate.
    std::uint64_t stable_samples = 1'000'000;
    /// Hash pairs for the LSF-to-LSH collision check.
    std::uint64_t lsh_pairs = 20'000;
    VerificationHooks hooks;
};

/// Runs every Monte-Carlo property check; each statistical comparison
/// allows 3 standard errors. Checks:
///   normal_tail_bracket, joint_tail_lower_bound, joint_tail_upper_bound,
///   marginal_tail_bounds, binomial_median, phase_uniformity,
///   stable_characteristic_function, lsh_collision_rate.
VerificationReport run_verification_suite(const VerificationOptions& options = {});

/// Simpson-rule integral of the standard normal density over [t, t + 40].
double integrated_normal_tail(double t);

/// Laplace-smoothed binomial standard error, positive even for k = 0.
double smoothed_standard_error(std::uint64_t hits, std::uint64_t trials);

}  // namespace lsf
