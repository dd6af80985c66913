#include "lsf/verification.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "lsf/combinatorics.hpp"
#include "lsf/composition.hpp"
#include "lsf/feature_map.hpp"
#include "lsf/gaussian_filters.hpp"
#include "lsf/kernels.hpp"
#include "lsf/rng.hpp"

namespace lsf {

namespace {

constexpr double kSigmas = 3.0;

std::string format(const char* fmt, auto... args) {
    char buf[256];
    std::snprintf(buf, sizeof buf, fmt, args...);
    return buf;
}

VerificationCheck normal_tail_bracket() {
    VerificationCheck check{"normal_tail_bracket", true, ""};
    for (int i = 0; i <= 8; ++i) {
        const double t = 0.5 * i;
        const TailBounds b = normal_tail_bounds(t);
        const double tail = integrated_normal_tail(t);
        if (!(b.lower <= tail && tail <= b.upper)) {
            check.passed = false;
            check.detail += format("t=%.1f: %.6g not in [%.6g, %.6g]; ", t, tail, b.lower, b.upper);
        }
    }
    if (check.passed) check.detail = "t in {0, 0.5, ..., 4}";
    return check;
}

void joint_tail_checks(const VerificationOptions& opt, VerificationReport& report) {
    VerificationCheck lower{"joint_tail_lower_bound", true, ""};
    VerificationCheck upper{"joint_tail_upper_bound", true, ""};
    VerificationCheck marginal{"marginal_tail_bounds", true, ""};
    std::uint64_t case_id = 0;
    for (double alpha : {0.3, 0.5, 0.8}) {
        for (double lambda : {-1.0, 0.0, 1.0}) {
            for (double t : {1.0, 2.0, 3.0}) {
                const double qth = std::pow(alpha, lambda) * t;
                const double correlations[] = {alpha, 0.0, alpha / 2.0};
                const kernels::TailCounts counts = kernels::tail_counts(
                    Execution::parallel, derive_seed(opt.seed, {0x701, case_id++}), opt.tail_trials, correlations,
                    qth, t);
                const auto n = counts.trials;
                const auto p = [&](std::uint64_t k) { return static_cast<double>(k) / static_cast<double>(n); };

                const double lb = collision_lower_bound(alpha, lambda, t);
                const double at_alpha = p(counts.joint[0]);
                if (lb > at_alpha + kSigmas * smoothed_standard_error(counts.joint[0], n)) {
                    lower.passed = false;
                    lower.detail += format("a=%.1f l=%.0f t=%.0f: bound %.3g > est %.3g; ", alpha, lambda, t, lb,
                                           at_alpha);
                }
                for (std::size_t j = 1; j < 3; ++j) {
                    double ub = collision_upper_bound(correlations[j], alpha, lambda, t);
                    if (opt.hooks.corrupt_collision_upper_bound) ub *= 1e-3;
                    const double est = p(counts.joint[j]);
                    if (est - kSigmas * smoothed_standard_error(counts.joint[j], n) > ub) {
                        upper.passed = false;
                        upper.detail += format("a=%.1f b=%.2f l=%.0f t=%.0f: est %.3g > bound %.3g; ", alpha,
                                               correlations[j], lambda, t, est, ub);
                    }
                }
                const double pq_bound = std::exp(-qth * qth / 2.0);
                const double pu_bound = std::exp(-t * t / 2.0);
                if (p(counts.query_marginal) - kSigmas * smoothed_standard_error(counts.query_marginal, n) > pq_bound ||
                    p(counts.update_marginal) - kSigmas * smoothed_standard_error(counts.update_marginal, n) >
                        pu_bound) {
                    marginal.passed = false;
                    marginal.detail += format("a=%.1f l=%.0f t=%.0f; ", alpha, lambda, t);
                }
            }
        }
    }
    const std::string grid = format("alpha x lambda x t grid, beta in {0, alpha/2}, %llu trials",
                                    static_cast<unsigned long long>(opt.tail_trials));
    for (VerificationCheck* c : {&lower, &upper, &marginal}) {
        if (c->passed) c->detail = grid;
        report.checks.push_back(*c);
    }
}

VerificationCheck binomial_median(const VerificationOptions& opt) {
    VerificationCheck check{"binomial_median", true, ""};
    // Pr[Bin(m, p) >= floor(m p)] >= 1/2 on a grid, exactly.
    for (std::uint64_t m = 1; m <= 40; ++m) {
        for (int k = 1; k < 20; ++k) {
            const double p = 0.05 * k;
            const auto floor_mean = static_cast<std::uint64_t>(std::floor(static_cast<double>(m) * p));
            if (binomial_tail(m, p, floor_mean) < 0.5) {
                check.passed = false;
                check.detail += format("m=%llu p=%.2f; ", static_cast<unsigned long long>(m), p);
            }
        }
    }
    // Monte-Carlo agreement at (10, 0.3, 3).
    const double exact = binomial_tail(10, 0.3, 3);
    RngStream rng(opt.seed, {0xb1});
    const std::uint64_t draws = 200'000;
    std::uint64_t hits = 0;
    for (std::uint64_t i = 0; i < draws; ++i) {
        int successes = 0;
        for (int j = 0; j < 10; ++j) successes += rng.uniform() < 0.3;
        hits += successes >= 3;
    }
    const double est = static_cast<double>(hits) / static_cast<double>(draws);
    const double se = std::sqrt(exact * (1.0 - exact) / static_cast<double>(draws));
    if (std::abs(est - exact) > kSigmas * se) {
        check.passed = false;
        check.detail += format("Monte-Carlo %.4f vs exact %.4f; ", est, exact);
    }
    if (check.passed) check.detail = format("exact Pr[Bin(10,0.3)>=3] = %.4f, Monte-Carlo %.4f", exact, est);
    return check;
}

VerificationCheck phase_uniformity(const VerificationOptions& opt) {
    const std::size_t l = 10'000;
    const FeatureMap map = build_map(1, l, 2.0, derive_seed(opt.seed, {0xf5}));
    std::vector<double> u(map.phases);
    for (double& x : u) x /= 2.0 * std::numbers::pi;
    std::sort(u.begin(), u.end());
    double ks = 0.0;
    const double n = static_cast<double>(l);
    for (std::size_t i = 0; i < l; ++i) {
        ks = std::max({ks, (static_cast<double>(i) + 1.0) / n - u[i], u[i] - static_cast<double>(i) / n});
    }
    const double critical = 1.358 / std::sqrt(n);
    return {"phase_uniformity", ks < critical, format("KS statistic %.5f, 5%% critical value %.5f", ks, critical)};
}

VerificationCheck stable_characteristic_function(const VerificationOptions& opt) {
    VerificationCheck check{"stable_characteristic_function", true, ""};
    const double ts[] = {0.25, 0.5, 1.0, 2.0};
    double worst = 0.0;
    for (double s : {0.5, 1.0, 2.0}) {
        RngStream rng(opt.seed, {0x57, static_cast<std::uint64_t>(s * 1000)});
        double sums[4] = {};
        for (std::uint64_t i = 0; i < opt.stable_samples; ++i) {
            const double x = sample_stable(s, rng);
            for (int k = 0; k < 4; ++k) sums[k] += std::cos(ts[k] * x);
        }
        for (int k = 0; k < 4; ++k) {
            const double err = std::abs(sums[k] / static_cast<double>(opt.stable_samples) - std::exp(-std::pow(ts[k], s)));
            worst = std::max(worst, err);
            if (err > 0.02) {
                check.passed = false;
                check.detail += format("s=%.1f t=%.2f error %.4f; ", s, ts[k], err);
            }
        }
    }
    if (check.passed) check.detail = format("max error %.4f (tolerance 0.02)", worst);
    return check;
}

VerificationCheck lsh_collision_rate(const VerificationOptions& opt) {
    VerificationCheck check{"lsh_collision_rate", true, ""};
    const double t = 1.0;
    for (double alpha : {0.5, 0.8}) {
        GaussianFamilySpec spec{2, {alpha, 0.0, 0.0}, t};
        const Vector x{1.0, 0.0};
        const Vector y{alpha, std::sqrt(1.0 - alpha * alpha)};
        std::uint64_t collisions = 0;
        for (std::uint64_t i = 0; i < opt.lsh_pairs; ++i) {
            const std::uint64_t seed = derive_seed(opt.seed, {0x15, static_cast<std::uint64_t>(alpha * 10), i});
            collisions += lsf_to_lsh_hash(spec, x, seed) == lsf_to_lsh_hash(spec, y, seed);
        }
        const double rate = static_cast<double>(collisions) / static_cast<double>(opt.lsh_pairs);
        const double rate_se = smoothed_standard_error(collisions, opt.lsh_pairs);

        const double corr[] = {alpha};
        const auto counts = kernels::tail_counts(Execution::parallel,
                                                 derive_seed(opt.seed, {0x16, static_cast<std::uint64_t>(alpha * 10)}),
                                                 opt.tail_trials, corr, t, t);
        const double both = static_cast<double>(counts.joint[0]);
        const double either = 2.0 * static_cast<double>(counts.update_marginal) - both;
        const double ratio = both / either;
        const double ratio_se = std::sqrt(ratio * (1.0 - ratio) / either);
        const double sigma = std::hypot(rate_se, ratio_se);
        const bool ok = std::abs(rate - ratio) <= kSigmas * sigma;
        check.passed = check.passed && ok;
        check.detail += format("alpha=%.1f: rate %.4f vs both/either %.4f (sigma %.4f); ", alpha, rate, ratio, sigma);
    }
    return check;
}

}  // namespace

bool VerificationReport::all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const VerificationCheck& c) { return c.passed; });
}

nlohmann::json to_json(const VerificationReport& report) {
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : report.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    return {{"all_passed", report.all_passed()}, {"checks", checks}};
}

double integrated_normal_tail(double t) {
    const int intervals = 200'000;
    const double a = t;
    const double b = t + 40.0;
    const double h = (b - a) / intervals;
    const auto f = [](double x) { return std::exp(-x * x / 2.0); };
    double sum = f(a) + f(b);
    for (int i = 1; i < intervals; ++i) sum += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return sum * h / 3.0 / std::sqrt(2.0 * std::numbers::pi);
}

double smoothed_standard_error(std::uint64_t hits, std::uint64_t trials) {
    const double p = (static_cast<double>(hits) + 1.0) / (static_cast<double>(trials) + 2.0);
    return std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

VerificationReport run_verification_suite(const VerificationOptions& options) {
    VerificationReport report;
    report.checks.push_back(normal_tail_bracket());
    joint_tail_checks(options, report);
    report.checks.push_back(binomial_median(options));
    report.checks.push_back(phase_uniformity(options));
    report.checks.push_back(stable_characteristic_function(options));
    report.checks.push_back(lsh_collision_rate(options));
    return report;
}

}  // namespace lsf
