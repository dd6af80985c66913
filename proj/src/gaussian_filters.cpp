#include "lsf/gaussian_filters.hpp"

#include <cmath>
#include <numbers>

namespace lsf {

namespace {

void check_bound_args(double alpha, double lambda, double t) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw RangeError("alpha must lie in (0, 1)");
    validate_lambda(lambda);
    if (!(t > 0.0)) throw RangeError("t must be positive");
}

double rate(std::uint64_t hits, std::uint64_t trials) {
    return static_cast<double>(hits) / static_cast<double>(trials);
}

double standard_error(double p, std::uint64_t trials) {
    return std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

}  // namespace

void GaussianFamilySpec::validate() const {
    if (dimension < 1) throw RangeError("dimension must be positive");
    params.validate();
    if (!(t > 0.0)) throw RangeError("t must be positive");
}

double GaussianFamilySpec::query_threshold() const { return std::pow(params.alpha, params.lambda) * t; }

GaussianFilter sample_filter(const GaussianFamilySpec& spec, RngStream& rng) {
    spec.validate();
    GaussianFilter f;
    f.projection.resize(spec.dimension);
    for (double& z : f.projection) z = rng.normal();
    f.query_threshold = spec.query_threshold();
    f.update_threshold = spec.update_threshold();
    return f;
}

bool query_member(const GaussianFilter& filter, VectorView x) {
    return inner_product(filter.projection, x) > filter.query_threshold;
}

bool update_member(const GaussianFilter& filter, VectorView x) {
    return inner_product(filter.projection, x) > filter.update_threshold;
}

TailBounds normal_tail_bounds(double t) {
    if (!(t >= 0.0)) throw RangeError("t must be non-negative");
    const double g = std::exp(-t * t / 2.0) / (t + 1.0);
    return {g / std::sqrt(2.0 * std::numbers::pi), g / std::sqrt(std::numbers::pi)};
}

double collision_lower_bound(double alpha, double lambda, double t) {
    check_bound_args(alpha, lambda, t);
    const double gap = std::pow(alpha, lambda) - alpha;
    const double delta_sq = (1.0 + gap * gap / (1.0 - alpha * alpha)) * t * t;
    const double ratio = 1.0 + t / alpha;
    return std::exp(-delta_sq / 2.0) / (2.0 * std::numbers::pi * ratio * ratio);
}

double collision_upper_bound(double beta, double alpha, double lambda, double t) {
    check_bound_args(alpha, lambda, t);
    if (!(beta > -1.0 && beta < alpha)) throw RangeError("beta must lie in (-1, alpha)");
    const double gap = std::pow(alpha, lambda) - beta;
    const double delta_sq = (1.0 + gap * gap / (1.0 - beta * beta)) * t * t;
    return std::exp(-delta_sq / 2.0);
}

double scheduled_t(const SphereParams& params, std::uint64_t n, double growth) {
    params.validate();
    if (n < 2) throw RangeError("scheduled_t needs n >= 2");
    if (!(growth > 0.0 && growth < 1.0)) throw RangeError("growth exponent must lie in (0, 1)");
    const double q = 1.0 - std::pow(params.alpha, params.lambda) * params.beta;
    const double half_sq = (1.0 - params.beta * params.beta) / (q * q) * std::pow(std::log(static_cast<double>(n)), growth);
    return std::sqrt(2.0 * half_sq);
}

FilterFamilyStats family_stats(const GaussianFamilySpec& spec) {
    spec.validate();
    const auto& p = spec.params;
    FilterFamilyStats stats;
    stats.p1 = collision_lower_bound(p.alpha, p.lambda, spec.t);
    stats.p2 = collision_upper_bound(p.beta, p.alpha, p.lambda, spec.t);
    const double q = spec.query_threshold();
    stats.pq = std::exp(-q * q / 2.0);
    stats.pu = std::exp(-spec.t * spec.t / 2.0);
    if (!(stats.p2 < stats.p1)) {
        throw InfeasibleSpec("analytic bounds do not separate at this t (p1 lower bound <= p2 upper bound): " +
                             to_string(stats));
    }
    stats.validate();
    return stats;
}

std::vector<JointTailEstimate> estimate_joint_tails(std::span<const double> correlations, double query_threshold,
                                                    double update_threshold, std::uint64_t trials,
                                                    std::uint64_t seed, Execution exec) {
    if (trials == 0) throw RangeError("trials must be positive");
    const auto counts = kernels::tail_counts(exec, seed, trials, correlations, query_threshold, update_threshold);
    std::vector<JointTailEstimate> out;
    for (auto hits : counts.joint) {
        const double p = rate(hits, trials);
        out.push_back({p, standard_error(p, trials)});
    }
    return out;
}

MonteCarloStats estimate_stats_monte_carlo(const GaussianFamilySpec& spec, std::uint64_t trials, std::uint64_t seed,
                                           Execution exec) {
    spec.validate();
    if (trials < 10'000) throw RangeError("Monte-Carlo estimation needs at least 10^4 trials");
    const double correlations[] = {spec.params.alpha, spec.params.beta};
    const auto counts =
        kernels::tail_counts(exec, seed, trials, correlations, spec.query_threshold(), spec.update_threshold());
    MonteCarloStats out;
    out.trials = trials;
    out.stats = {rate(counts.joint[0], trials), rate(counts.joint[1], trials), rate(counts.query_marginal, trials),
                 rate(counts.update_marginal, trials)};
    out.standard_errors = {standard_error(out.stats.p1, trials), standard_error(out.stats.p2, trials),
                           standard_error(out.stats.pq, trials), standard_error(out.stats.pu, trials)};
    return out;
}

FilterFamilyStats planner_stats(const GaussianFamilySpec& spec, StatsMode mode, std::uint64_t trials,
                                std::uint64_t seed) {
    if (mode == StatsMode::analytic) return family_stats(spec);
    const auto mc = estimate_stats_monte_carlo(spec, trials, seed);
    if (mc.stats.p2 == 0.0 || mc.stats.p1 == 0.0) {
        throw InfeasibleSpec("calibration saw no collisions; increase trials or lower t: " + to_string(mc.stats));
    }
    mc.stats.validate();
    return mc.stats;
}

}  // namespace lsf
