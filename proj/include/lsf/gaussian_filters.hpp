#pragma once

#include <cstdint>

#include "lsf/core.hpp"
#include "lsf/kernels.hpp"
#include "lsf/rng.hpp"

namespace lsf {

/// One sampled filter: Q = {x : <x, z> > alpha^lambda t}, U = {x : <x, z> > t}.
struct GaussianFilter {
    Vector projection;
    double query_threshold = 0.0;
    double update_threshold = 0.0;

    std::size_t dimension() const { return projection.size(); }
};

struct GaussianFamilySpec {
    std::size_t dimension = 0;
    SphereParams params;
    double t = 2.0;

    void validate() const;

    /// alpha^lambda * t
    double query_threshold() const;
    double update_threshold() const { return t; }
};

/// Projection entries drawn i.i.d. N(0, 1) from `rng`, in coordinate order.
GaussianFilter sample_filter(const GaussianFamilySpec& spec, RngStream& rng);

bool query_member(const GaussianFilter& filter, VectorView x);
bool update_member(const GaussianFilter& filter, VectorView x);

struct TailBounds {
    double lower = 0.0;
    double upper = 0.0;
};

/// Bracket on Pr[Z >= t] for a standard normal Z and t >= 0:
///   e^(-t^2/2) / (sqrt(2 pi) (t + 1))  <=  Pr[Z >= t]  <=  e^(-t^2/2) / (sqrt(pi) (t + 1))
TailBounds normal_tail_bounds(double t);

/// Lower bound on Pr[X >= t and Y >= alpha^lambda t] for standard normals
/// with correlation at least alpha:
///   e^(-D^2/2) / (2 pi (1 + t/alpha)^2),  D^2 = (1 + (alpha^lambda - alpha)^2 / (1 - alpha^2)) t^2
double collision_lower_bound(double alpha, double lambda, double t);

/// Upper bound on the same joint tail at correlation at most beta:
///   e^(-D^2/2),  D^2 = (1 + (alpha^lambda - beta)^2 / (1 - beta^2)) t^2
double collision_upper_bound(double beta, double alpha, double lambda, double t);

/// Threshold scale that grows with n:
///   t^2 / 2 = (1 - beta^2) / (1 - alpha^lambda beta)^2 * (ln n)^growth.
/// Throws RangeError for n < 2 or growth outside (0, 1).
double scheduled_t(const SphereParams& params, std::uint64_t n, double growth = 0.5);

enum class StatsMode { analytic, calibrated };

/// Conservative family statistics: p1 from collision_lower_bound, p2 from
/// collision_upper_bound at beta, pq <= e^(-alpha^(2 lambda) t^2 / 2) and
/// pu <= e^(-t^2 / 2). Throws InfeasibleSpec when the bounds do not separate
/// (p1 lower bound <= p2 upper bound).
FilterFamilyStats family_stats(const GaussianFamilySpec& spec);

struct MonteCarloStats {
    FilterFamilyStats stats;
    /// Binomial standard errors sqrt(p (1 - p) / trials) of each estimate.
    FilterFamilyStats standard_errors;
    std::uint64_t trials = 0;
};

/// Empirical family statistics from a two-dimensional simulation (rotation
/// invariance reduces any pair at inner product rho to x = (1, 0),
/// y = (rho, sqrt(1 - rho^2))). Requires trials >= 10^4. Deterministic in
/// (seed, trials) for either execution mode.
MonteCarloStats estimate_stats_monte_carlo(const GaussianFamilySpec& spec, std::uint64_t trials, std::uint64_t seed,
                                           Execution exec = Execution::parallel);

/// Stats for the planner in the requested mode. Calibrated mode uses the
/// Monte-Carlo point estimates and throws InfeasibleSpec if any estimate is
/// zero or the ordering p2 < p1 <= min(pq, pu) fails.
FilterFamilyStats planner_stats(const GaussianFamilySpec& spec, StatsMode mode, std::uint64_t trials,
                                std::uint64_t seed);

/// Monte-Carlo estimate of Pr[X > update_threshold and Y > query_threshold]
/// at each correlation, with standard errors.
struct JointTailEstimate {
    double probability = 0.0;
    double standard_error = 0.0;
};
std::vector<JointTailEstimate> estimate_joint_tails(std::span<const double> correlations, double query_threshold,
                                                    double update_threshold, std::uint64_t trials,
                                                    std::uint64_t seed, Execution exec = Execution::parallel);

}  // namespace lsf
