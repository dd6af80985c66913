#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "lsf/core.hpp"

namespace lsf {

/// Upper-bound exponents of the Gaussian-filter solution for the
/// (alpha, beta)-similarity problem on the unit sphere, with o(1) terms
/// dropped.
Exponents sphere_exponents(const SphereParams& params);

/// Exponents for (r, cr)-near neighbor in l_s:
///   rho_q = c^s (1 + lambda)^2 / (c^s + lambda)^2
///   rho_u = c^s (1 - lambda)^2 / (c^s + lambda)^2
Exponents ls_exponents(const NearNeighborParams& params, double lambda);

/// Leading terms of the LSF space-time lower bound on the sphere:
///   rho_q >= (1 - alpha^(1+lambda))^2 / (1 - alpha^2)
///   rho_u >= (alpha^lambda - alpha)^2 / (1 - alpha^2)
/// The o_d(1) corrections are asymptotic and are not reported. The
/// admissible lambda window depends on the dimension, which is not a
/// parameter here, so it is not enforced.
Exponents sphere_lower_bounds(double alpha, double lambda);

/// True for the lambda = +-1 endpoints, where the lower bound's admissible
/// window is tightest and the leading term is least informative.
bool lower_bound_endpoint_warning(double lambda);

/// Finite-t upper bounds on the Gaussian family's exponents. Each numerator
/// carries the extra term ln(2 pi (1 + t/alpha)^2) / (t^2 / 2), so the
/// result is strictly above sphere_exponents and converges to it as t grows.
Exponents gaussian_exponent_bounds(const SphereParams& params, double t);

struct TradeoffRow {
    double lambda = 0.0;
    double rho_q_upper = 0.0;
    double rho_u_upper = 0.0;
    double rho_q_lower = 0.0;
    double rho_u_lower = 0.0;
    bool lower_bound_endpoint = false;

    bool operator==(const TradeoffRow&) const = default;
};

/// Sphere table: upper = sphere_exponents(alpha, beta, lambda),
/// lower = sphere_lower_bounds(alpha, lambda).
std::vector<TradeoffRow> emit_tradeoff_table(double alpha, double beta, std::span<const double> lambdas);

/// l_s table: upper = ls_exponents. The only lower bound known for l_s is
/// the symmetric one, 1/c^s at lambda = 0; other rows carry the trivial
/// bound 0.
std::vector<TradeoffRow> emit_tradeoff_table(const NearNeighborParams& params, std::span<const double> lambdas);

inline constexpr const char* kTradeoffCsvHeader = "lambda,rho_q_upper,rho_u_upper,rho_q_lower,rho_u_lower";

void write_tradeoff_csv(std::ostream& os, std::span<const TradeoffRow> rows);

/// Inverse of write_tradeoff_csv. Throws std::runtime_error on a bad header
/// or malformed row.
std::vector<TradeoffRow> parse_tradeoff_csv(std::istream& is);

}  // namespace lsf
