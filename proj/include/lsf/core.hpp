#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace lsf {

using Vector = std::vector<double>;
using VectorView = std::span<const double>;

/// Raised when two vectors (or a vector and a filter) disagree on dimension.
class DimensionMismatch : public std::invalid_argument {
public:
    DimensionMismatch(std::size_t expected, std::size_t got);
};

/// Raised when a parameter set is outside the range an operation accepts.
class RangeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a parameter combination is well-formed but cannot yield a
/// usable filter family or index plan (e.g. p2 >= p1).
class InfeasibleSpec : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Target similarity alpha, distractor similarity beta and tradeoff lambda
/// for the (alpha, beta)-similarity problem on the unit sphere.
struct SphereParams {
    double alpha = 0.0;
    double beta = 0.0;
    double lambda = 0.0;

    void validate() const;
};

/// Radius r, approximation factor c and norm order s of an (r, cr)-near
/// neighbor instance in l_s.
struct NearNeighborParams {
    double radius = 1.0;
    double approximation = 2.0;
    double norm_order = 2.0;

    void validate() const;
};

/// The four probabilities characterizing a sensitive filter family:
/// close-pair collision p1, far-pair collision p2, and the single-point
/// masses of the query and update filters.
struct FilterFamilyStats {
    double p1 = 0.0;
    double p2 = 0.0;
    double pq = 0.0;
    double pu = 0.0;

    /// Throws InfeasibleSpec unless 0 < p2 < p1 <= min(pq, pu) <= 1.
    void validate() const;

    bool operator==(const FilterFamilyStats&) const = default;
};

struct Exponents {
    double rho_q = 0.0;
    double rho_u = 0.0;

    bool operator==(const Exponents&) const = default;
};

struct Seed {
    std::uint64_t master_seed = 0;
};

void require_same_dimension(VectorView u, VectorView v);
void validate_lambda(double lambda);

double inner_product(VectorView u, VectorView v);

/// (sum |u_i - v_i|^s)^(1/s) for 0 < s <= 2.
double ls_distance(VectorView u, VectorView v, double s);

double euclidean_norm(VectorView v);

/// Unit-norm copy of v. Throws RangeError on the zero vector.
Vector normalize(VectorView v);

/// True when | ||v||_2 - 1 | <= tolerance.
bool on_unit_sphere(VectorView v, double tolerance = 1e-9);

/// rho_q = ln(pq/p1) / ln(pq/p2), rho_u = ln(pu/p1) / ln(pq/p2).
/// Tiny negative values from cancellation are clamped to zero.
Exponents exponents_from_stats(const FilterFamilyStats& stats);

/// Clamp x to zero when it is a cancellation artifact in (-1e-12, 0).
double clamp_tiny_negative(double x);

std::string to_string(const FilterFamilyStats& stats);

}  // namespace lsf
