#include "lsf/core.hpp"

#include <cmath>
#include <sstream>

namespace lsf {

DimensionMismatch::DimensionMismatch(std::size_t expected, std::size_t got)
    : std::invalid_argument("dimension mismatch: expected " + std::to_string(expected) +
                            ", got " + std::to_string(got)) {}

void SphereParams::validate() const {
    if (!(0.0 <= beta && beta < alpha && alpha < 1.0)) {
        throw RangeError("sphere params require 0 <= beta < alpha < 1");
    }
    validate_lambda(lambda);
}

void NearNeighborParams::validate() const {
    if (!(radius > 0.0)) throw RangeError("radius must be positive");
    if (!(approximation >= 1.0)) throw RangeError("approximation factor must be >= 1");
    if (!(norm_order > 0.0 && norm_order <= 2.0)) throw RangeError("norm order must lie in (0, 2]");
}

void FilterFamilyStats::validate() const {
    for (double p : {p1, p2, pq, pu}) {
        if (!(p > 0.0 && p <= 1.0)) {
            throw InfeasibleSpec("filter family probabilities must lie in (0, 1]: " + to_string(*this));
        }
    }
    if (!(p2 < p1)) throw InfeasibleSpec("filter family requires p2 < p1: " + to_string(*this));
    if (!(p1 <= std::min(pq, pu))) {
        throw InfeasibleSpec("filter family requires p1 <= min(pq, pu): " + to_string(*this));
    }
}

void require_same_dimension(VectorView u, VectorView v) {
    if (u.size() != v.size()) throw DimensionMismatch(u.size(), v.size());
}

void validate_lambda(double lambda) {
    if (!(lambda >= -1.0 && lambda <= 1.0)) throw RangeError("lambda must lie in [-1, 1]");
}

double inner_product(VectorView u, VectorView v) {
    require_same_dimension(u, v);
    double sum = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) sum += u[i] * v[i];
    return sum;
}

double ls_distance(VectorView u, VectorView v, double s) {
    require_same_dimension(u, v);
    if (!(s > 0.0 && s <= 2.0)) throw RangeError("norm order must lie in (0, 2]");
    double sum = 0.0;
    if (s == 2.0) {
        for (std::size_t i = 0; i < u.size(); ++i) sum += (u[i] - v[i]) * (u[i] - v[i]);
        return std::sqrt(sum);
    }
    if (s == 1.0) {
        for (std::size_t i = 0; i < u.size(); ++i) sum += std::abs(u[i] - v[i]);
        return sum;
    }
    for (std::size_t i = 0; i < u.size(); ++i) sum += std::pow(std::abs(u[i] - v[i]), s);
    return std::pow(sum, 1.0 / s);
}

double euclidean_norm(VectorView v) {
    double sum = 0.0;
    for (double x : v) sum += x * x;
    return std::sqrt(sum);
}

Vector normalize(VectorView v) {
    const double norm = euclidean_norm(v);
    if (!(norm > 0.0) || !std::isfinite(norm)) throw RangeError("cannot normalize a zero or non-finite vector");
    Vector out(v.begin(), v.end());
    for (double& x : out) x /= norm;
    return out;
}

bool on_unit_sphere(VectorView v, double tolerance) {
    return std::abs(euclidean_norm(v) - 1.0) <= tolerance;
}

double clamp_tiny_negative(double x) {
    return (x < 0.0 && x > -1e-12) ? 0.0 : x;
}

Exponents exponents_from_stats(const FilterFamilyStats& stats) {
    stats.validate();
    if (!(stats.pq > stats.p2)) throw InfeasibleSpec("exponents undefined when pq <= p2");
    const double denom = std::log(stats.pq / stats.p2);
    return {clamp_tiny_negative(std::log(stats.pq / stats.p1) / denom),
            clamp_tiny_negative(std::log(stats.pu / stats.p1) / denom)};
}

std::string to_string(const FilterFamilyStats& stats) {
    std::ostringstream os;
    os.precision(6);
    os << "{p1=" << stats.p1 << ", p2=" << stats.p2 << ", pq=" << stats.pq << ", pu=" << stats.pu << "}";
    return os.str();
}

}  // namespace lsf
