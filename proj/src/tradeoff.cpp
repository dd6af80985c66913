#include "lsf/tradeoff.hpp"

#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

namespace lsf {

namespace {

// (1 - alpha^lambda beta)^2 / (1 - beta^2)
double distractor_term(double alpha, double beta, double lambda) {
    const double a = std::pow(alpha, lambda);
    return (1.0 - a * beta) * (1.0 - a * beta) / (1.0 - beta * beta);
}

double query_term(double alpha, double lambda) {
    const double x = 1.0 - std::pow(alpha, 1.0 + lambda);
    return x * x / (1.0 - alpha * alpha);
}

double update_term(double alpha, double lambda) {
    const double x = std::pow(alpha, lambda) - alpha;
    return x * x / (1.0 - alpha * alpha);
}

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw RangeError("alpha must lie in (0, 1)");
}

}  // namespace

Exponents sphere_exponents(const SphereParams& params) {
    params.validate();
    const double denom = distractor_term(params.alpha, params.beta, params.lambda);
    return {clamp_tiny_negative(query_term(params.alpha, params.lambda) / denom),
            clamp_tiny_negative(update_term(params.alpha, params.lambda) / denom)};
}

Exponents ls_exponents(const NearNeighborParams& params, double lambda) {
    params.validate();
    validate_lambda(lambda);
    const double cs = std::pow(params.approximation, params.norm_order);
    const double denom = (cs + lambda) * (cs + lambda);
    if (!(denom > 0.0)) throw RangeError("ls exponents undefined for c = 1, lambda = -1");
    return {cs * (1.0 + lambda) * (1.0 + lambda) / denom, cs * (1.0 - lambda) * (1.0 - lambda) / denom};
}

Exponents sphere_lower_bounds(double alpha, double lambda) {
    check_alpha(alpha);
    validate_lambda(lambda);
    return {query_term(alpha, lambda), update_term(alpha, lambda)};
}

bool lower_bound_endpoint_warning(double lambda) { return std::abs(lambda) == 1.0; }

Exponents gaussian_exponent_bounds(const SphereParams& params, double t) {
    params.validate();
    if (!(t > 0.0)) throw RangeError("t must be positive");
    const double ratio = 1.0 + t / params.alpha;
    const double extra = std::log(2.0 * std::numbers::pi * ratio * ratio) / (t * t / 2.0);
    const double denom = distractor_term(params.alpha, params.beta, params.lambda);
    return {(query_term(params.alpha, params.lambda) + extra) / denom,
            (update_term(params.alpha, params.lambda) + extra) / denom};
}

std::vector<TradeoffRow> emit_tradeoff_table(double alpha, double beta, std::span<const double> lambdas) {
    std::vector<TradeoffRow> rows;
    rows.reserve(lambdas.size());
    for (double lambda : lambdas) {
        const Exponents upper = sphere_exponents({alpha, beta, lambda});
        const Exponents lower = sphere_lower_bounds(alpha, lambda);
        rows.push_back({lambda, upper.rho_q, upper.rho_u, lower.rho_q, lower.rho_u,
                        lower_bound_endpoint_warning(lambda)});
    }
    return rows;
}

std::vector<TradeoffRow> emit_tradeoff_table(const NearNeighborParams& params, std::span<const double> lambdas) {
    std::vector<TradeoffRow> rows;
    rows.reserve(lambdas.size());
    const double symmetric = 1.0 / std::pow(params.approximation, params.norm_order);
    for (double lambda : lambdas) {
        const Exponents upper = ls_exponents(params, lambda);
        const double lower = lambda == 0.0 ? symmetric : 0.0;
        rows.push_back({lambda, upper.rho_q, upper.rho_u, lower, lower, lower_bound_endpoint_warning(lambda)});
    }
    return rows;
}

void write_tradeoff_csv(std::ostream& os, std::span<const TradeoffRow> rows) {
    const auto old_precision = os.precision(std::numeric_limits<double>::max_digits10);
    os << kTradeoffCsvHeader << '\n';
    for (const auto& row : rows) {
        os << row.lambda << ',' << row.rho_q_upper << ',' << row.rho_u_upper << ',' << row.rho_q_lower << ','
           << row.rho_u_lower << '\n';
    }
    os.precision(old_precision);
}

std::vector<TradeoffRow> parse_tradeoff_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != kTradeoffCsvHeader) {
        throw std::runtime_error("tradeoff csv: missing or unexpected header");
    }
    std::vector<TradeoffRow> rows;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream fields(line);
        double values[5];
        std::string cell;
        for (double& v : values) {
            if (!std::getline(fields, cell, ',')) throw std::runtime_error("tradeoff csv: short row: " + line);
            std::size_t used = 0;
            v = std::stod(cell, &used);
            if (used != cell.size()) throw std::runtime_error("tradeoff csv: bad number: " + cell);
        }
        if (std::getline(fields, cell, ',')) throw std::runtime_error("tradeoff csv: long row: " + line);
        rows.push_back({values[0], values[1], values[2], values[3], values[4],
                        lower_bound_endpoint_warning(values[0])});
    }
    return rows;
}

}  // namespace lsf
