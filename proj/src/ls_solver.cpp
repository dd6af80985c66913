#include "lsf/ls_solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lsf {

LsPlan plan_ls(std::uint64_t n, std::size_t d, const NearNeighborParams& nn, double lambda, const LsConfig& config) {
    nn.validate();
    validate_lambda(lambda);
    if (n < 2 || d == 0) throw RangeError("plan_ls needs n >= 2 and d >= 1");
    const double s = nn.norm_order;
    const double c_s = std::pow(nn.approximation, s);

    const double target = config.scale_target.value_or(1.0 / std::sqrt(std::log(static_cast<double>(n))));
    if (!(target > 0.0)) throw RangeError("scale target must be positive");
    const double near = std::exp(-target);
    const double far = std::exp(-c_s * target);
    const double margin = config.margin.value_or(std::min(0.01, (near - far) / 4.0));
    if (!(margin > 0.0)) throw RangeError("embedding margin must be positive");

    LsPlan plan;
    plan.nn = nn;
    plan.lambda = lambda;
    plan.scale = std::pow(target, 1.0 / s) / nn.radius;
    plan.alpha = near - margin;
    plan.beta = far + margin;
    plan.margin = margin;
    plan.input_dim = d;
    if (!(plan.alpha > plan.beta)) {
        throw InfeasibleSpec("margin " + std::to_string(margin) + " closes the similarity gap");
    }
    if (config.embed_dim) {
        if (*config.embed_dim == 0) throw RangeError("embedding dimension must be positive");
        plan.embed_dim = *config.embed_dim;
    } else {
        const double l = std::ceil(128.0 * std::log(100.0 * static_cast<double>(n)) / (margin * margin));
        plan.embed_dim = l >= static_cast<double>(kMaxEmbedDim) ? kMaxEmbedDim : static_cast<std::size_t>(l);
    }

    plan.family.dimension = plan.embed_dim;
    plan.family.params = {plan.alpha, plan.beta, lambda};
    plan.family.t = config.t;
    plan.family.validate();
    const FilterFamilyStats stats = planner_stats(plan.family, config.mode, config.calibration_trials,
                                                  derive_seed(config.seed, {0xca1}));
    plan.index_plan = plan_parameters(n, stats);
    return plan;
}

LsIndex::LsIndex(LsPlan plan, std::uint64_t seed)
    : plan_(std::move(plan)),
      map_(build_map(plan_.input_dim, plan_.embed_dim, plan_.nn.norm_order, derive_seed(seed, {0xfea}))),
      index_(plan_.index_plan, plan_.family, derive_seed(seed, {0x1d})) {}

Vector LsIndex::embed_point(VectorView x) const {
    if (x.size() != plan_.input_dim) throw DimensionMismatch(plan_.input_dim, x.size());
    Vector scaled(x.begin(), x.end());
    for (double& v : scaled) v *= plan_.scale;
    return embed(map_, scaled);
}

void LsIndex::insert(PointId id, VectorView point) {
    if (points_.contains(id)) throw std::invalid_argument("duplicate point id " + std::to_string(id));
    index_.insert(id, embed_point(point));
    points_.emplace(id, Vector(point.begin(), point.end()));
}

void LsIndex::insert_batch(std::span<const PointId> ids, std::span<const Vector> points, Execution exec) {
    if (ids.size() != points.size()) throw std::invalid_argument("insert_batch: ids and points differ in length");
    for (PointId id : ids) {
        if (points_.contains(id)) throw std::invalid_argument("duplicate point id " + std::to_string(id));
    }
    std::vector<Vector> embedded(points.size());
    const auto n = static_cast<std::ptrdiff_t>(points.size());
#pragma omp parallel for schedule(dynamic, 16) if (exec == Execution::parallel)
    for (std::ptrdiff_t i = 0; i < n; ++i) embedded[i] = embed_point(points[i]);
    index_.insert_batch(ids, embedded, exec);
    for (std::size_t i = 0; i < ids.size(); ++i) points_.emplace(ids[i], points[i]);
}

void LsIndex::erase(PointId id) {
    index_.erase(id);
    points_.erase(id);
}

QueryOutcome LsIndex::query(VectorView x) const {
    const double limit = plan_.nn.approximation * plan_.nn.radius;
    const double s = plan_.nn.norm_order;
    return index_.query(embed_point(x), [&](PointId id, std::span<const float>) {
        return ls_distance(points_.at(id), x, s) <= limit;
    });
}

}  // namespace lsf
