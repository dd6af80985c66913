#include "lsf/composition.hpp"

#include <algorithm>
#include <iterator>

namespace lsf {

bool power_membership(const PoweredFilter& filter, VectorView x, Role role) {
    for (const auto& part : filter.parts) {
        const bool in = role == Role::query ? query_member(part, x) : update_member(part, x);
        if (!in) return false;
    }
    return true;
}

FilterCollection FilterCollection::sample(const GaussianFamilySpec& spec, std::size_t m, std::size_t kappa,
                                          std::uint64_t seed, Tag tag) {
    spec.validate();
    FilterCollection c;
    c.m_ = m;
    c.kappa_ = kappa;
    c.dim_ = spec.dimension;
    c.tag_ = tag;
    c.query_threshold_ = spec.query_threshold();
    c.update_threshold_ = spec.update_threshold();
    c.projections_.resize(m * kappa * spec.dimension);
    const std::size_t stride = kappa * spec.dimension;
    for (std::size_t i = 0; i < m; ++i) {
        RngStream rng(seed, {i});
        double* out = c.projections_.data() + i * stride;
        for (std::size_t j = 0; j < stride; ++j) out[j] = rng.normal();
    }
    return c;
}

PoweredFilter FilterCollection::filter(std::size_t i) const {
    if (i >= m_) throw std::out_of_range("filter index out of range");
    PoweredFilter pf;
    for (std::size_t j = 0; j < kappa_; ++j) {
        const double* row = projections_.data() + (i * kappa_ + j) * dim_;
        pf.parts.push_back({Vector(row, row + dim_), query_threshold_, update_threshold_});
    }
    return pf;
}

ActiveLists FilterCollection::evaluate(VectorView x, Execution exec) const {
    if (x.size() != dim_) throw DimensionMismatch(dim_, x.size());
    ActiveLists lists;
    if (kappa_ == 0) {
        for (std::uint32_t i = 0; i < m_; ++i) {
            lists.query.push_back(i);
            lists.update.push_back(i);
        }
        return lists;
    }
    std::vector<double> dots(m_ * kappa_);
    kernels::project_rows(exec, projections_, dim_, x, dots);
    for (std::size_t i = 0; i < m_; ++i) {
        const double* d = dots.data() + i * kappa_;
        double lowest = d[0];
        for (std::size_t j = 1; j < kappa_; ++j) lowest = std::min(lowest, d[j]);
        if (lowest > query_threshold_) lists.query.push_back(static_cast<std::uint32_t>(i));
        if (lowest > update_threshold_) lists.update.push_back(static_cast<std::uint32_t>(i));
    }
    return lists;
}

std::vector<std::uint32_t> FilterCollection::active_indices(VectorView x, Role role, Execution exec) const {
    auto lists = evaluate(x, exec);
    return role == Role::query ? std::move(lists.query) : std::move(lists.update);
}

bool simulated_pair_collision(const FilterCollection& coll1, std::uint32_t tau, const FilterCollection& coll2,
                              VectorView x, VectorView y) {
    auto count_common = [&](const FilterCollection& c) {
        const auto q = c.active_indices(x, Role::query);
        const auto u = c.active_indices(y, Role::update);
        std::vector<std::uint32_t> both;
        std::set_intersection(q.begin(), q.end(), u.begin(), u.end(), std::back_inserter(both));
        return both.size();
    };
    if (tau > coll1.size()) return false;
    return count_common(coll1) >= tau && count_common(coll2) >= 1;
}

GaussianFamilySpec make_symmetric(GaussianFamilySpec spec) {
    spec.params.lambda = 0.0;
    return spec;
}

std::uint64_t lsf_to_lsh_hash(const GaussianFamilySpec& spec, VectorView x, std::uint64_t seed, std::uint64_t cap) {
    spec.validate();
    if (spec.params.lambda != 0.0) throw RangeError("lsf_to_lsh_hash needs a symmetric family (lambda = 0)");
    if (x.size() != spec.dimension) throw DimensionMismatch(spec.dimension, x.size());
    RngStream rng(seed);
    for (std::uint64_t i = 0; i < cap; ++i) {
        // Draw the whole filter even after the outcome is known so filter i
        // is the same for every input point.
        double dot = 0.0;
        for (double xi : x) dot += rng.normal() * xi;
        if (dot > spec.t) return i;
    }
    throw std::runtime_error("lsf_to_lsh_hash: no filter among the first " + std::to_string(cap) +
                             " contains the point");
}

}  // namespace lsf
