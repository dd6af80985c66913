#pragma once

#include <cstdint>
#include <vector>

#include "lsf/core.hpp"
#include "lsf/gaussian_filters.hpp"
#include "lsf/kernels.hpp"

namespace lsf {

enum class Role { query, update };

/// Intersection of kappa independent Gaussian filters. kappa = 0 is the
/// identity filter that contains every point.
struct PoweredFilter {
    std::vector<GaussianFilter> parts;

    std::size_t power() const { return parts.size(); }
};

bool power_membership(const PoweredFilter& filter, VectorView x, Role role);

/// Query- and update-active filter indices of one point, ascending.
struct ActiveLists {
    std::vector<std::uint32_t> query;
    std::vector<std::uint32_t> update;
};

/// An indexed collection of m powered filters with a shared family. The
/// projection vectors are stored as one row-major (m * kappa) x d matrix so
/// evaluating a point is a single matrix-vector product.
class FilterCollection {
public:
    enum class Tag { base1, base2 };

    FilterCollection() = default;

    /// Filter i draws its kappa projections, part by part and coordinate by
    /// coordinate, from substream (seed, i).
    static FilterCollection sample(const GaussianFamilySpec& spec, std::size_t m, std::size_t kappa,
                                   std::uint64_t seed, Tag tag);

    std::size_t size() const { return m_; }
    std::size_t power() const { return kappa_; }
    std::size_t dimension() const { return dim_; }
    Tag tag() const { return tag_; }
    double query_threshold() const { return query_threshold_; }
    double update_threshold() const { return update_threshold_; }

    /// Number of doubles held for projection vectors: d * kappa * m.
    std::size_t stored_coordinates() const { return projections_.size(); }

    /// Copy of filter i as a standalone PoweredFilter.
    PoweredFilter filter(std::size_t i) const;

    /// Both active lists from a single projection pass.
    ActiveLists evaluate(VectorView x, Execution exec = Execution::serial) const;

    std::vector<std::uint32_t> active_indices(VectorView x, Role role, Execution exec = Execution::serial) const;

private:
    std::size_t m_ = 0;
    std::size_t kappa_ = 0;
    std::size_t dim_ = 0;
    Tag tag_ = Tag::base1;
    double query_threshold_ = 0.0;
    double update_threshold_ = 0.0;
    std::vector<double> projections_;
};

/// True iff some simulated filter contains the pair (x in Q, y in U): at
/// least tau filters of coll1 and at least one filter of coll2 contain it.
bool simulated_pair_collision(const FilterCollection& coll1, std::uint32_t tau, const FilterCollection& coll2,
                              VectorView x, VectorView y);

inline constexpr std::uint64_t kLshIterationCap = 10'000'000;

/// Copy of `spec` with lambda = 0, so that Q = U for every filter.
GaussianFamilySpec make_symmetric(GaussianFamilySpec spec);

/// h(x) = min{i : x in F_i} over a lazily generated sequence of filters drawn
/// from stream `seed`. Requires a symmetric family (lambda = 0). Throws
/// std::runtime_error if no filter among the first `cap` contains x; that
/// happens with probability (1 - pq)^cap.
std::uint64_t lsf_to_lsh_hash(const GaussianFamilySpec& spec, VectorView x, std::uint64_t seed,
                              std::uint64_t cap = kLshIterationCap);

}  // namespace lsf
