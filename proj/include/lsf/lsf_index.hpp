#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "lsf/bucket_store.hpp"
#include "lsf/combinatorics.hpp"
#include "lsf/composition.hpp"
#include "lsf/core.hpp"
#include "lsf/gaussian_filters.hpp"

namespace lsf {

using PointId = std::uint64_t;

/// Derived parameters of the two-collection data structure: m1 filters of
/// power kappa1 combined in tau-subsets, times m2 filters of power kappa2.
struct IndexPlan {
    std::uint32_t kappa1 = 1;
    std::uint32_t tau = 1;
    std::uint32_t m1 = 1;
    std::uint32_t kappa2 = 0;
    std::uint32_t m2 = 1;
    Exponents exponents;
    std::uint64_t n_target = 2;
    FilterFamilyStats stats;

    /// a = tau * kappa1 + kappa2
    std::uint32_t amplification() const { return tau * kappa1 + kappa2; }

    /// C(m1, tau) * m2; throws InfeasibleSpec if it overflows 64 bits.
    std::uint64_t simulated_filters() const;

    void validate() const;

    bool operator==(const IndexPlan&) const = default;
};

/// Parameter plan for n points:
///   kappa1 = max(1, ceil(min(rho_q, rho_u) ln n / ln(1/p1)))
///   tau    = max(1, floor(ln n / (kappa1 ln(pq/p2))))
///   m1     = ceil(tau / p1^kappa1)
///   kappa2 = max(0, ceil(ln n / ln(pq/p2)) - tau kappa1)
///   m2     = ceil(1 / p1^kappa2)
/// Ceil and floor treat values within 1e-9 (relative) of an integer as that
/// integer so representation noise such as 2 / 0.1^2 = 199.99999999999997
/// does not shift the plan.
IndexPlan plan_parameters(std::uint64_t n, const FilterFamilyStats& stats);

struct QueryOutcome {
    std::optional<PointId> found;
    std::uint64_t candidates_examined = 0;
    std::uint64_t filters_probed = 0;

    bool operator==(const QueryOutcome&) const = default;
};

/// Work counters in coordinate operations (filter rows x dimension) and
/// bucket incidences touched.
struct WorkCounters {
    std::uint64_t evaluation_ops = 0;
    std::uint64_t incidences_written = 0;
    std::uint64_t incidences_removed = 0;

    std::uint64_t total() const { return evaluation_ops + incidences_written + incidences_removed; }
};

/// Accepts or rejects a candidate during a query.
using CandidateCheck = std::function<bool(PointId, std::span<const float>)>;

/// Locality-sensitive filtering index on the unit sphere.
///
/// Points are stored as 32-bit floats; every filter evaluation (insert,
/// delete, rebuild, snapshot restore) uses the stored coordinates, so the
/// bucket state is a function of (plan, spec, seed, stored point set).
///
/// Concurrency: any number of concurrent query() calls, or one writer.
class LsfIndex {
public:
    /// Samples both filter collections; buckets start empty.
    LsfIndex(IndexPlan plan, GaussianFamilySpec spec, std::uint64_t seed);

    const IndexPlan& plan() const { return plan_; }
    const GaussianFamilySpec& spec() const { return spec_; }
    std::uint64_t seed() const { return seed_; }
    const FilterCollection& first_collection() const { return coll1_; }
    const FilterCollection& second_collection() const { return coll2_; }

    std::size_t size() const { return slot_of_.size(); }
    bool contains(PointId id) const { return slot_of_.contains(id); }

    /// Similarity a candidate needs for query() to return it. Defaults to the
    /// family's beta.
    double accept_threshold() const { return accept_threshold_; }
    void set_accept_threshold(double threshold) { accept_threshold_ = threshold; }

    /// Throws std::invalid_argument on a duplicate id, DimensionMismatch, or
    /// RangeError if the point is off the unit sphere by more than 1e-9.
    void insert(PointId id, VectorView point);

    /// Inserts many points; filter evaluation runs in parallel when
    /// exec == parallel, bucket writes stay serial and in input order.
    void insert_batch(std::span<const PointId> ids, std::span<const Vector> points,
                      Execution exec = Execution::parallel);

    /// Re-inserts a point exactly as stored (no sphere check). Used by
    /// rebuilds and snapshot loading.
    void restore(PointId id, std::span<const float> stored);

    /// Throws std::out_of_range for an unknown id.
    void erase(PointId id);

    /// Scans the buckets of the simulated query filters containing x in key
    /// order, each candidate at most once, and returns the first with
    /// <x, y> >= accept_threshold().
    QueryOutcome query(VectorView x) const;

    /// Same scan with a caller-supplied acceptance test.
    QueryOutcome query(VectorView x, const CandidateCheck& accept) const;

    /// Stored coordinates of `id`.
    std::span<const float> stored_point(PointId id) const;

    /// Ids in slot order (deterministic for a given operation sequence).
    std::vector<PointId> ids() const;

    /// Sorted (bucket key, point id) incidences.
    std::vector<std::pair<std::uint64_t, PointId>> bucket_incidences() const;
    std::size_t bucket_count() const { return buckets_.bucket_count(); }
    std::size_t incidence_count() const { return buckets_.incidence_count(); }

    /// Keys of simulated update (or query) filters containing x, in
    /// enumeration order.
    std::vector<std::uint64_t> simulated_keys(VectorView x, Role role, Execution exec = Execution::serial) const;

    const WorkCounters& counters() const { return counters_; }

    /// Doubles held by filter projection vectors: d (kappa1 m1 + kappa2 m2).
    std::size_t filter_coordinates() const { return coll1_.stored_coordinates() + coll2_.stored_coordinates(); }

private:
    std::uint32_t allocate_slot(PointId id, std::span<const float> stored);
    void write_keys(std::uint32_t slot, std::span<const std::uint64_t> keys);
    std::vector<std::uint64_t> keys_from_lists(const ActiveLists& first, const ActiveLists& second, Role role) const;
    Vector widen(std::span<const float> stored) const;

    IndexPlan plan_;
    GaussianFamilySpec spec_;
    std::uint64_t seed_;
    double accept_threshold_;
    FilterCollection coll1_;
    FilterCollection coll2_;
    SubsetRanker ranker_;
    BucketStore buckets_;

    std::vector<float> coords_;
    std::vector<PointId> slot_ids_;
    std::vector<bool> slot_live_;
    std::vector<std::uint32_t> free_slots_;
    std::unordered_map<PointId, std::uint32_t> slot_of_;
    WorkCounters counters_;
};

/// Settings shared by the dynamic wrapper, the repetition ensemble and the
/// benchmarks.
struct IndexConfig {
    GaussianFamilySpec spec;
    StatsMode mode = StatsMode::analytic;
    std::uint64_t calibration_trials = 1'000'000;
    std::uint64_t seed = 0;
};

/// Resolves planner stats for a config (analytic bounds or calibration).
FilterFamilyStats resolve_stats(const IndexConfig& config);

/// Fully dynamic index by global rebuilding: whenever the live count leaves
/// [n_target / 2, 2 n_target], a new plan is made for the current size and
/// the index is rebuilt from its stored points.
class DynamicLsfIndex {
public:
    DynamicLsfIndex(IndexConfig config, std::uint64_t initial_n_target);
    DynamicLsfIndex(IndexConfig config, FilterFamilyStats stats, std::uint64_t initial_n_target);

    void insert(PointId id, VectorView point);
    void erase(PointId id);
    QueryOutcome query(VectorView x) const { return index_->query(x); }

    /// Rebuilds if the live count is outside the planned window; returns
    /// whether a rebuild happened.
    bool rebuild_if_needed();

    const LsfIndex& index() const { return *index_; }
    std::size_t size() const { return index_->size(); }
    std::uint64_t rebuilds() const { return rebuilds_; }
    std::uint64_t updates() const { return updates_; }
    /// Work spent inside rebuilds (sampling plus re-insertion).
    std::uint64_t rebuild_work() const { return rebuild_work_; }
    /// Work spent by direct inserts and deletes.
    std::uint64_t update_work() const { return update_work_; }

private:
    std::unique_ptr<LsfIndex> make_index(std::uint64_t n_target) const;

    IndexConfig config_;
    FilterFamilyStats stats_;
    std::unique_ptr<LsfIndex> index_;
    std::uint64_t generation_ = 0;
    std::uint64_t rebuilds_ = 0;
    std::uint64_t updates_ = 0;
    std::uint64_t rebuild_work_ = 0;
    std::uint64_t update_work_ = 0;
};

/// R independent copies; repetition r uses seed derive_seed(seed, {r}).
/// A query returns the answer of the lowest-numbered repetition that finds
/// one; counters cover repetitions 0..r (all of them on a miss).
class RepetitionEnsemble {
public:
    RepetitionEnsemble(const IndexPlan& plan, const GaussianFamilySpec& spec, std::uint64_t seed,
                       std::size_t repetitions);

    static std::uint64_t repetition_seed(std::uint64_t seed, std::size_t r);

    std::size_t repetitions() const { return reps_.size(); }
    const LsfIndex& repetition(std::size_t r) const { return reps_[r]; }

    void insert(PointId id, VectorView point);
    void insert_batch(std::span<const PointId> ids, std::span<const Vector> points);
    void erase(PointId id);

    /// Serial: stops at the first success. Parallel: fans out to every
    /// repetition and combines with the same rule, so both return the same
    /// outcome.
    QueryOutcome query(VectorView x, Execution exec = Execution::serial) const;

private:
    std::vector<LsfIndex> reps_;
};

/// Combines per-repetition outcomes (in repetition order) by the ensemble
/// rule.
QueryOutcome combine_repetitions(std::span<const QueryOutcome> per_repetition);

}  // namespace lsf
