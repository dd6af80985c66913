#include "lsf/lsf_index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace lsf {

namespace {

constexpr double kIntegerSlack = 1e-9;

double robust_ceil(double x) {
    const double r = std::round(x);
    if (std::abs(x - r) <= kIntegerSlack * std::max(1.0, std::abs(x))) return r;
    return std::ceil(x);
}

double robust_floor(double x) {
    const double r = std::round(x);
    if (std::abs(x - r) <= kIntegerSlack * std::max(1.0, std::abs(x))) return r;
    return std::floor(x);
}

const IndexPlan& validated(const IndexPlan& plan) {
    plan.validate();
    return plan;
}

std::uint32_t to_count(double x, const char* what) {
    if (!(x >= 0.0) || x > static_cast<double>(std::numeric_limits<std::uint32_t>::max() / 2)) {
        throw InfeasibleSpec(std::string("index plan: ") + what + " is out of range");
    }
    return static_cast<std::uint32_t>(x);
}

}  // namespace

std::uint64_t IndexPlan::simulated_filters() const {
    auto subsets = checked_binomial(m1, tau);
    if (!subsets || *subsets > std::numeric_limits<std::uint64_t>::max() / m2) {
        throw InfeasibleSpec("index plan: C(m1, tau) * m2 exceeds 64-bit keys");
    }
    return *subsets * m2;
}

void IndexPlan::validate() const {
    if (kappa1 < 1 || tau < 1 || m1 < tau || m2 < 1) {
        throw RangeError("index plan requires kappa1 >= 1, tau >= 1, m1 >= tau, m2 >= 1");
    }
    simulated_filters();
}

IndexPlan plan_parameters(std::uint64_t n, const FilterFamilyStats& stats) {
    if (n < 2) throw RangeError("plan_parameters needs n >= 2");
    const Exponents rho = exponents_from_stats(stats);
    const double log_n = std::log(static_cast<double>(n));
    const double log_gap = std::log(stats.pq / stats.p2);
    const double log_inv_p1 = std::log(1.0 / stats.p1);

    IndexPlan plan;
    plan.exponents = rho;
    plan.n_target = n;
    plan.stats = stats;
    const double kappa1 = log_inv_p1 > 0.0 ? robust_ceil(std::min(rho.rho_q, rho.rho_u) * log_n / log_inv_p1) : 1.0;
    plan.kappa1 = std::max<std::uint32_t>(1, to_count(kappa1, "kappa1"));
    plan.tau = std::max<std::uint32_t>(1, to_count(robust_floor(log_n / (plan.kappa1 * log_gap)), "tau"));
    plan.m1 = to_count(robust_ceil(plan.tau / std::pow(stats.p1, plan.kappa1)), "m1");
    const double total = robust_ceil(log_n / log_gap);
    plan.kappa2 = to_count(std::max(0.0, total - static_cast<double>(plan.tau) * plan.kappa1), "kappa2");
    plan.m2 = to_count(robust_ceil(1.0 / std::pow(stats.p1, plan.kappa2)), "m2");
    plan.validate();
    return plan;
}

// --- LsfIndex ---------------------------------------------------------------

LsfIndex::LsfIndex(IndexPlan plan, GaussianFamilySpec spec, std::uint64_t seed)
    : plan_(plan),
      spec_(spec),
      seed_(seed),
      accept_threshold_(spec.params.beta),
      ranker_(validated(plan).m1, plan.tau) {
    spec_.validate();
    coll1_ = FilterCollection::sample(spec_, plan_.m1, plan_.kappa1, derive_seed(seed, {1}),
                                      FilterCollection::Tag::base1);
    coll2_ = FilterCollection::sample(spec_, plan_.m2, plan_.kappa2, derive_seed(seed, {2}),
                                      FilterCollection::Tag::base2);
}

Vector LsfIndex::widen(std::span<const float> stored) const { return Vector(stored.begin(), stored.end()); }

std::vector<std::uint64_t> LsfIndex::keys_from_lists(const ActiveLists& first, const ActiveLists& second,
                                                     Role role) const {
    const auto& a1 = role == Role::query ? first.query : first.update;
    const auto& a2 = role == Role::query ? second.query : second.update;
    std::vector<std::uint64_t> keys;
    if (a2.empty()) return keys;
    TauSubsetEnumerator subsets(a1, plan_.tau);
    while (subsets.next()) {
        const std::uint64_t base = ranker_.rank_unchecked(subsets.current()) * plan_.m2;
        for (std::uint32_t j : a2) keys.push_back(base + j);
    }
    return keys;
}

std::vector<std::uint64_t> LsfIndex::simulated_keys(VectorView x, Role role, Execution exec) const {
    return keys_from_lists(coll1_.evaluate(x, exec), coll2_.evaluate(x, exec), role);
}

std::uint32_t LsfIndex::allocate_slot(PointId id, std::span<const float> stored) {
    const std::size_t d = spec_.dimension;
    std::uint32_t slot;
    if (!free_slots_.empty()) {
        slot = free_slots_.back();
        free_slots_.pop_back();
        std::copy(stored.begin(), stored.end(), coords_.begin() + static_cast<std::ptrdiff_t>(slot * d));
        slot_ids_[slot] = id;
        slot_live_[slot] = true;
    } else {
        slot = static_cast<std::uint32_t>(slot_ids_.size());
        coords_.insert(coords_.end(), stored.begin(), stored.end());
        slot_ids_.push_back(id);
        slot_live_.push_back(true);
    }
    slot_of_.emplace(id, slot);
    return slot;
}

void LsfIndex::write_keys(std::uint32_t slot, std::span<const std::uint64_t> keys) {
    for (std::uint64_t key : keys) buckets_.add(key, slot);
    counters_.evaluation_ops += (coll1_.size() * coll1_.power() + coll2_.size() * coll2_.power()) * spec_.dimension;
    counters_.incidences_written += keys.size();
}

void LsfIndex::restore(PointId id, std::span<const float> stored) {
    if (stored.size() != spec_.dimension) throw DimensionMismatch(spec_.dimension, stored.size());
    if (contains(id)) throw std::invalid_argument("duplicate point id " + std::to_string(id));
    const Vector x = widen(stored);
    const auto keys = simulated_keys(x, Role::update);
    write_keys(allocate_slot(id, stored), keys);
}

void LsfIndex::insert(PointId id, VectorView point) {
    if (point.size() != spec_.dimension) throw DimensionMismatch(spec_.dimension, point.size());
    if (!on_unit_sphere(point)) throw RangeError("point is not on the unit sphere");
    std::vector<float> stored(point.begin(), point.end());
    restore(id, stored);
}

void LsfIndex::insert_batch(std::span<const PointId> ids, std::span<const Vector> points, Execution exec) {
    if (ids.size() != points.size()) throw std::invalid_argument("insert_batch: ids and points differ in length");
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (points[i].size() != spec_.dimension) throw DimensionMismatch(spec_.dimension, points[i].size());
        if (!on_unit_sphere(points[i])) throw RangeError("point is not on the unit sphere");
        if (contains(ids[i])) throw std::invalid_argument("duplicate point id " + std::to_string(ids[i]));
    }
    // Blocks bound the memory held by pending key lists.
    constexpr std::size_t kBlock = 512;
    std::vector<std::vector<float>> stored(kBlock);
    std::vector<std::vector<std::uint64_t>> keys(kBlock);
    for (std::size_t start = 0; start < ids.size(); start += kBlock) {
        const auto count = static_cast<std::ptrdiff_t>(std::min(kBlock, ids.size() - start));
#pragma omp parallel for schedule(dynamic, 8) if (exec == Execution::parallel)
        for (std::ptrdiff_t i = 0; i < count; ++i) {
            const auto& p = points[start + static_cast<std::size_t>(i)];
            auto& s = stored[static_cast<std::size_t>(i)];
            s.assign(p.begin(), p.end());
            keys[static_cast<std::size_t>(i)] = simulated_keys(widen(s), Role::update);
        }
        for (std::ptrdiff_t i = 0; i < count; ++i) {
            const auto u = static_cast<std::size_t>(i);
            if (contains(ids[start + u])) throw std::invalid_argument("duplicate point id in batch");
            write_keys(allocate_slot(ids[start + u], stored[u]), keys[u]);
        }
    }
}

void LsfIndex::erase(PointId id) {
    auto it = slot_of_.find(id);
    if (it == slot_of_.end()) throw std::out_of_range("unknown point id " + std::to_string(id));
    const std::uint32_t slot = it->second;
    const auto keys = simulated_keys(widen(stored_point(id)), Role::update);
    for (std::uint64_t key : keys) {
        if (!buckets_.remove(key, slot)) throw std::logic_error("bucket state out of sync with filters");
    }
    counters_.evaluation_ops += (coll1_.size() * coll1_.power() + coll2_.size() * coll2_.power()) * spec_.dimension;
    counters_.incidences_removed += keys.size();
    slot_live_[slot] = false;
    free_slots_.push_back(slot);
    slot_of_.erase(it);
}

std::span<const float> LsfIndex::stored_point(PointId id) const {
    auto it = slot_of_.find(id);
    if (it == slot_of_.end()) throw std::out_of_range("unknown point id " + std::to_string(id));
    return {coords_.data() + static_cast<std::size_t>(it->second) * spec_.dimension, spec_.dimension};
}

std::vector<PointId> LsfIndex::ids() const {
    std::vector<PointId> out;
    out.reserve(size());
    for (std::size_t s = 0; s < slot_ids_.size(); ++s) {
        if (slot_live_[s]) out.push_back(slot_ids_[s]);
    }
    return out;
}

std::vector<std::pair<std::uint64_t, PointId>> LsfIndex::bucket_incidences() const {
    std::vector<std::pair<std::uint64_t, PointId>> out;
    for (auto [key, slot] : buckets_.incidences()) out.emplace_back(key, slot_ids_[slot]);
    std::sort(out.begin(), out.end());
    return out;
}

QueryOutcome LsfIndex::query(VectorView x) const {
    const double threshold = accept_threshold_;
    return query(x, [&](PointId, std::span<const float> y) {
        double sim = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) sim += x[i] * static_cast<double>(y[i]);
        return sim >= threshold;
    });
}

QueryOutcome LsfIndex::query(VectorView x, const CandidateCheck& accept) const {
    if (x.size() != spec_.dimension) throw DimensionMismatch(spec_.dimension, x.size());
    QueryOutcome outcome;
    if (size() == 0) return outcome;
    const ActiveLists first = coll1_.evaluate(x);
    const ActiveLists second = coll2_.evaluate(x);
    if (second.query.empty()) return outcome;
    std::vector<bool> seen(slot_ids_.size(), false);
    const std::size_t d = spec_.dimension;
    TauSubsetEnumerator subsets(first.query, plan_.tau);
    while (subsets.next()) {
        const std::uint64_t base = ranker_.rank_unchecked(subsets.current()) * plan_.m2;
        for (std::uint32_t j : second.query) {
            ++outcome.filters_probed;
            bool done = false;
            buckets_.for_each(base + j, [&](std::uint32_t slot) {
                if (done || seen[slot]) return;
                seen[slot] = true;
                ++outcome.candidates_examined;
                if (accept(slot_ids_[slot], {coords_.data() + static_cast<std::size_t>(slot) * d, d})) {
                    outcome.found = slot_ids_[slot];
                    done = true;
                }
            });
            if (done) return outcome;
        }
    }
    return outcome;
}

// --- DynamicLsfIndex --------------------------------------------------------

FilterFamilyStats resolve_stats(const IndexConfig& config) {
    return planner_stats(config.spec, config.mode, config.calibration_trials, derive_seed(config.seed, {0xca1}));
}

DynamicLsfIndex::DynamicLsfIndex(IndexConfig config, std::uint64_t initial_n_target)
    : DynamicLsfIndex(config, resolve_stats(config), initial_n_target) {}

DynamicLsfIndex::DynamicLsfIndex(IndexConfig config, FilterFamilyStats stats, std::uint64_t initial_n_target)
    : config_(std::move(config)), stats_(stats) {
    index_ = make_index(std::max<std::uint64_t>(2, initial_n_target));
}

std::unique_ptr<LsfIndex> DynamicLsfIndex::make_index(std::uint64_t n_target) const {
    return std::make_unique<LsfIndex>(plan_parameters(n_target, stats_), config_.spec,
                                      derive_seed(config_.seed, {0x9e5, generation_}));
}

void DynamicLsfIndex::insert(PointId id, VectorView point) {
    const auto before = index_->counters().total();
    index_->insert(id, point);
    update_work_ += index_->counters().total() - before;
    ++updates_;
    rebuild_if_needed();
}

void DynamicLsfIndex::erase(PointId id) {
    const auto before = index_->counters().total();
    index_->erase(id);
    update_work_ += index_->counters().total() - before;
    ++updates_;
    rebuild_if_needed();
}

bool DynamicLsfIndex::rebuild_if_needed() {
    const std::uint64_t live = index_->size();
    const std::uint64_t target = index_->plan().n_target;
    if (2 * live >= target && live <= 2 * target) return false;
    ++generation_;
    auto fresh = make_index(std::max<std::uint64_t>(2, live));
    std::uint64_t work = fresh->filter_coordinates();
    for (PointId id : index_->ids()) fresh->restore(id, index_->stored_point(id));
    work += fresh->counters().total();
    index_ = std::move(fresh);
    rebuild_work_ += work;
    ++rebuilds_;
    return true;
}

// --- RepetitionEnsemble -----------------------------------------------------

std::uint64_t RepetitionEnsemble::repetition_seed(std::uint64_t seed, std::size_t r) {
    return derive_seed(seed, {0x4e9, r});
}

RepetitionEnsemble::RepetitionEnsemble(const IndexPlan& plan, const GaussianFamilySpec& spec, std::uint64_t seed,
                                       std::size_t repetitions) {
    if (repetitions < 1) throw RangeError("ensemble needs at least one repetition");
    reps_.reserve(repetitions);
    for (std::size_t r = 0; r < repetitions; ++r) reps_.emplace_back(plan, spec, repetition_seed(seed, r));
}

void RepetitionEnsemble::insert(PointId id, VectorView point) {
    for (auto& rep : reps_) rep.insert(id, point);
}

void RepetitionEnsemble::insert_batch(std::span<const PointId> ids, std::span<const Vector> points) {
    for (auto& rep : reps_) rep.insert_batch(ids, points);
}

void RepetitionEnsemble::erase(PointId id) {
    for (auto& rep : reps_) rep.erase(id);
}

QueryOutcome combine_repetitions(std::span<const QueryOutcome> per_repetition) {
    QueryOutcome total;
    for (const auto& o : per_repetition) {
        total.candidates_examined += o.candidates_examined;
        total.filters_probed += o.filters_probed;
        if (o.found) {
            total.found = o.found;
            break;
        }
    }
    return total;
}

QueryOutcome RepetitionEnsemble::query(VectorView x, Execution exec) const {
    if (exec == Execution::serial) {
        std::vector<QueryOutcome> outcomes;
        for (const auto& rep : reps_) {
            outcomes.push_back(rep.query(x));
            if (outcomes.back().found) break;
        }
        return combine_repetitions(outcomes);
    }
    std::vector<QueryOutcome> outcomes(reps_.size());
    const auto n = static_cast<std::ptrdiff_t>(reps_.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t r = 0; r < n; ++r) outcomes[static_cast<std::size_t>(r)] = reps_[static_cast<std::size_t>(r)].query(x);
    return combine_repetitions(outcomes);
}

}  // namespace lsf
