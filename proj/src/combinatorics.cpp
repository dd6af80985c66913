#include "lsf/combinatorics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace lsf {

std::optional<std::uint64_t> checked_binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    unsigned __int128 result = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        // result * (n - k + i) / i stays integral at every step.
        result = result * (n - k + i) / i;
        if (result > std::numeric_limits<std::uint64_t>::max()) return std::nullopt;
    }
    return static_cast<std::uint64_t>(result);
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
    auto value = checked_binomial(n, k);
    if (!value) throw std::overflow_error("binomial coefficient exceeds 64 bits");
    return *value;
}

double binomial_tail(std::uint64_t trials, double p, std::uint64_t at_least) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("binomial_tail: p outside [0, 1]");
    if (at_least == 0) return 1.0;
    if (at_least > trials) return 0.0;
    // Sum the complement in log space to stay stable for large trials.
    double below = 0.0;
    for (std::uint64_t k = 0; k < at_least; ++k) {
        const double log_term = std::lgamma(static_cast<double>(trials) + 1) - std::lgamma(static_cast<double>(k) + 1) -
                                std::lgamma(static_cast<double>(trials - k) + 1) +
                                (k == 0 ? 0.0 : static_cast<double>(k) * std::log(p)) +
                                (trials == k ? 0.0 : static_cast<double>(trials - k) * std::log1p(-p));
        below += std::exp(log_term);
    }
    return std::max(0.0, 1.0 - below);
}

SubsetRanker::SubsetRanker(std::uint32_t m, std::uint32_t k) : m_(m), k_(k) {
    if (k == 0 || k > m) throw std::invalid_argument("SubsetRanker: need 1 <= k <= m");
    total_ = binomial(m, k);
    table_.resize(static_cast<std::size_t>(m + 1) * (k + 1));
    for (std::uint32_t n = 0; n <= m; ++n) {
        for (std::uint32_t r = 0; r <= k; ++r) {
            // Every C(n, r) with n <= m, r <= k is at most C(m, k) when
            // r <= k <= m / 2, but not in general, so check each entry.
            auto v = checked_binomial(n, r);
            table_[static_cast<std::size_t>(n) * (k + 1) + r] = v ? *v : std::numeric_limits<std::uint64_t>::max();
        }
    }
}

std::uint64_t SubsetRanker::rank_unchecked(std::span<const std::uint32_t> subset) const {
    // rank = C(m, k) - 1 - sum_i C(m - 1 - c_i, k - i)
    std::uint64_t tail = 0;
    for (std::uint32_t i = 0; i < k_; ++i) tail += choose(m_ - 1 - subset[i], k_ - i);
    return total_ - 1 - tail;
}

std::uint64_t SubsetRanker::rank(std::span<const std::uint32_t> subset) const {
    if (subset.size() != k_) throw std::invalid_argument("subset_rank: wrong subset size");
    for (std::size_t i = 0; i < subset.size(); ++i) {
        if (subset[i] >= m_) throw std::invalid_argument("subset_rank: entry out of range");
        if (i > 0 && subset[i] <= subset[i - 1]) throw std::invalid_argument("subset_rank: subset not increasing");
    }
    return rank_unchecked(subset);
}

std::vector<std::uint32_t> SubsetRanker::unrank(std::uint64_t rank) const {
    if (rank >= total_) throw std::invalid_argument("unrank: rank out of range");
    std::vector<std::uint32_t> out;
    out.reserve(k_);
    std::uint32_t next = 0;
    for (std::uint32_t i = 0; i < k_; ++i) {
        // Skip over blocks of subsets whose i-th element is smaller.
        for (;; ++next) {
            const std::uint64_t block = choose(m_ - 1 - next, k_ - 1 - i);
            if (rank < block) break;
            rank -= block;
        }
        out.push_back(next++);
    }
    return out;
}

std::uint64_t subset_rank(std::span<const std::uint32_t> subset, std::uint32_t m) {
    if (subset.empty()) throw std::invalid_argument("subset_rank: empty subset");
    return SubsetRanker(m, static_cast<std::uint32_t>(subset.size())).rank(subset);
}

TauSubsetEnumerator::TauSubsetEnumerator(std::span<const std::uint32_t> active, std::uint32_t tau)
    : active_(active), tau_(tau) {
    if (tau == 0) throw std::invalid_argument("TauSubsetEnumerator: tau must be positive");
    done_ = active.size() < tau;
    positions_.resize(tau);
    subset_.resize(tau);
}

bool TauSubsetEnumerator::next() {
    if (done_) return false;
    const auto k = static_cast<std::uint32_t>(active_.size());
    if (!started_) {
        started_ = true;
        for (std::uint32_t i = 0; i < tau_; ++i) {
            positions_[i] = i;
            subset_[i] = active_[i];
        }
        return true;
    }
    // Rightmost position that can still move right.
    std::int64_t i = static_cast<std::int64_t>(tau_) - 1;
    while (i >= 0 && positions_[static_cast<std::size_t>(i)] == k - tau_ + static_cast<std::uint32_t>(i)) --i;
    if (i < 0) {
        done_ = true;
        return false;
    }
    auto u = static_cast<std::size_t>(i);
    ++positions_[u];
    subset_[u] = active_[positions_[u]];
    for (std::size_t j = u + 1; j < tau_; ++j) {
        positions_[j] = positions_[j - 1] + 1;
        subset_[j] = active_[positions_[j]];
    }
    return true;
}

}  // namespace lsf
