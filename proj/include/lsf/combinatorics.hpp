#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace lsf {

/// C(n, k), or nullopt if it does not fit in 64 bits.
std::optional<std::uint64_t> checked_binomial(std::uint64_t n, std::uint64_t k);

/// C(n, k); throws std::overflow_error if it does not fit in 64 bits.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

/// Exact Pr[Binomial(trials, p) >= at_least].
double binomial_tail(std::uint64_t trials, double p, std::uint64_t at_least);

/// Lexicographic ranking of k-subsets of {0, ..., m-1}. Precomputes the
/// binomial table C(j, i) for j < m, i <= k so a rank costs O(k).
class SubsetRanker {
public:
    SubsetRanker(std::uint32_t m, std::uint32_t k);

    std::uint32_t universe() const { return m_; }
    std::uint32_t subset_size() const { return k_; }
    std::uint64_t count() const { return total_; }

    /// Rank of a strictly increasing subset with entries < m. The first
    /// subset {0, ..., k-1} has rank 0. Throws std::invalid_argument on a
    /// malformed subset.
    std::uint64_t rank(std::span<const std::uint32_t> subset) const;

    /// Rank without validation, for hot loops over enumerated subsets.
    std::uint64_t rank_unchecked(std::span<const std::uint32_t> subset) const;

    std::vector<std::uint32_t> unrank(std::uint64_t rank) const;

private:
    std::uint64_t choose(std::uint32_t n, std::uint32_t r) const {
        return r > n ? 0 : table_[static_cast<std::size_t>(n) * (k_ + 1) + r];
    }

    std::uint32_t m_;
    std::uint32_t k_;
    std::uint64_t total_;
    std::vector<std::uint64_t> table_;
};

/// Convenience wrapper: lexicographic rank of `subset` among the
/// |subset|-subsets of {0, ..., m-1}.
std::uint64_t subset_rank(std::span<const std::uint32_t> subset, std::uint32_t m);

/// Iterates the tau-subsets of a sorted index list in lexicographic order.
/// Each step costs O(1) amortized after setup.
///
///   TauSubsetEnumerator e(active, 2);
///   while (e.next()) use(e.current());
class TauSubsetEnumerator {
public:
    TauSubsetEnumerator(std::span<const std::uint32_t> active, std::uint32_t tau);

    /// Advances to the next subset; false once exhausted.
    bool next();

    std::span<const std::uint32_t> current() const { return subset_; }

private:
    std::span<const std::uint32_t> active_;
    std::uint32_t tau_;
    std::vector<std::uint32_t> positions_;
    std::vector<std::uint32_t> subset_;
    bool started_ = false;
    bool done_ = false;
};

}  // namespace lsf
