#pragma once

#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "lsf/rng.hpp"

namespace lsf {

/// Sparse multimap from 64-bit bucket keys to 32-bit point slots.
///
/// Keys live in an open-addressing table with linear probing; each key owns
/// a singly linked chain of entries in a shared pool, appended at the tail so
/// a bucket lists its points in insertion order. Only non-empty buckets
/// occupy a slot. About 30 bytes per incidence at the default load factor.
class BucketStore {
public:
    BucketStore() = default;

    void add(std::uint64_t key, std::uint32_t slot);

    /// Removes one occurrence of `slot` from bucket `key`. Returns false if
    /// it was not there.
    bool remove(std::uint64_t key, std::uint32_t slot);

    /// Calls fn(slot) for each point in bucket `key`, in insertion order.
    template <class Fn>
    void for_each(std::uint64_t key, Fn&& fn) const {
        const std::size_t pos = find(key);
        if (pos == kNotFound) return;
        for (std::uint32_t e = table_[pos].head; e != kNil; e = pool_[e].next) fn(pool_[e].slot);
    }

    bool contains(std::uint64_t key) const { return find(key) != kNotFound; }
    std::size_t bucket_count() const { return occupied_; }
    std::size_t incidence_count() const { return incidences_; }

    /// All (key, slot) pairs sorted ascending; for tests and oracles.
    std::vector<std::pair<std::uint64_t, std::uint32_t>> incidences() const;

    void clear();

private:
    static constexpr std::uint32_t kNil = std::numeric_limits<std::uint32_t>::max();
    static constexpr std::size_t kNotFound = std::numeric_limits<std::size_t>::max();

    struct Cell {
        std::uint64_t key = 0;
        std::uint32_t head = kNil;  // kNil marks an empty cell
        std::uint32_t tail = kNil;
    };
    struct Entry {
        std::uint32_t slot;
        std::uint32_t next;
    };

    std::size_t home(std::uint64_t key) const { return static_cast<std::size_t>(mix64(key)) & (table_.size() - 1); }
    std::size_t find(std::uint64_t key) const;
    void grow();
    void erase_cell(std::size_t pos);
    std::uint32_t new_entry(std::uint32_t slot);

    std::vector<Cell> table_;
    std::vector<Entry> pool_;
    std::uint32_t free_ = kNil;
    std::size_t occupied_ = 0;
    std::size_t incidences_ = 0;
};

}  // namespace lsf
