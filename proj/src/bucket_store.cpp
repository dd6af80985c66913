#include "lsf/bucket_store.hpp"

#include <algorithm>
#include <stdexcept>

namespace lsf {

std::size_t BucketStore::find(std::uint64_t key) const {
    if (table_.empty()) return kNotFound;
    const std::size_t mask = table_.size() - 1;
    for (std::size_t pos = home(key);; pos = (pos + 1) & mask) {
        const Cell& c = table_[pos];
        if (c.head == kNil) return kNotFound;
        if (c.key == key) return pos;
    }
}

void BucketStore::grow() {
    std::vector<Cell> old = std::move(table_);
    table_.assign(old.empty() ? 64 : old.size() * 2, Cell{});
    const std::size_t mask = table_.size() - 1;
    for (const Cell& c : old) {
        if (c.head == kNil) continue;
        std::size_t pos = home(c.key);
        while (table_[pos].head != kNil) pos = (pos + 1) & mask;
        table_[pos] = c;
    }
}

std::uint32_t BucketStore::new_entry(std::uint32_t slot) {
    if (free_ != kNil) {
        const std::uint32_t e = free_;
        free_ = pool_[e].next;
        pool_[e] = {slot, kNil};
        return e;
    }
    if (pool_.size() >= kNil) throw std::length_error("bucket store is full");
    pool_.push_back({slot, kNil});
    return static_cast<std::uint32_t>(pool_.size() - 1);
}

void BucketStore::add(std::uint64_t key, std::uint32_t slot) {
    // Keep the load factor at or below 5/8.
    if ((occupied_ + 1) * 8 > table_.size() * 5) grow();
    const std::size_t mask = table_.size() - 1;
    std::size_t pos = home(key);
    while (table_[pos].head != kNil && table_[pos].key != key) pos = (pos + 1) & mask;
    const std::uint32_t e = new_entry(slot);
    Cell& c = table_[pos];
    if (c.head == kNil) {
        c = {key, e, e};
        ++occupied_;
    } else {
        pool_[c.tail].next = e;
        c.tail = e;
    }
    ++incidences_;
}

void BucketStore::erase_cell(std::size_t pos) {
    // Backward-shift deletion keeps probe sequences intact without tombstones.
    const std::size_t mask = table_.size() - 1;
    std::size_t hole = pos;
    for (std::size_t next = (hole + 1) & mask; table_[next].head != kNil; next = (next + 1) & mask) {
        const std::size_t want = home(table_[next].key);
        // Move `next` into the hole unless its home lies cyclically in (hole, next].
        const bool stays = hole <= next ? (hole < want && want <= next) : (hole < want || want <= next);
        if (!stays) {
            table_[hole] = table_[next];
            hole = next;
        }
    }
    table_[hole] = Cell{};
    --occupied_;
}

bool BucketStore::remove(std::uint64_t key, std::uint32_t slot) {
    const std::size_t pos = find(key);
    if (pos == kNotFound) return false;
    Cell& c = table_[pos];
    std::uint32_t prev = kNil;
    for (std::uint32_t e = c.head; e != kNil; prev = e, e = pool_[e].next) {
        if (pool_[e].slot != slot) continue;
        const std::uint32_t next = pool_[e].next;
        if (prev == kNil) {
            c.head = next;
        } else {
            pool_[prev].next = next;
        }
        if (c.tail == e) c.tail = prev;
        pool_[e].next = free_;
        free_ = e;
        --incidences_;
        if (c.head == kNil) erase_cell(pos);
        return true;
    }
    return false;
}

std::vector<std::pair<std::uint64_t, std::uint32_t>> BucketStore::incidences() const {
    std::vector<std::pair<std::uint64_t, std::uint32_t>> out;
    out.reserve(incidences_);
    for (const Cell& c : table_) {
        if (c.head == kNil) continue;
        for (std::uint32_t e = c.head; e != kNil; e = pool_[e].next) out.emplace_back(c.key, pool_[e].slot);
    }
    std::sort(out.begin(), out.end());
    return out;
}

void BucketStore::clear() {
    table_.clear();
    pool_.clear();
    free_ = kNil;
    occupied_ = 0;
    incidences_ = 0;
}

}  // namespace lsf
