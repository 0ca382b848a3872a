#pragma once

#include "tsilab/errors.hpp"
#include "tsilab/family.hpp"
#include "tsilab/rational.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace tsilab {

/// Finitely supported vector with exact rational coefficients, indexed by
/// positive integers. Zero coefficients are never stored.
class SpVec {
public:
    using Entry = std::pair<std::int64_t, Rat>;

    SpVec() = default;
    /// Entries may arrive unsorted / with repeats (summed); zeros dropped.
    explicit SpVec(std::vector<Entry> entries);

    static SpVec basis(std::int64_t n) { return SpVec({{n, Rat(1)}}); }

    const std::vector<Entry>& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }
    std::size_t support_size() const { return entries_.size(); }
    FinSet support() const;
    Rat coeff(std::int64_t idx) const;
    std::int64_t min_index() const { return entries_.empty() ? 0 : entries_.front().first; }
    std::int64_t max_index() const { return entries_.empty() ? 0 : entries_.back().first; }

    Rat linf() const;
    Rat l1() const;

    SpVec scaled(const Rat& c) const;
    SpVec plus(const SpVec& other) const;
    /// Restriction to indices in [lo, hi].
    SpVec restrict_range(std::int64_t lo, std::int64_t hi) const;
    /// Restriction to an index set.
    SpVec restrict_to(const FinSet& s) const;
    SpVec flip_signs(const std::vector<bool>& flips) const; // by entry position

    bool operator==(const SpVec& o) const { return entries_ == o.entries_; }

private:
    std::vector<Entry> entries_; // sorted by index, nonzero
};

/// Successive finitely supported vectors: supp x_k < supp x_{k+1}.
class BlockSeq {
public:
    BlockSeq() = default;
    explicit BlockSeq(std::vector<SpVec> blocks);

    const std::vector<SpVec>& blocks() const { return blocks_; }
    std::size_t size() const { return blocks_.size(); }
    const SpVec& operator[](std::size_t i) const { return blocks_[i]; }
    void push_back(SpVec v);

private:
    std::vector<SpVec> blocks_;
};

} // namespace tsilab
