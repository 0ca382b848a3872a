#include "tsilab/vector.hpp"

#include <algorithm>
#include <map>

namespace tsilab {

SpVec::SpVec(std::vector<Entry> entries) {
    std::map<std::int64_t, Rat> acc;
    for (auto& [idx, c] : entries) {
        if (idx < 1) throw input_error("vector index must be a positive integer");
        acc[idx] += c;
    }
    for (auto& [idx, c] : acc)
        if (c != 0) entries_.emplace_back(idx, c);
}

FinSet SpVec::support() const {
    FinSet s;
    s.reserve(entries_.size());
    for (const auto& [idx, c] : entries_) s.push_back(idx);
    return s;
}

Rat SpVec::coeff(std::int64_t idx) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), idx,
                               [](const Entry& e, std::int64_t v) { return e.first < v; });
    if (it != entries_.end() && it->first == idx) return it->second;
    return Rat(0);
}

Rat SpVec::linf() const {
    Rat m(0);
    for (const auto& [idx, c] : entries_) m = std::max(m, static_cast<Rat>(abs(c)));
    return m;
}

Rat SpVec::l1() const {
    Rat s(0);
    for (const auto& [idx, c] : entries_) s += abs(c);
    return s;
}

SpVec SpVec::scaled(const Rat& c) const {
    SpVec out;
    if (c == 0) return out;
    out.entries_ = entries_;
    for (auto& [idx, v] : out.entries_) v *= c;
    return out;
}

SpVec SpVec::plus(const SpVec& other) const {
    std::vector<Entry> all = entries_;
    all.insert(all.end(), other.entries_.begin(), other.entries_.end());
    return SpVec(std::move(all));
}

SpVec SpVec::restrict_range(std::int64_t lo, std::int64_t hi) const {
    SpVec out;
    for (const auto& e : entries_)
        if (e.first >= lo && e.first <= hi) out.entries_.push_back(e);
    return out;
}

SpVec SpVec::restrict_to(const FinSet& s) const {
    SpVec out;
    for (const auto& e : entries_)
        if (std::binary_search(s.begin(), s.end(), e.first)) out.entries_.push_back(e);
    return out;
}

SpVec SpVec::flip_signs(const std::vector<bool>& flips) const {
    SpVec out = *this;
    for (std::size_t i = 0; i < out.entries_.size() && i < flips.size(); ++i)
        if (flips[i]) out.entries_[i].second = -out.entries_[i].second;
    return out;
}

BlockSeq::BlockSeq(std::vector<SpVec> blocks) {
    for (auto& b : blocks) push_back(std::move(b));
}

void BlockSeq::push_back(SpVec v) {
    if (v.empty()) throw input_error("block sequence: empty block");
    if (!blocks_.empty() && v.min_index() <= blocks_.back().max_index())
        throw input_error("block sequence: supports must be successive");
    blocks_.push_back(std::move(v));
}

} // namespace tsilab
