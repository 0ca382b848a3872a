// Internal interval-DP engine shared by the mixed-Tsirelson norm and the
// conditional-space norm. Not installed; include from src/ only.
#pragma once

#include "tsilab/budget.hpp"
#include "tsilab/norm.hpp"

#include <functional>
#include <optional>
#include <unordered_map>

namespace tsilab {
namespace detail {

// Value of the restriction of x to support positions [a..b] under the
// implicit-equation DP:
//   V(a,b) = max( |x_a|, V(a+1,b), theta_k * best admissible covering
//                 partition into >= 2 consecutive pieces, extra(a,b) )
// Adequacy + spreading + unconditionality justify the reduction to covering
// interval partitions with a prefix-drop branch.
class NormEngine {
public:
    // extra branch: conditional-space specials; returns value and, on demand,
    // a witness functional achieving it (may be nullopt when value is 0).
    struct Extra {
        std::function<Rat(NormEngine&, int, int)> value;
        std::function<std::optional<Functional>(NormEngine&, int, int)> witness;
    };

    NormEngine(const SpaceParams& P, const SpVec& x, std::vector<bool> class_enabled, BudgetGauge& gauge);

    int size() const { return n_; }
    std::int64_t index_at(int i) const { return entries_[static_cast<std::size_t>(i)].first; }
    const Rat& coeff_at(int i) const { return entries_[static_cast<std::size_t>(i)].second; }
    Rat coeff_at_index(std::int64_t idx) const; // 0 when absent
    Rat l1_range(int a, int b) const;           // sum |coeff| over [a..b]

    Rat value(int a, int b);
    Rat full_value() { return n_ == 0 ? Rat(0) : value(0, n_ - 1); }

    Functional witness(int a, int b);
    Functional full_witness();

    // theta-free inner DP: max over admissible partitions of [a..b] into >= 2
    // consecutive covering pieces of the sum of piece values, for class k.
    Rat class_part(int k, int a, int b);
    // heads of the first-found optimal partition (replay; deterministic).
    std::vector<int> class_part_heads(int k, int a, int b);

    const SpaceParams& params() const { return P_; }
    NormStats& stats() { return stats_; }
    void set_extra(Extra e) { extra_ = std::move(e); }

private:
    struct Cell {
        Rat val;
        int branch; // -2 leaf, -1 drop, -3 extra, k >= 0 class
    };

    const SpaceParams& P_;
    std::vector<std::pair<std::int64_t, Rat>> entries_;
    std::vector<Rat> abs_prefix_; // abs_prefix_[i] = sum |coeff| over [0..i-1]
    int n_ = 0;
    std::vector<bool> enabled_;
    BudgetGauge& gauge_;
    NormStats stats_;
    std::optional<Extra> extra_;

    std::unordered_map<std::uint64_t, Cell> memo_;
    std::vector<std::optional<FamilyMatcher>> matchers_;

    struct PartKey {
        std::uint64_t pos_b_k;
        FamilyMatcher::State state;
        bool operator==(const PartKey& o) const { return pos_b_k == o.pos_b_k && state == o.state; }
    };
    struct PartKeyHash {
        std::size_t operator()(const PartKey& k) const {
            std::size_t s = std::hash<std::uint64_t>{}(k.pos_b_k);
            boost::hash_combine(s, FamilyMatcher::state_hash(k.state));
            return s;
        }
    };
    std::unordered_map<PartKey, Rat, PartKeyHash> part_memo_;

    const FamilyMatcher& matcher(int k);
    // best over: [pos..b] as final piece, or split at a further head.
    Rat part_tail(int k, int pos, int b, const FamilyMatcher::State& st);
    void part_tail_heads(int k, int pos, int b, const FamilyMatcher::State& st, std::vector<int>& heads);
};

} // namespace detail
} // namespace tsilab
