// Test-only brute-force oracles, independent of the library's decision paths.
#pragma once

#include "tsilab/rational.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

namespace oracles {

using tsilab::Rat;
using FinSet = std::vector<std::int64_t>;
using MemberFn = std::function<bool(const FinSet&)>;

// Schreier membership straight off the definition.
inline bool schreier(const FinSet& a) {
    return a.empty() || static_cast<std::int64_t>(a.size()) <= a.front();
}

// F_k membership by brute-force definition unfolding: F_0 singletons,
// F_{k+1} = S[F_k], blocks enumerated as compositions of the sorted set.
inline bool member_F(int k, const FinSet& a) {
    if (a.empty() || a.size() == 1) return true;
    if (k == 0) return false;
    std::size_t gaps = a.size() - 1;
    for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << gaps); ++mask) {
        std::vector<FinSet> blocks;
        FinSet cur{a[0]};
        for (std::size_t i = 0; i < gaps; ++i) {
            if (mask & (std::uint64_t(1) << i)) {
                blocks.push_back(cur);
                cur.clear();
            }
            cur.push_back(a[i + 1]);
        }
        blocks.push_back(cur);
        FinSet mins;
        for (auto& b : blocks) mins.push_back(b.front());
        if (!schreier(mins)) continue;
        bool ok = true;
        for (auto& b : blocks)
            if (!member_F(k - 1, b)) {
                ok = false;
                break;
            }
        if (ok) return true;
    }
    return false;
}

// Exhaustive admissibility: search all witness sets {m_1<...<m_n} with
// max E_{i-1} < m_i <= min E_i and membership checked via `member`.
inline bool admissible_exhaustive(const MemberFn& member, const std::vector<FinSet>& segments) {
    if (segments.empty()) return true;
    std::function<bool(std::size_t, FinSet&)> rec = [&](std::size_t i, FinSet& witness) -> bool {
        if (i == segments.size()) return member(witness);
        std::int64_t lo = i == 0 ? 1 : segments[i - 1].back() + 1;
        if (!witness.empty()) lo = std::max(lo, witness.back() + 1);
        for (std::int64_t m = lo; m <= segments[i].front(); ++m) {
            witness.push_back(m);
            if (rec(i + 1, witness)) return true;
            witness.pop_back();
        }
        return false;
    };
    FinSet witness;
    return rec(0, witness);
}

// Mixed Tsirelson norm by the implicit equation over ALL successive-set
// partitions (pieces are arbitrary finite sets, not intervals; they need not
// cover the support). Single-piece families are excluded (dominated, theta<1).
// Admissibility uses the exhaustive witness search above.
struct BruteNorm {
    struct Class {
        Rat theta;
        MemberFn member;
    };
    std::vector<std::pair<std::int64_t, Rat>> entries; // (index, coefficient), increasing
    std::vector<Class> classes;
    std::map<std::uint64_t, Rat> memo;

    Rat norm() { return eval_mask((std::uint64_t(1) << entries.size()) - 1); }

    Rat eval_mask(std::uint64_t mask) {
        if (mask == 0) return Rat(0);
        auto it = memo.find(mask);
        if (it != memo.end()) return it->second;
        Rat best(0);
        std::vector<std::size_t> pos;
        for (std::size_t i = 0; i < entries.size(); ++i)
            if (mask & (std::uint64_t(1) << i)) {
                pos.push_back(i);
                best = std::max(best, abs(entries[i].second));
            }
        memo[mask] = best; // guards re-entry; pieces are strict subsets so this is safe
        for (const auto& cls : classes) {
            std::vector<std::uint64_t> pieces;
            gen(cls, pos, 0, pieces, best);
        }
        memo[mask] = best;
        return best;
    }

private:
    void consider(const Class& cls, const std::vector<std::uint64_t>& pieces, Rat& best) {
        if (pieces.size() < 2) return;
        std::vector<FinSet> segs;
        Rat sum(0);
        for (auto pm : pieces) {
            FinSet s;
            for (std::size_t i = 0; i < entries.size(); ++i)
                if (pm & (std::uint64_t(1) << i)) s.push_back(entries[i].first);
            segs.push_back(std::move(s));
            sum += eval_mask(pm);
        }
        if (cls.theta * sum <= best) return; // admissibility is the expensive part
        if (admissible_exhaustive(cls.member, segs)) best = std::max(best, cls.theta * sum);
    }

    // Build piece lists left to right. pos[idx..] are the unused positions at
    // or above the current frontier.
    void gen(const Class& cls, const std::vector<std::size_t>& pos, std::size_t idx,
             std::vector<std::uint64_t>& pieces, Rat& best) {
        consider(cls, pieces, best);
        if (idx >= pos.size()) return;
        gen(cls, pos, idx + 1, pieces, best); // skip pos[idx]
        // start a new piece anchored at pos[idx], extended by any subset of the tail
        std::vector<std::size_t> tail(pos.begin() + idx + 1, pos.end());
        std::uint64_t anchor = std::uint64_t(1) << pos[idx];
        std::uint64_t subs = std::uint64_t(1) << tail.size();
        for (std::uint64_t t = 0; t < subs; ++t) {
            std::uint64_t pm = anchor;
            std::size_t next = idx + 1;
            for (std::size_t b = 0; b < tail.size(); ++b)
                if (t & (std::uint64_t(1) << b)) {
                    pm |= std::uint64_t(1) << tail[b];
                    next = idx + 1 + b + 1;
                }
            pieces.push_back(pm);
            gen(cls, pos, next, pieces, best);
            pieces.pop_back();
        }
    }
};

} // namespace oracles
