#include "tsilab/enumerate.hpp"

#include <algorithm>
#include <map>

namespace tsilab {

namespace {

// Enumerate all trees of height <= depth with support inside window[from..].
// Returns them grouped nothing special; the caller assembles sequences.
struct TreeGen {
    const SpaceParams& P;
    const FinSet& window;
    BudgetGauge& gauge;
    // memo[depth][from] = all trees with support inside window[from..], height <= depth
    std::vector<std::vector<std::optional<std::vector<Functional>>>> memo;

    TreeGen(const SpaceParams& p, const FinSet& w, int depth, BudgetGauge& g) : P(p), window(w), gauge(g) {
        memo.assign(static_cast<std::size_t>(depth) + 1,
                    std::vector<std::optional<std::vector<Functional>>>(w.size() + 1));
    }

    const std::vector<Functional>& trees(int depth, std::size_t from) {
        auto& slot = memo[static_cast<std::size_t>(depth)][from];
        if (slot) return *slot;
        std::vector<Functional> out;
        // leaves anywhere at or beyond `from`
        for (std::size_t i = from; i < window.size(); ++i) {
            gauge.tick();
            out.push_back(Functional::leaf(+1, window[i]));
            out.push_back(Functional::leaf(-1, window[i]));
        }
        if (depth > 0) {
            for (std::size_t k = 0; k < P.num_classes(); ++k) {
                FamilyMatcher mm(P.cls(k).family, static_cast<std::int64_t>(window.size()));
                std::vector<Functional> children;
                build_children(depth, static_cast<int>(k), from, mm, mm.initial(), children, out);
            }
        }
        slot = std::move(out);
        return *slot;
    }

    void build_children(int depth, int k, std::size_t from, const FamilyMatcher& mm,
                        const FamilyMatcher::State& st, std::vector<Functional>& children,
                        std::vector<Functional>& out) {
        if (!children.empty()) {
            gauge.tick();
            out.push_back(Functional::node(k, children));
        }
        // append one more child beginning at position >= from
        for (std::size_t i = from; i < window.size(); ++i) {
            auto st2 = mm.feed(st, window[i]);
            if (!FamilyMatcher::alive(st2)) continue;
            for (const auto& sub : trees(depth - 1, i)) {
                if (sub.min_support() != window[i]) continue; // anchor each child at its head
                std::size_t next_from = i + 1;
                while (next_from < window.size() && window[next_from] <= sub.max_support()) ++next_from;
                children.push_back(sub);
                build_children(depth, k, next_from, mm, st2, children, out);
                children.pop_back();
            }
        }
    }
};

} // namespace

std::vector<Functional> enumerate_norming(const SpaceParams& P, const FinSet& window, int depth,
                                          std::optional<int> class_filter, BudgetGauge* gauge) {
    require_finset(window, "enumerate_norming window");
    if (depth < 0) throw input_error("enumerate_norming: negative depth");
    BudgetGauge local;
    BudgetGauge& g = gauge ? *gauge : local;
    std::vector<Functional> all;
    if (window.empty()) return all;
    TreeGen gen(P, window, depth, g);
    for (const auto& f : gen.trees(depth, 0)) {
        if (class_filter) {
            // K^n_j: leaves plus weight-j top nodes
            if (!f.is_leaf() && f.weight != *class_filter) continue;
        }
        all.push_back(f);
    }
    std::sort(all.begin(), all.end(),
              [](const Functional& a, const Functional& b) { return a.serialize() < b.serialize(); });
    all.erase(std::unique(all.begin(), all.end()), all.end());
    return all;
}

namespace {

// mask helpers over the support of x
struct SupDP {
    const SpaceParams& P;
    std::vector<std::pair<std::int64_t, Rat>> e;
    BudgetGauge& gauge;
    // best[depth][mask]: sup of f(x) over trees of height <= depth with
    // support inside mask
    std::vector<std::map<std::uint32_t, Rat>> best;

    SupDP(const SpaceParams& p, const SpVec& x, int depth, BudgetGauge& g)
        : P(p), e(x.entries().begin(), x.entries().end()), gauge(g) {
        best.resize(static_cast<std::size_t>(depth) + 1);
    }

    Rat sup(int depth, std::uint32_t mask, std::optional<int> filter) {
        if (mask == 0) return Rat(0);
        if (!filter) {
            auto it = best[static_cast<std::size_t>(depth)].find(mask);
            if (it != best[static_cast<std::size_t>(depth)].end()) return it->second;
        }
        gauge.tick();
        Rat r(0);
        for (std::size_t i = 0; i < e.size(); ++i)
            if (mask & (1u << i)) r = std::max(r, static_cast<Rat>(abs(e[i].second)));
        if (depth > 0) {
            for (std::size_t k = 0; k < P.num_classes(); ++k) {
                if (filter && static_cast<int>(k) != *filter) continue;
                FamilyMatcher mm(P.cls(k).family, static_cast<std::int64_t>(e.size()));
                Rat acc(0);
                pieces(depth, static_cast<int>(k), mm, mm.initial(), mask, 0, 0, acc, r);
            }
        }
        if (!filter) best[static_cast<std::size_t>(depth)][mask] = r;
        return r;
    }

private:
    // choose successive disjoint nonempty pieces inside mask, left to right
    void pieces(int depth, int k, const FamilyMatcher& mm, const FamilyMatcher::State& st, std::uint32_t mask,
                std::size_t from, int count, Rat& acc, Rat& out) {
        if (count >= 1) {
            Rat v = P.cls(static_cast<std::size_t>(k)).theta * acc;
            if (v > out) out = v;
        }
        for (std::size_t i = from; i < e.size(); ++i) {
            if (!(mask & (1u << i))) continue;
            auto st2 = mm.feed(st, e[i].first);
            if (!FamilyMatcher::alive(st2)) continue;
            // piece = {i} plus any subset of available positions beyond i
            std::vector<std::size_t> tail;
            for (std::size_t t = i + 1; t < e.size(); ++t)
                if (mask & (1u << t)) tail.push_back(t);
            std::uint64_t subs = std::uint64_t(1) << tail.size();
            for (std::uint64_t sel = 0; sel < subs; ++sel) {
                std::uint32_t pm = 1u << i;
                std::size_t next = i + 1;
                for (std::size_t b = 0; b < tail.size(); ++b)
                    if (sel & (std::uint64_t(1) << b)) {
                        pm |= 1u << tail[b];
                        next = tail[b] + 1;
                    }
                gauge.tick();
                Rat v = sup(depth - 1, pm, std::nullopt);
                acc += v;
                pieces(depth, k, mm, st2, mask, next, count + 1, acc, out);
                acc -= v;
            }
        }
    }
};

} // namespace

Rat norming_sup(const SpaceParams& P, const SpVec& x, int depth, std::optional<int> class_filter,
                BudgetGauge* gauge) {
    if (x.support_size() > 20)
        throw resource_error("window", x.support_size(), "norming_sup supports at most 20 support points");
    BudgetGauge local;
    BudgetGauge& g = gauge ? *gauge : local;
    SupDP dp(P, x, depth, g);
    std::uint32_t full = static_cast<std::uint32_t>((std::uint64_t(1) << x.support_size()) - 1);
    return dp.sup(depth, full, class_filter);
}

} // namespace tsilab
