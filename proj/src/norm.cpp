#include "tsilab/norm.hpp"

#include "norm_engine.hpp"

#include <algorithm>

namespace tsilab {
namespace detail {

NormEngine::NormEngine(const SpaceParams& P, const SpVec& x, std::vector<bool> class_enabled, BudgetGauge& gauge)
    : P_(P), entries_(x.entries()), n_(static_cast<int>(x.entries().size())), enabled_(std::move(class_enabled)),
      gauge_(gauge) {
    enabled_.resize(P.num_classes(), false);
    matchers_.resize(P.num_classes());
    abs_prefix_.assign(static_cast<std::size_t>(n_) + 1, Rat(0));
    for (int i = 0; i < n_; ++i)
        abs_prefix_[static_cast<std::size_t>(i) + 1] =
            abs_prefix_[static_cast<std::size_t>(i)] + abs(entries_[static_cast<std::size_t>(i)].second);
}

Rat NormEngine::l1_range(int a, int b) const {
    return abs_prefix_[static_cast<std::size_t>(b) + 1] - abs_prefix_[static_cast<std::size_t>(a)];
}

Rat NormEngine::coeff_at_index(std::int64_t idx) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), idx,
                               [](const auto& e, std::int64_t v) { return e.first < v; });
    if (it != entries_.end() && it->first == idx) return it->second;
    return Rat(0);
}

const FamilyMatcher& NormEngine::matcher(int k) {
    auto& slot = matchers_[static_cast<std::size_t>(k)];
    if (!slot) slot.emplace(P_.cls(static_cast<std::size_t>(k)).family, n_);
    return *slot;
}

Rat NormEngine::value(int a, int b) {
    std::uint64_t key = (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint64_t>(b);
    auto it = memo_.find(key);
    if (it != memo_.end()) {
        ++stats_.cache_hits;
        return it->second.val;
    }
    gauge_.tick();
    ++stats_.subproblems;

    Cell cell{abs(coeff_at(a)), -2};
    if (a < b) {
        Rat dropped = value(a + 1, b);
        if (dropped > cell.val) cell = {dropped, -1};
        for (std::size_t k = 0; k < P_.num_classes(); ++k) {
            if (!enabled_[k]) continue;
            const Rat& theta = P_.cls(k).theta;
            if (theta * l1_range(a, b) <= cell.val) {
                ++stats_.pruned;
                continue;
            }
            Rat part = class_part(static_cast<int>(k), a, b);
            Rat v = theta * part;
            if (v > cell.val) cell = {v, static_cast<int>(k)};
        }
    }
    if (extra_) {
        Rat v = extra_->value(*this, a, b);
        if (v > cell.val) cell = {v, -3};
    }
    memo_.emplace(key, cell);
    return cell.val;
}

Rat NormEngine::class_part(int k, int a, int b) {
    const FamilyMatcher& mm = matcher(k);
    auto st0 = mm.initial();
    auto st1 = mm.feed(st0, index_at(a));
    if (!FamilyMatcher::alive(st1)) return Rat(-1);
    Rat best(-1);
    // require at least two pieces: choose the second head here
    for (int h = a + 1; h <= b; ++h) {
        auto st2 = mm.feed(st1, index_at(h));
        if (!FamilyMatcher::alive(st2)) continue;
        Rat v = value(a, h - 1) + part_tail(k, h, b, st2);
        if (v > best) best = v;
    }
    return best;
}

Rat NormEngine::part_tail(int k, int pos, int b, const FamilyMatcher::State& st) {
    PartKey key{(static_cast<std::uint64_t>(k) << 48) | (static_cast<std::uint64_t>(pos) << 24) |
                    static_cast<std::uint64_t>(b),
                st};
    auto it = part_memo_.find(key);
    if (it != part_memo_.end()) {
        ++stats_.cache_hits;
        return it->second;
    }
    gauge_.tick();
    const FamilyMatcher& mm = matcher(k);
    Rat best = value(pos, b); // close the partition with the final piece
    for (int h = pos + 1; h <= b; ++h) {
        auto st2 = mm.feed(st, index_at(h));
        if (!FamilyMatcher::alive(st2)) continue;
        Rat v = value(pos, h - 1) + part_tail(k, h, b, st2);
        if (v > best) best = v;
    }
    part_memo_.emplace(std::move(key), best);
    return best;
}

std::vector<int> NormEngine::class_part_heads(int k, int a, int b) {
    Rat target = class_part(k, a, b);
    const FamilyMatcher& mm = matcher(k);
    auto st1 = mm.feed(mm.initial(), index_at(a));
    for (int h = a + 1; h <= b; ++h) {
        auto st2 = mm.feed(st1, index_at(h));
        if (!FamilyMatcher::alive(st2)) continue;
        if (value(a, h - 1) + part_tail(k, h, b, st2) == target) {
            std::vector<int> heads{a};
            heads.push_back(h);
            part_tail_heads(k, h, b, st2, heads);
            return heads;
        }
    }
    throw internal_error("class_part_heads: replay failed");
}

void NormEngine::part_tail_heads(int k, int pos, int b, const FamilyMatcher::State& st, std::vector<int>& heads) {
    Rat target = part_tail(k, pos, b, st);
    if (value(pos, b) == target) return; // final piece
    const FamilyMatcher& mm = matcher(k);
    for (int h = pos + 1; h <= b; ++h) {
        auto st2 = mm.feed(st, index_at(h));
        if (!FamilyMatcher::alive(st2)) continue;
        if (value(pos, h - 1) + part_tail(k, h, b, st2) == target) {
            heads.push_back(h);
            part_tail_heads(k, h, b, st2, heads);
            return;
        }
    }
    throw internal_error("part_tail_heads: replay failed");
}

Functional NormEngine::witness(int a, int b) {
    value(a, b); // ensure cell
    std::uint64_t key = (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint64_t>(b);
    const Cell& cell = memo_.at(key);
    switch (cell.branch) {
        case -2: return Functional::leaf(coeff_at(a) < 0 ? -1 : +1, index_at(a));
        case -1: return witness(a + 1, b);
        case -3: {
            auto w = extra_->witness(*this, a, b);
            if (!w) throw internal_error("extra branch won without a witness");
            return *w;
        }
        default: {
            auto heads = class_part_heads(cell.branch, a, b);
            std::vector<Functional> children;
            for (std::size_t i = 0; i < heads.size(); ++i) {
                int lo = heads[i];
                int hi = (i + 1 < heads.size()) ? heads[i + 1] - 1 : b;
                children.push_back(witness(lo, hi));
            }
            return Functional::node(cell.branch, std::move(children));
        }
    }
}

Functional NormEngine::full_witness() {
    if (n_ == 0) return Functional::leaf(+1, 1);
    return witness(0, n_ - 1);
}

} // namespace detail

namespace {

NormResult run_engine(const SpaceParams& P, const SpVec& x, std::optional<int> j_cut, BudgetGauge* gauge) {
    BudgetGauge local;
    BudgetGauge& g = gauge ? *gauge : local;
    std::vector<bool> enabled(P.num_classes(), true);
    if (j_cut) {
        if (*j_cut >= static_cast<int>(P.num_classes()))
            throw input_error("j_cut " + std::to_string(*j_cut) + " out of range");
        for (std::size_t k = 0; k < P.num_classes(); ++k) enabled[k] = static_cast<int>(k) <= *j_cut;
    }
    detail::NormEngine eng(P, x, enabled, g);
    NormResult r;
    r.value = eng.full_value();
    r.witness = eng.full_witness();
    r.stats = eng.stats();
    return r;
}

} // namespace

NormResult tsirelson_norm(const FamilyPtr& M, const Rat& theta, const SpVec& x, BudgetGauge* gauge) {
    if (theta <= 0 || theta >= 1) throw input_error("tsirelson_norm: theta must lie in (0,1)");
    SpaceParams P;
    P.name = "T[" + M->to_string() + "," + format_rat(theta) + "]";
    ClassSpec c;
    c.m = 0; // unused; theta drives the engine
    c.theta = theta;
    c.family = M;
    P.classes.push_back(std::move(c));
    return run_engine(P, x, std::nullopt, gauge);
}

NormResult mixed_norm(const SpaceParams& P, const SpVec& x, std::optional<int> j_cut, BudgetGauge* gauge) {
    if (j_cut && *j_cut < 0) { // empty class set: plain sup norm
        NormResult r;
        r.value = x.linf();
        r.witness = Functional::leaf(+1, x.empty() ? 1 : x.entries().front().first);
        for (const auto& [idx, c] : x.entries())
            if (abs(c) == r.value) {
                r.witness = Functional::leaf(c < 0 ? -1 : +1, idx);
                break;
            }
        return r;
    }
    return run_engine(P, x, j_cut, gauge);
}

NormResult certify_norm(const SpaceParams& P, const SpVec& x, BudgetGauge* gauge) {
    return mixed_norm(P, x, std::nullopt, gauge);
}

namespace {

Rat class_sup_impl(const SpaceParams& P, const SpVec& x, int j, bool include_leaves, BudgetGauge* gauge) {
    if (j < 0 || j >= static_cast<int>(P.num_classes())) throw input_error("class_sup: class out of range");
    BudgetGauge local;
    BudgetGauge& g = gauge ? *gauge : local;
    std::vector<bool> enabled(P.num_classes(), true);
    detail::NormEngine eng(P, x, enabled, g);
    Rat best = include_leaves ? x.linf() : Rat(0);
    if (x.empty()) return best;
    int n = static_cast<int>(x.entries().size());
    const Rat& theta = P.cls(static_cast<std::size_t>(j)).theta;
    // single-child node
    best = std::max(best, static_cast<Rat>(theta * eng.value(0, n - 1)));
    // multi-piece nodes; prefix drops handled by varying the start
    for (int a = 0; a + 1 < n; ++a) {
        Rat part = eng.class_part(j, a, n - 1);
        if (part > 0) best = std::max(best, static_cast<Rat>(theta * part));
    }
    return best;
}

} // namespace

Rat class_sup(const SpaceParams& P, const SpVec& x, int j, BudgetGauge* gauge) {
    return class_sup_impl(P, x, j, true, gauge);
}

Rat class_node_sup(const SpaceParams& P, const SpVec& x, int j, BudgetGauge* gauge) {
    return class_sup_impl(P, x, j, false, gauge);
}

} // namespace tsilab
