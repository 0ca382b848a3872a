#include "tsilab/family.hpp"

#include <algorithm>
#include <cctype>
#include <mutex>
#include <sstream>
#include <unordered_map>

namespace tsilab {

bool is_valid_finset(const FinSet& a) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] < 1) return false;
        if (i > 0 && a[i] <= a[i - 1]) return false;
    }
    return true;
}

void require_finset(const FinSet& a, const char* what) {
    if (!is_valid_finset(a)) throw input_error(std::string(what) + ": not a strictly increasing set of positive integers");
}

// ---------------------------------------------------------------------- AST

namespace {

std::size_t node_hash(FamilyKind k, std::int64_t n, bool omega, const FamilyPtr& l, const FamilyPtr& r) {
    std::size_t seed = static_cast<std::size_t>(k) * 0x9e3779b97f4a7c15ull;
    boost::hash_combine(seed, n);
    boost::hash_combine(seed, omega);
    if (l) boost::hash_combine(seed, l->hash);
    if (r) boost::hash_combine(seed, r->hash);
    return seed;
}

FamilyPtr make_node(FamilyKind k, std::int64_t n, bool omega, FamilyPtr l, FamilyPtr r) {
    auto node = std::make_shared<FamilyNode>();
    node->kind = k;
    node->n = n;
    node->omega = omega;
    node->left = std::move(l);
    node->right = std::move(r);
    node->hash = node_hash(k, n, omega, node->left, node->right);
    return node;
}

} // namespace

FamilyPtr fam_singletons() { return make_node(FamilyKind::Singletons, 0, false, nullptr, nullptr); }
FamilyPtr fam_schreier() { return make_node(FamilyKind::Schreier, 0, false, nullptr, nullptr); }

FamilyPtr fam_cardinality(std::int64_t n) {
    if (n < 1) throw input_error("A(n) requires n >= 1");
    return make_node(FamilyKind::Cardinality, n, false, nullptr, nullptr);
}

FamilyPtr fam_schreier_rank(std::int64_t k) {
    if (k < 0) throw input_error("F(k) requires k >= 0");
    return make_node(FamilyKind::SchreierRank, k, false, nullptr, nullptr);
}

FamilyPtr fam_schreier_omega() { return make_node(FamilyKind::SchreierRank, 0, true, nullptr, nullptr); }

FamilyPtr fam_compose(FamilyPtr m, FamilyPtr n) {
    if (!m || !n) throw input_error("compose() needs two families");
    return make_node(FamilyKind::Compose, 0, false, std::move(m), std::move(n));
}

FamilyPtr fam_iterate(FamilyPtr f, std::int64_t l) {
    if (!f) throw input_error("iter() needs a family");
    if (l < 1) throw input_error("iter(F,l) requires l >= 1");
    if (l == 1) return f; // canonical normalization
    return make_node(FamilyKind::Iterate, l, false, std::move(f), nullptr);
}

bool family_equal(const FamilyPtr& a, const FamilyPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->hash != b->hash || a->kind != b->kind || a->n != b->n || a->omega != b->omega) return false;
    return family_equal(a->left, b->left) && family_equal(a->right, b->right);
}

std::string FamilyNode::to_string() const {
    switch (kind) {
        case FamilyKind::Singletons: return "F(0)";
        case FamilyKind::Schreier: return "S";
        case FamilyKind::Cardinality: return "A(" + std::to_string(n) + ")";
        case FamilyKind::SchreierRank: return omega ? "F(omega)" : "F(" + std::to_string(n) + ")";
        case FamilyKind::Compose: return "compose(" + left->to_string() + "," + right->to_string() + ")";
        case FamilyKind::Iterate: return "iter(" + left->to_string() + "," + std::to_string(n) + ")";
    }
    return "?";
}

// ------------------------------------------------------------------- parser

namespace {

struct Parser {
    const std::string& s;
    std::size_t pos = 0;

    void skip() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    [[noreturn]] void fail(const std::string& msg) const {
        throw input_error("family parse error at position " + std::to_string(pos) + ": " + msg);
    }
    bool eat(char c) {
        skip();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!eat(c)) fail(std::string("expected '") + c + "'");
    }
    std::string ident() {
        skip();
        std::size_t start = pos;
        while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_')) ++pos;
        if (start == pos) fail("expected a name");
        return s.substr(start, pos - start);
    }
    std::int64_t integer() {
        skip();
        std::size_t start = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (start == pos) fail("expected a number");
        return std::stoll(s.substr(start, pos - start));
    }

    FamilyPtr expr() {
        std::string name = ident();
        if (name == "S") return fam_schreier();
        if (name == "A") {
            expect('(');
            auto n = integer();
            expect(')');
            return fam_cardinality(n);
        }
        if (name == "F") {
            expect('(');
            skip();
            if (pos < s.size() && std::isalpha(static_cast<unsigned char>(s[pos]))) {
                std::string w = ident();
                if (w != "omega") fail("expected a rank or 'omega'");
                expect(')');
                return fam_schreier_omega();
            }
            auto k = integer();
            expect(')');
            return fam_schreier_rank(k);
        }
        if (name == "compose") {
            expect('(');
            auto m = expr();
            expect(',');
            auto n = expr();
            expect(')');
            return fam_compose(m, n);
        }
        if (name == "iter") {
            expect('(');
            auto f = expr();
            expect(',');
            auto l = integer();
            expect(')');
            return fam_iterate(f, l);
        }
        fail("unknown family '" + name + "'");
    }
};

} // namespace

FamilyPtr parse_family(const std::string& text) {
    Parser p{text};
    auto f = p.expr();
    p.skip();
    if (p.pos != text.size()) p.fail("trailing input");
    return f;
}

// -------------------------------------------------------------------- facts

FamilyFacts family_facts(const FamilyPtr& f) {
    constexpr std::int64_t kCapClamp = std::int64_t(1) << 56;
    FamilyFacts facts;
    switch (f->kind) {
        case FamilyKind::Singletons:
            facts.position_free = true;
            facts.card_cap = 1;
            break;
        case FamilyKind::Cardinality:
            facts.position_free = true;
            facts.card_cap = f->n;
            break;
        case FamilyKind::Schreier:
            break;
        case FamilyKind::SchreierRank:
            if (!f->omega && f->n == 0) {
                facts.position_free = true;
                facts.card_cap = 1;
            }
            break;
        case FamilyKind::Compose: {
            auto a = family_facts(f->left), b = family_facts(f->right);
            if (a.position_free && b.position_free) {
                facts.position_free = true;
                facts.card_cap = (a.card_cap > kCapClamp / std::max<std::int64_t>(1, b.card_cap))
                                     ? kCapClamp
                                     : a.card_cap * b.card_cap;
            }
            break;
        }
        case FamilyKind::Iterate: {
            auto a = family_facts(f->left);
            if (a.position_free) {
                facts.position_free = true;
                std::int64_t cap = 1;
                for (std::int64_t i = 0; i < f->n; ++i) {
                    if (cap > kCapClamp / std::max<std::int64_t>(1, a.card_cap)) {
                        cap = kCapClamp;
                        break;
                    }
                    cap *= a.card_cap;
                }
                facts.card_cap = cap;
            }
            break;
        }
    }
    return facts;
}

// ----------------------------------------------------------------- contains

namespace {

struct SetKey {
    std::size_t fam;
    FinSet set;
    bool operator==(const SetKey& o) const { return fam == o.fam && set == o.set; }
};
struct SetKeyHash {
    std::size_t operator()(const SetKey& k) const {
        std::size_t seed = k.fam;
        boost::hash_range(seed, k.set.begin(), k.set.end());
        return seed;
    }
};

std::unordered_map<SetKey, bool, SetKeyHash> g_contains_memo;
std::mutex g_contains_mutex;

bool contains_impl(const FamilyPtr& f, const FinSet& a);

// Does `a` split into successive blocks, each in N, with block mins in M?
bool compose_split(const FamilyPtr& m, const FamilyPtr& n, const FinSet& a) {
    // heads are block mins; M is adequate+spreading, so feeding block mins into
    // the M matcher is exactly the witness test.
    FamilyMatcher mm(m, static_cast<std::int64_t>(a.size()));
    struct Frame {
        std::size_t i;
        FamilyMatcher::State st;
    };
    // DFS with memo on (position, state hash) for dead ends.
    std::unordered_map<std::size_t, std::vector<std::size_t>> seen; // pos -> state hashes that failed
    std::function<bool(std::size_t, const FamilyMatcher::State&)> rec =
        [&](std::size_t i, const FamilyMatcher::State& st) -> bool {
        if (i == a.size()) return true;
        auto h = FamilyMatcher::state_hash(st);
        auto& dead = seen[i];
        if (std::find(dead.begin(), dead.end(), h) != dead.end()) return false;
        auto st2 = mm.feed(st, a[i]);
        if (FamilyMatcher::alive(st2)) {
            for (std::size_t j = a.size(); j > i; --j) { // prefer long blocks
                FinSet block(a.begin() + i, a.begin() + j);
                if (contains_impl(n, block) && rec(j, st2)) return true;
            }
        }
        dead.push_back(h);
        return false;
    };
    return rec(0, mm.initial());
}

bool contains_impl(const FamilyPtr& f, const FinSet& a) {
    if (a.empty()) return true; // adequacy forces the empty set
    switch (f->kind) {
        case FamilyKind::Singletons: return a.size() == 1;
        case FamilyKind::Cardinality: return static_cast<std::int64_t>(a.size()) <= f->n;
        case FamilyKind::Schreier: return static_cast<std::int64_t>(a.size()) <= a.front();
        default: break;
    }
    if (a.size() == 1 && f->kind == FamilyKind::SchreierRank) return true; // F_0 subset of every F_k
    SetKey key{f->hash, a};
    {
        std::lock_guard<std::mutex> lk(g_contains_mutex);
        auto it = g_contains_memo.find(key);
        if (it != g_contains_memo.end()) return it->second;
    }
    bool result = false;
    switch (f->kind) {
        case FamilyKind::SchreierRank: {
            std::int64_t k = f->omega ? a.front() : f->n; // F_omega via the pinned sequence xi_n = n
            if (k == 0) result = a.size() == 1;
            else if (static_cast<std::int64_t>(a.size()) <= a.front()) result = true; // S = F_1 subset of F_k
            else result = compose_split(fam_schreier(), fam_schreier_rank(k - 1), a);
            break;
        }
        case FamilyKind::Compose: {
            auto facts = family_facts(f);
            if (facts.position_free) result = static_cast<std::int64_t>(a.size()) <= facts.card_cap;
            else result = compose_split(f->left, f->right, a);
            break;
        }
        case FamilyKind::Iterate: {
            auto facts = family_facts(f);
            if (facts.position_free) {
                result = static_cast<std::int64_t>(a.size()) <= facts.card_cap;
            } else {
                auto inner = f->n == 2 ? f->left : fam_iterate(f->left, f->n - 1);
                result = compose_split(f->left, inner, a);
            }
            break;
        }
        default: result = false; break;
    }
    {
        std::lock_guard<std::mutex> lk(g_contains_mutex);
        g_contains_memo.emplace(std::move(key), result);
    }
    return result;
}

} // namespace

bool contains(const FamilyPtr& f, const FinSet& a) {
    require_finset(a, "contains");
    return contains_impl(f, a);
}

bool is_admissible(const FamilyPtr& f, const std::vector<FinSet>& segments) {
    if (segments.empty()) return true;
    FinSet mins;
    std::int64_t prev_max = 0;
    for (const auto& seg : segments) {
        require_finset(seg, "is_admissible segment");
        if (seg.empty()) throw input_error("is_admissible: empty segment");
        if (seg.front() <= prev_max) throw input_error("is_admissible: segments overlap or are out of order");
        mins.push_back(seg.front());
        prev_max = seg.back();
    }
    return contains(f, mins);
}

// ------------------------------------------------------------- enumeration

std::vector<FinSet> maximal_members(const FamilyPtr& f, const FinSet& window, std::size_t max_window,
                                    BudgetGauge* gauge) {
    require_finset(window, "maximal_members window");
    if (window.empty()) return {};
    if (window.size() > max_window)
        throw resource_error("window", window.size(),
                             "maximal_members window has " + std::to_string(window.size()) +
                                 " elements; cap is " + std::to_string(max_window));
    BudgetGauge local;
    BudgetGauge& g = gauge ? *gauge : local;

    FamilyMatcher mm(f, static_cast<std::int64_t>(window.size()));
    std::vector<FinSet> members;
    FinSet cur;
    std::function<void(std::size_t, const FamilyMatcher::State&)> rec = [&](std::size_t i,
                                                                            const FamilyMatcher::State& st) {
        g.tick();
        if (i == window.size()) {
            if (!cur.empty()) members.push_back(cur);
            return;
        }
        auto st2 = mm.feed(st, window[i]);
        if (FamilyMatcher::alive(st2)) {
            cur.push_back(window[i]);
            rec(i + 1, st2);
            cur.pop_back();
        }
        rec(i + 1, st);
    };
    rec(0, mm.initial());

    std::vector<FinSet> out;
    for (const auto& m : members) {
        bool maximal = true;
        for (auto w : window) {
            if (std::binary_search(m.begin(), m.end(), w)) continue;
            FinSet ext = m;
            ext.insert(std::upper_bound(ext.begin(), ext.end(), w), w);
            if (contains(f, ext)) {
                maximal = false;
                break;
            }
        }
        if (maximal) out.push_back(m);
    }
    std::sort(out.begin(), out.end());
    return out;
}

Rat max_member_weight(const FamilyPtr& f, const std::vector<std::pair<std::int64_t, Rat>>& weighted,
                      FinSet* witness) {
    for (std::size_t i = 0; i < weighted.size(); ++i) {
        if (weighted[i].second < 0) throw input_error("max_member_weight: negative weight");
        if (i > 0 && weighted[i].first <= weighted[i - 1].first)
            throw input_error("max_member_weight: positions not increasing");
    }
    FamilyMatcher mm(f, static_cast<std::int64_t>(weighted.size()));

    struct Key {
        std::size_t i, h;
        bool operator==(const Key& o) const { return i == o.i && h == o.h; }
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const {
            std::size_t s = k.i;
            boost::hash_combine(s, k.h);
            return s;
        }
    };
    struct Entry {
        Rat value;
        bool take;
    };
    std::unordered_map<Key, Entry, KeyHash> memo;

    std::function<Rat(std::size_t, const FamilyMatcher::State&)> rec =
        [&](std::size_t i, const FamilyMatcher::State& st) -> Rat {
        if (i == weighted.size()) return Rat(0);
        Key key{i, FamilyMatcher::state_hash(st)};
        auto it = memo.find(key);
        if (it != memo.end()) return it->second.value;
        Rat best = rec(i + 1, st); // skip
        bool take = false;
        auto st2 = mm.feed(st, weighted[i].first);
        if (FamilyMatcher::alive(st2)) {
            Rat v = weighted[i].second + rec(i + 1, st2);
            if (v > best) {
                best = v;
                take = true;
            }
        }
        memo.emplace(key, Entry{best, take});
        return best;
    };
    auto st0 = mm.initial();
    Rat best = rec(0, st0);
    if (witness) {
        witness->clear();
        auto st = st0;
        for (std::size_t i = 0; i < weighted.size();) {
            Key key{i, FamilyMatcher::state_hash(st)};
            auto it = memo.find(key);
            if (it == memo.end() || !it->second.take) {
                ++i;
                continue;
            }
            witness->push_back(weighted[i].first);
            st = mm.feed(st, weighted[i].first);
            ++i;
        }
    }
    return best;
}

SpreadingReport check_spreading(const FamilyPtr& f, int trials, std::int64_t universe_bound, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    SpreadingReport rep;
    FamilyMatcher mm(f, universe_bound);
    for (int t = 0; t < trials; ++t) {
        // Sample a member by a randomized take/skip walk over a random start.
        std::uniform_int_distribution<std::int64_t> startd(1, std::max<std::int64_t>(1, universe_bound / 2));
        std::int64_t v = startd(rng);
        auto st = mm.initial();
        FinSet member;
        while (v <= universe_bound) {
            if (std::uniform_int_distribution<int>(0, 2)(rng) != 0) {
                auto st2 = mm.feed(st, v);
                if (!FamilyMatcher::alive(st2)) break;
                st = st2;
                member.push_back(v);
            }
            v += std::uniform_int_distribution<std::int64_t>(1, 3)(rng);
        }
        if (member.empty()) continue;
        // Right-shift a random subsequence.
        FinSet shifted;
        std::int64_t low = 0;
        std::size_t keep = 1 + std::uniform_int_distribution<std::size_t>(0, member.size() - 1)(rng);
        for (std::size_t i = 0; i < keep; ++i) {
            std::int64_t g = member[i] + std::uniform_int_distribution<std::int64_t>(0, 4)(rng);
            g = std::max(g, low + 1);
            if (g > universe_bound) break;
            shifted.push_back(g);
            low = g;
        }
        if (shifted.empty()) continue;
        if (!contains(f, shifted)) {
            rep.ok = false;
            rep.member = member;
            rep.shifted = shifted;
            return rep;
        }
    }
    return rep;
}

// ------------------------------------------------------------------ matcher

namespace {

// Matchers operate on an expanded AST: Iterate and SchreierRank become
// right-nested Compose chains so every node is Singletons/Cardinality/
// Schreier/Compose.
FamilyPtr expand_for_matcher(const FamilyPtr& f, int& budget) {
    if (--budget < 0) throw resource_error("matcher", 0, "family too deep for the admissibility matcher: " + f->to_string());
    switch (f->kind) {
        case FamilyKind::Singletons:
        case FamilyKind::Cardinality:
        case FamilyKind::Schreier: return f;
        case FamilyKind::SchreierRank: {
            if (f->omega)
                throw resource_error("matcher", 0,
                                     "F(omega) has no incremental matcher; only membership queries are supported");
            if (f->n == 0) return fam_singletons();
            FamilyPtr acc = fam_schreier(); // F_1 = S
            for (std::int64_t i = 1; i < f->n; ++i) {
                if (--budget < 0)
                    throw resource_error("matcher", static_cast<std::uint64_t>(f->n),
                                         "F(" + std::to_string(f->n) + ") exceeds the matcher depth budget");
                acc = fam_compose(fam_schreier(), acc);
            }
            return acc;
        }
        case FamilyKind::Compose:
            return fam_compose(expand_for_matcher(f->left, budget), expand_for_matcher(f->right, budget));
        case FamilyKind::Iterate: {
            auto base = expand_for_matcher(f->left, budget);
            FamilyPtr acc = base;
            for (std::int64_t i = 1; i < f->n; ++i) {
                if (--budget < 0)
                    throw resource_error("matcher", static_cast<std::uint64_t>(f->n),
                                         "iter(...," + std::to_string(f->n) + ") exceeds the matcher depth budget");
                acc = fam_compose(base, acc);
            }
            return acc;
        }
    }
    throw internal_error("expand_for_matcher: bad kind");
}

} // namespace

int FamilyMatcher::slot_count(const FamilyPtr& f) {
    switch (f->kind) {
        case FamilyKind::Singletons:
        case FamilyKind::Cardinality:
        case FamilyKind::Schreier: return 1;
        case FamilyKind::Compose: return slot_count(f->left) + slot_count(f->right);
        default: throw internal_error("slot_count on unexpanded node");
    }
}

int matcher_slot_count_for_tests(const FamilyPtr& f) { return FamilyMatcher::slot_count(f); }

FamilyMatcher::FamilyMatcher(FamilyPtr f, std::int64_t clip) : clip_(std::max<std::int64_t>(clip, 1)) {
    int depth_budget = 512;
    fam_ = expand_for_matcher(f, depth_budget);
    slots_ = slot_count(fam_);
    if (slots_ > 512)
        throw resource_error("matcher", static_cast<std::uint64_t>(slots_),
                             "family needs " + std::to_string(slots_) + " matcher slots (cap 512)");
}

FamilyMatcher::State FamilyMatcher::initial() const {
    return {Config(static_cast<std::size_t>(slots_), -1)};
}

namespace {
bool started_at(const FamilyMatcher::Config& c, int slot) { return c[static_cast<std::size_t>(slot)] >= 0; }
} // namespace

void FamilyMatcher::feed_node(const FamilyPtr& f, int slot_base, const Config& c, std::int64_t value,
                              std::vector<Config>& out) const {
    auto clipped = [&](std::int64_t v) { return std::min(v, clip_); };
    switch (f->kind) {
        case FamilyKind::Singletons: {
            if (!started_at(c, slot_base)) {
                Config d = c;
                d[slot_base] = 0;
                out.push_back(std::move(d));
            }
            return;
        }
        case FamilyKind::Cardinality: {
            Config d = c;
            if (!started_at(c, slot_base)) d[slot_base] = clipped(f->n - 1);
            else if (c[slot_base] > 0) d[slot_base] = c[slot_base] - 1;
            else return;
            out.push_back(std::move(d));
            return;
        }
        case FamilyKind::Schreier: {
            Config d = c;
            if (!started_at(c, slot_base)) d[slot_base] = clipped(value - 1);
            else if (c[slot_base] > 0) d[slot_base] = c[slot_base] - 1;
            else return;
            out.push_back(std::move(d));
            return;
        }
        case FamilyKind::Compose: {
            int m_base = slot_base;
            int n_base = slot_base + slot_count(f->left);
            int n_slots = slot_count(f->right);
            bool node_started = started_at(c, m_base) || [&] {
                // M may itself be a compose whose first slot lags; detect via any slot.
                for (int s = slot_base; s < n_base; ++s)
                    if (started_at(c, s)) return true;
                return false;
            }();
            // (a) continue the open block.
            if (node_started) {
                std::vector<Config> exts;
                feed_node(f->right, n_base, c, value, exts);
                for (auto& e : exts) out.push_back(std::move(e));
            }
            // (b) start a new block: feed M with the block head, reset N.
            std::vector<Config> heads;
            feed_node(f->left, m_base, c, value, heads);
            for (auto& h : heads) {
                Config fresh = h;
                for (int s = n_base; s < n_base + n_slots; ++s) fresh[s] = -1;
                std::vector<Config> blocks;
                feed_node(f->right, n_base, fresh, value, blocks);
                for (auto& b : blocks) out.push_back(std::move(b));
            }
            return;
        }
        default: throw internal_error("feed_node: bad kind");
    }
}

FamilyMatcher::State FamilyMatcher::feed(const State& s, std::int64_t value) const {
    std::vector<Config> raw;
    for (const auto& c : s) feed_node(fam_, 0, c, value, raw);
    if (raw.empty()) return {};
    std::sort(raw.begin(), raw.end());
    raw.erase(std::unique(raw.begin(), raw.end()), raw.end());
    // Pareto reduction: drop configs dominated by another with the same
    // started-pattern and componentwise >= budgets.
    State kept;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < raw.size() && !dominated; ++j) {
            if (i == j) continue;
            bool ge_all = true, strict = false;
            for (std::size_t k = 0; k < raw[i].size(); ++k) {
                bool si = raw[i][k] >= 0, sj = raw[j][k] >= 0;
                if (si != sj) {
                    ge_all = false;
                    break;
                }
                if (raw[j][k] < raw[i][k]) {
                    ge_all = false;
                    break;
                }
                if (raw[j][k] > raw[i][k]) strict = true;
            }
            if (ge_all && strict) dominated = true;
        }
        if (!dominated) kept.push_back(raw[i]);
    }
    return kept;
}

std::size_t FamilyMatcher::state_hash(const State& s) {
    std::size_t seed = s.size();
    for (const auto& c : s) boost::hash_range(seed, c.begin(), c.end());
    return seed;
}

} // namespace tsilab
