#pragma once

#include "tsilab/budget.hpp"
#include "tsilab/errors.hpp"
#include "tsilab/rational.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace tsilab {

/// Strictly increasing finite set of positive integers (possibly empty).
using FinSet = std::vector<std::int64_t>;

bool is_valid_finset(const FinSet& a);
void require_finset(const FinSet& a, const char* what);

enum class FamilyKind : std::uint8_t {
    Singletons,   // F_0 = {{n}} plus the empty set
    Schreier,     // S = {A : #A <= min A}
    Cardinality,  // A_n = {A : #A <= n}
    SchreierRank, // F_k, finite k; rank_omega marks F_omega (pinned xi_n = n)
    Compose,      // M[N]
    Iterate,      // F[...[F]...], l times
};

struct FamilyNode;
using FamilyPtr = std::shared_ptr<const FamilyNode>;

/// Symbolic compact adequate spreading family of finite subsets of N.
/// Immutable; share freely. Construct through the factory functions below,
/// which canonicalize (Iterate(F,1) -> F) and precompute the structural hash.
struct FamilyNode {
    FamilyKind kind;
    std::int64_t n = 0;     // Cardinality bound / SchreierRank rank (ignored if omega)
    bool omega = false;     // SchreierRank only
    FamilyPtr left, right;  // Compose: M=left, N=right. Iterate: left, n = l.
    std::size_t hash = 0;

    std::string to_string() const; // family mini-language, parseable back
};

FamilyPtr fam_singletons();
FamilyPtr fam_schreier();
FamilyPtr fam_cardinality(std::int64_t n);
FamilyPtr fam_schreier_rank(std::int64_t k);
FamilyPtr fam_schreier_omega();
FamilyPtr fam_compose(FamilyPtr m, FamilyPtr n);
FamilyPtr fam_iterate(FamilyPtr f, std::int64_t l);

bool family_equal(const FamilyPtr& a, const FamilyPtr& b);

/// Parses the mini-language: S, A(n), F(k), F(omega), compose(M,N), iter(F,l).
/// Whitespace-insensitive. Throws input_error with a character position.
FamilyPtr parse_family(const std::string& text);

/// Membership decision, by recursive decomposition (memoized per family node).
bool contains(const FamilyPtr& f, const FinSet& a);

/// M-admissibility of successive segments: reduces to the min-witness test
/// contains(f, {min E_1,...,min E_n}) (valid for spreading families).
/// Throws input_error on overlapping / out-of-order / empty segments.
bool is_admissible(const FamilyPtr& f, const std::vector<FinSet>& segments);

/// All inclusion-maximal members of the family within the window.
/// Refuses windows larger than max_window (resource_error).
std::vector<FinSet> maximal_members(const FamilyPtr& f, const FinSet& window, std::size_t max_window = 24,
                                    BudgetGauge* gauge = nullptr);

/// Exact max of sum of weights over members of the family within the support.
/// weights must be >= 0; positions must be strictly increasing.
/// Equivalent to scanning maximal members but runs on large windows.
Rat max_member_weight(const FamilyPtr& f, const std::vector<std::pair<std::int64_t, Rat>>& weighted,
                      FinSet* witness = nullptr);

struct SpreadingReport {
    bool ok = true;
    FinSet member;  // counterexample: member F...
    FinSet shifted; // ...and its right shift G not in the family
};

/// Randomized Lemma-2.1 check: sampled members stay in the family under
/// coordinatewise right shifts (with |G| <= |F|).
SpreadingReport check_spreading(const FamilyPtr& f, int trials, std::int64_t universe_bound, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Incremental matcher: feeds a strictly increasing sequence of elements and
// answers "is the set fed so far a member" (always true while alive, families
// being adequate) and "can it be extended". Used by the norm engine to walk
// admissible partitions without enumerating candidate witness sets.
//
// A config is a flattened slot vector; a state is a Pareto-reduced set of
// configs (more remaining capacity is always at least as permissive).
// ---------------------------------------------------------------------------
class FamilyMatcher {
public:
    using Config = std::vector<std::int64_t>;
    using State = std::vector<Config>; // sorted, Pareto-maximal; empty = dead

    /// clip: budgets are clamped to this value (sound when no more than `clip`
    /// further elements can ever be fed, e.g. the window size).
    FamilyMatcher(FamilyPtr f, std::int64_t clip);

    State initial() const; // state accepting the empty set
    /// Feed the next (strictly larger) element; returns the new state.
    State feed(const State& s, std::int64_t value) const;
    static bool alive(const State& s) { return !s.empty(); }
    static std::size_t state_hash(const State& s);

    const FamilyPtr& family() const { return fam_; }

private:
    FamilyPtr fam_;
    std::int64_t clip_;
    int slots_ = 0;
    void feed_node(const FamilyPtr& f, int slot_base, const Config& c, std::int64_t value,
                   std::vector<Config>& out) const;
    static int slot_count(const FamilyPtr& f);
    friend int matcher_slot_count_for_tests(const FamilyPtr& f);
};

/// Derived facts about a family used by preset records.
struct FamilyFacts {
    bool position_free = false;   // membership depends only on cardinality
    std::int64_t card_cap = -1;   // max member size if position_free, else -1
};
FamilyFacts family_facts(const FamilyPtr& f);

} // namespace tsilab
