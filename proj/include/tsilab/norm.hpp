#pragma once

#include "tsilab/budget.hpp"
#include "tsilab/functional.hpp"
#include "tsilab/params.hpp"
#include "tsilab/rational.hpp"
#include "tsilab/vector.hpp"

#include <optional>

namespace tsilab {

struct NormStats {
    std::uint64_t subproblems = 0;
    std::uint64_t cache_hits = 0;
    std::uint64_t pruned = 0;
};

struct NormResult {
    Rat value;
    Functional witness; // eval(witness, x) == value
    NormStats stats;
};

/// Exact norm of x in T[M, theta] (0 < theta < 1, M adequate spreading).
NormResult tsirelson_norm(const FamilyPtr& M, const Rat& theta, const SpVec& x, BudgetGauge* gauge = nullptr);

/// Exact mixed Tsirelson norm under P; j_cut restricts to classes 0..j_cut
/// (Notation ||.||_j). j_cut = -1 denotes the degenerate empty class set and
/// yields the sup norm.
NormResult mixed_norm(const SpaceParams& P, const SpVec& x, std::optional<int> j_cut = {},
                      BudgetGauge* gauge = nullptr);

/// mixed_norm with the witness contract spelled out (value attained, witness
/// admissible, deterministic tie-break).
NormResult certify_norm(const SpaceParams& P, const SpVec& x, BudgetGauge* gauge = nullptr);

/// Exact sup{ f(x) : f in K_j } (leaves included: K^0_j = {+-e_n}).
Rat class_sup(const SpaceParams& P, const SpVec& x, int j, BudgetGauge* gauge = nullptr);

/// Same, but only weight-j node functionals (no bare leaves).
Rat class_node_sup(const SpaceParams& P, const SpVec& x, int j, BudgetGauge* gauge = nullptr);

} // namespace tsilab
