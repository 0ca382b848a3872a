#pragma once

#include "tsilab/budget.hpp"
#include "tsilab/functional.hpp"
#include "tsilab/params.hpp"

#include <optional>
#include <vector>

namespace tsilab {

/// All functionals of K^depth (or K^depth_j when class_filter is set) with
/// support inside the window, one per canonical serialization, sorted
/// lexicographically by serialization. Budgeted: throws resource_error on
/// combinatorial blow-up, reporting the node budget that was hit.
std::vector<Functional> enumerate_norming(const SpaceParams& P, const FinSet& window, int depth,
                                          std::optional<int> class_filter = {}, BudgetGauge* gauge = nullptr);

/// Exact sup of f(x) over the depth-bounded norming set
/// {f in K^depth (or K^depth_j) : supp f inside supp x}, computed by a
/// compositional DP over the K^n hierarchy (equal to scanning the stream of
/// enumerate_norming; cross-checked in tests on small windows).
Rat norming_sup(const SpaceParams& P, const SpVec& x, int depth, std::optional<int> class_filter = {},
                BudgetGauge* gauge = nullptr);

} // namespace tsilab
