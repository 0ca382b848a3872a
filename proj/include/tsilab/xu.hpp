#pragma once

#include "tsilab/norm.hpp"
#include "tsilab/params.hpp"
#include "tsilab/scc.hpp"

#include <map>
#include <optional>
#include <string>

namespace tsilab {

/// Per-class measured sups against the basic-s.c.c. bounds:
/// <= 1/m_s for s >= j, <= 2/(m_s m_j) for s < j, plus the exact-norm check.
struct SccEstimateReport {
    int j = 0;
    Rat eps;
    std::map<int, Rat> class_sups; // class -> measured node sup
    std::map<int, std::string> class_verdicts;
    std::optional<Rat> norm; // full norm; expected exactly 1/m_j
    std::string norm_verdict;
    bool hypotheses_ok = false; // eps < 1/m_j^3 and m_s >= 2
    std::vector<int> unchecked; // classes skipped on budget
};
SccEstimateReport check_scc_estimates(const SpaceParams& P, const SccCert& cert, BudgetGauge* gauge = nullptr);

/// Prop-2.14-style per-class bounds and the Cor-2.15 two-sided bound for a
/// rapidly increasing s.c.c. Shallow certificates are refused.
struct RisEstimateReport {
    std::map<int, Rat> class_sups;
    std::map<int, std::string> class_verdicts; // measured vs (a)/(b)/(c) bounds
    Rat lower_witness_value;                   // explicit weight-j functional
    Rat norm;                                  // exact DP norm of the combination
    std::string lower_verdict;                 // asserted (witness is exact)
    std::string upper_verdict;                 // asserted or measured per gates
    std::vector<std::string> violated_hypotheses;
    std::vector<int> unchecked;
};
RisEstimateReport check_ris_estimates(const SpaceParams& P, const RisCert& ris, BudgetGauge* gauge = nullptr);

/// Equivalent norm |||x||| = (1/m_{i0}) ||x|| + sup{ f(x) : f in K_{i0} } and
/// the four displayed inequalities of the distortion argument.
struct DistortReport {
    int i0 = 0, j = 0;
    RisCert y_cert, z_cert;
    Rat norm_mj_y, equiv_mj_y;   // ||m_j y||, |||m_j y|||
    Rat norm_mi0_z, equiv_mi0_z; // ||m_{i0} z||, |||m_{i0} z|||
    // inequality records: name -> {holds, asserted-or-measured}
    std::map<std::string, std::pair<bool, std::string>> inequalities;
    Rat distortion_ratio; // (||m_j y||/|||m_j y|||) * (|||m_i0 z|||/||m_i0 z||)
    std::string preset_fingerprint;
    std::uint64_t seed = 0;
};

Rat equivalent_norm(const SpaceParams& P, int i0, const SpVec& x, BudgetGauge* gauge = nullptr);

DistortReport distortion_experiment(const SpaceParams& P, int i0, int j, IndexStream& source, int blocks_per_ris = 3,
                                    std::uint64_t seed = 0, BudgetGauge* gauge = nullptr);

} // namespace tsilab
