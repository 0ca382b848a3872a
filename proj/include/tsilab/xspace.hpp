#pragma once

#include "tsilab/codebook.hpp"
#include "tsilab/norm.hpp"
#include "tsilab/params.hpp"
#include "tsilab/scc.hpp"

#include <map>
#include <optional>
#include <string>

namespace tsilab {

/// Registers the sequence in the codebook after validating that every member
/// is structurally an L-functional and the sequence is support-increasing.
std::int64_t phi(const SpaceParams& P, Codebook& cb, const std::vector<Functional>& seq);

/// Structural membership in the conditional norming set (untruncated form):
/// leaves; even-weight nodes over L-children; odd-weight nodes that are
/// coding-linked chains against the codebook.
bool validate_L(const SpaceParams& P, const Codebook& cb, const Functional& f, std::string* why = nullptr);

/// Enumerates the depth-bounded conditional norming set within the window,
/// including tail truncations of chain functionals; sorted by serialization.
std::vector<Functional> build_L(const SpaceParams& P, const Codebook& cb, const FinSet& window, int depth,
                                BudgetGauge* gauge = nullptr);

struct XNormResult {
    Rat lower;
    Rat upper;
    bool exact = false; // lower == upper
    Functional witness; // attains lower
    NormStats stats;
    Rat value() const { return lower; }
};

/// Norm of the conditional space: sup-norm branch, even-class recursion, and
/// the special (odd-class) functionals drawn from the codebook-realized
/// coding. Exact on success; on budget exhaustion returns a certified
/// bracket [witness value, K-norm].
XNormResult x_norm(const SpaceParams& P, const Codebook& cb, const SpVec& x, BudgetGauge* gauge = nullptr);

/// Dependent chain across two block sources (odd k from xsrc, even k from
/// wsrc) for the conditional estimate; all hypothesis checks recorded.
struct DependentChain {
    int j = 0;
    std::vector<SpVec> y;
    std::vector<Functional> ystar;
    std::vector<Rat> theta;
    std::vector<int> weights; // 2 j_k
    std::vector<std::pair<std::int64_t, Rat>> coeffs;
    std::map<std::string, std::string> checks;
    std::string preset_fingerprint;

    /// sum of eps_k a_k m_{2j_k} theta_k y_k with eps_k = (alternating ? (-1)^k : +1)
    SpVec combination(bool alternating) const;
    const SpaceParams* P = nullptr; // weights needed by combination()
};

DependentChain build_dependent_chain(const SpaceParams& P, Codebook& cb, IndexStream& xsrc, IndexStream& wsrc, int j,
                                     int n, const Rat& eps_blocks = Rat(1, 2), BudgetGauge* gauge = nullptr);

struct HiReport {
    int j = 0;
    int n = 0;
    Rat unsigned_lower;        // 1/m_{2j+1}, witnessed by the special functional
    Functional special;        // the witnessing special functional
    XNormResult alt_norm;      // norm (or bracket) of the alternating combination
    Rat ratio;                 // alt upper bound / unsigned lower bound
    bool ratio_below_one = false;
    Rat paper_bound;           // 18/m_{2j+2}
    std::string paper_bound_verdict; // asserted iff gates pass, else measured
    std::map<std::string, std::string> gates;
    std::string preset_fingerprint;
};

HiReport hi_witness(const SpaceParams& P, const Codebook& cb, const DependentChain& chain,
                    BudgetGauge* gauge = nullptr);

} // namespace tsilab
