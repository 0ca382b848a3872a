#pragma once

#include "tsilab/budget.hpp"
#include "tsilab/norm.hpp"
#include "tsilab/params.hpp"
#include "tsilab/vector.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>

namespace tsilab {

/// Strictly increasing index source with a hard bound (resource_error with
/// the needed bound when exhausted).
class IndexStream {
public:
    static IndexStream naturals_from(std::int64_t start, std::int64_t bound = 1'000'000);
    static IndexStream from_list(FinSet values);

    /// Smallest unconsumed value >= at_least; consumes it.
    std::int64_t next(std::int64_t at_least = 1);
    std::int64_t bound() const { return bound_; }

private:
    std::int64_t cursor_ = 1;
    std::int64_t bound_ = 0;
    FinSet list_;
    std::size_t list_pos_ = 0;
    bool use_list_ = false;
};

/// Lemma-1.5-style repeated average: convex combination with support in F_n,
/// decreasing coefficients, and F_{n-1}-mass below eps. For n >= 3 block
/// sizes grow recursively and typically exceed desk budgets (resource_error).
SpVec repeated_average(int n, const Rat& eps, IndexStream& D, BudgetGauge* gauge = nullptr);

struct AverageCheck {
    bool support_in_Fn = false;
    bool decreasing = false;
    Rat family_mass;       // max over F in F_{n-1} of the mass
    bool mass_ok = false;  // family_mass < eps
    bool by_enumeration = false; // true when checked by maximal-member scan
};
/// Exact verification of conditions (i)-(iii); uses maximal-member
/// enumeration when the support fits the window cap, else the equivalent
/// family-mass maximization.
AverageCheck verify_repeated_average(int n, const Rat& eps, const SpVec& x, std::size_t enum_cap = 24);

/// Prop-1.4 parameter: smallest m = l*n + 1 with 2^-l < eps/2 (so the n-fold
/// composition F_n[...[F_n]...] (l times) sits inside F_{m-1}).
std::int64_t scc_parameters(int n, const Rat& eps);

/// Certificate for an (eps, j)-basic special convex combination.
struct SccCert {
    std::vector<std::pair<std::int64_t, Rat>> coeffs; // (index, a_k)
    FinSet F;
    Rat eps;
    int j = 0;
    std::map<std::string, std::string> checks; // condition -> "pass"/"fail"/"unverified: ..."
    bool verified = false;                     // all run checks passed
    std::optional<Rat> small_norm;             // ||.||_{j-1} when computed
    std::string preset_fingerprint;

    SpVec vector() const;
};

SccCert verify_basic_scc(const SpaceParams& P, const std::vector<std::pair<std::int64_t, Rat>>& coeffs,
                         const Rat& eps, int j, BudgetGauge* gauge = nullptr);

/// Constructs a verified (eps, j)-basic s.c.c. on the preset, drawing support
/// from D. Uses uniform combinations over family members when the subordinate
/// classes cannot exceed the sup-norm, and repeated averages for
/// Schreier-iterate classes.
SccCert build_basic_scc(const SpaceParams& P, int j, const Rat& eps, IndexStream& D, BudgetGauge* gauge = nullptr);

/// Seminormalized lift of a basic s.c.c. certificate onto blocks per the
/// separator pattern supp x_{k_1} <= l_1 < supp x_{k_2} <= ...
struct LiftedScc {
    SpVec combination;
    SccCert basic;
    Rat norm;        // under the supplied norm
    bool normalized; // norm >= 1/2
};
using NormFn = std::function<NormResult(const SpVec&)>;
LiftedScc lift_to_blocks(const SpaceParams& P, const SccCert& cert, const BlockSeq& blocks, const NormFn& norm_fn);

/// Lemma-2.9-style search: layered (eps,j)-s.c.c.'s over the block sequence
/// until one has norm >= 1/2. Requires the class-j recipe (layer family and
/// round budget with 2 m_j < 2^{l_j}); raises internal_error if l_j rounds
/// pass without success.
struct NormalizedScc {
    SpVec scc;       // the normalized combination (norm >= 1/2, not rescaled)
    SccCert basic;   // defining basic s.c.c. over the separators
    Rat norm;        // exact norm
    int rounds;      // layers consumed
    std::vector<SpVec> constituents; // blocks entering the final combination
};
NormalizedScc find_normalized_scc(const SpaceParams& P, const BlockSeq& blocks, int j, const Rat& eps,
                                  const NormFn& norm_fn, BudgetGauge* gauge = nullptr);

/// Rapidly-increasing-sequence certificate.
struct RisCert {
    int j = 0;
    Rat eps;
    std::vector<SpVec> blocks;       // y_k
    std::vector<int> weights;        // 2 j_k
    std::vector<Rat> block_norms;    // ||y_k||
    std::vector<Rat> block_l1;       // |y_k|_1
    std::vector<std::pair<std::int64_t, Rat>> coeffs; // (l_k, a_k) basic scc
    bool shallow = false;            // blocks are bare basic s.c.c.'s
    std::map<std::string, std::string> checks; // per-condition records and gates
    std::string preset_fingerprint;

    SpVec combination() const; // sum a_k y_k
};

/// Builds an (eps, j)-RIS of n blocks from the stream of basis indices.
/// full mode: blocks are normalized s.c.c.'s found by the layered search;
/// shallow mode: blocks are bare basic s.c.c.'s (certificate marked).
RisCert build_ris(const SpaceParams& P, int j, int n_blocks, IndexStream& D, bool shallow = false,
                  const Rat& eps_blocks = Rat(1, 2), BudgetGauge* gauge = nullptr);

} // namespace tsilab
