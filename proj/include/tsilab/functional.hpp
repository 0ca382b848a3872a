#pragma once

#include "tsilab/family.hpp"
#include "tsilab/rational.hpp"
#include "tsilab/vector.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace tsilab {

struct SpaceParams;

/// Tree-shaped norming functional. A leaf is +-e*_n; an internal node scales
/// the sum of its children by 1/m_j (children have successive supports that
/// are M_j-admissible). Weights are stored as class indices so a tree can be
/// re-read under different parameter presets.
struct Functional {
    // leaf fields
    int sign = +1;          // +1 or -1
    std::int64_t index = 0; // leaf: basis index; 0 for nodes
    // node fields
    int weight = -1; // class index j (factor 1/m_j); -1 for leaves
    std::vector<Functional> children;

    bool is_leaf() const { return weight < 0; }

    static Functional leaf(int sign, std::int64_t n);
    static Functional node(int weight_index, std::vector<Functional> children);

    std::int64_t min_support() const;
    std::int64_t max_support() const;
    FinSet support() const;
    int height() const; // leaves are 0

    /// Canonical serialization, bit-exact: leaves "+7"/"-7", nodes
    /// "w<j>(child,child,...)". The codebook keys on this string.
    std::string serialize() const;
    static Functional deserialize(const std::string& text);

    bool operator==(const Functional& o) const;
};

/// Exact evaluation <f, x>; weight indices resolve to 1/m_j under P.
Rat eval(const Functional& f, const SpVec& x, const SpaceParams& P);

/// Structural validation: children successive, every node M_j-admissible for
/// its weight class under P, weight indices within range. Throws input_error.
void validate_functional(const Functional& f, const SpaceParams& P);

/// The analysis of f: level s holds the successive pieces of K^s covering
/// supp f (level = height cut; top level is {f} itself).
using Analysis = std::vector<std::vector<const Functional*>>;
Analysis analyze(const Functional& f);

/// Initial/final parts of each block with respect to the analysis of f.
struct SplitPart {
    SpVec initial;
    SpVec final;
    int level = 0; // s_k
};
std::vector<SplitPart> split_parts(const BlockSeq& blocks, const Functional& f);

} // namespace tsilab
