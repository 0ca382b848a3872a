#pragma once

#include "tsilab/family.hpp"
#include "tsilab/rational.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace tsilab {

/// One weight class of a mixed Tsirelson space: family M_j, weight m_j
/// (theta_j = 1/m_j), plus the construction recipe when the class was built
/// as an iterate of a layer family (drives the normalized-s.c.c. search).
struct ClassSpec {
    Int m;
    Rat theta; // 1/m
    FamilyPtr family;
    // recipe (optional): family contains layer^[i] for i <= contained_depth,
    // and the round budget l with 2m < 2^l when the Lemma-2.9-style search is
    // supported on this class.
    FamilyPtr layer_family; // null when no recipe
    std::int64_t rounds = 0;          // l_j
    std::int64_t contained_depth = 0; // largest i with layer^[i] subset of family
};

/// Machine-readable record of which construction hypotheses a preset honors.
struct HypothesisRecord {
    bool m0_is_two = false;
    std::vector<bool> growth; // growth[j]: m_j > m_{j-1}^{m_{j-1}} (j >= 1)
    bool all_growth = false;
    bool recipe_families = false; // families built by the iterate recipe
    std::map<std::string, bool> notes;

    bool gate(const std::string& key) const {
        auto it = notes.find(key);
        return it != notes.end() && it->second;
    }
};

struct SpaceParams {
    std::string name;
    std::vector<ClassSpec> classes;
    HypothesisRecord record;

    std::size_t num_classes() const { return classes.size(); }
    const ClassSpec& cls(std::size_t j) const;
    /// Stable content hash (hex) embedded in every report.
    std::string fingerprint() const;

    static SpaceParams make(std::string name, std::vector<std::pair<Int, FamilyPtr>> classes);
    void finalize(); // recompute thetas, record, validation
};

/// Named presets: "paper", "desk-small", "desk-scc", "desk-medium", "desk-hi".
SpaceParams preset(const std::string& name);
std::vector<std::string> preset_names();

} // namespace tsilab
