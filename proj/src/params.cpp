#include "tsilab/params.hpp"

#include "tsilab/errors.hpp"

#include <sstream>

namespace tsilab {

const ClassSpec& SpaceParams::cls(std::size_t j) const {
    if (j >= classes.size()) throw input_error("class index " + std::to_string(j) + " out of range");
    return classes[j];
}

std::string SpaceParams::fingerprint() const {
    std::ostringstream os;
    os << name << "|";
    for (const auto& c : classes) {
        os << c.m.str() << ":" << c.family->to_string();
        if (c.layer_family) os << ":" << c.layer_family->to_string() << ":" << c.rounds << ":" << c.contained_depth;
        os << ";";
    }
    std::size_t h = std::hash<std::string>{}(os.str());
    std::ostringstream hex;
    hex << std::hex << h;
    return hex.str();
}

void SpaceParams::finalize() {
    if (classes.empty()) throw input_error("preset needs at least one class");
    record.growth.assign(classes.size(), false);
    for (std::size_t j = 0; j < classes.size(); ++j) {
        auto& c = classes[j];
        if (c.m < 2) throw input_error("weights m_j must be >= 2");
        c.theta = Rat(Int(1), c.m);
        if (j > 0) {
            if (classes[j].m <= classes[j - 1].m) throw input_error("weights m_j must be strictly increasing");
            // growth: m_j > m_{j-1}^{m_{j-1}} (checked only when the exponent is sane)
            const Int& prev = classes[j - 1].m;
            if (prev <= 64) {
                Int bound = 1;
                for (Int e = 0; e < prev; ++e) bound *= prev;
                record.growth[j] = classes[j].m > bound;
            }
        }
    }
    record.m0_is_two = classes[0].m == 2;
    record.all_growth = true;
    for (std::size_t j = 1; j < classes.size(); ++j) record.all_growth = record.all_growth && record.growth[j];
    record.notes["m0_is_two"] = record.m0_is_two;
    record.notes["all_growth"] = record.all_growth;
    bool recipes = true;
    for (std::size_t j = 1; j < classes.size(); ++j) recipes = recipes && classes[j].layer_family != nullptr;
    record.recipe_families = recipes;
    record.notes["recipe_families"] = recipes;
    bool rounds_ok = true;
    for (const auto& c : classes)
        if (c.layer_family) {
            // 2 m_j < 2^{l_j}
            Int pow2 = Int(1) << static_cast<unsigned>(std::min<std::int64_t>(c.rounds, 62));
            rounds_ok = rounds_ok && (2 * c.m < pow2);
        }
    record.notes["rounds_relation"] = rounds_ok; // 2m_j < 2^{l_j} wherever a recipe exists
}

SpaceParams SpaceParams::make(std::string name, std::vector<std::pair<Int, FamilyPtr>> classes) {
    SpaceParams p;
    p.name = std::move(name);
    for (auto& [m, fam] : classes) {
        ClassSpec c;
        c.m = m;
        c.family = fam;
        p.classes.push_back(std::move(c));
    }
    p.finalize();
    return p;
}

namespace {

ClassSpec plain(Int m, FamilyPtr fam) {
    ClassSpec c;
    c.m = std::move(m);
    c.family = std::move(fam);
    return c;
}

ClassSpec with_recipe(Int m, FamilyPtr fam, FamilyPtr layer, std::int64_t rounds, std::int64_t depth) {
    ClassSpec c = plain(std::move(m), std::move(fam));
    c.layer_family = std::move(layer);
    c.rounds = rounds;
    c.contained_depth = depth;
    return c;
}

// Faithful parameters: m_0 = 2, m_j minimal with m_j > m_{j-1}^{m_{j-1}};
// M_0 = F_1 and M_{n+1} = F_{s_{n+1}} iterated l_{n+1} times, where s_{n+1}
// comes from the small-norm-combination recipe for (F_{k_n}, 1/m_{n+2}^4) and
// 2^{l_{n+1}} > 2 m_{n+1}. Norm evaluation under this preset is expected to
// exhaust budgets beyond very small vectors.
SpaceParams paper_preset() {
    SpaceParams p;
    p.name = "paper";
    Int m0 = 2;
    Int m1 = 5;    // minimal > 2^2
    Int m2 = 3126; // minimal > 5^5
    Int m3 = 1;    // minimal > 3126^3126; needed only to derive s_2
    for (int i = 0; i < 3126; ++i) m3 *= 3126;
    m3 += 1;

    auto bits = [](const Int& v) { return static_cast<std::int64_t>(boost::multiprecision::msb(v)) + 1; };
    // minimal l with 2^-l < eps/2 for eps = 1/m^4
    auto l_for = [&](const Int& m) { return bits(2 * m * m * m * m); };

    std::int64_t k0 = 1;
    std::int64_t s1 = l_for(m2) * k0 + 1;
    std::int64_t l1 = bits(2 * m1); // minimal l with 2^l > 2m
    std::int64_t k1 = s1 * l1;
    std::int64_t s2 = l_for(m3) * k1 + 1;
    std::int64_t l2 = bits(2 * m2);

    p.classes.push_back(plain(m0, fam_schreier_rank(1)));
    p.classes.push_back(with_recipe(m1, fam_iterate(fam_schreier_rank(s1), l1), fam_schreier_rank(s1), l1, l1));
    p.classes.push_back(with_recipe(m2, fam_iterate(fam_schreier_rank(s2), l2), fam_schreier_rank(s2), l2, l2));
    p.finalize();
    return p;
}

SpaceParams desk_small() {
    SpaceParams p;
    p.name = "desk-small";
    p.classes.push_back(plain(2, fam_schreier_rank(1)));
    p.classes.push_back(with_recipe(3, fam_schreier_rank(3), fam_schreier_rank(1), 3, 3));
    p.finalize();
    return p;
}

SpaceParams desk_scc() {
    SpaceParams p;
    p.name = "desk-scc";
    p.classes.push_back(plain(2, fam_cardinality(2)));
    p.classes.push_back(with_recipe(3, fam_cardinality(64), fam_cardinality(4), 3, 3));
    p.finalize();
    return p;
}

// Classes 0..12. Low classes are cardinality families capped at their weight
// (they never beat the sup-norm), classes 8/10/12 carry the A_3-iterate
// recipe used by the normalized-s.c.c. search, and the weight jumps at 10 and
// 12 keep the rapidly-increasing l1 growth condition satisfiable.
SpaceParams desk_medium() {
    SpaceParams p;
    p.name = "desk-medium";
    std::vector<Int> m = {2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 99, 100, 900};
    for (std::size_t j = 0; j < m.size(); ++j) {
        if (j == 8 || j == 10 || j == 12) {
            std::int64_t rounds = 1;
            while ((Int(1) << static_cast<unsigned>(rounds)) <= 2 * m[j]) ++rounds;
            p.classes.push_back(with_recipe(m[j], fam_cardinality(27), fam_cardinality(3), rounds, 3));
        } else {
            std::int64_t cap = std::min<std::int64_t>(static_cast<std::int64_t>(m[j]), 12);
            p.classes.push_back(plain(m[j], fam_cardinality(cap)));
        }
    }
    p.finalize();
    return p;
}

// Classes 0..30 for dependent chains of length 12: even classes >= 8 carry
// the A_3-iterate recipe (m_c = c + 4), class 3 admits the chain separators.
SpaceParams desk_hi() {
    SpaceParams p;
    p.name = "desk-hi";
    for (int c = 0; c <= 30; ++c) {
        Int m = c < 8 ? Int(c + 2) : Int(c + 4);
        if (c >= 8 && c % 2 == 0) {
            std::int64_t rounds = 1;
            while ((Int(1) << static_cast<unsigned>(rounds)) <= 2 * m) ++rounds;
            p.classes.push_back(with_recipe(m, fam_cardinality(27), fam_cardinality(3), rounds, 3));
        } else if (c == 3) {
            p.classes.push_back(plain(m, fam_cardinality(16)));
        } else {
            std::int64_t cap = std::min<std::int64_t>(static_cast<std::int64_t>(m), 10);
            p.classes.push_back(plain(m, fam_cardinality(cap)));
        }
    }
    p.finalize();
    return p;
}

} // namespace

SpaceParams preset(const std::string& name) {
    if (name == "paper") return paper_preset();
    if (name == "desk-small") return desk_small();
    if (name == "desk-scc") return desk_scc();
    if (name == "desk-medium") return desk_medium();
    if (name == "desk-hi") return desk_hi();
    throw input_error("unknown preset '" + name + "' (try: paper, desk-small, desk-scc, desk-medium, desk-hi)");
}

std::vector<std::string> preset_names() { return {"paper", "desk-small", "desk-scc", "desk-medium", "desk-hi"}; }

} // namespace tsilab
