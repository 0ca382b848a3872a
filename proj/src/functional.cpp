#include "tsilab/functional.hpp"

#include "tsilab/params.hpp"

#include <algorithm>
#include <functional>

namespace tsilab {

Functional Functional::leaf(int sign, std::int64_t n) {
    if (sign != 1 && sign != -1) throw input_error("leaf sign must be +-1");
    if (n < 1) throw input_error("leaf index must be positive");
    Functional f;
    f.sign = sign;
    f.index = n;
    return f;
}

Functional Functional::node(int weight_index, std::vector<Functional> children) {
    if (weight_index < 0) throw input_error("node weight index must be >= 0");
    if (children.empty()) throw input_error("node needs at least one child");
    Functional f;
    f.weight = weight_index;
    f.children = std::move(children);
    for (std::size_t i = 1; i < f.children.size(); ++i)
        if (f.children[i].min_support() <= f.children[i - 1].max_support())
            throw input_error("node children must have successive supports");
    return f;
}

std::int64_t Functional::min_support() const {
    return is_leaf() ? index : children.front().min_support();
}

std::int64_t Functional::max_support() const {
    return is_leaf() ? index : children.back().max_support();
}

FinSet Functional::support() const {
    FinSet s;
    std::function<void(const Functional&)> walk = [&](const Functional& f) {
        if (f.is_leaf()) s.push_back(f.index);
        else
            for (const auto& c : f.children) walk(c);
    };
    walk(*this);
    return s; // children successive => already sorted
}

int Functional::height() const {
    if (is_leaf()) return 0;
    int h = 0;
    for (const auto& c : children) h = std::max(h, c.height());
    return h + 1;
}

std::string Functional::serialize() const {
    if (is_leaf()) return (sign > 0 ? "+" : "-") + std::to_string(index);
    std::string s = "w" + std::to_string(weight) + "(";
    for (std::size_t i = 0; i < children.size(); ++i) {
        if (i) s += ",";
        s += children[i].serialize();
    }
    s += ")";
    return s;
}

namespace {

Functional parse_functional(const std::string& s, std::size_t& pos) {
    auto fail = [&](const std::string& msg) -> Functional {
        throw input_error("functional parse error at position " + std::to_string(pos) + ": " + msg);
    };
    if (pos >= s.size()) return fail("unexpected end");
    if (s[pos] == '+' || s[pos] == '-') {
        int sign = s[pos] == '+' ? 1 : -1;
        ++pos;
        std::size_t start = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (start == pos) return fail("expected an index");
        return Functional::leaf(sign, std::stoll(s.substr(start, pos - start)));
    }
    if (s[pos] == 'w') {
        ++pos;
        std::size_t start = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (start == pos) return fail("expected a weight index");
        int w = std::stoi(s.substr(start, pos - start));
        if (pos >= s.size() || s[pos] != '(') return fail("expected '('");
        ++pos;
        std::vector<Functional> children;
        while (true) {
            children.push_back(parse_functional(s, pos));
            if (pos < s.size() && s[pos] == ',') {
                ++pos;
                continue;
            }
            break;
        }
        if (pos >= s.size() || s[pos] != ')') return fail("expected ')'");
        ++pos;
        return Functional::node(w, std::move(children));
    }
    return fail("expected '+', '-' or 'w'");
}

} // namespace

Functional Functional::deserialize(const std::string& text) {
    std::size_t pos = 0;
    Functional f = parse_functional(text, pos);
    if (pos != text.size()) throw input_error("functional parse error: trailing input");
    return f;
}

bool Functional::operator==(const Functional& o) const {
    return sign == o.sign && index == o.index && weight == o.weight && children == o.children;
}

Rat eval(const Functional& f, const SpVec& x, const SpaceParams& P) {
    if (f.is_leaf()) return Rat(f.sign) * x.coeff(f.index);
    Rat sum(0);
    for (const auto& c : f.children) sum += eval(c, x, P);
    return P.cls(static_cast<std::size_t>(f.weight)).theta * sum;
}

void validate_functional(const Functional& f, const SpaceParams& P) {
    if (f.is_leaf()) {
        if (f.index < 1) throw input_error("functional: bad leaf index");
        return;
    }
    if (static_cast<std::size_t>(f.weight) >= P.num_classes())
        throw input_error("functional: weight index " + std::to_string(f.weight) + " out of range");
    std::vector<FinSet> segs;
    for (const auto& c : f.children) {
        validate_functional(c, P);
        segs.push_back(c.support());
    }
    if (!is_admissible(P.cls(static_cast<std::size_t>(f.weight)).family, segs))
        throw input_error("functional: children not M_" + std::to_string(f.weight) + "-admissible");
}

Analysis analyze(const Functional& f) {
    int m = f.height();
    Analysis levels(static_cast<std::size_t>(m) + 1);
    // level s = maximal subtrees of height <= s whose parent has height > s.
    std::function<void(const Functional&, int)> place = [&](const Functional& g, int parent_h) {
        int h = g.height();
        for (int s = h; s < parent_h; ++s)
            if (s <= m) levels[static_cast<std::size_t>(s)].push_back(&g);
        if (!g.is_leaf())
            for (const auto& c : g.children) place(c, h);
    };
    place(f, m + 1);
    return levels;
}

std::vector<SplitPart> split_parts(const BlockSeq& blocks, const Functional& f) {
    Analysis levels = analyze(f);
    std::vector<SplitPart> out;
    for (const auto& x : blocks.blocks()) {
        SplitPart part;
        // s_k: max level s < m with at least two level-s pieces meeting x_k;
        // 0 when #supp x_k <= 1.
        int sk = 0;
        if (x.support_size() > 1) {
            for (int s = static_cast<int>(levels.size()) - 2; s >= 0; --s) {
                int meets = 0;
                for (auto* g : levels[static_cast<std::size_t>(s)]) {
                    if (!x.restrict_to(g->support()).empty()) ++meets;
                    if (meets >= 2) break;
                }
                if (meets >= 2) {
                    sk = s;
                    break;
                }
            }
        }
        part.level = sk;
        // pieces of level s_k meeting x, in support order
        std::vector<const Functional*> meeting;
        for (auto* g : levels[static_cast<std::size_t>(sk)]) {
            SpVec r = x.restrict_to(g->support());
            if (!r.empty()) meeting.push_back(g);
        }
        if (meeting.empty()) {
            out.push_back(part); // both parts zero
            continue;
        }
        part.initial = x.restrict_to(meeting.front()->support());
        SpVec rest;
        for (std::size_t i = 1; i < meeting.size(); ++i) rest = rest.plus(x.restrict_to(meeting[i]->support()));
        part.final = rest;
        out.push_back(part);
    }
    return out;
}

} // namespace tsilab
