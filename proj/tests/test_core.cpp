#include "doctest.h"
#include "tsilab/functional.hpp"
#include "tsilab/params.hpp"
#include "tsilab/vector.hpp"

#include <random>

using namespace tsilab;

namespace {

SpaceParams two_class() {
    return SpaceParams::make("test", {{Int(2), fam_schreier()}, {Int(4), fam_cardinality(3)}});
}

SpVec rand_vec(std::mt19937_64& rng, int max_support = 6, std::int64_t max_index = 12) {
    std::vector<SpVec::Entry> entries;
    int n = std::uniform_int_distribution<int>(0, max_support)(rng);
    std::int64_t idx = 0;
    for (int i = 0; i < n; ++i) {
        idx += std::uniform_int_distribution<std::int64_t>(1, std::max<std::int64_t>(1, (max_index - idx) / 2))(rng);
        if (idx > max_index) break;
        int num = std::uniform_int_distribution<int>(-3, 3)(rng);
        if (num) entries.emplace_back(idx, Rat(num, std::uniform_int_distribution<int>(1, 3)(rng)));
    }
    return SpVec(std::move(entries));
}

} // namespace

TEST_CASE("sparse vectors: normalization and exact norms") {
    SpVec x({{3, Rat(1, 2)}, {1, Rat(1)}, {3, Rat(-1, 2)}, {5, Rat(0)}});
    CHECK(x.support() == FinSet{1});
    CHECK(x.coeff(3) == 0);
    CHECK(x.l1() == 1);
    SpVec y({{2, Rat(3)}, {7, Rat(-1, 3)}});
    CHECK(y.linf() == 3);
    CHECK(y.l1() == Rat(10, 3));
    CHECK_THROWS_AS(SpVec({{0, Rat(1)}}), input_error);
    CHECK(y.restrict_range(3, 9).support() == FinSet{7});
    CHECK(y.scaled(Rat(0)).empty());
}

TEST_CASE("block sequences must be successive") {
    BlockSeq b;
    b.push_back(SpVec({{1, Rat(1)}, {2, Rat(1)}}));
    b.push_back(SpVec({{3, Rat(1)}}));
    CHECK(b.size() == 2);
    CHECK_THROWS_AS(b.push_back(SpVec({{2, Rat(1)}})), input_error);
    CHECK_THROWS_AS(BlockSeq({SpVec({{2, Rat(1)}}), SpVec({{1, Rat(1)}})}), input_error);
}

TEST_CASE("functional evaluation matches the worked examples") {
    auto P = two_class();
    CHECK(eval(Functional::leaf(+1, 3), SpVec::basis(3), P) == 1);
    auto node0 = Functional::node(0, {Functional::leaf(+1, 2), Functional::leaf(+1, 3)});
    CHECK(eval(node0, SpVec({{2, Rat(1)}, {3, Rat(1)}}), P) == 1); // (1/2)(1+1)
    auto node1 = Functional::node(1, {Functional::leaf(+1, 2), Functional::leaf(+1, 5)});
    CHECK(eval(node1, SpVec({{2, Rat(3)}, {5, Rat(-1)}}), P) == Rat(1, 2)); // (1/4)(3-1)
}

TEST_CASE("evaluation is linear in the vector") {
    auto P = two_class();
    std::mt19937_64 rng(42);
    auto f = Functional::node(0, {Functional::leaf(+1, 2),
                                  Functional::node(1, {Functional::leaf(-1, 4), Functional::leaf(+1, 6)})});
    for (int t = 0; t < 100; ++t) {
        SpVec x = rand_vec(rng), y = rand_vec(rng);
        Rat a(std::uniform_int_distribution<int>(-4, 4)(rng), 3);
        CHECK(eval(f, x.scaled(a).plus(y), P) == a * eval(f, x, P) + eval(f, y, P));
    }
}

TEST_CASE("functional serialization round trip and ordering") {
    auto f = Functional::node(0, {Functional::leaf(+1, 2),
                                  Functional::node(1, {Functional::leaf(-1, 4), Functional::leaf(+1, 6)})});
    CHECK(f.serialize() == "w0(+2,w1(-4,+6))");
    CHECK(Functional::deserialize(f.serialize()) == f);
    CHECK_THROWS_AS(Functional::deserialize("w0(+2"), input_error);
    CHECK_THROWS_AS(Functional::node(0, {Functional::leaf(+1, 5), Functional::leaf(+1, 3)}), input_error);
}

TEST_CASE("validate_functional checks admissibility per class") {
    auto P = two_class();
    auto good = Functional::node(0, {Functional::leaf(+1, 2), Functional::leaf(+1, 3)});
    CHECK_NOTHROW(validate_functional(good, P));
    // {1},{2} is not Schreier-admissible
    auto bad = Functional::node(0, {Functional::leaf(+1, 1), Functional::leaf(+1, 2)});
    CHECK_THROWS_AS(validate_functional(bad, P), input_error);
    // weight out of range
    auto wrong = Functional::node(5, {Functional::leaf(+1, 2)});
    CHECK_THROWS_AS(validate_functional(wrong, P), input_error);
}

TEST_CASE("analysis satisfies the level conditions") {
    auto leaf = Functional::leaf(+1, 5);
    auto al = analyze(leaf);
    REQUIRE(al.size() == 1);
    CHECK(al[0].size() == 1);
    CHECK(*al[0][0] == leaf);

    auto f = Functional::node(0, {Functional::node(1, {Functional::leaf(+1, 3), Functional::leaf(+1, 5)}),
                                  Functional::node(1, {Functional::leaf(-1, 8), Functional::leaf(+1, 9)})});
    auto levels = analyze(f);
    REQUIRE(levels.size() == 3);
    // top level is {f}
    CHECK(levels[2].size() == 1);
    CHECK(*levels[2][0] == f);
    for (std::size_t s = 0; s < levels.size(); ++s) {
        // pieces are successive and their supports union to supp f
        FinSet uni;
        std::int64_t prev = 0;
        for (auto* g : levels[s]) {
            CHECK(g->min_support() > prev);
            prev = g->max_support();
            for (auto v : g->support()) uni.push_back(v);
        }
        CHECK(uni == f.support());
    }
    // nested-or-disjoint across consecutive levels
    for (std::size_t s = 0; s + 1 < levels.size(); ++s)
        for (auto* g1 : levels[s])
            for (auto* g2 : levels[s + 1]) {
                auto s1 = g1->support(), s2 = g2->support();
                bool nested = std::includes(s2.begin(), s2.end(), s1.begin(), s1.end());
                bool disjoint = true;
                for (auto v : s1)
                    if (std::binary_search(s2.begin(), s2.end(), v)) disjoint = false;
                CHECK((nested || disjoint));
            }
}

TEST_CASE("split parts around the analysis") {
    auto f = Functional::node(0, {Functional::node(1, {Functional::leaf(+1, 3), Functional::leaf(+1, 5)}),
                                  Functional::node(1, {Functional::leaf(-1, 8), Functional::leaf(+1, 9)})});
    SUBCASE("block disjoint from supp f") {
        BlockSeq b;
        b.push_back(SpVec({{20, Rat(1)}}));
        auto parts = split_parts(b, f);
        REQUIRE(parts.size() == 1);
        CHECK(parts[0].initial.empty());
        CHECK(parts[0].final.empty());
    }
    SUBCASE("single-point blocks sit at level 0") {
        BlockSeq b;
        b.push_back(SpVec({{3, Rat(1)}}));
        auto parts = split_parts(b, f);
        REQUIRE(parts.size() == 1);
        CHECK(parts[0].level == 0);
    }
    SUBCASE("a block straddling the two children splits at the child boundary") {
        BlockSeq b;
        b.push_back(SpVec({{5, Rat(1)}, {8, Rat(2)}}));
        auto parts = split_parts(b, f);
        REQUIRE(parts.size() == 1);
        CHECK(parts[0].level == 1);
        CHECK(parts[0].initial.support() == FinSet{5});
        CHECK(parts[0].final.support() == FinSet{8});
        // x' + x'' reproduces the block on supp f
        auto sum = parts[0].initial.plus(parts[0].final);
        CHECK(sum == b[0].restrict_to(f.support()));
    }
}

TEST_CASE("presets expose the advertised parameters") {
    auto paper = preset("paper");
    CHECK(paper.classes[0].m == 2);
    CHECK(paper.classes[1].m == 5); // smallest integer above 2^2
    CHECK(paper.classes[2].m == 3126);
    CHECK(family_equal(paper.classes[0].family, fam_schreier_rank(1))); // M_0 = F_1
    CHECK(paper.record.all_growth);
    CHECK(paper.record.gate("rounds_relation"));

    auto small = preset("desk-small");
    CHECK_FALSE(small.record.all_growth); // 3 < 2^2: growth violated and recorded
    CHECK(small.record.gate("rounds_relation"));

    for (const auto& name : preset_names()) {
        auto p = preset(name);
        CHECK(p.num_classes() >= 1);
        CHECK(p.fingerprint() == preset(name).fingerprint());
    }
    CHECK_THROWS_AS(preset("nope"), input_error);
}
