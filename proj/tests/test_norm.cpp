#include "doctest.h"
#include "oracles.hpp"
#include "tsilab/enumerate.hpp"
#include "tsilab/norm.hpp"

#include <random>

using namespace tsilab;

namespace {

SpVec uniform_run(std::int64_t from, std::int64_t to, Rat c = Rat(1)) {
    std::vector<SpVec::Entry> e;
    for (std::int64_t i = from; i <= to; ++i) e.emplace_back(i, c);
    return SpVec(std::move(e));
}

SpVec sample_vec(std::mt19937_64& rng) {
    // |supp| <= 6, indices <= 12, coefficients in {+-1, +-1/2, +-1/3}
    static const Rat pool[] = {Rat(1), Rat(-1), Rat(1, 2), Rat(-1, 2), Rat(1, 3), Rat(-1, 3)};
    std::vector<SpVec::Entry> e;
    FinSet used;
    int n = std::uniform_int_distribution<int>(1, 6)(rng);
    while (static_cast<int>(used.size()) < n) {
        std::int64_t idx = std::uniform_int_distribution<std::int64_t>(1, 12)(rng);
        if (std::binary_search(used.begin(), used.end(), idx)) continue;
        used.insert(std::upper_bound(used.begin(), used.end(), idx), idx);
        e.emplace_back(idx, pool[std::uniform_int_distribution<int>(0, 5)(rng)]);
    }
    return SpVec(std::move(e));
}

oracles::BruteNorm brute_for(const SpaceParams& P, const SpVec& x) {
    oracles::BruteNorm bn;
    bn.entries.assign(x.entries().begin(), x.entries().end());
    for (std::size_t k = 0; k < P.num_classes(); ++k) {
        oracles::BruteNorm::Class cls;
        cls.theta = P.cls(k).theta;
        auto fam = P.cls(k).family;
        if (family_equal(fam, fam_schreier()) || family_equal(fam, fam_schreier_rank(1)))
            cls.member = [](const oracles::FinSet& a) { return oracles::schreier(a); };
        else if (fam->kind == FamilyKind::Cardinality)
            cls.member = [n = fam->n](const oracles::FinSet& a) {
                return static_cast<std::int64_t>(a.size()) <= n;
            };
        else if (fam->kind == FamilyKind::SchreierRank && !fam->omega)
            cls.member = [k2 = static_cast<int>(fam->n)](const oracles::FinSet& a) {
                return oracles::member_F(k2, a);
            };
        else
            throw std::runtime_error("no oracle for family " + fam->to_string());
        bn.classes.push_back(std::move(cls));
    }
    return bn;
}

} // namespace

TEST_CASE("tsirelson norm: worked examples") {
    auto S = fam_schreier();
    CHECK(tsirelson_norm(S, Rat(1, 2), SpVec::basis(7)).value == 1);
    CHECK(tsirelson_norm(S, Rat(1, 2), uniform_run(2, 3)).value == 1);
    // n = 4: sum e_4..e_7 has norm 2 = n/2
    CHECK(tsirelson_norm(S, Rat(1, 2), uniform_run(4, 7)).value == 2);
    CHECK_THROWS_AS(tsirelson_norm(S, Rat(3, 2), SpVec::basis(1)), input_error);
    CHECK(tsirelson_norm(S, Rat(1, 2), SpVec()).value == 0);
}

TEST_CASE("mixed norm: worked examples and j_cut monotonicity") {
    auto P = SpaceParams::make("t", {{Int(2), fam_schreier()}, {Int(4), fam_cardinality(3)}});
    for (const auto& name : {"desk-small", "desk-scc", "paper"})
        CHECK(mixed_norm(preset(name), SpVec::basis(1)).value == 1);
    CHECK(mixed_norm(P, uniform_run(2, 3)).value == 1);
    std::mt19937_64 rng(7);
    auto desk = preset("desk-small");
    for (int t = 0; t < 40; ++t) {
        SpVec x = sample_vec(rng);
        Rat v0 = mixed_norm(desk, x, 0).value;
        Rat v1 = mixed_norm(desk, x, 1).value;
        Rat vfull = mixed_norm(desk, x).value;
        CHECK(v0 <= v1);
        CHECK(v1 == vfull); // desk-small has exactly two classes
        CHECK(mixed_norm(desk, x, -1).value == x.linf());
    }
}

TEST_CASE("certify_norm returns a validating witness") {
    auto P = SpaceParams::make("t", {{Int(2), fam_schreier()}});
    auto r = certify_norm(P, SpVec::basis(3));
    CHECK(r.value == 1);
    CHECK(r.witness.serialize() == "+3");
    std::mt19937_64 rng(11);
    auto desk = preset("desk-small");
    for (int t = 0; t < 60; ++t) {
        SpVec x = sample_vec(rng);
        auto nr = certify_norm(desk, x);
        CHECK(eval(nr.witness, x, desk) == nr.value);
        CHECK_NOTHROW(validate_functional(nr.witness, desk));
    }
}

TEST_CASE("sandwich, homogeneity, triangle inequality") {
    std::mt19937_64 rng(13);
    auto desk = preset("desk-small");
    for (int t = 0; t < 50; ++t) {
        SpVec x = sample_vec(rng), y = sample_vec(rng);
        Rat nx = mixed_norm(desk, x).value;
        CHECK(x.linf() <= nx);
        CHECK(nx <= x.l1());
        Rat a(std::uniform_int_distribution<int>(-6, 6)(rng), 5);
        CHECK(mixed_norm(desk, x.scaled(a)).value == abs(a) * nx);
        CHECK(mixed_norm(desk, x.plus(y)).value <= nx + mixed_norm(desk, y).value);
    }
}

TEST_CASE("one-unconditionality: sign flips and coordinate zeroing") {
    std::mt19937_64 rng(17);
    auto desk = preset("desk-small");
    for (int t = 0; t < 50; ++t) {
        SpVec x = sample_vec(rng);
        Rat nx = mixed_norm(desk, x).value;
        std::vector<bool> flips(x.support_size());
        for (std::size_t i = 0; i < flips.size(); ++i) flips[i] = std::uniform_int_distribution<int>(0, 1)(rng);
        CHECK(mixed_norm(desk, x.flip_signs(flips)).value == nx);
        if (!x.empty()) {
            auto entries = x.entries();
            entries.erase(entries.begin() +
                          std::uniform_int_distribution<std::size_t>(0, entries.size() - 1)(rng));
            CHECK(mixed_norm(desk, SpVec(std::move(entries))).value <= nx);
        }
    }
}

TEST_CASE("oracle equivalence: interval DP = subset brute force = norming sup") {
    std::mt19937_64 rng(23);
    std::vector<SpaceParams> presets = {
        SpaceParams::make("S-half", {{Int(2), fam_schreier()}}),
        SpaceParams::make("A2-half", {{Int(2), fam_cardinality(2)}}),
        preset("desk-small"),
    };
    for (auto& P : presets) {
        for (int t = 0; t < 25; ++t) {
            SpVec x = sample_vec(rng);
            Rat dp = mixed_norm(P, x).value;
            Rat brute = brute_for(P, x).norm();
            Rat sup = norming_sup(P, x, static_cast<int>(x.support_size()));
            CHECK_MESSAGE(dp == brute, P.name, " support=", x.support_size());
            CHECK_MESSAGE(dp == sup, P.name, " support=", x.support_size());
        }
    }
}

TEST_CASE("degenerate cardinality space: T[A_2, 1/2] is the sup norm") {
    // theta * n = 1 makes every split break even, so the norm collapses to
    // ||.||_inf; e_1 + e_2 separates this from the l1 reading (norm 1, l1 2).
    auto P = SpaceParams::make("A2-half", {{Int(2), fam_cardinality(2)}});
    CHECK(mixed_norm(P, uniform_run(1, 2)).value == 1);
    std::mt19937_64 rng(29);
    for (int t = 0; t < 60; ++t) {
        SpVec x = sample_vec(rng);
        CHECK(mixed_norm(P, x).value == x.linf());
    }
}

TEST_CASE("enumerate_norming: base cases, monotonicity, stream sup") {
    auto P = SpaceParams::make("t", {{Int(2), fam_schreier()}, {Int(4), fam_cardinality(3)}});
    auto base = enumerate_norming(P, {5}, 0);
    REQUIRE(base.size() == 2);
    CHECK(base[0].serialize() == "+5");
    CHECK(base[1].serialize() == "-5");

    FinSet window{2, 3, 5};
    auto d1 = enumerate_norming(P, window, 1);
    auto d2 = enumerate_norming(P, window, 2);
    // depth-n stream is contained in the depth-(n+1) stream
    for (const auto& f : d1)
        CHECK(std::find(d2.begin(), d2.end(), f) != d2.end());
    CHECK(d2.size() > d1.size());
    for (const auto& f : d2) CHECK_NOTHROW(validate_functional(f, P));

    // literal stream sup equals the compositional DP sup
    std::mt19937_64 rng(31);
    for (int t = 0; t < 10; ++t) {
        std::vector<SpVec::Entry> e;
        for (auto idx : window)
            e.emplace_back(idx, Rat(std::uniform_int_distribution<int>(-3, 3)(rng), 2));
        SpVec x(std::move(e));
        for (int depth = 0; depth <= 2; ++depth) {
            Rat best(0);
            for (const auto& f : enumerate_norming(P, window, depth)) best = std::max(best, eval(f, x, P));
            CHECK(best == norming_sup(P, x, depth));
        }
    }

    // class filter: leaves plus top-weight-j nodes only
    for (const auto& f : enumerate_norming(P, window, 2, 1))
        CHECK((f.is_leaf() || f.weight == 1));

    // blow-up guard
    BudgetGauge tiny{Budget{200, 1'000'000}};
    CHECK_THROWS_AS(enumerate_norming(P, {3, 4, 5, 6, 7, 8, 9, 10}, 4, {}, &tiny), resource_error);
}

TEST_CASE("norming sup matches the full norm at depth |supp|") {
    std::mt19937_64 rng(37);
    auto desk = preset("desk-small");
    for (int t = 0; t < 20; ++t) {
        SpVec x = sample_vec(rng);
        CHECK(norming_sup(desk, x, static_cast<int>(x.support_size())) == mixed_norm(desk, x).value);
    }
}

TEST_CASE("paper preset: trivial vectors evaluate, larger ones exhaust budgets") {
    auto paper = preset("paper");
    CHECK(mixed_norm(paper, SpVec::basis(1)).value == 1);
    CHECK(mixed_norm(paper, uniform_run(2, 3)).value == 1); // class 1 pruned by the l1 bound
    // wide vectors exhaust the node budget under the deep iterate matchers
    BudgetGauge g{Budget{20'000, 1'000'000}};
    CHECK_THROWS_AS(mixed_norm(paper, uniform_run(6, 120), {}, &g), resource_error);
    // the s_2-rank family cannot even be compiled into a matcher
    CHECK_THROWS_AS(FamilyMatcher(paper.classes[2].family, 10), resource_error);
}

TEST_CASE("class sup: top-class functional values") {
    auto P = SpaceParams::make("t", {{Int(2), fam_schreier()}, {Int(4), fam_cardinality(3)}});
    SpVec x = uniform_run(2, 3);
    // class 0: (1/2)(1+1) = 1; class 1: max(linf, (1/4)(2)) = 1 with leaves
    CHECK(class_sup(P, x, 0) == 1);
    CHECK(class_sup(P, x, 1) == 1);
    CHECK(class_node_sup(P, x, 1) == Rat(1, 2));
    CHECK(class_node_sup(P, x, 0) == 1);
}
