#include "doctest.h"
#include "tsilab/json_io.hpp"
#include "tsilab/xu.hpp"

using namespace tsilab;

TEST_CASE("scc estimates: bounds and the exact norm on the engineered preset") {
    auto P = preset("desk-scc"); // m = (2,3), eps < 1/27 affordable
    auto D = IndexStream::naturals_from(1, 10'000);
    auto cert = build_basic_scc(P, 1, Rat(1, 28), D);
    auto rep = check_scc_estimates(P, cert);
    CHECK(rep.hypotheses_ok);
    REQUIRE(rep.norm.has_value());
    CHECK(*rep.norm == Rat(1, 3));
    CHECK(rep.norm_verdict == "exact");
    // s = j: bound 1/m_j attained by the singleton functional
    CHECK(rep.class_sups.at(1) == Rat(1, 3));
    CHECK(rep.class_verdicts.at(1) == "pass");
    // s = 0 < j: measured sup <= 2/(m_0 m_1) = 1/3
    CHECK(rep.class_sups.at(0) <= Rat(1, 3));
    CHECK(rep.class_verdicts.at(0) == "pass");
}

TEST_CASE("ris estimates:two-sided bound with explicit lower witness") {
    auto P = preset("desk-medium");
    auto D = IndexStream::naturals_from(1, 100'000);
    auto ris = build_ris(P, 1, 3, D);
    auto rep = check_ris_estimates(P, ris);
    // Cor 2.15 window [1/(4 m_j), 8/m_j] = [1/12, 8/3]
    CHECK(rep.lower_witness_value >= Rat(1, 12));
    CHECK(rep.norm >= Rat(1, 12));
    CHECK(rep.norm <= Rat(8, 3));
    CHECK(rep.lower_verdict == "asserted (witness)");
    // desk eps targets are relaxed, so the upper bound is downgraded to a measurement
    CHECK(rep.upper_verdict.find("measured") != std::string::npos);
    CHECK(rep.upper_verdict.find("holds") != std::string::npos);
    CHECK_FALSE(rep.violated_hypotheses.empty());
    // shallow certificates are refused
    auto D2 = IndexStream::naturals_from(1, 100'000);
    auto shallow = build_ris(P, 1, 2, D2, true);
    CHECK_THROWS_AS(check_ris_estimates(P, shallow), input_error);
}

TEST_CASE("equivalent norm: sandwich and norm axioms") {
    auto P = preset("desk-medium");
    int i0 = 1;
    const Rat theta = P.cls(1).theta;
    std::vector<SpVec> samples = {
        SpVec::basis(3),
        SpVec({{2, Rat(1)}, {3, Rat(-1, 2)}, {7, Rat(1, 3)}}),
        SpVec({{4, Rat(1, 2)}, {5, Rat(1, 2)}, {6, Rat(1, 2)}, {9, Rat(-1)}}),
    };
    for (const auto& x : samples) {
        Rat base = certify_norm(P, x).value;
        Rat eq = equivalent_norm(P, i0, x);
        // (1/m_i0)||x|| <= |||x||| <= (1 + 1/m_i0)||x||
        CHECK(theta * base <= eq);
        CHECK(eq <= (Rat(1) + theta) * base);
        // homogeneity
        CHECK(equivalent_norm(P, i0, x.scaled(Rat(-3, 2))) == Rat(3, 2) * eq);
    }
    // triangle on a pair
    Rat a = equivalent_norm(P, i0, samples[1]);
    Rat b = equivalent_norm(P, i0, samples[2]);
    CHECK(equivalent_norm(P, i0, samples[1].plus(samples[2])) <= a + b);
}

TEST_CASE("distortion experiment on desk-medium") {
    auto P = preset("desk-medium");
    auto src = IndexStream::naturals_from(1, 500'000);
    auto rep = distortion_experiment(P, 1, 2, src, 3, 424242);
    // lower bounds hold and are witness-backed
    CHECK(rep.inequalities.at("norm_mj_y >= 1/4").first);
    CHECK(rep.inequalities.at("norm_mj_y >= 1/4").second == "asserted (witness-backed)");
    CHECK(rep.inequalities.at("equiv_mi0_z >= 1/4").first);
    // upper bounds: gates fail at desk scale, so they are measured (and hold here)
    CHECK(rep.inequalities.at("equiv_mj_y <= 24/m_i0").first);
    CHECK(rep.inequalities.at("equiv_mj_y <= 24/m_i0").second.find("measured") != std::string::npos);
    CHECK(rep.inequalities.at("norm_mi0_z <= 8").first);
    CHECK(rep.distortion_ratio > 0);
    CHECK(rep.preset_fingerprint == P.fingerprint());

    // byte-identical reports under the same seed and inputs
    auto src2 = IndexStream::naturals_from(1, 500'000);
    auto rep2 = distortion_experiment(P, 1, 2, src2, 3, 424242);
    CHECK(distort_report_to_json(rep).dump() == distort_report_to_json(rep2).dump());

    CHECK_THROWS_AS(distortion_experiment(P, 2, 1, src, 3, 0), input_error);
}
