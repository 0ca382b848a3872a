#include "tsilab/json_io.hpp"

namespace tsilab {

Json vec_to_json(const SpVec& x) {
    Json arr = Json::array();
    for (const auto& [idx, c] : x.entries()) arr.push_back(Json::array({idx, format_rat(c)}));
    return arr;
}

SpVec vec_from_json(const Json& j) {
    if (!j.is_array()) throw input_error("vector JSON must be an array of [index, \"p/q\"] pairs");
    std::vector<SpVec::Entry> entries;
    for (const auto& e : j) {
        if (!e.is_array() || e.size() != 2) throw input_error("vector entry must be [index, \"p/q\"]");
        std::int64_t idx = e[0].get<std::int64_t>();
        Rat c = e[1].is_string() ? parse_rat(e[1].get<std::string>()) : Rat(e[1].get<std::int64_t>());
        entries.emplace_back(idx, c);
    }
    return SpVec(std::move(entries));
}

Json blocks_to_json(const BlockSeq& b) {
    Json arr = Json::array();
    for (const auto& v : b.blocks()) arr.push_back(vec_to_json(v));
    return arr;
}

BlockSeq blocks_from_json(const Json& j) {
    if (!j.is_array()) throw input_error("block sequence JSON must be an array of vectors");
    std::vector<SpVec> blocks;
    for (const auto& e : j) blocks.push_back(vec_from_json(e));
    return BlockSeq(std::move(blocks));
}

Json functional_to_json(const Functional& f) {
    if (f.is_leaf()) return Json{{"leaf", Json{{"sign", f.sign}, {"index", f.index}}}};
    Json children = Json::array();
    for (const auto& c : f.children) children.push_back(functional_to_json(c));
    return Json{{"node", Json{{"weight", f.weight}, {"children", std::move(children)}}}};
}

Functional functional_from_json(const Json& j) {
    if (j.contains("leaf")) {
        const auto& l = j.at("leaf");
        return Functional::leaf(l.at("sign").get<int>(), l.at("index").get<std::int64_t>());
    }
    if (j.contains("node")) {
        const auto& n = j.at("node");
        std::vector<Functional> children;
        for (const auto& c : n.at("children")) children.push_back(functional_from_json(c));
        return Functional::node(n.at("weight").get<int>(), std::move(children));
    }
    throw input_error("functional JSON needs 'leaf' or 'node'");
}

SpaceParams params_from_json(const Json& j) {
    SpaceParams p;
    p.name = j.value("name", "custom");
    for (const auto& c : j.at("classes")) {
        ClassSpec spec;
        auto mj = c.at("m");
        spec.m = mj.is_string() ? Int(mj.get<std::string>()) : Int(mj.get<std::int64_t>());
        spec.family = parse_family(c.at("family").get<std::string>());
        if (c.contains("layer")) {
            spec.layer_family = parse_family(c.at("layer").get<std::string>());
            spec.rounds = c.value("rounds", std::int64_t(0));
            spec.contained_depth = c.value("depth", std::int64_t(0));
        }
        p.classes.push_back(std::move(spec));
    }
    p.finalize();
    return p;
}

Json params_to_json(const SpaceParams& p) {
    Json j;
    j["name"] = p.name;
    j["fingerprint"] = p.fingerprint();
    Json classes = Json::array();
    for (const auto& c : p.classes) {
        Json cj{{"m", c.m.str()}, {"family", c.family->to_string()}};
        if (c.layer_family) {
            cj["layer"] = c.layer_family->to_string();
            cj["rounds"] = c.rounds;
            cj["depth"] = c.contained_depth;
        }
        classes.push_back(std::move(cj));
    }
    j["classes"] = std::move(classes);
    Json rec;
    rec["m0_is_two"] = p.record.m0_is_two;
    rec["all_growth"] = p.record.all_growth;
    Json growth = Json::array();
    for (bool b : p.record.growth) growth.push_back(b);
    rec["growth"] = std::move(growth);
    for (const auto& [k, v] : p.record.notes) rec[k] = v;
    j["hypothesis_record"] = std::move(rec);
    return j;
}

namespace {

Json checks_to_json(const std::map<std::string, std::string>& checks) {
    Json j;
    for (const auto& [k, v] : checks) j[k] = v;
    return j;
}

} // namespace

Json scc_cert_to_json(const SccCert& c) {
    Json j;
    j["kind"] = "basic-scc";
    j["j"] = c.j;
    j["eps"] = format_rat(c.eps);
    Json coeffs = Json::array();
    for (const auto& [idx, a] : c.coeffs) coeffs.push_back(Json::array({idx, format_rat(a)}));
    j["coeffs"] = std::move(coeffs);
    j["checks"] = checks_to_json(c.checks);
    j["verified"] = c.verified;
    if (c.small_norm) j["small_norm"] = format_rat(*c.small_norm);
    j["preset_fingerprint"] = c.preset_fingerprint;
    return j;
}

Json ris_cert_to_json(const RisCert& c) {
    Json j;
    j["kind"] = "ris";
    j["j"] = c.j;
    j["eps_achieved"] = format_rat(c.eps);
    j["shallow"] = c.shallow;
    j["weights"] = c.weights;
    Json blocks = Json::array();
    for (const auto& b : c.blocks) blocks.push_back(vec_to_json(b));
    j["blocks"] = std::move(blocks);
    Json norms = Json::array();
    for (const auto& r : c.block_norms) norms.push_back(format_rat(r));
    j["block_norms"] = std::move(norms);
    Json l1s = Json::array();
    for (const auto& r : c.block_l1) l1s.push_back(format_rat(r));
    j["block_l1"] = std::move(l1s);
    Json coeffs = Json::array();
    for (const auto& [idx, a] : c.coeffs) coeffs.push_back(Json::array({idx, format_rat(a)}));
    j["coeffs"] = std::move(coeffs);
    j["checks"] = checks_to_json(c.checks);
    j["preset_fingerprint"] = c.preset_fingerprint;
    return j;
}

Json scc_report_to_json(const SccEstimateReport& r) {
    Json j;
    j["kind"] = "scc-estimates";
    j["j"] = r.j;
    j["eps"] = format_rat(r.eps);
    j["hypotheses_ok"] = r.hypotheses_ok;
    Json sups;
    for (const auto& [cls, v] : r.class_sups) sups[std::to_string(cls)] = format_rat(v);
    j["class_sups"] = std::move(sups);
    Json verdicts;
    for (const auto& [cls, v] : r.class_verdicts) verdicts[std::to_string(cls)] = v;
    j["class_verdicts"] = std::move(verdicts);
    if (r.norm) j["norm"] = format_rat(*r.norm);
    j["norm_verdict"] = r.norm_verdict;
    j["unchecked_classes"] = r.unchecked;
    return j;
}

Json ris_report_to_json(const RisEstimateReport& r) {
    Json j;
    j["kind"] = "ris-estimates";
    Json sups;
    for (const auto& [cls, v] : r.class_sups) sups[std::to_string(cls)] = format_rat(v);
    j["class_sups"] = std::move(sups);
    Json verdicts;
    for (const auto& [cls, v] : r.class_verdicts) verdicts[std::to_string(cls)] = v;
    j["class_verdicts"] = std::move(verdicts);
    j["lower_witness_value"] = format_rat(r.lower_witness_value);
    j["norm"] = format_rat(r.norm);
    j["lower_verdict"] = r.lower_verdict;
    j["upper_verdict"] = r.upper_verdict;
    j["violated_hypotheses"] = r.violated_hypotheses;
    j["unchecked_classes"] = r.unchecked;
    return j;
}

Json distort_report_to_json(const DistortReport& r) {
    Json j;
    j["kind"] = "distortion";
    j["i0"] = r.i0;
    j["j"] = r.j;
    j["seed"] = r.seed;
    j["preset_fingerprint"] = r.preset_fingerprint;
    j["norm_mj_y"] = format_rat(r.norm_mj_y);
    j["equiv_mj_y"] = format_rat(r.equiv_mj_y);
    j["norm_mi0_z"] = format_rat(r.norm_mi0_z);
    j["equiv_mi0_z"] = format_rat(r.equiv_mi0_z);
    Json ineq;
    for (const auto& [name, hv] : r.inequalities)
        ineq[name] = Json{{"holds", hv.first}, {"status", hv.second}};
    j["inequalities"] = std::move(ineq);
    j["distortion_ratio"] = format_rat(r.distortion_ratio);
    j["y_cert"] = ris_cert_to_json(r.y_cert);
    j["z_cert"] = ris_cert_to_json(r.z_cert);
    return j;
}

Json chain_to_json(const DependentChain& c) {
    Json j;
    j["kind"] = "dependent-chain";
    j["j"] = c.j;
    j["n"] = c.y.size();
    j["weights"] = c.weights;
    Json blocks = Json::array();
    for (const auto& b : c.y) blocks.push_back(vec_to_json(b));
    j["blocks"] = std::move(blocks);
    Json stars = Json::array();
    for (const auto& f : c.ystar) stars.push_back(f.serialize());
    j["ystar"] = std::move(stars);
    Json thetas = Json::array();
    for (const auto& t : c.theta) thetas.push_back(format_rat(t));
    j["theta"] = std::move(thetas);
    Json coeffs = Json::array();
    for (const auto& [idx, a] : c.coeffs) coeffs.push_back(Json::array({idx, format_rat(a)}));
    j["coeffs"] = std::move(coeffs);
    j["checks"] = checks_to_json(c.checks);
    j["preset_fingerprint"] = c.preset_fingerprint;
    return j;
}

Json hi_report_to_json(const HiReport& r) {
    Json j;
    j["kind"] = "hi-witness";
    j["j"] = r.j;
    j["n"] = r.n;
    j["unsigned_lower"] = format_rat(r.unsigned_lower);
    j["special"] = r.special.serialize();
    j["alt_norm_lower"] = format_rat(r.alt_norm.lower);
    j["alt_norm_upper"] = format_rat(r.alt_norm.upper);
    j["alt_norm_exact"] = r.alt_norm.exact;
    j["ratio"] = format_rat(r.ratio);
    j["ratio_below_one"] = r.ratio_below_one;
    j["paper_bound"] = format_rat(r.paper_bound);
    j["paper_bound_verdict"] = r.paper_bound_verdict;
    j["gates"] = checks_to_json(std::map<std::string, std::string>(r.gates.begin(), r.gates.end()));
    j["preset_fingerprint"] = r.preset_fingerprint;
    return j;
}

} // namespace tsilab
