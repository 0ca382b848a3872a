#include "tsilab/scc.hpp"

#include <algorithm>
#include <sstream>

namespace tsilab {

IndexStream IndexStream::naturals_from(std::int64_t start, std::int64_t bound) {
    IndexStream s;
    s.cursor_ = std::max<std::int64_t>(1, start);
    s.bound_ = bound;
    return s;
}

IndexStream IndexStream::from_list(FinSet values) {
    require_finset(values, "IndexStream");
    IndexStream s;
    s.use_list_ = true;
    s.bound_ = values.empty() ? 0 : values.back();
    s.list_ = std::move(values);
    return s;
}

std::int64_t IndexStream::next(std::int64_t at_least) {
    if (use_list_) {
        while (list_pos_ < list_.size() && list_[list_pos_] < at_least) ++list_pos_;
        if (list_pos_ == list_.size())
            throw resource_error("index", static_cast<std::uint64_t>(at_least),
                                 "index stream exhausted; an index >= " + std::to_string(at_least) +
                                     " would be required");
        return list_[list_pos_++];
    }
    std::int64_t v = std::max(cursor_, at_least);
    if (v > bound_)
        throw resource_error("index", static_cast<std::uint64_t>(v),
                             "index bound " + std::to_string(bound_) + " exceeded; index " + std::to_string(v) +
                                 " would be required");
    cursor_ = v + 1;
    return v;
}

namespace {

// smallest integer q with 1/q < eps, i.e. q = floor(1/eps) + 1
std::int64_t inverse_threshold(const Rat& eps) {
    Int num = boost::multiprecision::numerator(eps);
    Int den = boost::multiprecision::denominator(eps);
    Int q = den / num + 1;
    if (q > (Int(1) << 40)) throw resource_error("index", 0, "epsilon too small for a desk construction");
    return static_cast<std::int64_t>(q);
}

} // namespace

SpVec repeated_average(int n, const Rat& eps, IndexStream& D, BudgetGauge* gauge) {
    if (n < 1) throw input_error("repeated_average: n >= 1 required");
    if (eps <= 0 || eps >= 1) throw input_error("repeated_average: eps in (0,1) required");
    BudgetGauge local;
    BudgetGauge& g = gauge ? *gauge : local;

    if (n == 1) {
        // uniform over a Schreier run: size q with 1/q < eps, min >= q
        std::int64_t q = inverse_threshold(eps);
        std::vector<SpVec::Entry> entries;
        std::int64_t at_least = q;
        for (std::int64_t i = 0; i < q; ++i) {
            std::int64_t idx = D.next(at_least);
            g.need_index(idx);
            entries.emplace_back(idx, Rat(1, q));
            at_least = idx + 1;
        }
        return SpVec(std::move(entries));
    }

    // n >= 2: A_1 = {n_0}; blocks A_2..A_{n_0} of mass 1/n_0 each.
    Rat eps2 = eps * eps;
    std::int64_t n0 = inverse_threshold(eps2);
    std::int64_t first = D.next(n0);
    g.need_index(first);
    n0 = std::max(n0, first); // n_0 must itself lie in D
    std::vector<SpVec::Entry> entries;
    entries.emplace_back(first, Rat(1, first));
    n0 = first;

    Rat min_block_size = static_cast<Rat>(Rat(n0) / eps2);
    Int sz = (boost::multiprecision::numerator(min_block_size) + boost::multiprecision::denominator(min_block_size) -
              1) /
             boost::multiprecision::denominator(min_block_size);
    if (sz > (Int(1) << 32)) throw resource_error("index", 0, "repeated_average block size out of desk range");
    std::int64_t block_size = static_cast<std::int64_t>(sz);

    Rat prev_min_coeff = Rat(1, n0);
    for (std::int64_t l = 2; l <= n0; ++l) {
        g.tick();
        if (n == 2) {
            // Schreier run of block_size elements
            std::int64_t at_least = std::max(block_size, entries.back().first + 1);
            for (std::int64_t i = 0; i < block_size; ++i) {
                std::int64_t idx = D.next(at_least);
                g.need_index(idx);
                Rat c = Rat(1, n0) / block_size;
                entries.emplace_back(idx, c);
                at_least = idx + 1;
            }
        } else {
            // recursive block: an F_{n-1} average, scaled by 1/n_0, with its
            // first coefficient at most the previous minimum (global
            // decreasing order)
            Rat target_eps = eps2;
            SpVec block = repeated_average(n - 1, target_eps, D, &g);
            while (block.entries().front().second / Rat(n0) > prev_min_coeff) {
                // spread further until the head coefficient sinks below the tail
                block = repeated_average(n - 1, block.entries().front().second / 2, D, &g);
            }
            for (const auto& [idx, c] : block.entries()) entries.emplace_back(idx, c / Rat(n0));
        }
        prev_min_coeff = entries.back().second;
    }
    return SpVec(std::move(entries));
}

AverageCheck verify_repeated_average(int n, const Rat& eps, const SpVec& x, std::size_t enum_cap) {
    AverageCheck out;
    FinSet supp = x.support();
    out.support_in_Fn = contains(fam_schreier_rank(n), supp);
    out.decreasing = true;
    for (std::size_t i = 1; i < x.entries().size(); ++i)
        if (x.entries()[i].second > x.entries()[i - 1].second) out.decreasing = false;
    auto fam = fam_schreier_rank(n - 1);
    if (supp.size() <= enum_cap) {
        out.by_enumeration = true;
        Rat best(0);
        for (const auto& member : maximal_members(fam, supp, enum_cap)) {
            Rat sum(0);
            for (auto idx : member) sum += x.coeff(idx);
            best = std::max(best, sum);
        }
        out.family_mass = best;
    } else {
        out.family_mass = max_member_weight(fam, x.entries());
    }
    out.mass_ok = out.family_mass < eps;
    return out;
}

std::int64_t scc_parameters(int n, const Rat& eps) {
    if (n < 1) throw input_error("scc_parameters: n >= 1");
    if (eps <= 0) throw input_error("scc_parameters: eps > 0");
    std::int64_t l = 1;
    while (Rat(1, Int(1) << static_cast<unsigned>(l)) >= eps / 2) {
        ++l;
        if (l > 256) throw resource_error("index", 0, "scc_parameters: eps too small");
    }
    return l * n + 1;
}

SpVec SccCert::vector() const { return SpVec({coeffs.begin(), coeffs.end()}); }

SccCert verify_basic_scc(const SpaceParams& P, const std::vector<std::pair<std::int64_t, Rat>>& coeffs,
                         const Rat& eps, int j, BudgetGauge* gauge) {
    if (j < 1 || j >= static_cast<int>(P.num_classes())) throw input_error("verify_basic_scc: class j out of range");
    SccCert cert;
    cert.coeffs = coeffs;
    cert.eps = eps;
    cert.j = j;
    cert.preset_fingerprint = P.fingerprint();

    Rat sum(0);
    bool nonneg = true, decreasing = true;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        sum += coeffs[i].second;
        if (coeffs[i].second < 0) nonneg = false;
        if (i > 0 && coeffs[i].second > coeffs[i - 1].second) decreasing = false;
        cert.F.push_back(coeffs[i].first);
    }
    cert.checks["convex"] = (nonneg && sum == 1) ? "pass" : "fail";
    cert.checks["decreasing"] = decreasing ? "pass" : "fail";
    cert.checks["support_in_family"] = contains(P.cls(static_cast<std::size_t>(j)).family, cert.F) ? "pass" : "fail";
    try {
        NormResult low = mixed_norm(P, cert.vector(), j - 1, gauge);
        cert.small_norm = low.value;
        cert.checks["small_norm"] = (low.value < eps) ? "pass" : "fail";
    } catch (const resource_error& e) {
        cert.checks["small_norm"] = std::string("unverified: ") + e.what();
    }
    cert.verified = cert.checks["convex"] == "pass" && cert.checks["decreasing"] == "pass" &&
                    cert.checks["support_in_family"] == "pass" && cert.checks["small_norm"] == "pass";
    return cert;
}

namespace {

// Uniform combination over a maximal-cardinality family member of size s,
// drawn from D.
std::vector<std::pair<std::int64_t, Rat>> uniform_over(const FamilyPtr& fam, std::int64_t s, IndexStream& D,
                                                       BudgetGauge& g) {
    FamilyMatcher mm(fam, s + 1);
    auto st = mm.initial();
    std::vector<std::pair<std::int64_t, Rat>> coeffs;
    std::int64_t at_least = 1;
    for (std::int64_t i = 0; i < s; ++i) {
        std::int64_t idx = D.next(at_least);
        g.need_index(idx);
        auto st2 = mm.feed(st, idx);
        if (!FamilyMatcher::alive(st2)) {
            // family refuses this element here (position-sensitive families):
            // move right and retry once per step
            at_least = idx + 1;
            --i;
            g.tick();
            continue;
        }
        st = st2;
        coeffs.emplace_back(idx, Rat(1, s));
        at_least = idx + 1;
    }
    return coeffs;
}

} // namespace

SccCert build_basic_scc(const SpaceParams& P, int j, const Rat& eps, IndexStream& D, BudgetGauge* gauge) {
    if (j < 1 || j >= static_cast<int>(P.num_classes())) throw input_error("build_basic_scc: class j out of range");
    BudgetGauge local;
    BudgetGauge& g = gauge ? *gauge : local;
    const auto& cls = P.cls(static_cast<std::size_t>(j));
    auto facts = family_facts(cls.family);

    // candidate sizes: enough points that a uniform combination can sink
    // below eps even when the subordinate norm is the sup norm
    std::int64_t want = inverse_threshold(eps);
    for (int attempt = 0; attempt < 8; ++attempt) {
        std::int64_t s = want;
        if (facts.position_free) s = std::min<std::int64_t>(s, facts.card_cap);
        auto coeffs = uniform_over(cls.family, s, D, g);
        SccCert cert = verify_basic_scc(P, coeffs, eps, j, &g);
        if (cert.verified) return cert;
        if (facts.position_free && s == facts.card_cap)
            throw resource_error("index", static_cast<std::uint64_t>(want),
                                 "build_basic_scc: family cap " + std::to_string(facts.card_cap) +
                                     " cannot reach eps " + format_rat(eps) + " on preset " + P.name);
        want *= 2;
    }
    throw resource_error("nodes", 0, "build_basic_scc: no verified candidate within the attempt budget");
}

LiftedScc lift_to_blocks(const SpaceParams& P, const SccCert& cert, const BlockSeq& blocks, const NormFn& norm_fn) {
    if (cert.coeffs.size() != blocks.size())
        throw input_error("lift_to_blocks: " + std::to_string(cert.coeffs.size()) + " separators vs " +
                          std::to_string(blocks.size()) + " blocks");
    SpVec combo;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        std::int64_t l = cert.coeffs[i].first;
        if (blocks[i].max_index() > l)
            throw input_error("lift_to_blocks: separator l_" + std::to_string(i + 1) + " = " + std::to_string(l) +
                              " lies below its block (supp x <= l violated)");
        if (i + 1 < blocks.size() && blocks[i + 1].min_index() <= l)
            throw input_error("lift_to_blocks: separator l_" + std::to_string(i + 1) + " = " + std::to_string(l) +
                              " does not precede the next block");
        combo = combo.plus(blocks[i].scaled(cert.coeffs[i].second));
    }
    LiftedScc out{combo, cert, Rat(0), false};
    NormResult nr = norm_fn(combo);
    out.norm = nr.value;
    out.normalized = out.norm >= Rat(1, 2);
    (void)P;
    return out;
}

NormalizedScc find_normalized_scc(const SpaceParams& P, const BlockSeq& blocks, int j, const Rat& eps,
                                  const NormFn& norm_fn, BudgetGauge* gauge) {
    if (j < 1 || j >= static_cast<int>(P.num_classes())) throw input_error("find_normalized_scc: class out of range");
    const auto& cls = P.cls(static_cast<std::size_t>(j));
    if (!cls.layer_family)
        throw input_error("find_normalized_scc: preset " + P.name + " has no layer recipe for class " +
                          std::to_string(j));
    {
        Int pow2 = Int(1) << static_cast<unsigned>(std::min<std::int64_t>(cls.rounds, 62));
        if (!(2 * cls.m < pow2))
            throw input_error("find_normalized_scc: preset lacks the relation 2 m_j < 2^{l_j} for class " +
                              std::to_string(j));
    }
    BudgetGauge local;
    BudgetGauge& g = gauge ? *gauge : local;

    auto layer_facts = family_facts(cls.layer_family);
    std::vector<SpVec> current(blocks.blocks());
    std::vector<SpVec> scaled_history;

    for (int round = 1; round <= cls.rounds; ++round) {
        std::vector<SpVec> next;
        std::size_t pos = 0;
        while (pos < current.size()) {
            g.tick();
            // collect a group whose separators form a layer-family member
            FamilyMatcher mm(cls.layer_family, static_cast<std::int64_t>(current.size()));
            auto st = mm.initial();
            std::vector<SpVec> group;
            std::vector<std::int64_t> seps;
            while (pos < current.size()) {
                std::int64_t sep = current[pos].max_index();
                auto st2 = mm.feed(st, sep);
                if (!FamilyMatcher::alive(st2)) break;
                if (layer_facts.position_free && static_cast<std::int64_t>(group.size()) >= layer_facts.card_cap)
                    break;
                st = st2;
                group.push_back(current[pos]);
                seps.push_back(sep);
                ++pos;
            }
            if (group.size() < 2) {
                if (next.empty() && pos >= current.size())
                    throw resource_error("index", 0, "find_normalized_scc: not enough blocks to form a layer");
                break;
            }
            std::vector<std::pair<std::int64_t, Rat>> coeffs;
            for (auto sp : seps) coeffs.emplace_back(sp, Rat(1, static_cast<std::int64_t>(seps.size())));
            SccCert cert = verify_basic_scc(P, coeffs, eps, j, &g);
            if (!cert.verified)
                throw input_error("find_normalized_scc: layer basic s.c.c. failed verification (eps " +
                                  format_rat(eps) + " too tight for preset " + P.name + "?)");
            SpVec combo;
            for (std::size_t i = 0; i < group.size(); ++i)
                combo = combo.plus(group[i].scaled(coeffs[i].second));
            NormResult nr = norm_fn(combo);
            if (nr.value >= Rat(1, 2)) {
                NormalizedScc out{combo, cert, nr.value, round, group};
                return out;
            }
            // rescale to norm 1 and promote to the next layer
            next.push_back(combo.scaled(Rat(1) / nr.value));
        }
        current = std::move(next);
        if (current.size() < 2 && round < cls.rounds)
            throw resource_error("index", 0, "find_normalized_scc: ran out of blocks after round " +
                                                 std::to_string(round));
    }
    throw internal_error("find_normalized_scc: no normalized s.c.c. within l_j = " + std::to_string(cls.rounds) +
                         " rounds; the preset record is inconsistent with the search guarantee");
}

SpVec RisCert::combination() const {
    SpVec sum;
    for (std::size_t k = 0; k < blocks.size(); ++k) sum = sum.plus(blocks[k].scaled(coeffs[k].second));
    return sum;
}

RisCert build_ris(const SpaceParams& P, int j, int n_blocks, IndexStream& D, bool shallow, const Rat& eps_blocks,
                  BudgetGauge* gauge) {
    if (n_blocks < 2) throw input_error("build_ris: need at least 2 blocks");
    BudgetGauge local;
    BudgetGauge& g = gauge ? *gauge : local;
    RisCert cert;
    cert.j = j;
    cert.eps = Rat(1);
    cert.shallow = shallow;
    cert.preset_fingerprint = P.fingerprint();

    NormFn K_norm = [&](const SpVec& v) { return certify_norm(P, v, &g); };

    int prev_weight = 0;
    std::int64_t cursor = 1;
    for (int k = 0; k < n_blocks; ++k) {
        // choose 2 j_k: first recipe class above j + 2 (k = 0) or above the
        // previous weight with enough ratio for the measured l1 of y_{k-1}
        int weight = -1;
        for (int c = (k == 0 ? j + 3 : prev_weight + 1); c < static_cast<int>(P.num_classes()); ++c) {
            if (c % 2 != 0) continue;
            const auto& cc = P.cls(static_cast<std::size_t>(c));
            if (!shallow && !cc.layer_family) continue;
            if (k > 0) {
                Rat ratio = Rat(cc.m, P.cls(static_cast<std::size_t>(c) - 1).m);
                if (!(cert.block_l1.back() <= ratio)) continue;
            }
            weight = c;
            break;
        }
        if (weight < 0)
            throw resource_error("index", 0,
                                 "build_ris: no usable even class above " +
                                     std::to_string(k == 0 ? j + 2 : prev_weight) + " on preset " + P.name +
                                     (k > 0 ? " (l1 growth condition)" : ""));
        SpVec y;
        Rat y_norm;
        if (shallow) {
            IndexStream sub = IndexStream::naturals_from(cursor, D.bound());
            SccCert basic = build_basic_scc(P, weight, eps_blocks, sub, &g);
            y = basic.vector();
            y_norm = certify_norm(P, y, &g).value;
        } else {
            // blocks for the layered search: fresh basis vectors
            const auto& cc = P.cls(static_cast<std::size_t>(weight));
            auto lf = family_facts(cc.layer_family);
            std::int64_t breadth = lf.position_free ? lf.card_cap : 8;
            std::int64_t need = 1;
            for (std::int64_t r = 0; r < cc.contained_depth; ++r) need *= breadth;
            std::vector<SpVec> basis;
            for (std::int64_t i = 0; i < need; ++i) {
                std::int64_t idx = D.next(cursor);
                g.need_index(idx);
                cursor = idx + 1;
                basis.push_back(SpVec::basis(idx));
            }
            NormalizedScc ns = find_normalized_scc(P, BlockSeq(std::move(basis)), weight, eps_blocks, K_norm, &g);
            y = ns.scc;
            y_norm = ns.norm;
        }
        cursor = y.max_index() + 1;
        cert.blocks.push_back(y);
        cert.weights.push_back(weight);
        cert.block_norms.push_back(y_norm);
        cert.block_l1.push_back(y.l1());
        prev_weight = weight;
    }

    // coefficients: basic (eps, j)-s.c.c. over the separators l_k = max supp y_k
    std::vector<std::pair<std::int64_t, Rat>> coeffs;
    for (const auto& y : cert.blocks)
        coeffs.emplace_back(y.max_index(), Rat(1, n_blocks));
    SccCert sepcert = verify_basic_scc(P, coeffs, Rat(1, 2), j, &g);
    cert.coeffs = coeffs;
    cert.eps = sepcert.small_norm ? *sepcert.small_norm : Rat(1, 2);

    // condition records
    {
        std::ostringstream chain;
        bool incr = true;
        int prev = j + 2;
        for (int w : cert.weights) {
            if (!(prev < w)) incr = false;
            prev = w;
        }
        cert.checks["b_i_weights_increasing"] = incr ? "pass" : "fail";
        for (std::size_t k = 0; k + 1 < cert.blocks.size(); ++k) {
            Rat ratio = Rat(P.cls(static_cast<std::size_t>(cert.weights[k + 1])).m,
                            P.cls(static_cast<std::size_t>(cert.weights[k + 1]) - 1).m);
            chain.str("");
            chain << "b_iii_l1_block_" << (k + 1);
            cert.checks[chain.str()] = (cert.block_l1[k] <= ratio) ? "pass" : "fail";
        }
        for (std::size_t k = 0; k < cert.blocks.size(); ++k) {
            std::ostringstream key;
            key << "b_ii_normalized_block_" << (k + 1);
            cert.checks[key.str()] = shallow ? "shallow" : (cert.block_norms[k] >= Rat(1, 2) ? "pass" : "fail");
            std::ostringstream tgt;
            tgt << "b_ii_eps_target_block_" << (k + 1);
            const Int& m = P.cls(static_cast<std::size_t>(cert.weights[k])).m;
            Rat paper_eps = Rat(Int(1), m * m * m * m);
            cert.checks[tgt.str()] = (eps_blocks <= paper_eps) ? "pass" : "relaxed";
        }
        cert.checks["a_separator_scc"] = sepcert.verified ? "pass" : "fail";
        const Int& mj = P.cls(static_cast<std::size_t>(j)).m;
        Rat paper_eps_outer = Rat(Int(1), mj * mj * mj * mj);
        cert.checks["a_eps_target"] = (cert.eps < paper_eps_outer) ? "pass" : "relaxed";
    }
    return cert;
}

} // namespace tsilab
