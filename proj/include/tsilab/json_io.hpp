#pragma once

#include "tsilab/codebook.hpp"
#include "tsilab/functional.hpp"
#include "tsilab/params.hpp"
#include "tsilab/scc.hpp"
#include "tsilab/vector.hpp"
#include "tsilab/xspace.hpp"
#include "tsilab/xu.hpp"

#include "json.hpp"

namespace tsilab {

using Json = nlohmann::ordered_json;

Json vec_to_json(const SpVec& x);          // [[index, "p/q"], ...]
SpVec vec_from_json(const Json& j);
Json blocks_to_json(const BlockSeq& b);
BlockSeq blocks_from_json(const Json& j);
Json functional_to_json(const Functional& f); // nested, mirrors the serialization
Functional functional_from_json(const Json& j);

/// Custom preset file: {"name":..., "classes":[{"m":"int","family":"expr",
/// "layer":"expr"?,"rounds":n?,"depth":n?}, ...]}
SpaceParams params_from_json(const Json& j);
Json params_to_json(const SpaceParams& p);

Json scc_cert_to_json(const SccCert& c);
Json ris_cert_to_json(const RisCert& c);
Json scc_report_to_json(const SccEstimateReport& r);
Json ris_report_to_json(const RisEstimateReport& r);
Json distort_report_to_json(const DistortReport& r);
Json chain_to_json(const DependentChain& c);
Json hi_report_to_json(const HiReport& r);

} // namespace tsilab
