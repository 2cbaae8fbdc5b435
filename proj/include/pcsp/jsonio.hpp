#pragma once

#include <optional>

#include "json.hpp"
#include "pcsp/axioms.hpp"
#include "pcsp/logic.hpp"
#include "pcsp/resolutions.hpp"
#include "pcsp/simulation.hpp"

namespace pcsp {

using Json = nlohmann::json;

// Exact rationals travel as "num/den" strings; JSON numbers would round.
Json rat_json(const Rat& q);
Json vec_json(const Vec& v);
Json dist_json(const Plts& g, const Dist& d);
Json outcome_json(const OutcomeSet& o);
Json chain_json(const Plts& g, const Chain& ch);
Json plts_json(Plts& g, const Dist& init);

Json resolution_json(const Plts& g, const Resolution& r);
// States are term strings, resolved against (and interned into) the graph.
std::optional<Resolution> resolution_from_json(Plts& g, const Json& j);

Json certificate_json(const Plts& g, const SimCertificate& c);
Json chartest_json(const CharTest& ct);

Json derivation_json(const Derivation& d);
std::optional<Derivation> derivation_from_json(const Json& j);

}  // namespace pcsp
