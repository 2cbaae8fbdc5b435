#include "pcsp/jsonio.hpp"

namespace pcsp {

namespace {

Json iddist_json(const Dist& d) {
  Json out = Json::object();
  for (const auto& [i, p] : d) out[std::to_string(i)] = rat_str(p);
  return out;
}

std::optional<Dist> iddist_from(const Json& j, int limit) {
  if (!j.is_object()) return std::nullopt;
  Dist d;
  for (const auto& [k, v] : j.items()) {
    size_t pos = 0;
    int i = 0;
    try {
      i = std::stoi(k, &pos);
    } catch (...) {
      return std::nullopt;
    }
    if (pos != k.size() || i < 0 || i >= limit) return std::nullopt;
    if (!v.is_string()) return std::nullopt;
    auto q = rat_parse(v.get<std::string>());
    if (!q || *q <= 0) return std::nullopt;
    d[i] = *q;
  }
  return d;
}

}  // namespace

Json rat_json(const Rat& q) { return rat_str(q); }

Json vec_json(const Vec& v) {
  Json out = Json::array();
  for (const Rat& q : v) out.push_back(rat_str(q));
  return out;
}

Json dist_json(const Plts& g, const Dist& d) {
  Json out = Json::array();
  for (const auto& [s, p] : d)
    out.push_back({{"state", term_str(g.state(s))}, {"p", rat_str(p)}});
  return out;
}

Json outcome_json(const OutcomeSet& o) {
  Json pts = Json::array();
  for (const Vec& v : o.points) pts.push_back(vec_json(v));
  return {{"mode", o.mode == SetMode::ConvexVertices ? "hull" : "raw"},
          {"omega", o.omega},
          {"points", pts}};
}

Json chain_json(const Plts& g, const Chain& ch) {
  Json dists = Json::array();
  for (const Dist& d : ch.dists) dists.push_back(dist_json(g, d));
  Json out = {{"dists", dists}};
  if (ch.amark >= 0) out["action_step"] = ch.amark;
  return out;
}

Json plts_json(Plts& g, const Dist& init) {
  Json states = Json::array();
  for (int s = 0; s < g.num_states(); ++s) {
    auto trs = g.step(s);
    Json moves = Json::array();
    for (const auto& tr : trs)
      moves.push_back({{"label", tr.label.empty() ? "tau" : tr.label},
                       {"target", dist_json(g, tr.target)}});
    states.push_back(
        {{"id", s}, {"term", term_str(g.state(s))}, {"moves", moves}});
  }
  return {{"alphabet", g.alphabet()},
          {"states", states},
          {"init", dist_json(g, init)}};
}

Json resolution_json(const Plts& g, const Resolution& r) {
  Json nodes = Json::array();
  for (const auto& n : r.nodes) {
    Json jn = {{"state", term_str(g.state(n.pstate))}};
    if (n.move)
      jn["move"] = {{"label", n.move->first.empty() ? "tau" : n.move->first},
                    {"target", iddist_json(n.move->second)}};
    nodes.push_back(std::move(jn));
  }
  return {{"nodes", nodes}, {"init", iddist_json(r.init)}};
}

std::optional<Resolution> resolution_from_json(Plts& g, const Json& j) {
  if (!j.is_object() || !j.contains("nodes") || !j.contains("init") ||
      !j["nodes"].is_array())
    return std::nullopt;
  Resolution r;
  int n = static_cast<int>(j["nodes"].size());
  for (const Json& jn : j["nodes"]) {
    if (!jn.is_object() || !jn.contains("state") || !jn["state"].is_string())
      return std::nullopt;
    Resolution::Node node;
    try {
      node.pstate = g.intern_state(desugar(parse_term(jn["state"].get<std::string>())));
    } catch (const ParseError&) {
      return std::nullopt;
    }
    if (jn.contains("move")) {
      const Json& jm = jn["move"];
      if (!jm.is_object() || !jm.contains("label") ||
          !jm["label"].is_string() || !jm.contains("target"))
        return std::nullopt;
      std::string label = jm["label"].get<std::string>();
      if (label == "tau") label.clear();
      auto target = iddist_from(jm["target"], n);
      if (!target) return std::nullopt;
      node.move = {std::move(label), std::move(*target)};
    }
    r.nodes.push_back(std::move(node));
  }
  auto init = iddist_from(j["init"], n);
  if (!init) return std::nullopt;
  r.init = std::move(*init);
  return r;
}

Json certificate_json(const Plts& g, const SimCertificate& c) {
  const char* kind = c.kind == SimKind::Simulation
                         ? "simulation"
                         : (c.kind == SimKind::FailureSimulation
                                ? "failure"
                                : "extended-failure");
  Json pairs = Json::array();
  for (const auto& [s, d] : c.pairs)
    pairs.push_back(
        {{"state", term_str(g.state(s))}, {"dist", dist_json(g, d)}});
  Json clauses = Json::array();
  for (const auto& cl : c.clauses) {
    Json jc = {{"pair", cl.pair}, {"chain", chain_json(g, cl.chain)}};
    if (cl.refusal)
      jc["refusal"] = cl.refusal_set;
    else {
      jc["label"] = cl.label.empty() ? "tau" : cl.label;
      jc["post"] = dist_json(g, cl.post);
    }
    clauses.push_back(std::move(jc));
  }
  return {{"kind", kind}, {"pairs", pairs}, {"clauses", clauses}};
}

Json chartest_json(const CharTest& ct) {
  return {{"test", term_str(ct.test)},
          {"target", vec_json(ct.target)},
          {"omega", ct.omega}};
}

Json derivation_json(const Derivation& d) {
  Json steps = Json::array();
  for (const Step& s : d.steps) {
    Json js = {{"path", s.path},
               {"axiom", axiom_name(s.id)},
               {"dir", s.forward ? "fwd" : "back"}};
    if (!s.aux.empty()) {
      Json aux = Json::array();
      for (TermPtr t : s.aux) aux.push_back(term_str(t));
      js["aux"] = std::move(aux);
    }
    steps.push_back(std::move(js));
  }
  return {{"src", term_str(d.src)},
          {"dst", term_str(d.dst)},
          {"steps", steps}};
}

std::optional<Derivation> derivation_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("src") || !j.contains("dst") ||
      !j.contains("steps") || !j["steps"].is_array())
    return std::nullopt;
  Derivation d;
  try {
    d.src = desugar(parse_term(j["src"].get<std::string>()));
    d.dst = desugar(parse_term(j["dst"].get<std::string>()));
    for (const Json& js : j["steps"]) {
      if (!js.is_object() || !js.contains("path") || !js.contains("axiom") ||
          !js.contains("dir"))
        return std::nullopt;
      Step s;
      s.path = js["path"].get<std::vector<int>>();
      auto id = axiom_by_name(js["axiom"].get<std::string>());
      if (!id) return std::nullopt;
      s.id = *id;
      std::string dir = js["dir"].get<std::string>();
      if (dir != "fwd" && dir != "back") return std::nullopt;
      s.forward = dir == "fwd";
      if (js.contains("aux"))
        for (const Json& ja : js["aux"])
          s.aux.push_back(desugar(parse_term(ja.get<std::string>())));
      d.steps.push_back(std::move(s));
    }
  } catch (const ParseError&) {
    return std::nullopt;
  } catch (const Json::exception&) {
    return std::nullopt;
  }
  return d;
}

}  // namespace pcsp
