#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pcsp/axioms.hpp"
#include "pcsp/corpus.hpp"
#include "pcsp/jsonio.hpp"
#include "pcsp/logic.hpp"
#include "pcsp/resolutions.hpp"
#include "pcsp/simulation.hpp"
#include "pcsp/testing.hpp"

using namespace pcsp;

namespace {

struct Usage : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  bool json = false;
  uint64_t seed = 0;
  int max_depth = 3;
  std::vector<std::string> alphabet;
};

std::string slurp_or_self(const std::string& arg) {
  std::ifstream in(arg);
  if (!in.good()) return arg;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TermPtr load_term(const std::string& arg) {
  return desugar(parse_term(slurp_or_self(arg)));
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

Vec parse_vec(const std::string& s) {
  Vec v;
  for (const auto& part : split_csv(s)) {
    auto q = rat_parse(part);
    if (!q) throw Usage("not a rational: " + part);
    v.push_back(*q);
  }
  return v;
}

std::vector<std::string> graph_alphabet(const Options& opt,
                                        const std::vector<TermPtr>& terms) {
  std::set<std::string> acts(opt.alphabet.begin(), opt.alphabet.end());
  for (TermPtr t : terms)
    for (const auto& a : visible_actions(t)) {
      if (!opt.alphabet.empty() && !acts.count(a))
        throw Usage("action " + a + " outside --alphabet");
      acts.insert(a);
    }
  return {acts.begin(), acts.end()};
}

std::string vec_str(const Vec& v) {
  std::string s = "(";
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += rat_str(v[i]);
  }
  return s + ")";
}

std::string outcome_str(const OutcomeSet& o) {
  std::string s = o.mode == SetMode::ConvexVertices ? "hull{" : "set{";
  for (size_t i = 0; i < o.points.size(); ++i) {
    if (i) s += ", ";
    s += vec_str(o.points[i]);
  }
  return s + "}";
}

void emit(const Options& opt, const Json& j, const std::string& text) {
  if (opt.json)
    std::cout << j.dump(2) << "\n";
  else
    std::cout << text;
}

const char* cls_name(TermClass c) {
  switch (c) {
    case TermClass::Process:
      return "process";
    case TermClass::ScalarTest:
      return "scalar test";
    case TermClass::VectorTest:
      return "vector test";
  }
  return "?";
}

int cmd_parse(const Options& opt, const std::vector<std::string>& srcs) {
  Json items = Json::array();
  std::string text;
  for (const auto& src : srcs) {
    std::string body = slurp_or_self(src);
    TermPtr t;
    try {
      t = desugar(parse_term(body));
    } catch (const ParseError& e) {
      std::cerr << "parse error at offset " << e.pos << ": " << e.what()
                << "\n";
      return 1;
    }
    Classified c = classify(t);
    items.push_back({{"term", term_str(t)},
                     {"class", cls_name(c.cls)},
                     {"omega", c.omega},
                     {"size", t->size}});
    text += term_str(t) + "\n  " + cls_name(c.cls);
    if (!c.omega.empty()) {
      text += ", success actions:";
      for (const auto& w : c.omega) text += " " + w;
    }
    text += ", size " + std::to_string(t->size) + "\n";
  }
  emit(opt, items, text);
  return 0;
}

int cmd_lts(const Options& opt, const std::string& src) {
  TermPtr t = load_term(src);
  Plts g(graph_alphabet(opt, {t}));
  Dist init = g.build(t);
  Json j = plts_json(g, init);
  std::string text = "alphabet:";
  for (const auto& a : g.alphabet()) text += " " + a;
  text += "\ninit: ";
  for (const auto& [s, p] : init)
    text += rat_str(p) + "*[" + std::to_string(s) + "] ";
  text += "\n";
  for (int s = 0; s < g.num_states(); ++s) {
    text += "[" + std::to_string(s) + "] " + term_str(g.state(s)) + "\n";
    auto trs = g.step(s);
    for (const auto& tr : trs) {
      text += "    --" + (tr.label.empty() ? "tau" : tr.label) + "--> ";
      for (const auto& [t2, p] : tr.target)
        text += rat_str(p) + "*[" + std::to_string(t2) + "] ";
      text += "\n";
    }
  }
  emit(opt, j, text);
  return 0;
}

int cmd_apply(const Options& opt, const std::string& tsrc,
              const std::string& psrc) {
  TermPtr t = load_term(tsrc);
  TermPtr p = load_term(psrc);
  TestApplication app = apply_test(t, p);
  Json j = plts_json(*app.graph, app.init);
  j["composition"] = term_str(app.composition);
  j["omega"] = app.omega;
  std::string text = "composition: " + term_str(app.composition) + "\n";
  text += "states: " + std::to_string(app.graph->num_states()) + "\n";
  emit(opt, j, text);
  return 0;
}

TestFlavour flavour_of(const std::string& s) {
  if (s == "state") return TestFlavour::State;
  if (s == "action") return TestFlavour::Action;
  if (s == "vector") return TestFlavour::Vector;
  throw Usage("unknown flavour: " + s);
}

OutcomeSet run_flavour(TestApplication& app, TestFlavour f) {
  switch (f) {
    case TestFlavour::State:
      return results_state(app);
    case TestFlavour::Action:
      return results_action(app);
    default:
      return results_vector(app);
  }
}

int cmd_outcomes(const Options& opt, const std::string& flavour,
                 const std::string& tsrc, const std::string& psrc) {
  TermPtr t = load_term(tsrc);
  TermPtr p = load_term(psrc);
  TestApplication app = apply_test(t, p);
  OutcomeSet o = run_flavour(app, flavour_of(flavour));
  emit(opt, outcome_json(o), outcome_str(o) + "\n");
  return 0;
}

int cmd_order(const Options& opt, const std::string& kind,
              const std::string& flavour, const std::string& tsrc,
              const std::string& psrc, const std::string& qsrc) {
  if (kind != "may" && kind != "must") throw Usage("kind must be may or must");
  TermPtr t = load_term(tsrc);
  TermPtr p = load_term(psrc);
  TermPtr q = load_term(qsrc);
  TestFlavour f = flavour_of(flavour);
  TestKind k = kind == "may" ? TestKind::May : TestKind::Must;
  bool verdict = test_order(k, f, t, p, q);
  std::vector<std::string> omega = classify(t).omega;
  TestApplication ap = apply_test(t, p, nullptr, &omega);
  TestApplication aq = apply_test(t, q, nullptr, &omega);
  OutcomeSet op = run_flavour(ap, f);
  OutcomeSet oq = run_flavour(aq, f);
  Json j = {{"kind", kind},
            {"flavour", flavour},
            {"verdict", verdict},
            {"left", outcome_json(op)},
            {"right", outcome_json(oq)}};
  std::string text = "left:  " + outcome_str(op) + "\nright: " +
                     outcome_str(oq) + "\nverdict: " +
                     (verdict ? "true" : "false") + "\n";
  emit(opt, j, text);
  return verdict ? 0 : 1;
}

int cmd_sim(const Options& opt, bool must, const std::string& psrc,
            const std::string& qsrc) {
  TermPtr p = load_term(psrc);
  TermPtr q = load_term(qsrc);
  bool verdict = must ? fsim_leq(p, q) : sim_leq(p, q);
  Json j = {{"kind", must ? "failure-simulation" : "simulation"},
            {"verdict", verdict}};
  std::string text = std::string(must ? "fsim" : "sim") + ": " +
                     (verdict ? "true" : "false") + "\n";
  if (!verdict) {
    FormulaPtr d = distinguishing_formula(
        p, q, must ? SimKind::FailureSimulation : SimKind::Simulation);
    if (d) {
      CharTest ct = char_test(d);
      j["distinguishing_formula"] = formula_str(d);
      j["characteristic_test"] = chartest_json(ct);
      text += "distinguishing formula: " + formula_str(d) + "\n";
      text += "characteristic test: " + term_str(ct.test) + "  target " +
              vec_str(ct.target) + "\n";
    }
  }
  emit(opt, j, text);
  return verdict ? 0 : 1;
}

int cmd_logic(const Options& opt, const std::string& fsrc,
              const std::string& psrc) {
  FormulaPtr f = formula_parse(slurp_or_self(fsrc));
  TermPtr p = load_term(psrc);
  std::vector<TermPtr> terms{p};
  std::set<std::string> acts;
  for (const auto& a : graph_alphabet(opt, terms)) acts.insert(a);
  // formula actions join the alphabet so satisfaction is well posed
  std::vector<FormulaPtr> stack{f};
  while (!stack.empty()) {
    FormulaPtr g = stack.back();
    stack.pop_back();
    if (g->op == FOp::Diamond) acts.insert(g->act);
    for (const auto& x : g->refusal) acts.insert(x);
    for (FormulaPtr k : g->kids) stack.push_back(k);
  }
  Plts g(std::vector<std::string>(acts.begin(), acts.end()));
  Dist d = g.build(p);
  auto w = sat(g, d, f);
  Json j = {{"formula", formula_str(f)},
            {"process", term_str(p)},
            {"verdict", w.has_value()}};
  std::string text = std::string("sat: ") + (w ? "true" : "false") + "\n";
  emit(opt, j, text);
  return w ? 0 : 1;
}

int cmd_charform(const Options& opt, const std::string& logic,
                 const std::string& psrc) {
  if (logic != "L" && logic != "F") throw Usage("logic must be L or F");
  TermPtr p = load_term(psrc);
  Plts g(graph_alphabet(opt, {p}));
  FormulaPtr f = char_formula(g, g.build(p), logic == "L" ? Logic::L : Logic::F);
  emit(opt, Json{{"formula", formula_str(f)}}, formula_str(f) + "\n");
  return 0;
}

int cmd_chartest(const Options& opt, const std::string& fsrc) {
  FormulaPtr f = formula_parse(slurp_or_self(fsrc));
  CharTest ct = char_test(f);
  std::string text = "test: " + term_str(ct.test) + "\ntarget: " +
                     vec_str(ct.target) + "\n";
  emit(opt, chartest_json(ct), text);
  return 0;
}

std::string step_str(const Step& s) {
  std::string out = std::string(axiom_name(s.id)) + (s.forward ? "" : "^-1") +
                    " @";
  if (s.path.empty()) out += " root";
  for (int i : s.path) out += i == 0 ? " l" : " r";
  for (TermPtr a : s.aux) out += "  [" + term_str(a) + "]";
  return out;
}

std::string derivation_text(Theory th, const Derivation& d) {
  std::string text = term_str(d.src) + "\n";
  TermPtr cur = d.src;
  for (const Step& s : d.steps) {
    auto nt = apply_step(th, cur, s);
    if (!nt) throw std::logic_error("derivation replay failed");
    cur = *nt;
    text += "  = " + term_str(cur) + "    (" + step_str(s) + ")\n";
  }
  return text;
}

Theory theory_of(const std::string& s) {
  if (s == "eq") return Theory::Eq;
  if (s == "may") return Theory::May;
  if (s == "must") return Theory::Must;
  throw Usage("theory must be eq, may or must");
}

int cmd_normalize(const Options& opt, const std::string& psrc) {
  TermPtr p = load_term(psrc);
  Derivation d = normal_form(p);
  if (!is_normal_form(d.dst) || !check_derivation(Theory::Eq, d))
    throw std::logic_error("normal form derivation does not replay");
  Json j = derivation_json(d);
  j["normal_form"] = term_str(d.dst);
  emit(opt, j,
       derivation_text(Theory::Eq, d) + "normal form: " + term_str(d.dst) +
           "\n");
  return 0;
}

int cmd_prove(const Options& opt, const std::string& theory,
              const std::string& psrc, const std::string& qsrc,
              const std::string& check_file) {
  Theory th = theory_of(theory);
  TermPtr p = load_term(psrc);
  TermPtr q = load_term(qsrc);
  if (!check_file.empty()) {
    std::ifstream in(check_file);
    if (!in.good()) throw Usage("cannot read " + check_file);
    Json j;
    try {
      in >> j;
    } catch (const Json::exception& e) {
      throw Usage(std::string("bad derivation file: ") + e.what());
    }
    auto d = derivation_from_json(j);
    bool ok = d && d->src == p && d->dst == q && check_derivation(th, *d);
    emit(opt, Json{{"verdict", ok}},
         std::string("derivation ") + (ok ? "valid" : "invalid") + "\n");
    return ok ? 0 : 1;
  }
  auto d = synth_derivation(th, p, q);
  if (!d) {
    emit(opt, Json{{"verdict", false}}, "no derivation: order does not hold\n");
    return 1;
  }
  if (!check_derivation(th, *d))
    throw std::logic_error("synthesised derivation does not replay");
  Json j = derivation_json(*d);
  j["verdict"] = true;
  emit(opt, j, derivation_text(th, *d));
  return 0;
}

int cmd_resolutions(const Options& opt, const std::string& tsrc,
                    const std::string& psrc, const std::string& target,
                    const std::string& check_file) {
  TermPtr t = load_term(tsrc);
  TermPtr p = load_term(psrc);
  TestApplication app = apply_test(t, p);
  if (!check_file.empty()) {
    std::ifstream in(check_file);
    if (!in.good()) throw Usage("cannot read " + check_file);
    Json j;
    try {
      in >> j;
    } catch (const Json::exception& e) {
      throw Usage(std::string("bad resolution file: ") + e.what());
    }
    auto r = resolution_from_json(*app.graph, j);
    bool ok = r && check_resolution(*app.graph, *r, app.init);
    Json out = {{"verdict", ok}};
    if (ok) out["w"] = vec_json(w_of(*r, app.omega));
    emit(opt, out, std::string("resolution ") + (ok ? "valid" : "invalid") + "\n");
    return ok ? 0 : 1;
  }
  if (!target.empty()) {
    Vec v = parse_vec(target);
    auto r = synthesize_resolution(app, app.init, v);
    if (!r) {
      emit(opt, Json{{"verdict", false}},
           "target outside the result set\n");
      return 1;
    }
    if (!check_resolution(*app.graph, *r, app.init) ||
        w_of(*r, app.omega) != v)
      throw std::logic_error("synthesised resolution does not check");
    Json j = resolution_json(*app.graph, *r);
    j["w"] = vec_json(v);
    emit(opt, j,
         "resolution with " + std::to_string(r->nodes.size()) +
             " nodes realises " + vec_str(v) + "\n");
    return 0;
  }
  auto all = enumerate_deterministic_resolutions(*app.graph, app.init);
  Json items = Json::array();
  std::string text =
      "deterministic resolutions: " + std::to_string(all.size()) + "\n";
  for (const auto& r : all) {
    Vec w = w_of(r, app.omega);
    items.push_back({{"nodes", r.nodes.size()}, {"w", vec_json(w)}});
    text += "  " + vec_str(w) + "  (" + std::to_string(r.nodes.size()) +
            " nodes)\n";
  }
  emit(opt, Json{{"count", all.size()}, {"resolutions", items}}, text);
  return 0;
}

int cmd_corpus(const Options& opt, const std::string& kind, int count,
               const std::string& logic) {
  std::vector<std::string> alphabet =
      opt.alphabet.empty() ? std::vector<std::string>{"a", "b"} : opt.alphabet;
  Rng rng(opt.seed);
  Json items = Json::array();
  std::string text;
  for (int i = 0; i < count; ++i) {
    std::string s;
    if (kind == "process")
      s = term_str(gen_process(rng, alphabet, opt.max_depth));
    else if (kind == "ncsp")
      s = term_str(gen_ncsp(rng, alphabet, opt.max_depth));
    else if (kind == "test")
      s = term_str(gen_test(rng, alphabet, opt.max_depth));
    else if (kind == "formula")
      s = formula_str(gen_formula(rng, alphabet, opt.max_depth,
                                  logic == "L" ? Logic::L : Logic::F));
    else
      throw Usage("unknown corpus kind: " + kind);
    items.push_back(s);
    text += s + "\n";
  }
  emit(opt, items, text);
  return 0;
}

// The simulation relation read off a satisfaction witness for a
// characteristic formula: each state of the described distribution pairs
// with the (normalised) mass of the witness node that spoke for it,
// walking the formula the way it was built.
struct Harvest {
  Plts& g;
  Logic kind;
  std::set<std::pair<int, Dist>> pairs;

  static const SatWitness* conjunct(const SatWitness& w, FormulaPtr want) {
    if (w.f == want) return &w;
    if (w.f->op == FOp::Conj)
      for (size_t i = 0; i < w.f->kids.size(); ++i)
        if (w.f->kids[i] == want) return &w.kids[i];
    return nullptr;
  }

  void dist(const Dist& d, const SatWitness& w) {
    size_t i = 0;
    for (const auto& [s, p] : d) state(s, w.kids[i++]);
  }

  void state(int s, const SatWitness& w) {
    if (w.delta.empty()) return;
    Dist norm = w.delta;
    Rat m = dist_mass(norm);
    for (auto& [u, p] : norm) p /= m;
    if (!pairs.insert({s, std::move(norm)}).second) return;
    auto trs = g.step(s);
    for (const auto& tr : trs) {
      FormulaPtr fd = char_formula(g, tr.target, kind);
      const SatWitness* k = tr.label.empty()
                                ? conjunct(w, fd)
                                : conjunct(w, f_diamond(tr.label, fd));
      if (!k) throw std::logic_error("characteristic conjunct missing");
      dist(tr.target, tr.label.empty() ? *k : k->kids[0]);
    }
  }
};

bool certificate_route(Plts& g, const Dist& dl, const Dist& dr, Logic kind) {
  // dl's characteristic formula satisfied by dr, as in the logic route.
  FormulaPtr f = char_formula(g, dl, kind);
  auto w = sat(g, dr, f);
  if (!w) return false;
  Harvest h{g, kind, {}};
  h.dist(dl, *w);
  auto cert = complete_certificate(
      g,
      kind == Logic::L ? SimKind::Simulation : SimKind::FailureSimulation,
      std::vector<std::pair<int, Dist>>(h.pairs.begin(), h.pairs.end()));
  return cert && check_certificate(g, *cert);
}

int cmd_crosscheck(const Options& opt, int count,
                   const std::vector<std::string>& srcs) {
  Rng rng(opt.seed);
  std::vector<std::string> alphabet =
      opt.alphabet.empty() ? std::vector<std::string>{"a", "b"} : opt.alphabet;
  std::vector<TermPtr> procs;
  for (const auto& s : srcs) procs.push_back(load_term(s));
  while (static_cast<int>(procs.size()) < count)
    procs.push_back(gen_process(rng, alphabet, opt.max_depth, false));
  int failures = 0;
  std::string text;

  // vertex sets through resolutions against the geometric route
  int res_ok = 0;
  for (int i = 0; i < count; ++i) {
    TermPtr t = gen_test(rng, alphabet, opt.max_depth, 2);
    TermPtr p = procs[static_cast<size_t>(i % procs.size())];
    TestApplication app = apply_test(t, p);
    OutcomeSet direct = results_vector(app);
    OutcomeSet viares = w_set(app, app.init);
    if (direct.points == viares.points) {
      ++res_ok;
    } else {
      ++failures;
      text += "resolution route differs on test " + term_str(t) +
              " process " + term_str(p) + "\n";
    }
  }

  // satisfaction against the characteristic-test query
  int sat_ok = 0;
  for (int i = 0; i < count; ++i) {
    Logic kind = (i % 2 == 0) ? Logic::F : Logic::L;
    FormulaPtr f = gen_formula(rng, alphabet, std::min(opt.max_depth, 3), kind);
    TermPtr p = procs[static_cast<size_t>(i % procs.size())];
    std::set<std::string> acts(alphabet.begin(), alphabet.end());
    for (const auto& a : visible_actions(p)) acts.insert(a);
    Plts g(std::vector<std::string>(acts.begin(), acts.end()));
    bool via_sat = sat(g, g.build(p), f).has_value();
    CharTest ct = char_test(f);
    bool via_test = char_test_holds(p, ct, Dir::Le);
    bool ok = via_sat == via_test;
    if (ok && kind == Logic::L)
      ok = via_sat == char_test_holds(p, ct, Dir::Ge);
    if (ok) {
      ++sat_ok;
    } else {
      ++failures;
      text += "characteristic test differs on " + formula_str(f) +
              " vs " + term_str(p) + "\n";
    }
  }

  // formula-decided preorders against discharged certificates
  int cert_ok = 0;
  for (int i = 0; i < count; ++i) {
    TermPtr p = procs[static_cast<size_t>(i % procs.size())];
    TermPtr q = procs[static_cast<size_t>((i + 1) % procs.size())];
    std::set<std::string> acts;
    for (const auto& a : visible_actions(p)) acts.insert(a);
    for (const auto& a : visible_actions(q)) acts.insert(a);
    for (const auto& a : alphabet) acts.insert(a);
    Plts g(std::vector<std::string>(acts.begin(), acts.end()));
    Dist dp = g.build(p);
    Dist dq = g.build(q);
    bool ok = true;
    if (sim_leq(p, q) != certificate_route(g, dp, dq, Logic::L)) ok = false;
    if (fsim_leq(p, q) != certificate_route(g, dq, dp, Logic::F)) ok = false;
    if (ok) {
      ++cert_ok;
    } else {
      ++failures;
      text += "certificate route differs on " + term_str(p) + " vs " +
              term_str(q) + "\n";
    }
  }

  Json j = {{"resolution_route", res_ok},
            {"characteristic_test", sat_ok},
            {"certificate_route", cert_ok},
            {"failures", failures}};
  text += "resolution route: " + std::to_string(res_ok) + "/" +
          std::to_string(count) + "\n";
  text += "characteristic test: " + std::to_string(sat_ok) + "/" +
          std::to_string(count) + "\n";
  text += "certificate route: " + std::to_string(cert_ok) + "/" +
          std::to_string(count) + "\n";
  emit(opt, j, text);
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"workbench for probabilistic CSP testing preorders"};
  app.require_subcommand(1);

  Options opt;
  std::string format = "text";
  std::string alphabet_csv;
  app.add_option("--format", format, "output format: text or json")
      ->check(CLI::IsMember({"text", "json"}));
  app.add_option("--seed", opt.seed, "seed for generated corpora");
  app.add_option("--alphabet", alphabet_csv, "comma separated action list");
  app.add_option("--max-depth", opt.max_depth, "generator depth bound");

  std::vector<std::string> srcs;
  std::string tsrc, psrc, qsrc, fsrc;
  std::string flavour = "vector", kind = "may", logic = "F", theory = "may";
  std::string target, check_file, corpus_kind = "process";
  bool must = false;
  int count = 25;

  auto* c_parse = app.add_subcommand("parse", "parse and classify terms");
  c_parse->add_option("src", srcs, "term files or literal terms")->required();

  auto* c_lts = app.add_subcommand("lts", "print the transition graph");
  c_lts->add_option("term", psrc)->required();

  auto* c_apply = app.add_subcommand("apply", "compose a test with a process");
  c_apply->add_option("test", tsrc)->required();
  c_apply->add_option("process", psrc)->required();

  auto* c_out = app.add_subcommand("outcomes", "success outcomes of a test");
  c_out->add_option("--flavour", flavour, "state, action or vector");
  c_out->add_option("test", tsrc)->required();
  c_out->add_option("process", psrc)->required();

  auto* c_order = app.add_subcommand("order", "single-test refinement query");
  c_order->add_option("--kind", kind, "may or must")->required();
  c_order->add_option("--flavour", flavour, "state, action or vector");
  c_order->add_option("--test", tsrc, "the test")->required();
  c_order->add_option("p", psrc)->required();
  c_order->add_option("q", qsrc)->required();

  auto* c_sim = app.add_subcommand("sim", "simulation preorder query");
  c_sim->add_flag("--must", must, "failure simulation instead of simulation");
  c_sim->add_option("p", psrc)->required();
  c_sim->add_option("q", qsrc)->required();

  auto* c_logic = app.add_subcommand("logic", "formula satisfaction query");
  c_logic->add_option("--formula", fsrc, "formula file or literal")->required();
  c_logic->add_option("process", psrc)->required();

  auto* c_charform = app.add_subcommand("charform", "characteristic formula");
  c_charform->add_option("--logic", logic, "L or F");
  c_charform->add_option("process", psrc)->required();

  auto* c_chartest = app.add_subcommand("chartest", "characteristic test");
  c_chartest->add_option("formula", fsrc)->required();

  auto* c_norm = app.add_subcommand("normalize", "equational normal form");
  c_norm->add_option("process", psrc)->required();

  auto* c_prove = app.add_subcommand("prove", "derive an inequation");
  c_prove->add_option("--theory", theory, "eq, may or must");
  c_prove->add_option("--check", check_file, "validate a derivation file");
  c_prove->add_option("p", psrc)->required();
  c_prove->add_option("q", qsrc)->required();

  auto* c_res = app.add_subcommand("resolutions", "resolutions of a composition");
  c_res->add_option("--target", target, "success tuple to realise");
  c_res->add_option("--check", check_file, "validate a resolution file");
  c_res->add_option("test", tsrc)->required();
  c_res->add_option("process", psrc)->required();

  auto* c_cross = app.add_subcommand("crosscheck", "independent-route oracles");
  c_cross->add_option("--count", count, "instances per oracle");
  c_cross->add_option("src", srcs, "optional fixed process terms");

  auto* c_corpus = app.add_subcommand("corpus", "seeded sample terms");
  c_corpus->add_option("--kind", corpus_kind, "process, ncsp, test or formula");
  c_corpus->add_option("--count", count, "number of samples");
  c_corpus->add_option("--logic", logic, "L or F for formulas");

  for (CLI::App* sc : app.get_subcommands([](const CLI::App*) { return true; }))
    sc->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  opt.json = format == "json";
  opt.alphabet = split_csv(alphabet_csv);

  try {
    if (app.got_subcommand(c_parse)) return cmd_parse(opt, srcs);
    if (app.got_subcommand(c_lts)) return cmd_lts(opt, psrc);
    if (app.got_subcommand(c_apply)) return cmd_apply(opt, tsrc, psrc);
    if (app.got_subcommand(c_out)) return cmd_outcomes(opt, flavour, tsrc, psrc);
    if (app.got_subcommand(c_order))
      return cmd_order(opt, kind, flavour, tsrc, psrc, qsrc);
    if (app.got_subcommand(c_sim)) return cmd_sim(opt, must, psrc, qsrc);
    if (app.got_subcommand(c_logic)) return cmd_logic(opt, fsrc, psrc);
    if (app.got_subcommand(c_charform)) return cmd_charform(opt, logic, psrc);
    if (app.got_subcommand(c_chartest)) return cmd_chartest(opt, fsrc);
    if (app.got_subcommand(c_norm)) return cmd_normalize(opt, psrc);
    if (app.got_subcommand(c_prove))
      return cmd_prove(opt, theory, psrc, qsrc, check_file);
    if (app.got_subcommand(c_res))
      return cmd_resolutions(opt, tsrc, psrc, target, check_file);
    if (app.got_subcommand(c_cross)) return cmd_crosscheck(opt, count, srcs);
    if (app.got_subcommand(c_corpus))
      return cmd_corpus(opt, corpus_kind, count, logic);
  } catch (const Usage& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "parse error at offset " << e.pos << ": " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::logic_error& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
