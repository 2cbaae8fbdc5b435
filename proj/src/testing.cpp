#include "pcsp/testing.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace pcsp {

TestApplication apply_test(TermPtr test, TermPtr process,
                           const std::vector<std::string>* alphabet,
                           const std::vector<std::string>* omega) {
  Classified ct = classify(test);
  if (omega) {
    if (omega->empty())
      throw std::runtime_error("apply_test: empty success list");
    for (const auto& w : ct.omega)
      if (std::find(omega->begin(), omega->end(), w) == omega->end())
        throw std::runtime_error("apply_test: test uses a success action "
                                 "missing from the supplied list");
  } else if (ct.cls == TermClass::Process) {
    throw std::runtime_error("apply_test: no success action in test");
  }
  Classified cp = classify(process);
  if (cp.cls != TermClass::Process)
    throw std::runtime_error("apply_test: success action in process");
  std::vector<std::string> act;
  if (alphabet) {
    act = *alphabet;
  } else {
    act = visible_actions(test);
    for (const auto& a : visible_actions(process)) act.push_back(a);
  }
  std::sort(act.begin(), act.end());
  act.erase(std::unique(act.begin(), act.end()), act.end());
  TestApplication app;
  app.graph = std::make_shared<Plts>(act);
  app.test = test;
  app.process = process;
  app.composition = mk_par(act, test, process);
  app.init = app.graph->build(app.composition);
  app.omega = omega ? *omega : ct.omega;
  return app;
}

namespace {

// All expected values over d for a set-valued function on states.
std::vector<Rat> expected_choices(
    const Dist& d, const std::function<const std::vector<Rat>&(int)>& at) {
  std::set<Rat> acc{rat(0)};
  for (const auto& [s, p] : d) {
    const std::vector<Rat>& vals = at(s);
    std::set<Rat> next;
    for (const Rat& a : acc)
      for (const Rat& v : vals) next.insert(a + p * v);
    acc = std::move(next);
  }
  return {acc.begin(), acc.end()};
}

std::vector<Vec> to_points(const std::vector<Rat>& vals) {
  std::vector<Vec> pts;
  pts.reserve(vals.size());
  for (const Rat& v : vals) pts.push_back({v});
  return pts;
}

void require_scalar(const TestApplication& app) {
  if (app.omega != std::vector<std::string>{"w"})
    throw std::runtime_error("scalar results need a scalar test");
}

}  // namespace

const std::vector<Rat>& results_state_at(TestApplication& app, int s) {
  if (auto it = app.vstate.find(s); it != app.vstate.end()) return it->second;
  Plts& g = *app.graph;
  std::set<Rat> acc;
  if (g.enables(s, "w")) {
    acc.insert(rat(1));
  } else {
    auto trs = g.step(s);
    if (trs.empty()) {
      acc.insert(rat(0));
    } else {
      for (const auto& tr : trs)
        for (const Rat& v : expected_choices(
                 tr.target,
                 [&](int t) -> const std::vector<Rat>& {
                   return results_state_at(app, t);
                 }))
          acc.insert(v);
    }
  }
  return app.vstate.emplace(s, std::vector<Rat>(acc.begin(), acc.end()))
      .first->second;
}

const std::vector<Rat>& results_action_at(TestApplication& app, int s) {
  if (auto it = app.vaction.find(s); it != app.vaction.end())
    return it->second;
  Plts& g = *app.graph;
  std::set<Rat> acc;
  auto trs = g.step(s);
  if (trs.empty()) {
    acc.insert(rat(0));
  } else {
    for (const auto& tr : trs) {
      if (tr.label == "w") {
        acc.insert(rat(1));
        continue;
      }
      for (const Rat& v : expected_choices(
               tr.target,
               [&](int t) -> const std::vector<Rat>& {
                 return results_action_at(app, t);
               }))
        acc.insert(v);
    }
  }
  return app.vaction.emplace(s, std::vector<Rat>(acc.begin(), acc.end()))
      .first->second;
}

OutcomeSet results_vector_of(TestApplication& app, const Dist& d) {
  std::vector<std::pair<Rat, OutcomeSet>> parts;
  for (const auto& [t, p] : d)
    parts.push_back({p, results_vector_at(app, t)});
  return minkowski_mix(parts);
}

const OutcomeSet& results_vector_at(TestApplication& app, int s) {
  if (auto it = app.vvector.find(s); it != app.vvector.end())
    return it->second;
  Plts& g = *app.graph;
  std::vector<Vec> pts;
  auto trs = g.step(s);
  if (trs.empty()) {
    pts.push_back(Vec(app.omega.size(), rat(0)));
  } else {
    for (const auto& tr : trs) {
      OutcomeSet inner = results_vector_of(app, tr.target);
      inner = apply_success(tr.label, inner);
      for (auto& p : inner.points) pts.push_back(std::move(p));
    }
  }
  return app.vvector.emplace(s, hull_set(app.omega, std::move(pts)))
      .first->second;
}

OutcomeSet results_state(TestApplication& app) {
  require_scalar(app);
  return raw_set({"w"}, to_points(expected_choices(
                            app.init, [&](int s) -> const std::vector<Rat>& {
                              return results_state_at(app, s);
                            })));
}

OutcomeSet results_action(TestApplication& app) {
  require_scalar(app);
  return raw_set({"w"}, to_points(expected_choices(
                            app.init, [&](int s) -> const std::vector<Rat>& {
                              return results_action_at(app, s);
                            })));
}

OutcomeSet results_vector(TestApplication& app) {
  return results_vector_of(app, app.init);
}

TermPtr state_to_action_test(TermPtr t) {
  switch (t->op) {
    case Op::Nil:
      return t;
    case Op::Prefix: {
      if (is_success_action(t->act)) {
        TermPtr w0 = mk_prefix(t->act, mk_nil());
        return mk_intern(w0, w0);
      }
      return mk_prefix(t->act, state_to_action_test(t->l));
    }
    case Op::Intern:
      return mk_intern(state_to_action_test(t->l), state_to_action_test(t->r));
    case Op::Extern:
      return mk_extern(state_to_action_test(t->l), state_to_action_test(t->r));
    case Op::Par:
      return mk_par(t->sync, state_to_action_test(t->l),
                    state_to_action_test(t->r));
    case Op::Prob:
      return mk_prob(t->prob, state_to_action_test(t->l),
                     state_to_action_test(t->r));
  }
  return t;
}

bool test_order(TestKind kind, TestFlavour flavour, TermPtr t, TermPtr p,
                TermPtr q) {
  std::vector<std::string> act = visible_actions(t);
  for (const auto& a : visible_actions(p)) act.push_back(a);
  for (const auto& a : visible_actions(q)) act.push_back(a);
  std::sort(act.begin(), act.end());
  act.erase(std::unique(act.begin(), act.end()), act.end());
  TestApplication ap = apply_test(t, p, &act);
  TestApplication aq = apply_test(t, q, &act);
  auto results = [&](TestApplication& app) {
    switch (flavour) {
      case TestFlavour::State:
        return results_state(app);
      case TestFlavour::Action:
        return results_action(app);
      default:
        return results_vector(app);
    }
  };
  OutcomeSet x = results(ap), y = results(aq);
  return compare(kind == TestKind::May ? OrderKind::Hoare : OrderKind::Smyth,
                 x, y);
}

}  // namespace pcsp
