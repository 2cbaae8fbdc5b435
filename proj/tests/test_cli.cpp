#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace {

struct Run {
  int code;
  std::string out;
};

std::string shell_quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) {
    if (c == '\'')
      q += "'\\''";
    else
      q += c;
  }
  return q + "'";
}

Run run(const std::vector<std::string>& args) {
  std::string cmd = PCSP_BIN;
  for (const auto& a : args) cmd += " " + shell_quote(a);
  cmd += " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

const char* kPfig = "a.((b.d.0 [] c.e.0) |+1/2| (b.f.0 [] c.g.0))";
const char* kQfig = "a.((b.d.0 [] c.g.0) |+1/2| (b.f.0 [] c.e.0))";
const char* kTfig = "a.((b.d.w |+1/2| c.e.w) |~| (b.f.w |+1/2| c.g.w))";

}  // namespace

TEST_CASE("parse classifies terms and rejects bad input") {
  Run r = run({"parse", "a.0 |~| b.0"});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "process"));
  CHECK(contains(r.out, "size"));

  CHECK(run({"parse", "a.w1 [] b.w2"}).code == 0);
  CHECK(contains(run({"parse", "a.w1 [] b.w2"}).out, "vector test"));

  CHECK(run({"parse", "a.0 |~| b.0 [] c.0"}).code == 1);
  CHECK(run({"parse", "tau.0"}).code == 1);
}

TEST_CASE("single-test order query prints both outcome sets") {
  Run r = run({"order", "--kind", "may", "--flavour", "state", "--test",
               kTfig, kPfig, kQfig});
  CHECK(r.code == 1);
  CHECK(contains(r.out, "left:  set{(0), (1/2), (1)}"));
  CHECK(contains(r.out, "right: set{(1/2)}"));
  CHECK(contains(r.out, "verdict: false"));

  Run eq = run({"order", "--kind", "may", "--flavour", "vector", "--test",
                "a.w1 [] b.w2", "a.0 |+1/2| b.0", "a.0 |~| b.0"});
  CHECK(eq.code == 0);
  CHECK(contains(eq.out, "verdict: true"));
}

TEST_CASE("simulation query explains failures") {
  Run r = run({"sim", "--must", "(a.0 |+1/2| b.0) [] (a.0 |+1/2| b.0)",
               "a.0 |+1/2| b.0"});
  CHECK(r.code == 1);
  CHECK(contains(r.out, "fsim: false"));
  CHECK(contains(r.out, "distinguishing formula:"));
  CHECK(contains(r.out, "characteristic test:"));

  CHECK(run({"sim", "a.0 |+1/2| b.0", "a.0 |~| b.0"}).code == 0);
  CHECK(run({"sim", "--must", "a.0 |~| b.0", "a.0 |+1/2| b.0"}).code == 0);
}

TEST_CASE("outcome sets of the coin") {
  Run r = run({"outcomes", "--flavour", "vector", "a.w1 [] b.w2",
               "a.0 |+1/2| b.0"});
  CHECK(r.code == 0);
  CHECK(r.out == "hull{(1/2,1/2)}\n");

  Run q = run({"outcomes", "--flavour", "vector", "a.w1 [] b.w2",
               "a.0 |~| b.0"});
  CHECK(q.code == 0);
  CHECK(q.out == "hull{(0,1), (1,0)}\n");
}

TEST_CASE("satisfaction and characteristic formulas") {
  CHECK(run({"logic", "--formula", "1/2*<a>true (+) 1/2*<b>true",
             "a.0 |+1/2| b.0"}).code == 0);
  CHECK(run({"logic", "--formula", "<a>true", "a.0 |+1/2| b.0"}).code == 1);

  Run cf = run({"charform", "--logic", "F", "a.0 |+1/2| b.0"});
  CHECK(cf.code == 0);
  CHECK(cf.out ==
        "1/2*(<a>(1*ref{a,b}) & ref{b}) (+) 1/2*(<b>(1*ref{a,b}) & ref{a})\n");

  Run ct = run({"chartest", "<a>true"});
  CHECK(ct.code == 0);
  CHECK(contains(ct.out, "test:"));
  CHECK(contains(ct.out, "target:"));
}

TEST_CASE("normalization prints a replayable derivation") {
  Run r = run({"normalize", "(b.0 [] a.0) |~| a.0"});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "normal form:"));

  Run n = run({"normalize", "a.0 [] (b.0 |+1/2| c.0)"});
  CHECK(n.code == 0);
  CHECK(contains(n.out, "normal form: (a [] b) |+1/2| (a [] c)"));
}

TEST_CASE("proof search and derivation checking") {
  Run r = run({"prove", "--theory", "may", "a.0 |+1/2| b.0",
               "(a.0 |+1/2| b.0) |~| c.0"});
  CHECK(r.code == 0);

  Run neg = run({"prove", "--theory", "must",
                 "(a.0 |+1/2| b.0) [] (a.0 |+1/2| b.0)", "a.0 |+1/2| b.0"});
  CHECK(neg.code == 1);
  CHECK(contains(neg.out, "no derivation"));

  Run j = run({"--format", "json", "prove", "--theory", "may", "a.0",
               "a.0 |~| b.0"});
  CHECK(j.code == 0);
  auto parsed = nlohmann::json::parse(j.out);
  std::string file = "/tmp/pcsp_cli_derivation.json";
  {
    std::ofstream o(file);
    o << parsed.dump();
  }
  CHECK(run({"prove", "--theory", "may", "--check", file, "a.0",
             "a.0 |~| b.0"}).code == 0);
  CHECK(run({"prove", "--theory", "must", "--check", file, "a.0",
             "a.0 |~| b.0"}).code == 1);

  parsed["steps"][0]["axiom"] = "Must1";
  {
    std::ofstream o(file);
    o << parsed.dump();
  }
  Run bad = run({"prove", "--theory", "may", "--check", file, "a.0",
                 "a.0 |~| b.0"});
  CHECK(bad.code == 1);
  CHECK(contains(bad.out, "derivation invalid"));

  {
    std::ofstream o(file);
    o << "not json";
  }
  CHECK(run({"prove", "--theory", "may", "--check", file, "a.0",
             "a.0 |~| b.0"}).code == 2);
  std::remove(file.c_str());
}

TEST_CASE("resolution enumeration, synthesis and checking") {
  Run r = run({"resolutions", "a.w1 [] b.w2", "a.0 |~| b.0"});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "deterministic resolutions: 2"));
  CHECK(contains(r.out, "(1,0)"));
  CHECK(contains(r.out, "(0,1)"));

  Run s = run({"resolutions", "--target", "1/2,1/2", "a.w1 [] b.w2",
               "a.0 |~| b.0"});
  CHECK(s.code == 0);
  CHECK(contains(s.out, "realises (1/2,1/2)"));

  CHECK(run({"resolutions", "--target", "1,1", "a.w1 [] b.w2",
             "a.0 |~| b.0"}).code == 1);

  Run j = run({"--format", "json", "resolutions", "--target", "1,0", "a.w1 [] b.w2",
               "a.0 |~| b.0"});
  CHECK(j.code == 0);
  auto parsed = nlohmann::json::parse(j.out);
  std::string file = "/tmp/pcsp_cli_resolution.json";
  {
    std::ofstream o(file);
    o << parsed.dump();
  }
  Run ok = run({"resolutions", "--check", file, "a.w1 [] b.w2",
                "a.0 |~| b.0"});
  CHECK(ok.code == 0);
  CHECK(contains(ok.out, "resolution valid"));

  parsed["init"].begin().value() = "1/2";
  {
    std::ofstream o(file);
    o << parsed.dump();
  }
  Run bad = run({"resolutions", "--check", file, "a.w1 [] b.w2",
                 "a.0 |~| b.0"});
  CHECK(bad.code == 1);
  CHECK(contains(bad.out, "resolution invalid"));

  {
    std::ofstream o(file);
    o << "{broken";
  }
  CHECK(run({"resolutions", "--check", file, "a.w1 [] b.w2",
             "a.0 |~| b.0"}).code == 2);
  std::remove(file.c_str());
}

TEST_CASE("corpus generation is deterministic per seed") {
  Run a = run({"--seed", "7", "corpus", "--kind", "process", "--count", "5"});
  Run b = run({"--seed", "7", "corpus", "--kind", "process", "--count", "5"});
  Run c = run({"--seed", "8", "corpus", "--kind", "process", "--count", "5"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out != c.out);

  Run j = run({"--format", "json", "--seed", "7", "corpus", "--kind", "formula",
               "--count", "3", "--logic", "F"});
  CHECK(j.code == 0);
  auto parsed = nlohmann::json::parse(j.out);
  CHECK(parsed.is_array());
  CHECK(parsed.size() == 3);
}

TEST_CASE("cross checking oracle routes agrees on a seeded corpus") {
  Run r = run({"--seed", "3", "--max-depth", "2", "crosscheck", "--count",
               "5"});
  CHECK(r.code == 0);
}

TEST_CASE("usage errors exit with code two") {
  CHECK(run({"order", "--kind", "perhaps", "--test", "a.w", "a.0",
             "b.0"}).code == 2);
  CHECK(run({"outcomes", "--flavour", "odd", "a.w", "a.0"}).code == 2);
  CHECK(run({"no-such-command"}).code == 2);
  CHECK(run({"order", "--kind", "may", "--test", "a.w", "a.0"}).code == 2);
  CHECK(run({"--alphabet", "a", "lts", "a.0 [] b.0"}).code == 2);
  CHECK(run({"prove", "--theory", "huh", "a.0", "b.0"}).code == 2);
}

TEST_CASE("lts output lists states and moves") {
  Run r = run({"lts", "a.0 |~| b.0"});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "alphabet: a b"));
  CHECK(contains(r.out, "--tau-->"));
  CHECK(contains(r.out, "--a-->"));

  Run j = run({"--format", "json", "lts", "a.0"});
  CHECK(j.code == 0);
  CHECK(nlohmann::json::parse(j.out).contains("states"));
}
