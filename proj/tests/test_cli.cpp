#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "epicomp/cli.hpp"
#include "epicomp/error.hpp"
#include "epicomp/properties.hpp"
#include "epicomp/scenarios.hpp"
#include "epicomp/system_io.hpp"
#include "support.hpp"

using namespace epicomp;
namespace fs = std::filesystem;

namespace {

const std::string fixtures = EPICOMP_FIXTURES;

std::string fixture(const char* name) { return fixtures + "/" + name; }

std::size_t parse_error_line(std::string_view text) {
  try {
    parse_system(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

const char* header =
    "system t\n"
    "agents: i1:real i2:real k1:pseudo k2:pseudo j:observer\n"
    "actions: use(k1) use(k2) post(c1) post(c2)\n";

fs::path temp_file(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "epicomp-tests";
  fs::create_directories(dir);
  return dir / name;
}

std::map<std::string, std::string> records(const std::string& out) {
  std::map<std::string, std::string> m;
  std::istringstream in(out);
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    REQUIRE(eq != std::string::npos);
    m[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return m;
}

}  // namespace

TEST_CASE("bundled fixtures match the built-in systems") {
  for (const char* name : {"s12", "s1234", "s56"})
    CHECK(load_system(fixture((std::string(name) + ".sys").c_str())) == paper_system(name));
}

TEST_CASE("system file errors carry line numbers") {
  CHECK(parse_error_line(std::string(header) + "run r1: i1:use(k1)\nrun r2: i1:submit(c1)\nindist j: {r1 r2}\n") == 5);
  CHECK(parse_error_line(std::string(header) + "run r1: i1:use(k1)\nrun r1: i2:use(k1)\nindist j: {r1}\n") == 5);
  CHECK(parse_error_line(std::string(header) + "run r1: i9:use(k1)\n") == 4);
  CHECK(parse_error_line(std::string(header) + "run r1: i1:use(k1)\nindist j: {r1 r7}\n") == 5);
  CHECK(parse_error_line(std::string(header) + "runs r1: i1:use(k1)\n") == 4);
  CHECK(parse_error_line("agents: i1\n") == 1);
  // an indist line that misses a run is a declaration error
  CHECK_THROWS_AS(parse_system(std::string(header) + "run r1:\nrun r2:\nindist j: {r1}\n"), ValidationError);
}

TEST_CASE("comments and parameterless actions") {
  const auto sys = parse_system(
      "# bomb\nsystem b\nagents: i j:observer\nactions: give buy_timer(c)\nrun r-1.a: i:give  # trailing\n"
      "indist j: {r-1.a}\n");
  CHECK(sys.runs()[0].id == "r-1.a");
  CHECK(sys.holds("r-1.a", {"i"}, {"give", ""}));
  CHECK(parse_system(serialize(sys)) == sys);
}

TEST_CASE("text and JSON round trips") {
  for (std::uint64_t n = 0; n < 200; ++n) {
    const auto seq = testing::sample_system(81, n);
    CHECK(parse_system(serialize(seq)) == seq);
    CHECK(parse_system_json(to_json(seq)) == seq);
    const auto par = testing::sample_system(82, n, Flavor::parallel);
    CHECK(parse_system(serialize(par)) == par);
    CHECK(parse_system_json(to_json(par)) == par);
  }
  for (const auto& name : paper_system_names()) {
    const auto sys = paper_system(name);
    CHECK(parse_system(serialize(sys)) == sys);
  }
}

TEST_CASE("save and load by extension") {
  const auto sys = paper_system("s1234");
  for (const char* name : {"s1234.sys", "s1234.json"}) {
    const auto path = temp_file(name);
    save_system(sys, path);
    CHECK(load_system(path) == sys);
  }
  CHECK_THROWS_AS(load_system(temp_file("absent.sys")), Error);
}

TEST_CASE("dot output has one cluster per block") {
  const std::string dot = to_dot(paper_system("s12"));
  CHECK(dot.rfind("graph \"s12\" {", 0) == 0);
  CHECK(dot.find("cluster") != std::string::npos);
  CHECK(dot.find("r2") != std::string::npos);
}

TEST_CASE("cli examples") {
  auto r = execute({"check", fixture("s12.sys"), "anon-upto(i1, use(k1), {i1,i2}, j)"});
  CHECK(r.status == 0);
  CHECK(r.out.find("HOLDS") != std::string::npos);

  r = execute({"claims", "run", "C3.1"});
  CHECK(r.status == 0);
  CHECK(r.out.find("confirmed (4/4 items)") != std::string::npos);

  r = execute({"eval", fixture("s12.sys"), "P[j] theta(i1, use(k2))"});
  CHECK(r.status == 0);
  CHECK(r.out == "r1\ttrue\nr2\ttrue\nVALID\n");

  r = execute({"check", "missing.sys", "min-anon(i1, use(k1), j)"});
  CHECK(r.status == 2);
  CHECK_FALSE(r.err.empty());
}

TEST_CASE("cli failures and usage errors") {
  auto r = execute({"--format", "machine", "check", "s12", "priv-upto(i2, submit(c2), {submit(c1)}, j)"});
  CHECK(r.status == 2);  // submit is not declared before composing

  const auto derived = temp_file("s12-derived.sys");
  r = execute({"compose", "s12", "seq use:I_P={k1,k2} post:C={c1,c2} => submit", "-o", derived.string()});
  CHECK(r.status == 0);
  r = execute({"--format", "machine", "check", derived.string(),
               "priv-upto(i2, submit(c2), {submit(c1),submit(c2)}, j)"});
  CHECK(r.status == 1);
  const auto m = records(r.out);
  CHECK(m.at("verdict") == "fails");
  CHECK(m.at("counterexample_run") == "r1");
  CHECK(m.at("failing_element") == "submit(c1)");

  CHECK(execute({"eval", "s12", "theta(i1, use(k1))"}).status == 1);
  CHECK(execute({"eval", "s12", "theta(i1 use(k1))"}).status == 2);
  CHECK(execute({"frobnicate"}).status == 2);
  CHECK(execute({"--help"}).status == 0);
  CHECK(execute({"indep", "s12", "seq use:I_P={k1,k2} post:C={c1,c2} => submit", "basic"}).status == 1);
  CHECK(execute({"indep", "s12", "seq use:I_P={k1,k2} post:C={c1,c2} => submit", "strong"}).status == 2);
  CHECK(execute({"structural", "s56", "seq use:I_P={k1,k2} post:C={c1,c2} => submit", "exclusive-agent:i1:use"})
            .status == 1);
  CHECK(execute({"claims", "run", "C9.9"}).status == 2);
}

TEST_CASE("claims list and search") {
  auto r = execute({"claims", "list"});
  CHECK(r.status == 0);
  std::size_t ids = 0;
  std::istringstream in(r.out);
  for (std::string l; std::getline(in, l);) ids += !l.empty() && l[0] != '\t';
  CHECK(ids == 22);

  r = execute({"search", "C3.2", "--drop-hypothesis", "independence", "--budget", "200", "--seed", "1"});
  CHECK(r.status == 1);
  CHECK(r.out.find("counterexample for C3.2 without independence") != std::string::npos);

  r = execute({"search", "C3.2", "--budget", "200", "--seed", "1"});
  CHECK(r.status == 0);
  CHECK(execute({"search", "C3.2", "--drop-hypothesis", "bogus"}).status == 2);
}

TEST_CASE("machine output is stable and line-parseable") {
  const std::vector<std::vector<std::string>> commands = {
      {"--format", "machine", "claims", "run", "all"},
      {"--format", "machine", "search", "C4.2", "--drop-hypothesis", "independence", "--budget", "500", "--seed", "7"},
      {"--format", "machine", "eval", "s1234", "K[j] theta(i1, use(k1)) | P[j] theta(k2, post(c1))"},
      {"--format", "machine", "show", "s56"},
  };
  const std::regex line(R"([A-Za-z0-9_.\-\[\]]+=.*)");
  for (const auto& cmd : commands) {
    const auto a = execute(cmd);
    const auto b = execute(cmd);
    CHECK(a.out == b.out);
    CHECK(a.status == b.status);
    CHECK_FALSE(a.out.empty());
    std::istringstream in(a.out);
    std::string l;
    while (std::getline(in, l)) CHECK(std::regex_match(l, line));
  }
  const auto json = execute({"--format", "json", "claims", "run", "C3.1"});
  CHECK(json.status == 0);
  CHECK(json.out.front() == '{');
}

TEST_CASE("exit status agrees with the verdict on generated invocations") {
  std::mt19937_64 rng(83);
  for (std::uint64_t n = 0; n < 150; ++n) {
    const auto sys = testing::sample_system(84, n);
    const auto path = temp_file("fuzz-" + std::to_string(n) + ".sys");
    save_system(sys, path);
    const auto facts = testing::all_facts(sys);
    const Fact& f = facts[rng() % facts.size()];

    const PropertySpec specs[] = {
        PropertySpec::simple(PropertyKind::minimally_anonymous, f.agent, f.action, {"j"}),
        PropertySpec::simple(PropertyKind::maximally_onymous, f.agent, f.action, {"j"}),
        PropertySpec::role_interchangeable(f.agent, f.action, {"j"}),
    };
    for (const auto& spec : specs) {
      const auto r = execute({"--format", "machine", "check", path.string(), render(spec)});
      const bool holds = check_property(sys, spec).holds;
      CHECK(r.status == (holds ? 0 : 1));
      CHECK(records(r.out).at("verdict") == (holds ? "holds" : "fails"));
    }

    testing::FormulaGen gen(n, facts, {{"j"}});
    const Formula formula = gen(3);
    const auto r = execute({"--format", "machine", "eval", path.string(), render(formula)});
    const bool valid_here = valid(sys, formula).holds;
    CHECK(r.status == (valid_here ? 0 : 1));
    CHECK(records(r.out).at("verdict") == (valid_here ? "holds" : "fails"));
  }
}
