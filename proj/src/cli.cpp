#include "epicomp/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <functional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "epicomp/claims.hpp"
#include "epicomp/composition.hpp"
#include "epicomp/error.hpp"
#include "epicomp/formula.hpp"
#include "epicomp/properties.hpp"
#include "epicomp/scenarios.hpp"
#include "epicomp/system_io.hpp"

namespace epicomp {

namespace {

using Json = nlohmann::ordered_json;

struct Report {
  Json data = Json::object();
  std::string human;
  int status = 0;
};

void flatten(const Json& j, const std::string& prefix, std::ostringstream& out) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, out);
  } else if (j.is_array()) {
    for (std::size_t n = 0; n < j.size(); ++n) flatten(j[n], prefix + "." + std::to_string(n), out);
  } else if (j.is_string()) {
    std::string v = j.get<std::string>();
    std::replace(v.begin(), v.end(), '\n', ' ');
    out << prefix << "=" << v << "\n";
  } else {
    out << prefix << "=" << j.dump() << "\n";
  }
}

std::string render_report(const Report& r, const std::string& format) {
  if (format == "json") return r.data.dump(2) + "\n";
  if (format == "machine") {
    std::ostringstream out;
    flatten(r.data, "", out);
    return out.str();
  }
  return r.human;
}

bool is_bundled_name(const std::string& s) {
  const auto names = paper_system_names();
  return std::find(names.begin(), names.end(), s) != names.end();
}

/// A readable file wins; otherwise a bundled system name; otherwise the
/// load error for the path.
InterpretedSystem resolve_system(const std::string& arg) {
  if (!std::filesystem::exists(arg) && is_bundled_name(arg)) return paper_system(arg);
  return load_system(arg);
}

std::string holds_word(bool b) { return b ? "holds" : "fails"; }

// ---------------------------------------------------------------------------
// Commands

Report cmd_eval(const std::string& file, const std::string& text) {
  const InterpretedSystem sys = resolve_system(file);
  const Formula f = parse_formula(text);
  const RunSet truth = eval_all(sys, f);
  const Verdict v = valid(sys, f);
  Report r;
  r.data["verdict"] = holds_word(v.holds);
  r.data["formula"] = render(f);
  if (v.counterexample) r.data["counterexample_run"] = *v.counterexample;
  std::ostringstream h;
  Json runs = Json::object();
  for (std::size_t k = 0; k < sys.run_count(); ++k) {
    runs[sys.runs()[k].id] = truth.test(k);
    h << sys.runs()[k].id << "\t" << (truth.test(k) ? "true" : "false") << "\n";
  }
  r.data["run"] = runs;
  h << (v.holds ? "VALID" : "NOT VALID (first failing run " + *v.counterexample + ")") << "\n";
  r.human = h.str();
  r.status = v.holds ? 0 : 1;
  return r;
}

Report cmd_check(const std::string& file, const std::string& text) {
  const InterpretedSystem sys = resolve_system(file);
  const PropertySpec spec = parse_property(text);
  const PropertyReport rep = check_property(sys, spec);
  Report r;
  r.data["verdict"] = holds_word(rep.holds);
  r.data["property"] = render(spec);
  r.data["definition"] = std::string(definition_name(spec.kind));
  r.data["formula"] = render(rep.witness_formula);
  std::ostringstream h;
  h << (rep.holds ? "HOLDS" : "FAILS") << "  " << render(spec) << "\n";
  h << "  definition: " << definition_name(spec.kind) << "\n";
  if (rep.counterexample) {
    r.data["counterexample_run"] = rep.counterexample->run;
    r.data["failing_conjunct"] = rep.counterexample->conjunct;
    if (!rep.counterexample->element.empty()) r.data["failing_element"] = rep.counterexample->element;
    h << "  counterexample: run " << rep.counterexample->run;
    if (!rep.counterexample->element.empty()) h << ", element " << rep.counterexample->element;
    h << "\n  failing conjunct: " << rep.counterexample->conjunct << "\n";
  }
  r.human = h.str();
  r.status = rep.holds ? 0 : 1;
  return r;
}

Report condition_report(const ConditionReport& rep) {
  Report r;
  r.data["verdict"] = holds_word(rep.holds);
  r.data["condition"] = rep.condition;
  std::ostringstream h;
  h << (rep.holds ? "HOLDS" : "FAILS") << "  " << rep.condition << "\n";
  if (rep.counterexample_run) {
    r.data["counterexample_run"] = *rep.counterexample_run;
    h << "  counterexample: run " << *rep.counterexample_run << "\n";
  }
  if (rep.failing_instance) {
    r.data["failing_conjunct"] = *rep.failing_instance;
    h << "  failing instance: " << *rep.failing_instance << "\n";
  }
  r.human = h.str();
  r.status = rep.holds ? 0 : 1;
  return r;
}

Report cmd_indep(const std::string& file, const std::string& schema_text, const std::string& kind_text,
                 const std::string& observer, std::size_t bound) {
  const InterpretedSystem sys = resolve_system(file);
  const Schema schema = parse_schema(schema_text);
  auto kind = parse_independence_kind(kind_text);
  if (!kind) throw ValidationError("unknown independence kind '" + kind_text + "'");
  return condition_report(check_independence(sys, AgentId{observer}, schema, *kind, IndependenceOptions{bound}));
}

StructuralCondition parse_condition(const std::string& text) {
  using K = StructuralCondition::Kind;
  if (text == "exhaustive-posting") return StructuralCondition::of(K::exhaustive_posting);
  if (text == "exhaustive-registration") return StructuralCondition::of(K::exhaustive_registration);
  if (text == "backward-causality") return StructuralCondition::of(K::backward_causality);
  if (text == "forward-causality") return StructuralCondition::of(K::forward_causality);
  const std::string action_prefix = "exclusive-action:";
  const std::string agent_prefix = "exclusive-agent:";
  if (text.starts_with(action_prefix)) {
    const std::string a = text.substr(action_prefix.size());
    const auto open = a.find('(');
    if (open == std::string::npos || a.back() != ')') throw ValidationError("expected exclusive-action:fam(param)");
    return StructuralCondition::exclusive_action_of(Action{a.substr(0, open), a.substr(open + 1, a.size() - open - 2)});
  }
  if (text.starts_with(agent_prefix)) {
    const std::string rest = text.substr(agent_prefix.size());
    const auto colon = rest.find(':');
    if (colon == std::string::npos) throw ValidationError("expected exclusive-agent:agent:family");
    return StructuralCondition::exclusive_agent_of(AgentId{rest.substr(0, colon)}, rest.substr(colon + 1));
  }
  throw ValidationError("unknown structural condition '" + text + "'");
}

Report cmd_structural(const std::string& file, const std::string& schema_text, const std::string& cond_text) {
  const InterpretedSystem sys = resolve_system(file);
  const Schema schema = parse_schema(schema_text);
  const auto* seq = std::get_if<SequentialSchema>(&schema);
  if (!seq) throw ValidationError("structural conditions need a sequential schema");
  return condition_report(check_structural(sys, *seq, parse_condition(cond_text)));
}

Report cmd_compose(const std::string& file, const std::string& schema_text, const std::string& out_path) {
  const InterpretedSystem sys = resolve_system(file);
  const InterpretedSystem derived = derive(sys, parse_schema(schema_text));
  Report r;
  r.data["verdict"] = "holds";
  if (!out_path.empty()) {
    save_system(derived, out_path);
    r.data["output"] = out_path;
    r.human = "wrote " + out_path + "\n";
  } else {
    r.data["system"] = serialize(derived);
    r.human = serialize(derived);
  }
  return r;
}

Report cmd_show(const std::string& file, bool dot, const std::string& observer, const std::string& format) {
  const InterpretedSystem sys = resolve_system(file);
  Report r;
  std::optional<AgentId> obs;
  if (!observer.empty()) obs = AgentId{observer};
  const std::string text = dot ? to_dot(sys, obs) : (format == "json" ? to_json(sys) : serialize(sys));
  r.data["system"] = text;
  r.human = text;
  return r;
}

Report cmd_claims_list() {
  Report r;
  Json list = Json::array();
  std::ostringstream h;
  for (ClaimId id : all_claims()) {
    Json c;
    c["id"] = std::string(to_string(id));
    c["flavor"] = std::string(to_string(flavor(id)));
    c["hypotheses"] = hypothesis_names(id);
    c["conclusion"] = conclusion_name(id);
    c["statement"] = std::string(statement(id));
    list.push_back(c);
    h << to_string(id) << "\t" << to_string(flavor(id)) << "\t" << statement(id) << "\n";
    h << "\thypotheses:";
    for (const auto& n : hypothesis_names(id)) h << " " << n;
    h << "\n\tconclusion: " << conclusion_name(id) << "\n";
  }
  r.data["claims"] = list;
  r.human = h.str();
  return r;
}

std::vector<ClaimId> claim_targets(const std::string& which) {
  if (which == "all") return {all_claims().begin(), all_claims().end()};
  auto id = parse_claim_id(which);
  if (!id) throw ValidationError("unknown claim '" + which + "'");
  return {*id};
}

std::vector<std::string> default_systems(ClaimId id) {
  if (id == ClaimId::c3_1) return {"s12"};
  if (flavor(id) == Flavor::parallel) return {"bomb-independent", "bomb-dependent"};
  return {"s12", "s1234", "s56", "s125678", "s129-12"};
}

Json claim_json(const ClaimReport& rep) {
  Json j;
  j["claim"] = std::string(to_string(rep.claim));
  j["system"] = rep.system;
  j["verdict"] = std::string(to_string(rep.verdict));
  Json hyp = Json::object();
  for (const auto& h : rep.hypotheses) hyp[h.name] = holds_word(h.holds);
  j["hypothesis"] = hyp;
  Json concl = Json::object();
  for (const auto& c : rep.conclusion) concl[c.name] = holds_word(c.holds);
  j["conclusion"] = concl;
  Json details = Json::object();
  for (const auto& h : rep.hypotheses)
    if (!h.detail.empty()) details[h.name] = h.detail;
  for (const auto& c : rep.conclusion)
    if (!c.detail.empty()) details[c.name] = c.detail;
  if (!details.empty()) j["detail"] = details;
  return j;
}

std::string claim_human(const ClaimReport& rep) {
  std::ostringstream h;
  h << to_string(rep.claim) << " on " << rep.system << ": " << to_string(rep.verdict);
  if (rep.claim == ClaimId::c3_1) {
    std::size_t ok = 0;
    for (const auto& c : rep.hypotheses) ok += c.holds;
    for (const auto& c : rep.conclusion) ok += c.holds;
    h << " (" << ok << "/" << rep.hypotheses.size() + rep.conclusion.size() << " items)";
  }
  h << "\n";
  auto line = [&](const ConditionResult& c, const char* lead) {
    h << "  " << lead << (c.holds ? "[+] " : "[-] ") << c.name;
    if (!c.detail.empty()) h << ": " << c.detail;
    h << "\n";
  };
  for (const auto& c : rep.hypotheses) line(c, "");
  if (!rep.conclusion_evaluated) h << "  => conclusion not evaluated\n";
  for (const auto& c : rep.conclusion) line(c, "=> ");
  return h.str();
}

bool claim_fails(const ClaimReport& rep) {
  return rep.verdict == ClaimVerdict::refuted ||
         (rep.claim == ClaimId::c3_1 && rep.verdict != ClaimVerdict::confirmed);
}

Report cmd_claims_run(const std::string& which, const std::string& system_arg, const std::string& schema_text,
                      const std::vector<std::string>& dropped) {
  const auto ids = claim_targets(which);
  std::vector<ClaimReport> reports;
  for (ClaimId id : ids) {
    std::vector<std::string> systems = system_arg.empty() ? default_systems(id) : std::vector{system_arg};
    for (const auto& name : systems) {
      const InterpretedSystem sys = resolve_system(name);
      ClaimContext ctx;
      if (!schema_text.empty())
        ctx.schema = parse_schema(schema_text);
      else if (!std::filesystem::exists(name) && is_bundled_name(name))
        ctx = paper_context(name);
      else
        ctx.schema = generated_schema(sys, flavor(id));
      if ((flavor(id) == Flavor::sequential) != std::holds_alternative<SequentialSchema>(ctx.schema)) {
        if (!system_arg.empty() && ids.size() > 1) continue;  // `all` on one system: skip the other flavour
      }
      reports.push_back(check_claim(id, sys, ctx, ClaimOptions{dropped, false}));
    }
  }
  Report r;
  bool failed = false;
  std::ostringstream h;
  for (const auto& rep : reports) {
    failed = failed || claim_fails(rep);
    h << claim_human(rep);
  }
  if (reports.size() == 1) {
    r.data = claim_json(reports.front());
  } else {
    r.data["verdict"] = failed ? "fails" : "holds";
    Json list = Json::array();
    for (const auto& rep : reports) list.push_back(claim_json(rep));
    r.data["reports"] = list;
  }
  r.human = h.str();
  r.status = failed ? 1 : 0;
  return r;
}

Json stats_json(const SweepStats& s) {
  Json j;
  j["systems"] = s.systems;
  j["exhaustive"] = s.exhaustive_systems;
  j["random"] = s.random_systems;
  j["confirmed"] = s.confirmed;
  j["vacuous"] = s.vacuous;
  j["refuted"] = s.refuted;
  return j;
}

Report cmd_claims_sweep(const std::string& which, const SweepConfig& cfg) {
  const auto ids = claim_targets(which);
  const auto entries = sweep(ids, cfg);
  Report r;
  bool failed = false;
  std::ostringstream h;
  Json list = Json::object();
  for (const auto& e : entries) {
    failed = failed || e.stats.refuted > 0;
    list[std::string(to_string(e.claim))] = stats_json(e.stats);
    h << to_string(e.claim) << ": " << e.stats.systems << " systems (" << e.stats.exhaustive_systems
      << " exhaustive, " << e.stats.random_systems << " random), " << e.stats.confirmed << " confirmed, "
      << e.stats.vacuous << " vacuous, " << e.stats.refuted << " REFUTED\n";
    if (e.first_refutation) h << serialize(*e.first_refutation);
  }
  r.data["verdict"] = failed ? "fails" : "holds";
  r.data["claim"] = list;
  r.human = h.str();
  r.status = failed ? 1 : 0;
  return r;
}

Report cmd_search(const std::string& which, const std::vector<std::string>& dropped, const GenConfig& cfg) {
  auto id = parse_claim_id(which);
  if (!id) throw ValidationError("unknown claim '" + which + "'");
  const FalsifyResult res = falsify(*id, cfg, ClaimOptions{dropped, false});
  Report r;
  std::ostringstream h;
  r.data["examined"] = res.stats.systems;
  if (res.counterexample) {
    r.data["verdict"] = "counterexample";
    r.data["system"] = serialize(*res.counterexample);
    const Json rep = claim_json(*res.report);
    for (const auto& [k, v] : rep.items())
      if (k != "verdict" && k != "claim" && k != "system") r.data[k] = v;
    h << "counterexample for " << to_string(*id);
    for (const auto& d : dropped) h << " without " << d;
    h << " after " << res.stats.systems << " systems\n" << serialize(*res.counterexample) << claim_human(*res.report);
    r.status = 1;
  } else {
    r.data["verdict"] = "none";
    h << "no counterexample for " << to_string(*id) << " in " << res.stats.systems << " systems\n";
  }
  r.human = h.str();
  return r;
}

}  // namespace

CliResult execute(const std::vector<std::string>& args) {
  CLI::App app{"Epistemic checker for anonymity and privacy under composition", "epicomp"};
  app.require_subcommand(1);
  std::string format = "human";
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"human", "machine", "json"}));

  std::function<Report()> run;
  std::string file, text, schema, kind, observer = "j", out_path, which, system_arg;
  std::size_t bound = 2;
  bool dot = false, do_sweep = false, exhaustive = false, no_exhaustive = false;
  std::vector<std::string> dropped;
  SweepConfig sweep_cfg;
  GenConfig gen;
  std::string policy = "single";

  auto* eval_cmd = app.add_subcommand("eval", "Truth table and validity of a formula");
  eval_cmd->add_option("file", file, "System file or bundled name")->required();
  eval_cmd->add_option("formula", text)->required();
  eval_cmd->callback([&] { run = [&] { return cmd_eval(file, text); }; });

  auto* check_cmd = app.add_subcommand("check", "Check a property instance");
  check_cmd->add_option("file", file)->required();
  check_cmd->add_option("property", text)->required();
  check_cmd->callback([&] { run = [&] { return cmd_check(file, text); }; });

  auto* indep_cmd = app.add_subcommand("indep", "Check an independence condition");
  indep_cmd->add_option("file", file)->required();
  indep_cmd->add_option("schema", schema)->required();
  indep_cmd->add_option("kind", kind, "basic|pairwise|disjunctive|posneg|negpos|parallel")->required();
  indep_cmd->add_option("--observer", observer);
  indep_cmd->add_option("--bound", bound, "Longest disjunct list")->check(CLI::PositiveNumber);
  indep_cmd->callback([&] { run = [&] { return cmd_indep(file, schema, kind, observer, bound); }; });

  auto* struct_cmd = app.add_subcommand("structural", "Check an exclusivity, exhaustiveness or causality condition");
  struct_cmd->add_option("file", file)->required();
  struct_cmd->add_option("schema", schema)->required();
  struct_cmd->add_option("condition", kind)->required();
  struct_cmd->callback([&] { run = [&] { return cmd_structural(file, schema, kind); }; });

  auto* compose_cmd = app.add_subcommand("compose", "Add the composed action family");
  compose_cmd->add_option("file", file)->required();
  compose_cmd->add_option("schema", schema)->required();
  compose_cmd->add_option("-o,--output", out_path);
  compose_cmd->callback([&] { run = [&] { return cmd_compose(file, schema, out_path); }; });

  auto* show_cmd = app.add_subcommand("show", "Print a system");
  show_cmd->add_option("file", file)->required();
  show_cmd->add_flag("--dot", dot, "Graphviz view of the observer partitions");
  show_cmd->add_option("--observer", observer);
  show_cmd->callback([&] {
    run = [&] { return cmd_show(file, dot, show_cmd->count("--observer") ? observer : "", format); };
  });

  auto* claims_cmd = app.add_subcommand("claims", "Compositionality claims");
  claims_cmd->require_subcommand(1);
  auto* list_cmd = claims_cmd->add_subcommand("list", "List claims");
  list_cmd->callback([&] { run = [&] { return cmd_claims_list(); }; });
  auto* run_cmd = claims_cmd->add_subcommand("run", "Check claims");
  run_cmd->add_option("claim", which, "Claim id or all")->required();
  run_cmd->add_option("--system", system_arg, "System file or bundled name");
  run_cmd->add_option("--schema", schema);
  run_cmd->add_option("--drop-hypothesis", dropped);
  run_cmd->add_flag("--sweep", do_sweep, "Sweep generated systems instead");
  run_cmd->add_option("--samples", sweep_cfg.random_samples, "Random systems per flavour");
  run_cmd->add_option("--seed", sweep_cfg.seed);
  run_cmd->add_flag("--no-exhaustive", no_exhaustive, "Skip the small-universe enumeration");
  run_cmd->callback([&] {
    run = [&] {
      if (do_sweep) {
        sweep_cfg.exhaustive = !no_exhaustive;
        return cmd_claims_sweep(which, sweep_cfg);
      }
      return cmd_claims_run(which, system_arg, schema, dropped);
    };
  });

  auto* search_cmd = app.add_subcommand("search", "Look for a counterexample with hypotheses removed");
  search_cmd->add_option("claim", which)->required();
  search_cmd->add_option("--drop-hypothesis", dropped);
  search_cmd->add_option("--budget", gen.budget, "Random samples");
  search_cmd->add_option("--seed", gen.seed);
  search_cmd->add_flag("--exhaustive", exhaustive, "Enumerate the small universe first");
  search_cmd->add_option("--agents", gen.real_agents)->check(CLI::PositiveNumber);
  search_cmd->add_option("--pseudonyms", gen.pseudonyms)->check(CLI::PositiveNumber);
  search_cmd->add_option("--articles", gen.articles)->check(CLI::PositiveNumber);
  search_cmd->add_option("--max-runs", gen.max_runs)->check(CLI::PositiveNumber);
  search_cmd->add_option("--policy", policy)->check(CLI::IsMember({"single", "random", "mixed"}));
  search_cmd->callback([&] {
    run = [&] {
      gen.exhaustive = exhaustive;
      gen.policy = policy == "single" ? PartitionPolicy::single_block
                   : policy == "random" ? PartitionPolicy::random_partition
                                        : PartitionPolicy::mixed;
      return cmd_search(which, dropped, gen);
    };
  });

  CliResult result;
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    result.out = app.help();
    return result;
  } catch (const CLI::CallForAllHelp&) {
    result.out = app.help("", CLI::AppFormatMode::All);
    return result;
  } catch (const CLI::ParseError& e) {
    result.status = 2;
    result.err = std::string(e.what()) + "\n";
    return result;
  }

  try {
    const Report rep = run();
    result.status = rep.status;
    result.out = render_report(rep, format);
  } catch (const std::exception& e) {
    result.status = 2;
    result.err = std::string("error: ") + e.what() + "\n";
  }
  return result;
}

}  // namespace epicomp
