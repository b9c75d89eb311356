#include "epicomp/system_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "epicomp/error.hpp"

namespace epicomp {

namespace {

bool name_start(char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_'; }
bool name_body(char c) { return name_start(c) || (c >= '0' && c <= '9'); }

class LineLexer {
 public:
  LineLexer(std::string_view line, std::size_t number) : line_(line), number_(number) {}

  [[noreturn]] void fail(const std::string& message) const { throw ParseError(message, number_, pos_ + 1); }
  [[noreturn]] void fail_at(const std::string& message, std::size_t column) const {
    throw ParseError(message, number_, column);
  }

  std::size_t column() {
    skip_ws();
    return pos_ + 1;
  }

  void skip_ws() {
    while (pos_ < line_.size() && (line_[pos_] == ' ' || line_[pos_] == '\t' || line_[pos_] == '\r')) ++pos_;
  }

  bool at_end() {
    skip_ws();
    return pos_ >= line_.size();
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < line_.size() && line_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  /// Identifiers; `dashes` also admits '-' and '.' after the first character
  /// (system names and run ids such as s129-12).
  std::string name(bool dashes = false) {
    skip_ws();
    if (pos_ >= line_.size() || !name_start(line_[pos_])) fail("expected name");
    const std::size_t start = pos_;
    while (pos_ < line_.size() && (name_body(line_[pos_]) || (dashes && (line_[pos_] == '-' || line_[pos_] == '.'))))
      ++pos_;
    return std::string(line_.substr(start, pos_ - start));
  }

  Action action() {
    Action a{name(), {}};
    if (pos_ < line_.size() && line_[pos_] == '(') {
      ++pos_;
      a.param = name();
      expect(')');
    }
    return a;
  }

 private:
  std::string_view line_;
  std::size_t number_;
  std::size_t pos_ = 0;
};

std::optional<AgentRole> parse_role(std::string_view s) {
  if (s == "real") return AgentRole::real_name;
  if (s == "pseudo") return AgentRole::pseudonym;
  if (s == "observer") return AgentRole::observer;
  return std::nullopt;
}

}  // namespace

InterpretedSystem parse_system(std::string_view text) {
  SystemDeclaration d;
  std::set<std::string> agents;
  std::set<Action> actions;
  std::set<std::string> runs;
  bool have_name = false, have_agents = false, have_actions = false;

  std::size_t number = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++number;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);

    LineLexer lex(line, number);
    if (lex.at_end()) continue;
    const std::size_t keyword_col = lex.column();
    const std::string keyword = lex.name();

    if (keyword == "system") {
      if (have_name) lex.fail_at("duplicate system line", keyword_col);
      d.name = lex.name(true);
      have_name = true;
    } else if (keyword == "agents") {
      if (have_agents) lex.fail_at("duplicate agents line", keyword_col);
      have_agents = true;
      lex.expect(':');
      while (!lex.at_end()) {
        const std::size_t col = lex.column();
        Agent agent{{lex.name()}, AgentRole::unspecified};
        if (lex.accept(':')) {
          const std::size_t role_col = lex.column();
          const std::string role = lex.name();
          auto r = parse_role(role);
          if (!r) lex.fail_at("unknown role '" + role + "'", role_col);
          agent.role = *r;
        }
        if (!agents.insert(agent.id.name).second) lex.fail_at("duplicate agent '" + agent.id.name + "'", col);
        d.agents.push_back(std::move(agent));
      }
    } else if (keyword == "actions") {
      if (have_actions) lex.fail_at("duplicate actions line", keyword_col);
      have_actions = true;
      lex.expect(':');
      while (!lex.at_end()) {
        const std::size_t col = lex.column();
        Action a = lex.action();
        if (!actions.insert(a).second) lex.fail_at("duplicate action '" + to_string(a) + "'", col);
        d.actions.push_back(std::move(a));
      }
    } else if (keyword == "run") {
      const std::size_t id_col = lex.column();
      Run run{lex.name(true), {}};
      if (!runs.insert(run.id).second) lex.fail_at("duplicate run id '" + run.id + "'", id_col);
      lex.expect(':');
      while (!lex.at_end()) {
        const std::size_t col = lex.column();
        AgentId agent{lex.name()};
        lex.expect(':');
        const std::size_t action_col = lex.column();
        Action a = lex.action();
        if (!agents.count(agent.name)) lex.fail_at("undeclared agent '" + agent.name + "'", col);
        if (!actions.count(a)) lex.fail_at("undeclared action '" + to_string(a) + "'", action_col);
        run.facts.push_back(Fact{std::move(agent), std::move(a)});
      }
      d.runs.push_back(std::move(run));
    } else if (keyword == "indist") {
      const std::size_t obs_col = lex.column();
      ObserverPartition p{{lex.name()}, {}};
      if (!agents.count(p.observer.name)) lex.fail_at("undeclared observer '" + p.observer.name + "'", obs_col);
      lex.expect(':');
      while (!lex.at_end()) {
        lex.expect('{');
        std::vector<std::string> block;
        while (!lex.accept('}')) {
          if (lex.at_end()) lex.fail("expected '}'");
          const std::size_t col = lex.column();
          std::string id = lex.name(true);
          if (!runs.count(id)) lex.fail_at("unknown run '" + id + "'", col);
          block.push_back(std::move(id));
        }
        p.blocks.push_back(std::move(block));
      }
      d.partitions.push_back(std::move(p));
    } else {
      lex.fail_at("unknown section '" + keyword + "'", keyword_col);
    }
    if (!lex.at_end()) lex.fail("trailing input");
  }
  if (!have_name) throw ParseError("missing system line", 1, 1);
  return build_system(std::move(d));
}

std::string serialize(const InterpretedSystem& sys) {
  std::ostringstream out;
  out << "system " << sys.name() << "\n";
  out << "agents:";
  for (const auto& a : sys.agents()) {
    out << " " << a.id.name;
    if (a.role != AgentRole::unspecified) out << ":" << to_string(a.role);
  }
  out << "\nactions:";
  for (const auto& a : sys.actions()) out << " " << to_string(a);
  out << "\n";
  for (const auto& r : sys.runs()) {
    out << "run " << r.id << ":";
    for (const auto& f : r.facts) out << " " << f.agent.name << ":" << to_string(f.action);
    out << "\n";
  }
  for (const auto& p : sys.partitions()) {
    out << "indist " << p.observer.name << ":";
    for (const auto& b : p.blocks) {
      out << " {";
      for (std::size_t k = 0; k < b.size(); ++k) out << (k ? " " : "") << b[k];
      out << "}";
    }
    out << "\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// JSON

std::string to_json(const InterpretedSystem& sys) {
  nlohmann::ordered_json j;
  j["name"] = sys.name();
  j["agents"] = nlohmann::ordered_json::array();
  for (const auto& a : sys.agents()) {
    nlohmann::ordered_json agent{{"name", a.id.name}};
    if (a.role != AgentRole::unspecified) agent["role"] = std::string(to_string(a.role));
    j["agents"].push_back(agent);
  }
  j["actions"] = nlohmann::ordered_json::array();
  for (const auto& a : sys.actions()) j["actions"].push_back({{"family", a.family}, {"param", a.param}});
  j["runs"] = nlohmann::ordered_json::array();
  for (const auto& r : sys.runs()) {
    nlohmann::ordered_json facts = nlohmann::ordered_json::array();
    for (const auto& f : r.facts)
      facts.push_back({{"agent", f.agent.name}, {"family", f.action.family}, {"param", f.action.param}});
    j["runs"].push_back({{"id", r.id}, {"facts", facts}});
  }
  j["partitions"] = nlohmann::ordered_json::array();
  for (const auto& p : sys.partitions()) j["partitions"].push_back({{"observer", p.observer.name}, {"blocks", p.blocks}});
  return j.dump(2) + "\n";
}

InterpretedSystem parse_system_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), 0, e.byte);
  }
  try {
    SystemDeclaration d;
    d.name = j.at("name").get<std::string>();
    for (const auto& a : j.at("agents")) {
      Agent agent{{a.at("name").get<std::string>()}, AgentRole::unspecified};
      if (a.contains("role")) {
        auto r = parse_role(a.at("role").get<std::string>());
        if (!r) throw ValidationError("unknown role '" + a.at("role").get<std::string>() + "'");
        agent.role = *r;
      }
      d.agents.push_back(std::move(agent));
    }
    for (const auto& a : j.at("actions"))
      d.actions.push_back({a.at("family").get<std::string>(), a.value("param", std::string{})});
    for (const auto& r : j.at("runs")) {
      Run run{r.at("id").get<std::string>(), {}};
      for (const auto& f : r.at("facts"))
        run.facts.push_back(Fact{{f.at("agent").get<std::string>()},
                                 {f.at("family").get<std::string>(), f.value("param", std::string{})}});
      d.runs.push_back(std::move(run));
    }
    if (j.contains("partitions"))
      for (const auto& p : j.at("partitions"))
        d.partitions.push_back(
            {{p.at("observer").get<std::string>()}, p.at("blocks").get<std::vector<std::vector<std::string>>>()});
    return build_system(std::move(d));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed system JSON: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Files

InterpretedSystem load_system(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (path.extension() == ".json") return parse_system_json(buf.str());
  return parse_system(buf.str());
}

void save_system(const InterpretedSystem& sys, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << (path.extension() == ".json" ? to_json(sys) : serialize(sys));
  if (!out) throw Error("cannot write '" + path.string() + "'");
}

std::string to_dot(const InterpretedSystem& sys, const std::optional<AgentId>& observer) {
  auto quote = [](const std::string& s) { return "\"" + s + "\""; };
  std::ostringstream out;
  out << "graph " << quote(sys.name()) << " {\n";
  for (const auto& p : sys.partitions()) {
    if (observer && p.observer != *observer) continue;
    for (std::size_t b = 0; b < p.blocks.size(); ++b) {
      out << "  subgraph " << quote("cluster_" + p.observer.name + "_" + std::to_string(b)) << " {\n";
      out << "    label=" << quote(p.observer.name + " block " + std::to_string(b + 1)) << ";\n";
      for (const auto& id : p.blocks[b]) {
        std::string label = id;
        const Run& run = sys.runs()[*sys.run_index(id)];
        for (const auto& f : run.facts) label += "\\n" + f.agent.name + ":" + to_string(f.action);
        out << "    " << quote(p.observer.name + ":" + id) << " [label=" << quote(label) << "];\n";
      }
      out << "  }\n";
    }
  }
  out << "}\n";
  return out.str();
}

}  // namespace epicomp
