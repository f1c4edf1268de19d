// Stand-in proof checker for desk-scale runs of `proofminer suggest`.
//
//   proofminer-stub-checker RULES.json < request.json
//
// RULES.json: {"rules": [{"target": "maxnACA", "script": [<tactic steps>]}]}.
// A request is accepted when some rule for its target matches the script
// step by step; an argument value of "*" in a rule matches anything.
// Exit 0 accepted, 1 rejected, 2 malformed input.

#include <fstream>
#include <iostream>

#include "json.hpp"
#include "proofminer/library.hpp"

namespace pm = proofminer;
using nlohmann::json;

namespace {

bool matches(const pm::TacticScript& rule, const pm::TacticScript& script) {
  if (rule.steps.size() != script.steps.size()) return false;
  for (std::size_t i = 0; i < rule.steps.size(); ++i) {
    const auto& r = rule.steps[i];
    const auto& s = script.steps[i];
    if (r.tactic != s.tactic || r.args.size() != s.args.size()) return false;
    for (std::size_t j = 0; j < r.args.size(); ++j) {
      if (r.args[j].value == "*") continue;
      if (r.args[j] != s.args[j]) return false;
    }
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: proofminer-stub-checker RULES.json < request.json\n";
    return 2;
  }
  try {
    std::ifstream rules_in(argv[1]);
    if (!rules_in) {
      std::cerr << "cannot read " << argv[1] << '\n';
      return 2;
    }
    const json rules = json::parse(rules_in);
    const json request = json::parse(std::cin);
    const auto target = request.at("target").get<std::string>();
    const auto script = pm::parse_tactic_script(request.at("script"));
    for (const auto& rule : rules.at("rules")) {
      if (rule.at("target").get<std::string>() != target) continue;
      if (matches(pm::parse_tactic_script(rule.at("script")), script)) return 0;
    }
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "stub checker: " << e.what() << '\n';
    return 2;
  }
}
