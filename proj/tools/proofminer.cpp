// proofminer: feature extraction, recurrent clustering and clustering-based
// premiss selection over JSON proof libraries.
//
// Exit codes: 0 ok, 2 bad input (parse errors, unknown names), 3 internal
// error, 4 no proof found within budget, 5 checker infrastructure failure.

#include <charconv>
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "proofminer/error.hpp"
#include "proofminer/features.hpp"
#include "proofminer/library.hpp"
#include "proofminer/premiss.hpp"
#include "proofminer/recurrent.hpp"
#include "proofminer/term_tree.hpp"

namespace pm = proofminer;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kBadInput = 2, kInternal = 3, kNoProof = 4, kCheckerError = 5 };

struct RunConfig {
  std::string input;
  int granularity = 3;
  std::uint64_t seed = 0;
  std::string format = "text";
  std::string target;
  std::string checker_cmd;
  std::size_t budget = 1000;
  long timeout_ms = 10000;
  std::string model_path;
  std::string model_out;
  std::string object;
  bool standardize = false;
  bool timing = false;
};

struct BadInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw BadInput("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string number(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

pm::TypedLibrary load(const RunConfig& cfg) { return pm::resolve_types(pm::parse_library(read_file(cfg.input))); }

int cmd_features(const RunConfig& cfg) {
  const auto lib = load(cfg);
  const auto result = pm::recurrent_cluster(lib, cfg.granularity, cfg.seed);
  const auto vectors = cfg.standardize ? pm::standardize(result.vectors) : result.vectors;
  const double dens = pm::density(result.matrices);
  const auto labels = pm::column_labels(result.dims.depth, result.dims.width);

  if (cfg.format == "json") {
    json rows = json::array();
    for (std::size_t i = 0; i < vectors.size(); ++i)
      rows.push_back({{"name", result.names[i]}, {"values", vectors[i]}});
    json out = {{"depth", result.dims.depth}, {"width", result.dims.width}, {"density", dens},
                {"standardized", cfg.standardize}, {"columns", labels}, {"rows", rows}};
    std::cout << out.dump(2) << '\n';
    return kOk;
  }
  std::cout << "name";
  for (const auto& l : labels) std::cout << ',' << l;
  std::cout << '\n';
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    std::cout << result.names[i];
    for (double x : vectors[i]) std::cout << ',' << number(x);
    std::cout << '\n';
  }
  std::cerr << "density=" << number(dens) << '\n';
  return kOk;
}

int cmd_cluster(const RunConfig& cfg) {
  const auto lib = load(cfg);
  const auto start = std::chrono::steady_clock::now();
  const auto result = pm::recurrent_cluster(lib, cfg.granularity, cfg.seed);
  const auto elapsed =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
  const auto clustering = result.clustering();
  json model = pm::clustering_to_json(clustering);

  if (!cfg.model_out.empty()) {
    std::ofstream out(cfg.model_out);
    if (!out) throw std::runtime_error("cannot write '" + cfg.model_out + "'");
    out << model.dump(2) << '\n';
  }

  if (cfg.format == "json") {
    if (cfg.timing) model["elapsed_ms"] = elapsed;
    std::cout << model.dump(2) << '\n';
    return kOk;
  }
  std::cout << "objects=" << result.names.size() << " k=" << result.model.k << " granularity=" << cfg.granularity
            << " seed=" << cfg.seed << " dims=" << result.dims.depth << "x" << result.dims.width << '\n';
  for (std::size_t j = 0; j < result.model.k; ++j) {
    const auto members = clustering.cluster_members(j);
    std::cout << "cluster " << j << " (" << members.size() << ")\n";
    for (const auto& m : members)
      std::cout << "  " << m << ' ' << number(result.model.proximities[*clustering.index_of(m)]) << '\n';
  }
  std::cout << "elapsed_ms=" << elapsed << '\n';
  return kOk;
}

int cmd_suggest(const RunConfig& cfg) {
  const auto lib = load(cfg);
  if (!lib.index_of(cfg.target)) throw BadInput("unknown target '" + cfg.target + "'");
  pm::NamedClustering clustering;
  if (!cfg.model_path.empty()) {
    try {
      clustering = pm::clustering_from_json(json::parse(read_file(cfg.model_path)));
    } catch (const json::parse_error& e) {
      throw pm::ParseError(std::string("malformed model file: ") + e.what());
    }
  } else {
    clustering = pm::recurrent_cluster(lib, cfg.granularity, cfg.seed).clustering();
  }
  pm::CheckerConfig checker{cfg.checker_cmd, std::chrono::milliseconds(cfg.timeout_ms), cfg.budget};
  const auto report = pm::suggest(cfg.target, lib.source(), clustering, checker, cfg.input);

  if (cfg.format == "json") {
    std::cout << pm::report_to_json(report).dump(2) << '\n';
  } else {
    std::cout << "target: " << report.target << '\n'
              << "tried: " << report.tried << " of budget " << report.budget << '\n';
    if (report.accepted) {
      std::cout << "accepted: " << pm::to_string(report.accepted->script) << '\n'
                << "source: " << report.accepted->source << '\n'
                << "substitutions:";
      if (report.accepted->substitutions.empty()) std::cout << " none";
      for (const auto& s : report.accepted->substitutions)
        std::cout << ' ' << s.original << "->" << s.replacement;
      std::cout << '\n';
    } else {
      std::cout << "accepted: none\n";
    }
  }
  return report.accepted ? kOk : kNoProof;
}

int cmd_inspect(const RunConfig& cfg) {
  const auto lib = load(cfg);
  auto i = lib.index_of(cfg.object);
  if (!i) throw BadInput("unknown object '" + cfg.object + "'");
  const auto tree = pm::build_term_tree(*lib[*i].mined_term());
  if (cfg.format == "json") {
    json nodes = json::array();
    for (const auto& n : tree.nodes())
      nodes.push_back({{"depth", n.depth}, {"index", n.level_index}, {"parent", tree.parent_level_index(n)},
                       {"label", n.label_string()}, {"gallina", n.gallina()}});
    std::cout << json{{"name", cfg.object}, {"depth", tree.depth()}, {"width", tree.width()}, {"nodes", nodes}}
                     .dump(2)
              << '\n';
  } else {
    std::cout << tree.dump();
  }
  return kOk;
}

void add_common(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("library", cfg.input, "Library JSON file")->required();
  sub->add_option("-g,--granularity", cfg.granularity, "Granularity 1..5 (k = floor(n / (10 - g)))")
      ->check(CLI::Range(1, 5));
  sub->add_option("--seed", cfg.seed, "Seed for k-means++ initialisation");
  sub->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"text", "json"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"proofminer: recurrent clustering and premiss selection for proof libraries"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* features = app.add_subcommand("features", "Emit per-object feature vectors (CSV or JSON)");
  add_common(features, cfg);
  features->add_flag("--standardize", cfg.standardize, "Z-score each column");

  auto* cluster = app.add_subcommand("cluster", "Run recurrent clustering and report the clusters");
  add_common(cluster, cfg);
  cluster->add_flag("--timing", cfg.timing, "Include elapsed_ms in JSON output");
  cluster->add_option("--model-out", cfg.model_out, "Also write the model JSON to this file");

  auto* suggest = app.add_subcommand("suggest", "Suggest a tactic script for a target by analogy");
  add_common(suggest, cfg);
  suggest->add_option("--target", cfg.target, "Target lemma")->required();
  suggest->add_option("--checker-cmd", cfg.checker_cmd, "Checker command (run via /bin/sh)")->required();
  suggest->add_option("--budget", cfg.budget, "Maximum checker calls")->check(CLI::PositiveNumber);
  suggest->add_option("--timeout-ms", cfg.timeout_ms, "Per-call checker timeout")->check(CLI::PositiveNumber);
  suggest->add_option("--model", cfg.model_path, "Use a model written by 'cluster --model-out'");

  auto* inspect = app.add_subcommand("inspect", "Print the term tree of one object");
  add_common(inspect, cfg);
  inspect->add_option("object", cfg.object, "Object name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kBadInput;
  }

  try {
    if (*features) return cmd_features(cfg);
    if (*cluster) return cmd_cluster(cfg);
    if (*suggest) return cmd_suggest(cfg);
    return cmd_inspect(cfg);
  } catch (const BadInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const pm::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kBadInput;
  } catch (const pm::TypeResolutionError& e) {
    std::cerr << "type error: " << e.what() << '\n';
    return kBadInput;
  } catch (const pm::TargetNotClustered& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const pm::CheckerFailure& e) {
    std::cerr << "checker failure: " << e.what() << '\n';
    return kCheckerError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  }
}
