#pragma once

#include <chrono>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "proofminer/library.hpp"
#include "proofminer/recurrent.hpp"

namespace proofminer {

// ---------------------------------------------------------------------------
// Checker protocol
//
// The configured command runs under /bin/sh once per candidate. Its stdin is
// {"library": <path>, "target": <name>, "script": <tactic script JSON>}.
// Exit 0 accepts, exit 1 rejects, anything else is an infrastructure
// failure. A call that outlives the timeout is killed and counts as a
// rejection.

struct CheckerConfig {
  std::string command;
  std::chrono::milliseconds timeout{10000};
  std::size_t budget = 1000;
};

enum class CheckOutcome { kAccepted, kRejected, kTimedOut };

std::string to_string(CheckOutcome o);

struct CheckRequest {
  std::string library_path;
  std::string target;
  TacticScript script;
};

nlohmann::json check_request_json(const CheckRequest& req);

class Checker {
 public:
  virtual ~Checker() = default;
  // Throws CheckerFailure on infrastructure errors.
  virtual CheckOutcome check(const CheckRequest& req) = 0;
};

class ProcessChecker : public Checker {
 public:
  explicit ProcessChecker(CheckerConfig config);
  CheckOutcome check(const CheckRequest& req) override;

 private:
  CheckerConfig config_;
};

class CallbackChecker : public Checker {
 public:
  using Fn = std::function<CheckOutcome(const CheckRequest&)>;
  explicit CallbackChecker(Fn fn) : fn_(std::move(fn)) {}
  CheckOutcome check(const CheckRequest& req) override { return fn_(req); }

 private:
  Fn fn_;
};

// ---------------------------------------------------------------------------
// Candidate generation

struct Substitution {
  std::string original;
  std::string replacement;
  ArgKind kind;

  bool operator==(const Substitution&) const = default;
};

struct Candidate {
  TacticScript script;
  std::string source;
  double source_proximity = 0;
  std::vector<Substitution> substitutions;
};

struct SourceScript {
  std::string source;
  double proximity;
  TacticScript script;
};

// Other members of the target's cluster, by descending proximity. Throws
// TargetNotClustered.
std::vector<std::string> find_cluster_of(const std::string& target, const NamedClustering& clustering);

// Every member of the lemma's cluster, the lemma itself first, then by
// descending proximity. Throws UnknownLemma.
std::vector<std::string> candidate_substitutions(const std::string& lemma, const NamedClustering& clustering);

// Verbatim scripts first, in source order. Then, per source, variants that
// replace lemma arguments with cluster-mates and hypothesis arguments with
// the target's hypotheses, ordered by substitution count and then by script
// text. Duplicate scripts are dropped and the list stops at `budget`.
// `exclude` (normally the target itself) is never substituted in.
std::vector<Candidate> generate_candidates(std::span<const SourceScript> scripts,
                                           const NamedClustering& clustering,
                                           std::span<const std::string> target_hyps, std::size_t budget,
                                           const std::string& exclude = {});

struct SuggestionReport {
  std::string target;
  std::size_t budget = 0;
  std::size_t tried = 0;
  std::optional<Candidate> accepted;
  std::vector<Candidate> candidates_ranked;
  std::vector<CheckOutcome> outcomes;  // one per checker call, in order
};

struct SuggestOptions {
  std::size_t budget = 1000;
  std::string library_path;  // forwarded to the checker
};

SuggestionReport suggest(const std::string& target, const Library& lib, const NamedClustering& clustering,
                         Checker& checker, const SuggestOptions& options);

SuggestionReport suggest(const std::string& target, const Library& lib, const NamedClustering& clustering,
                         const CheckerConfig& config, const std::string& library_path);

nlohmann::json candidate_to_json(const Candidate& c);
nlohmann::json report_to_json(const SuggestionReport& r);

}  // namespace proofminer
