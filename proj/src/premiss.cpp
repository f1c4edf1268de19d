#include "proofminer/premiss.hpp"

#include <algorithm>
#include <cerrno>
#include <csignal>
#include <cstring>
#include <set>
#include <thread>

#include <fcntl.h>
#include <sys/wait.h>
#include <unistd.h>

#include "proofminer/error.hpp"
#include "proofminer/log.hpp"

namespace proofminer {

std::string to_string(CheckOutcome o) {
  switch (o) {
    case CheckOutcome::kAccepted: return "accepted";
    case CheckOutcome::kRejected: return "rejected";
    case CheckOutcome::kTimedOut: return "timeout";
  }
  return "rejected";
}

nlohmann::json check_request_json(const CheckRequest& req) {
  return {{"library", req.library_path}, {"target", req.target}, {"script", tactic_script_to_json(req.script)}};
}

ProcessChecker::ProcessChecker(CheckerConfig config) : config_(std::move(config)) {
  if (config_.command.empty()) throw CheckerFailure("no checker command configured");
}

namespace {

// Restores the previous SIGPIPE disposition on scope exit.
class IgnoreSigpipe {
 public:
  IgnoreSigpipe() {
    struct sigaction ign {};
    ign.sa_handler = SIG_IGN;
    sigemptyset(&ign.sa_mask);
    sigaction(SIGPIPE, &ign, &old_);
  }
  ~IgnoreSigpipe() { sigaction(SIGPIPE, &old_, nullptr); }

 private:
  struct sigaction old_ {};
};

// Writes as much of data[off..] as the pipe takes without blocking. Returns
// false once the reader is gone.
bool write_some(int fd, const std::string& data, std::size_t& off) {
  while (off < data.size()) {
    const ssize_t n = ::write(fd, data.data() + off, data.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      return errno == EAGAIN || errno == EWOULDBLOCK;
    }
    off += static_cast<std::size_t>(n);
  }
  return true;
}

}  // namespace

CheckOutcome ProcessChecker::check(const CheckRequest& req) {
  const std::string input = check_request_json(req).dump();

  int fds[2];
  if (::pipe(fds) != 0) throw CheckerFailure(std::string("pipe: ") + std::strerror(errno));

  const pid_t pid = ::fork();
  if (pid < 0) {
    ::close(fds[0]);
    ::close(fds[1]);
    throw CheckerFailure(std::string("fork: ") + std::strerror(errno));
  }
  if (pid == 0) {
    ::setpgid(0, 0);
    ::dup2(fds[0], STDIN_FILENO);
    ::close(fds[0]);
    ::close(fds[1]);
    const int devnull = ::open("/dev/null", O_WRONLY);
    if (devnull >= 0) ::dup2(devnull, STDOUT_FILENO);
    ::execl("/bin/sh", "sh", "-c", config_.command.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }

  ::close(fds[0]);
  // Non-blocking, so a checker that never drains its stdin cannot stall us
  // past the deadline.
  ::fcntl(fds[1], F_SETFL, ::fcntl(fds[1], F_GETFL) | O_NONBLOCK);
  IgnoreSigpipe guard;
  int in_fd = fds[1];
  std::size_t written = 0;

  const auto deadline = std::chrono::steady_clock::now() + config_.timeout;
  int status = 0;
  for (;;) {
    if (in_fd >= 0 && (!write_some(in_fd, input, written) || written == input.size())) {
      ::close(in_fd);  // done, or the checker closed stdin early; its exit status decides
      in_fd = -1;
    }
    const pid_t r = ::waitpid(pid, &status, WNOHANG);
    if (r == pid) break;
    if (r < 0 && errno != EINTR) {
      if (in_fd >= 0) ::close(in_fd);
      throw CheckerFailure(std::string("waitpid: ") + std::strerror(errno));
    }
    if (std::chrono::steady_clock::now() >= deadline) {
      if (in_fd >= 0) ::close(in_fd);
      ::kill(-pid, SIGKILL);
      ::kill(pid, SIGKILL);
      ::waitpid(pid, &status, 0);
      log::info("checker timed out on '" + req.target + "'");
      return CheckOutcome::kTimedOut;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(2));
  }
  if (in_fd >= 0) ::close(in_fd);

  if (WIFEXITED(status)) {
    const int code = WEXITSTATUS(status);
    if (code == 0) return CheckOutcome::kAccepted;
    if (code == 1) return CheckOutcome::kRejected;
    throw CheckerFailure("checker exited with status " + std::to_string(code));
  }
  throw CheckerFailure("checker terminated by signal " + std::to_string(WTERMSIG(status)));
}

// ---------------------------------------------------------------------------

std::vector<std::string> find_cluster_of(const std::string& target, const NamedClustering& clustering) {
  auto i = clustering.index_of(target);
  if (!i) throw TargetNotClustered("'" + target + "' is not in the cluster model");
  std::vector<std::string> out;
  for (auto& name : clustering.cluster_members(clustering.model.assignment[*i]))
    if (name != target) out.push_back(std::move(name));
  return out;
}

std::vector<std::string> candidate_substitutions(const std::string& lemma, const NamedClustering& clustering) {
  auto i = clustering.index_of(lemma);
  if (!i) throw UnknownLemma("'" + lemma + "' is not in the cluster model");
  std::vector<std::string> out{lemma};
  for (auto& name : clustering.cluster_members(clustering.model.assignment[*i]))
    if (name != lemma) out.push_back(std::move(name));
  return out;
}

namespace {

// One substitutable argument position and its options; options[0] is the
// original value.
struct Slot {
  std::size_t step;
  std::size_t arg;
  std::vector<std::string> options;
};

std::vector<Slot> slots_for(const TacticScript& script, const NamedClustering& clustering,
                            std::span<const std::string> target_hyps, const std::string& exclude) {
  std::vector<Slot> slots;
  for (std::size_t s = 0; s < script.steps.size(); ++s) {
    for (std::size_t a = 0; a < script.steps[s].args.size(); ++a) {
      const TacticArg& arg = script.steps[s].args[a];
      std::vector<std::string> options{arg.value};
      if (arg.kind == ArgKind::kLemma) {
        if (clustering.index_of(arg.value)) {
          for (auto& m : candidate_substitutions(arg.value, clustering))
            if (m != arg.value && m != exclude) options.push_back(std::move(m));
        }
      } else if (arg.kind == ArgKind::kHypothesis) {
        for (const auto& h : target_hyps)
          if (h != arg.value) options.push_back(h);
      }
      if (options.size() > 1) slots.push_back({s, a, std::move(options)});
    }
  }
  return slots;
}

// Calls fn(changed slot indices, option index per changed slot) for every
// way of changing exactly `count` slots.
template <typename Fn>
void for_each_variant(const std::vector<Slot>& slots, std::size_t count, Fn&& fn) {
  std::vector<std::size_t> chosen;
  std::vector<std::size_t> option;
  auto pick_options = [&](auto&& self, std::size_t depth) -> void {
    if (depth == chosen.size()) {
      fn(chosen, option);
      return;
    }
    for (std::size_t o = 1; o < slots[chosen[depth]].options.size(); ++o) {
      option[depth] = o;
      self(self, depth + 1);
    }
  };
  auto choose = [&](auto&& self, std::size_t from) -> void {
    if (chosen.size() == count) {
      option.assign(count, 0);
      pick_options(pick_options, 0);
      return;
    }
    for (std::size_t i = from; i < slots.size(); ++i) {
      chosen.push_back(i);
      self(self, i + 1);
      chosen.pop_back();
    }
  };
  choose(choose, 0);
}

}  // namespace

std::vector<Candidate> generate_candidates(std::span<const SourceScript> scripts,
                                           const NamedClustering& clustering,
                                           std::span<const std::string> target_hyps, std::size_t budget,
                                           const std::string& exclude) {
  std::vector<Candidate> out;
  std::set<std::string> seen;
  auto push = [&](Candidate c) {
    if (out.size() >= budget) return;
    if (seen.insert(to_string(c.script)).second) out.push_back(std::move(c));
  };

  for (const auto& src : scripts) push({src.script, src.source, src.proximity, {}});

  for (const auto& src : scripts) {
    const auto slots = slots_for(src.script, clustering, target_hyps, exclude);
    for (std::size_t count = 1; count <= slots.size() && out.size() < budget; ++count) {
      std::vector<std::pair<std::string, Candidate>> level;
      for_each_variant(slots, count, [&](const std::vector<std::size_t>& chosen,
                                         const std::vector<std::size_t>& option) {
        Candidate c{src.script, src.source, src.proximity, {}};
        for (std::size_t i = 0; i < chosen.size(); ++i) {
          const Slot& slot = slots[chosen[i]];
          TacticArg& arg = c.script.steps[slot.step].args[slot.arg];
          c.substitutions.push_back({arg.value, slot.options[option[i]], arg.kind});
          arg.value = slot.options[option[i]];
        }
        level.emplace_back(to_string(c.script), std::move(c));
      });
      std::stable_sort(level.begin(), level.end(),
                       [](const auto& a, const auto& b) { return a.first < b.first; });
      for (auto& [text, c] : level) push(std::move(c));
    }
  }
  return out;
}

SuggestionReport suggest(const std::string& target, const Library& lib, const NamedClustering& clustering,
                         Checker& checker, const SuggestOptions& options) {
  if (options.budget < 1) throw Error("checker budget must be at least 1");
  const LibraryObject* obj = lib.find(target);
  if (!obj) throw UnknownName("unknown target '" + target + "'");

  std::vector<SourceScript> sources;
  for (const auto& name : find_cluster_of(target, clustering)) {
    const LibraryObject* mate = lib.find(name);
    if (!mate || !mate->proof_script) continue;
    sources.push_back({name, clustering.model.proximities[*clustering.index_of(name)], *mate->proof_script});
  }
  const auto hyps = top_level_binders(*obj->statement);

  SuggestionReport report;
  report.target = target;
  report.budget = options.budget;
  report.candidates_ranked = generate_candidates(sources, clustering, hyps, options.budget, target);

  for (const auto& c : report.candidates_ranked) {
    if (report.tried >= options.budget) break;
    const CheckOutcome outcome = checker.check({options.library_path, target, c.script});
    ++report.tried;
    report.outcomes.push_back(outcome);
    log::debug("candidate " + std::to_string(report.tried) + " [" + to_string(c.script) + "]: " +
               to_string(outcome));
    if (outcome == CheckOutcome::kAccepted) {
      report.accepted = c;
      break;
    }
  }
  return report;
}

SuggestionReport suggest(const std::string& target, const Library& lib, const NamedClustering& clustering,
                         const CheckerConfig& config, const std::string& library_path) {
  ProcessChecker checker(config);
  return suggest(target, lib, clustering, checker, {config.budget, library_path});
}

nlohmann::json candidate_to_json(const Candidate& c) {
  nlohmann::json subs = nlohmann::json::array();
  for (const auto& s : c.substitutions)
    subs.push_back({{"original", s.original}, {"replacement", s.replacement}, {"kind", to_string(s.kind)}});
  return {{"script", tactic_script_to_json(c.script)},
          {"text", to_string(c.script)},
          {"source", c.source},
          {"source_proximity", c.source_proximity},
          {"substitutions", subs}};
}

nlohmann::json report_to_json(const SuggestionReport& r) {
  nlohmann::json candidates = nlohmann::json::array();
  for (std::size_t i = 0; i < r.candidates_ranked.size(); ++i) {
    auto j = candidate_to_json(r.candidates_ranked[i]);
    j["rank"] = i;
    j["outcome"] = i < r.outcomes.size() ? nlohmann::json(to_string(r.outcomes[i])) : nlohmann::json(nullptr);
    candidates.push_back(std::move(j));
  }
  return {{"target", r.target},
          {"budget", r.budget},
          {"tried", r.tried},
          {"accepted", r.accepted ? candidate_to_json(*r.accepted) : nlohmann::json(nullptr)},
          {"candidates", candidates}};
}

}  // namespace proofminer
