#include "proofminer/log.hpp"

#include <cstdlib>
#include <iostream>
#include <mutex>
#include <string>

namespace proofminer::log {

Level threshold() {
  static const Level level = [] {
    const char* env = std::getenv("PROOFMINER_LOG");
    const std::string v = env ? env : "";
    if (v == "error") return Level::kError;
    if (v == "info") return Level::kInfo;
    if (v == "debug") return Level::kDebug;
    return Level::kWarn;
  }();
  return level;
}

void write(Level level, std::string_view message) {
  if (level > threshold()) return;
  static std::mutex mu;
  static constexpr const char* kNames[] = {"error", "warn", "info", "debug"};
  std::lock_guard lock(mu);
  std::cerr << "proofminer [" << kNames[static_cast<int>(level)] << "] " << message << '\n';
}

}  // namespace proofminer::log
