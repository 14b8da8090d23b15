#include "bridgehack/log.hpp"

#include <cstdlib>
#include <iostream>

namespace bridgehack {

LogLevel log_level() {
  static const LogLevel level = [] {
    const char* env = std::getenv("BRIDGEHACK_LOG");
    if (env == nullptr) return LogLevel::Quiet;
    std::string s(env);
    if (s == "debug") return LogLevel::Debug;
    if (s == "info") return LogLevel::Info;
    return LogLevel::Quiet;
  }();
  return level;
}

void log_info(const std::string& msg) {
  if (log_level() >= LogLevel::Info) std::cerr << "[bridgehack] " << msg << "\n";
}

void log_debug(const std::string& msg) {
  if (log_level() >= LogLevel::Debug)
    std::cerr << "[bridgehack:debug] " << msg << "\n";
}

}  // namespace bridgehack
