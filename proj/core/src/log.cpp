#include "dynodisco/log.hpp"

#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace dynodisco {

namespace {

LogLevel parse_env_level() {
  const char* env = std::getenv("DYNODISCO_LOG");
  if (env == nullptr) return LogLevel::Warn;
  if (std::strcmp(env, "error") == 0) return LogLevel::Error;
  if (std::strcmp(env, "warn") == 0) return LogLevel::Warn;
  if (std::strcmp(env, "info") == 0) return LogLevel::Info;
  if (std::strcmp(env, "debug") == 0) return LogLevel::Debug;
  std::fprintf(stderr, "[dynodisco] unknown DYNODISCO_LOG value '%s', using warn\n", env);
  return LogLevel::Warn;
}

LogLevel& level_ref() {
  static LogLevel level = parse_env_level();
  return level;
}

void vlog(LogLevel level, const char* tag, const char* fmt, va_list args) {
  if (static_cast<int>(level) > static_cast<int>(level_ref())) return;
  std::fprintf(stderr, "[dynodisco %s] ", tag);
  std::vfprintf(stderr, fmt, args);
  std::fputc('\n', stderr);
}

}  // namespace

LogLevel log_level() { return level_ref(); }
void set_log_level(LogLevel level) { level_ref() = level; }

#define DYNODISCO_LOG_IMPL(name, level, tag)      \
  void name(const char* fmt, ...) {               \
    va_list args;                                 \
    va_start(args, fmt);                          \
    vlog(level, tag, fmt, args);                  \
    va_end(args);                                 \
  }

DYNODISCO_LOG_IMPL(log_error, LogLevel::Error, "error")
DYNODISCO_LOG_IMPL(log_warn, LogLevel::Warn, "warn")
DYNODISCO_LOG_IMPL(log_info, LogLevel::Info, "info")
DYNODISCO_LOG_IMPL(log_debug, LogLevel::Debug, "debug")

#undef DYNODISCO_LOG_IMPL

}  // namespace dynodisco
