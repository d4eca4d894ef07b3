#pragma once

#include <string>

namespace qmine {

enum class LogLevel { debug = 0, info = 1, warn = 2, err = 3, silent = 4 };

void set_log_level(LogLevel level);
LogLevel log_level();

void log_debug(const std::string& msg);
void log_info(const std::string& msg);
void log_warn(const std::string& msg);
void log_error(const std::string& msg);

inline void log_debug(const char* tag, const std::string& msg) {
    log_debug("[" + std::string(tag) + "] " + msg);
}
inline void log_info(const char* tag, const std::string& msg) {
    log_info("[" + std::string(tag) + "] " + msg);
}
inline void log_warn(const char* tag, const std::string& msg) {
    log_warn("[" + std::string(tag) + "] " + msg);
}
inline void log_error(const char* tag, const std::string& msg) {
    log_error("[" + std::string(tag) + "] " + msg);
}

// Number of warnings emitted since process start (or last reset). A few
// operations report "with warning" behavior; tests use this to observe it.
long warning_count();
void reset_warning_count();

}  // namespace qmine
