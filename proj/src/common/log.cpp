#include "qmine/common/log.hpp"

#include <atomic>
#include <cstdio>
#include <mutex>

namespace qmine {

namespace {
std::atomic<LogLevel> g_level{LogLevel::info};
std::atomic<long> g_warnings{0};
std::mutex g_mutex;

void emit(const char* tag, const std::string& msg) {
    std::lock_guard<std::mutex> lock(g_mutex);
    std::fprintf(stderr, "[%s] %s\n", tag, msg.c_str());
}
}  // namespace

void set_log_level(LogLevel level) { g_level.store(level); }
LogLevel log_level() { return g_level.load(); }

void log_debug(const std::string& msg) {
    if (g_level.load() <= LogLevel::debug) emit("debug", msg);
}

void log_info(const std::string& msg) {
    if (g_level.load() <= LogLevel::info) emit("info", msg);
}

void log_warn(const std::string& msg) {
    g_warnings.fetch_add(1);
    if (g_level.load() <= LogLevel::warn) emit("warn", msg);
}

void log_error(const std::string& msg) {
    if (g_level.load() <= LogLevel::err) emit("error", msg);
}

long warning_count() { return g_warnings.load(); }
void reset_warning_count() { g_warnings.store(0); }

}  // namespace qmine
