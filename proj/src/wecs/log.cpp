#include "wecs/log.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <mutex>
#include <string>

namespace wecs::log {
namespace {

Level parse_level(const char* text)
{
    if (text == nullptr)
        return Level::warn;
    const std::string_view s{text};
    if (s == "error") return Level::error;
    if (s == "info") return Level::info;
    if (s == "debug") return Level::debug;
    return Level::warn;
}

std::atomic<int>& level_storage()
{
    static std::atomic<int> level{static_cast<int>(parse_level(std::getenv("WECS_LOG")))};
    return level;
}

constexpr const char* label(Level level)
{
    switch (level) {
    case Level::error: return "error";
    case Level::warn: return "warn";
    case Level::info: return "info";
    case Level::debug: return "debug";
    }
    return "?";
}

} // namespace

Level threshold() { return static_cast<Level>(level_storage().load()); }

void set_threshold(Level level) { level_storage().store(static_cast<int>(level)); }

bool enabled(Level level) { return static_cast<int>(level) <= level_storage().load(); }

void write(Level level, std::string_view message)
{
    if (!enabled(level))
        return;
    static std::mutex mutex;
    const std::lock_guard lock{mutex};
    std::fprintf(stderr, "wecs [%s] %.*s\n", label(level), static_cast<int>(message.size()), message.data());
}

} // namespace wecs::log
