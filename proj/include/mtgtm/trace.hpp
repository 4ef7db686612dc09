#pragma once

// Replay log of atomic engine events, serialized as newline-delimited JSON.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mtgtm/game_model.hpp"

namespace mtgtm {

enum class TraceKind : std::uint8_t {
    PhaseToggle,
    Untap,
    ForcedCast,
    Draw,
    TriggerFired,
    TokenCreated,
    ControlChanged,
    Death,
    DamagePrevented,
    DamageDealt,
    CounterAdded,
    MilledToBottom,
    SpellResolved,
    Win,
    StepBoundary,
};

std::string_view to_string(TraceKind k);

struct TraceEvent {
    std::uint64_t turn_number = 0;
    Phase phase = Phase::Beginning;
    TraceKind kind = TraceKind::StepBoundary;
    nlohmann::ordered_json payload = nlohmann::ordered_json::object();

    /// {"turn":..,"phase":..,"kind":..,"payload":{..}} with no trailing newline.
    [[nodiscard]] std::string to_json_line() const;
};

/// Collects events and a running FNV-1a digest of their serialized lines.
class TraceLog {
public:
    explicit TraceLog(bool retain = true) : retain_(retain) {}

    void emit(TraceEvent event);

    [[nodiscard]] const std::vector<TraceEvent>& events() const { return events_; }
    [[nodiscard]] std::uint64_t digest() const { return digest_; }
    [[nodiscard]] std::uint64_t count() const { return count_; }
    [[nodiscard]] bool retains() const { return retain_; }
    void clear_events() { events_.clear(); }

    /// Newline-delimited JSON of the retained events.
    [[nodiscard]] std::string to_ndjson() const;

private:
    bool retain_;
    std::vector<TraceEvent> events_;
    std::uint64_t digest_ = 0xcbf29ce484222325ull;
    std::uint64_t count_ = 0;
};

std::string hex_digest(std::uint64_t digest);

}  // namespace mtgtm
