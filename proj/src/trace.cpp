#include "mtgtm/trace.hpp"

#include <cstdio>

namespace mtgtm {

std::string_view to_string(TraceKind k) {
    switch (k) {
        case TraceKind::PhaseToggle: return "PhaseToggle";
        case TraceKind::Untap: return "Untap";
        case TraceKind::ForcedCast: return "ForcedCast";
        case TraceKind::Draw: return "Draw";
        case TraceKind::TriggerFired: return "TriggerFired";
        case TraceKind::TokenCreated: return "TokenCreated";
        case TraceKind::ControlChanged: return "ControlChanged";
        case TraceKind::Death: return "Death";
        case TraceKind::DamagePrevented: return "DamagePrevented";
        case TraceKind::DamageDealt: return "DamageDealt";
        case TraceKind::CounterAdded: return "CounterAdded";
        case TraceKind::MilledToBottom: return "MilledToBottom";
        case TraceKind::SpellResolved: return "SpellResolved";
        case TraceKind::Win: return "Win";
        case TraceKind::StepBoundary: return "StepBoundary";
    }
    return "?";
}

std::string TraceEvent::to_json_line() const {
    nlohmann::ordered_json j;
    j["turn"] = turn_number;
    j["phase"] = std::string(to_string(phase));
    j["kind"] = std::string(to_string(kind));
    j["payload"] = payload;
    return j.dump();
}

void TraceLog::emit(TraceEvent event) {
    const auto line = event.to_json_line();
    for (unsigned char c : line) {
        digest_ ^= c;
        digest_ *= 0x100000001b3ull;
    }
    digest_ ^= '\n';
    digest_ *= 0x100000001b3ull;
    ++count_;
    if (retain_) events_.push_back(std::move(event));
}

std::string TraceLog::to_ndjson() const {
    std::string out;
    for (const auto& e : events_) {
        out += e.to_json_line();
        out += '\n';
    }
    return out;
}

std::string hex_digest(std::uint64_t digest) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(digest));
    return buf;
}

}  // namespace mtgtm
