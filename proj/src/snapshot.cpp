#include "mtgtm/snapshot.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>
#include <tuple>

namespace mtgtm {

namespace {

std::string capitalized(std::string_view s) {
    std::string out(s);
    if (!out.empty()) out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
    return out;
}

std::string join(const auto& items, std::string_view sep) {
    std::string out;
    for (const auto& item : items) {
        if (!out.empty()) out += sep;
        out += item;
    }
    return out;
}

std::string census_detail(const Permanent& p, const GameState& state) {
    if (p.program_state()) return "program";
    if (const auto* r = p.find<tag::RotlungTrigger>())
        return r->trigger_type + ", " + r->result.colors.names() + ", " + r->result.creature_type;
    if (p.has<tag::CloakOfInvisibility>() && p.attached_to)
        if (const auto* host = state.find(*p.attached_to)) return "attached to each " + host->name;
    if (p.has<tag::WheelOfSunAndMoon>() && p.attached_to_player)
        return "attached to " + std::string(to_string(*p.attached_to_player));
    if (p.has<tag::IllusoryGains>() && p.attached_to)
        if (const auto* host = state.find(*p.attached_to); host && host->is_token)
            return "attached to latest tape token";
    if (const auto* s = p.find<tag::SteelyResolve>()) return s->chosen_type;
    if (const auto* d = p.find<tag::DreadOfNight>()) return capitalized(to_string(d->chosen_color));
    if (const auto* f = p.find<tag::FungusSliverGrant>()) return f->chosen_type;
    if (const auto* t = p.find<tag::SharedTriumph>()) return t->chosen_type;
    return "";
}

std::string stats_text(const Permanent& p, const GameState& state, const StaticEffects& statics) {
    if (!p.is_creature) return "";
    std::string out = std::to_string(p.base_power) + "/" + std::to_string(p.base_toughness);
    if (p.phased_out) return out + " eff=-";
    const auto s = effective_stats(p, state, statics);
    return out + " eff=" + std::to_string(s.power) + "/" + std::to_string(s.toughness);
}

}  // namespace

std::vector<CensusRow> table_census(const GameState& state) {
    std::map<std::tuple<std::string, PlayerId, std::string>, int> groups;
    for (const auto& p : state.battlefield)
        if (!p.is_token) ++groups[{p.name, p.controller, census_detail(p, state)}];
    std::vector<CensusRow> rows;
    for (const auto& [key, n] : groups) rows.push_back({n, std::get<0>(key), std::get<1>(key), std::get<2>(key)});
    return rows;
}

std::string format_census(const std::vector<CensusRow>& rows) {
    std::ostringstream out;
    for (const auto& r : rows) {
        out << r.count << ' ' << r.name << " | " << to_string(r.controller);
        if (!r.detail.empty()) out << " | " << r.detail;
        out << '\n';
    }
    return out.str();
}

std::string dump_board_text(const GameState& state) {
    std::ostringstream out;
    out << "# board\n";
    out << "turn " << state.turn_number << '\n';
    out << "active " << to_string(state.active_player) << '\n';
    out << "phase " << to_string(state.phase) << '\n';
    out << "outcome " << to_string(state.outcome) << '\n';
    out << "steps " << state.steps_completed << '\n';
    for (const auto& zone : state.players) {
        const auto who = to_string(zone.player);
        out << who << " hand: " << join(zone.hand, " | ") << '\n';
        out << who << " library: " << join(zone.library, " | ") << '\n';
        out << who << " graveyard: " << join(zone.graveyard, " | ") << '\n';
    }
    out << "# census\n" << format_census(table_census(state));
    out << "# permanents\n";
    const auto statics = collect_static_effects(state);
    for (const auto& p : state.battlefield) {
        out << '#' << p.id << ' ' << p.name << " ctl=" << to_string(p.controller)
            << " own=" << to_string(p.owner);
        if (p.is_token) out << " token";
        if (p.is_creature) {
            out << " creature " << stats_text(p, state, statics) << " colors=" << p.colors.letters()
                << " types=" << join(p.creature_types, ",") << " counters=+" << p.plus_counters << "/-"
                << p.minus_counters << " damage=" << p.marked_damage;
        }
        if (p.is_land) out << " land";
        out << " tapped=" << (p.tapped ? "yes" : "no") << " phased=" << (p.phased_out ? "out" : "in");
        if (p.has_phasing) out << " phasing";
        if (p.attached_to) out << " attached=#" << *p.attached_to;
        if (p.attached_to_player) out << " attached=" << to_string(*p.attached_to_player);
        std::vector<std::string> tags;
        for (const auto& b : p.behaviors) tags.push_back(describe(b));
        if (!tags.empty()) out << " tags=" << join(tags, ";");
        out << '\n';
    }
    return out.str();
}

nlohmann::ordered_json dump_board_json(const GameState& state) {
    using json = nlohmann::ordered_json;
    json j;
    j["turn"] = state.turn_number;
    j["active"] = std::string(to_string(state.active_player));
    j["phase"] = std::string(to_string(state.phase));
    j["outcome"] = std::string(to_string(state.outcome));
    j["steps"] = state.steps_completed;
    json players = json::array();
    for (const auto& zone : state.players) {
        players.push_back(json{{"player", std::string(to_string(zone.player))},
                               {"hand", zone.hand},
                               {"library", zone.library},
                               {"graveyard", zone.graveyard}});
    }
    j["players"] = std::move(players);
    json census = json::array();
    for (const auto& r : table_census(state))
        census.push_back(json{{"count", r.count},
                              {"name", r.name},
                              {"controller", std::string(to_string(r.controller))},
                              {"detail", r.detail}});
    j["census"] = std::move(census);
    const auto statics = collect_static_effects(state);
    json perms = json::array();
    for (const auto& p : state.battlefield) {
        json e{{"id", p.id},
               {"name", p.name},
               {"controller", std::string(to_string(p.controller))},
               {"owner", std::string(to_string(p.owner))},
               {"token", p.is_token},
               {"creature", p.is_creature},
               {"land", p.is_land},
               {"tapped", p.tapped},
               {"phased_out", p.phased_out},
               {"has_phasing", p.has_phasing}};
        if (p.is_creature) {
            e["base"] = {p.base_power, p.base_toughness};
            if (!p.phased_out) {
                const auto s = effective_stats(p, state, statics);
                e["effective"] = {s.power, s.toughness};
            }
            e["colors"] = p.colors.letters();
            e["types"] = p.creature_types;
            e["plus_counters"] = p.plus_counters;
            e["minus_counters"] = p.minus_counters;
            e["marked_damage"] = p.marked_damage;
        }
        if (p.attached_to) e["attached_to"] = *p.attached_to;
        if (p.attached_to_player) e["attached_to_player"] = std::string(to_string(*p.attached_to_player));
        json tags = json::array();
        for (const auto& b : p.behaviors) tags.push_back(describe(b));
        e["tags"] = std::move(tags);
        perms.push_back(std::move(e));
    }
    j["permanents"] = std::move(perms);
    return j;
}

}  // namespace mtgtm
