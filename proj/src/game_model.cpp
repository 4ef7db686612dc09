#include "mtgtm/game_model.hpp"

#include <algorithm>
#include <bit>

#include "mtgtm/errors.hpp"

namespace mtgtm {

namespace {

constexpr std::array<Color, 5> kColorOrder = {Color::White, Color::Blue, Color::Black, Color::Red, Color::Green};

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

std::string describe_token(const TokenSpec& t) {
    return std::string(t.tapped ? "tapped " : "") + std::to_string(t.power) + "/" + std::to_string(t.toughness) +
           " " + t.colors.names() + " " + t.creature_type;
}

}  // namespace

std::string_view to_string(PlayerId p) { return p == PlayerId::Alice ? "Alice" : "Bob"; }

std::string_view to_string(Color c) {
    switch (c) {
        case Color::White: return "white";
        case Color::Blue: return "blue";
        case Color::Black: return "black";
        case Color::Red: return "red";
        case Color::Green: return "green";
    }
    return "?";
}

int ColorSet::size() const { return std::popcount(bits_); }

std::string ColorSet::letters() const {
    static constexpr std::array<char, 5> kLetters = {'W', 'U', 'B', 'R', 'G'};
    std::string out;
    for (std::size_t i = 0; i < kColorOrder.size(); ++i)
        if (contains(kColorOrder[i])) out += kLetters[i];
    return out.empty() ? "-" : out;
}

std::string ColorSet::names() const {
    std::string out;
    for (auto c : kColorOrder) {
        if (!contains(c)) continue;
        if (!out.empty()) out += '+';
        out += to_string(c);
    }
    return out.empty() ? "colorless" : out;
}

std::string describe(const BehaviorTag& tag) {
    return std::visit(
        overloaded{
            [](const tag::RotlungTrigger& t) {
                return "Rotlung(" + t.trigger_type + " -> " + describe_token(t.result) +
                       (t.program_state ? ", " + std::string(to_string(*t.program_state)) : "") + ")";
            },
            [](const tag::XathridTrigger& t) {
                return "Xathrid(" + t.trigger_type + " -> " + describe_token(t.result) +
                       (t.program_state ? ", " + std::string(to_string(*t.program_state)) : "") + ")";
            },
            [](const tag::IllusoryGains&) { return std::string("IllusoryGains"); },
            [](const tag::CloakOfInvisibility&) { return std::string("CloakOfInvisibility"); },
            [](const tag::WheelOfSunAndMoon&) { return std::string("WheelOfSunAndMoon"); },
            [](const tag::SteelyResolve& t) { return "SteelyResolve(" + t.chosen_type + ")"; },
            [](const tag::DreadOfNight& t) { return "DreadOfNight(" + std::string(to_string(t.chosen_color)) + ")"; },
            [](const tag::FungusSliverGrant& t) { return "FungusSliverGrant(" + t.chosen_type + ")"; },
            [](const tag::SharedTriumph& t) { return "SharedTriumph(" + t.chosen_type + ")"; },
            [](const tag::WildEvocation&) { return std::string("WildEvocation"); },
            [](const tag::Recycle&) { return std::string("Recycle"); },
            [](const tag::PrivilegedPosition&) { return std::string("PrivilegedPosition"); },
            [](const tag::Vigor&) { return std::string("Vigor"); },
            [](const tag::MesmericOrb&) { return std::string("MesmericOrb"); },
            [](const tag::PrismaticOmen&) { return std::string("PrismaticOmen"); },
            [](const tag::Choke&) { return std::string("Choke"); },
            [](const tag::BlazingArchon&) { return std::string("BlazingArchon"); },
            [](const tag::SoulSnuffersETB&) { return std::string("SoulSnuffersETB"); },
            [](const tag::TapeToken&) { return std::string("TapeToken"); },
            [](const tag::EndMarker& t) {
                return std::string(t.side == TapeSide::Left ? "EndMarker(Lhurgoyf)" : "EndMarker(Rat)");
            },
        },
        tag);
}

bool Permanent::has_type(std::string_view type) const {
    return std::ranges::binary_search(creature_types, type, std::less<>{});
}

void Permanent::add_type(std::string type) {
    auto it = std::ranges::lower_bound(creature_types, type);
    if (it == creature_types.end() || *it != type) creature_types.insert(it, std::move(type));
}

std::optional<TmState> Permanent::program_state() const {
    if (const auto* r = find<tag::RotlungTrigger>()) return r->program_state;
    if (const auto* x = find<tag::XathridTrigger>()) return x->program_state;
    return std::nullopt;
}

Permanent annihilate_counters(Permanent p) {
    const int n = std::min(p.plus_counters, p.minus_counters);
    p.plus_counters -= n;
    p.minus_counters -= n;
    return p;
}

std::string_view to_string(Phase p) {
    switch (p) {
        case Phase::Beginning: return "beginning";
        case Phase::Untap: return "untap";
        case Phase::Upkeep: return "upkeep";
        case Phase::Draw: return "draw";
        case Phase::Main: return "main";
        case Phase::End: return "end";
        case Phase::Cleanup: return "cleanup";
    }
    return "?";
}

std::string_view to_string(Outcome o) {
    switch (o) {
        case Outcome::Ongoing: return "ongoing";
        case Outcome::AliceWins: return "alice-wins";
        case Outcome::StepLimit: return "step-limit";
    }
    return "?";
}

const Permanent* GameState::find(PermanentId id) const {
    auto it = std::ranges::lower_bound(battlefield, id, {}, &Permanent::id);
    return it != battlefield.end() && it->id == id ? &*it : nullptr;
}

Permanent* GameState::find(PermanentId id) {
    return const_cast<Permanent*>(std::as_const(*this).find(id));
}

Permanent& GameState::add(Permanent p) {
    p.id = next_id++;
    p.timestamp = next_timestamp++;
    battlefield.push_back(std::move(p));
    return battlefield.back();
}

void GameState::remove(PermanentId id) {
    auto it = std::ranges::lower_bound(battlefield, id, {}, &Permanent::id);
    if (it != battlefield.end() && it->id == id) battlefield.erase(it);
}

StaticEffects collect_static_effects(const GameState& state) {
    StaticEffects s;
    for (const auto& p : state.battlefield) {
        if (p.phased_out) continue;
        for (const auto& b : p.behaviors) {
            if (const auto* t = std::get_if<tag::SharedTriumph>(&b)) s.type_bonus[t->chosen_type] += 1;
            if (const auto* d = std::get_if<tag::DreadOfNight>(&b))
                s.color_penalty[static_cast<std::size_t>(d->chosen_color)] += 1;
        }
    }
    return s;
}

Stats effective_stats(const Permanent& p, const GameState& state) {
    return effective_stats(p, state, collect_static_effects(state));
}

Stats effective_stats(const Permanent& p, const GameState& state, const StaticEffects& statics) {
    if (p.phased_out) throw PreconditionError("effective_stats of phased-out permanent #" + std::to_string(p.id));
    const int counters = p.plus_counters - p.minus_counters;
    Stats s{p.base_power + counters, p.base_toughness + counters};
    for (const auto& [type, n] : statics.type_bonus)
        if (p.has_type(type)) {
            s.power += n;
            s.toughness += n;
        }
    for (auto c : kColorOrder)
        if (p.colors.contains(c)) {
            const int n = statics.color_penalty[static_cast<std::size_t>(c)];
            s.power -= n;
            s.toughness -= n;
        }
    for (const auto& e : state.until_eot_effects)
        if (std::ranges::binary_search(e.scope, p.id)) {
            s.power += e.power_delta;
            s.toughness += e.toughness_delta;
        }
    return s;
}

std::vector<PermanentId> legal_targets(std::string_view spell, PlayerId caster, const GameState& state) {
    if (spell != "Cleansing Beam") throw PreconditionError("'" + std::string(spell) + "' has no targets");
    std::vector<std::string> shroud_types;
    for (const auto* p : state.with<tag::SteelyResolve>())
        shroud_types.push_back(p->find<tag::SteelyResolve>()->chosen_type);
    std::vector<PlayerId> hexproof_players;
    for (const auto* p : state.with<tag::PrivilegedPosition>()) hexproof_players.push_back(p->controller);

    std::vector<PermanentId> out;
    for (const auto& p : state.battlefield) {
        if (p.phased_out || !p.is_creature) continue;
        // Privileged Position: its controller's creatures can't be targeted by opponents.
        if (p.controller != caster && std::ranges::find(hexproof_players, p.controller) != hexproof_players.end())
            continue;
        if (std::ranges::any_of(shroud_types, [&](const std::string& t) { return p.has_type(t); })) continue;
        out.push_back(p.id);
    }
    return out;
}

ColorSet colors_controlled(PlayerId player, const GameState& state) {
    ColorSet out;
    for (const auto& p : state.battlefield)
        if (!p.phased_out && p.is_creature && p.controller == player) out = out.united(p.colors);
    return out;
}

bool is_island(const Permanent& land, const GameState& state) {
    if (!land.is_land) return false;
    return std::ranges::any_of(state.with<tag::PrismaticOmen>(),
                               [&](const Permanent* omen) { return omen->controller == land.controller; });
}

bool controls_land_of_each_basic_type(PlayerId player, const GameState& state) {
    return std::ranges::any_of(state.battlefield, [&](const Permanent& p) {
        return !p.phased_out && p.is_land && p.controller == player && is_island(p, state);
    });
}

}  // namespace mtgtm
