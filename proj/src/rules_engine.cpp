#include "mtgtm/rules_engine.hpp"

#include <algorithm>

#include "mtgtm/errors.hpp"

namespace mtgtm {

namespace {

using json = nlohmann::ordered_json;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

void emit(GameState& state, TraceLog& log, TraceKind kind, json payload) {
    log.emit(TraceEvent{state.turn_number, state.phase, kind, std::move(payload)});
}

std::string who(PlayerId p) { return std::string(to_string(p)); }

std::string describe_effect(const TriggerEffect& effect) {
    return std::visit(overloaded{
                          [](const CreateTokenEffect& e) {
                              return "create " + std::string(e.token.tapped ? "tapped " : "") +
                                     std::to_string(e.token.power) + "/" + std::to_string(e.token.toughness) + " " +
                                     e.token.colors.names() + " " + e.token.creature_type;
                          },
                          [](const AttachIllusoryGains& e) { return "attach to #" + std::to_string(e.creature); },
                          [](const MesmericOrbMill& e) { return "mill " + who(e.player); },
                          [](const WildEvocationReveal& e) { return "reveal " + who(e.player); },
                          [](const SoulSnuffersCounters&) { return std::string("-1/-1 counter on each creature"); },
                      },
                      effect);
}

Trigger make_trigger(const Permanent& source, TriggerEffect effect) {
    return Trigger{source.id, source.name, source.controller, source.timestamp, std::move(effect)};
}

bool enchanted_by_wheel(const GameState& state, PlayerId player) {
    return std::ranges::any_of(state.with<tag::WheelOfSunAndMoon>(),
                               [&](const Permanent* w) { return w->attached_to_player == player; });
}

// Where a card goes when it would be put into its owner's graveyard.
std::string send_to_graveyard(GameState& state, PlayerId owner, const std::string& card) {
    auto& zone = state.zone(owner);
    if (enchanted_by_wheel(state, owner)) {
        zone.library.push_back(card);
        return "library-bottom";
    }
    zone.graveyard.push_back(card);
    return "graveyard";
}

void create_token(GameState& state, const Trigger& trigger, const TokenSpec& spec, TraceLog& log) {
    Permanent p;
    p.name = spec.creature_type + " token";
    p.owner = p.controller = trigger.controller;
    p.is_creature = true;
    p.base_power = spec.power;
    p.base_toughness = spec.toughness;
    p.colors = spec.colors;
    p.add_type(spec.creature_type);
    p.tapped = spec.tapped;
    p.is_token = true;
    if (spec.role == TokenRole::TapeCell) p.behaviors.emplace_back(tag::TapeToken{});
    if (spec.role == TokenRole::EndMarker) p.behaviors.emplace_back(tag::EndMarker{spec.marker_side});
    const auto& token = state.add(std::move(p));
    emit(state, log, TraceKind::TokenCreated,
         json{{"id", token.id},
              {"name", token.name},
              {"controller", who(token.controller)},
              {"colors", token.colors.names()},
              {"tapped", token.tapped},
              {"source", trigger.source_name},
              {"source_id", trigger.source}});

    // Illusory Gains: a creature entered under an opponent's control.
    const PermanentId token_id = token.id;
    const PlayerId token_controller = token.controller;
    for (const auto* gains : state.with<tag::IllusoryGains>())
        if (gains->controller != token_controller)
            state.pending_triggers.push_back(make_trigger(*gains, AttachIllusoryGains{token_id}));
}

void attach_illusory_gains(GameState& state, const Trigger& trigger, PermanentId creature, TraceLog& log) {
    Permanent* gains = state.find(trigger.source);
    Permanent* target = state.find(creature);
    if (!gains || gains->phased_out || !target || target->phased_out) return;
    if (gains->attached_to) {
        if (Permanent* old = state.find(*gains->attached_to); old && old->controller != old->owner) {
            emit(state, log, TraceKind::ControlChanged,
                 json{{"id", old->id}, {"name", old->name}, {"from", who(old->controller)}, {"to", who(old->owner)},
                      {"reason", "Illusory Gains left"}});
            old->controller = old->owner;
        }
    }
    gains->attached_to = creature;
    if (target->controller != gains->controller) {
        emit(state, log, TraceKind::ControlChanged,
             json{{"id", target->id}, {"name", target->name}, {"from", who(target->controller)},
                  {"to", who(gains->controller)}, {"reason", "Illusory Gains attached"}});
        target->controller = gains->controller;
    }
}

void soul_snuffers_counters(GameState& state, const Trigger& trigger, TraceLog& log) {
    int n = 0;
    for (auto& p : state.battlefield) {
        if (p.phased_out || !p.is_creature) continue;
        p.minus_counters += 1;
        ++n;
    }
    emit(state, log, TraceKind::CounterAdded,
         json{{"counter", "-1/-1"}, {"count_each", 1}, {"creatures", n}, {"source", trigger.source_name}});
}

void resolve_trigger(GameState& state, const Trigger& trigger, TraceLog& log) {
    std::visit(overloaded{
                   [&](const CreateTokenEffect& e) { create_token(state, trigger, e.token, log); },
                   [&](const AttachIllusoryGains& e) { attach_illusory_gains(state, trigger, e.creature, log); },
                   [&](const MesmericOrbMill& e) { mill_to_bottom(state, e.player, log); },
                   [&](const WildEvocationReveal& e) { forced_cast(state, e.player, log); },
                   [&](const SoulSnuffersCounters&) { soul_snuffers_counters(state, trigger, log); },
               },
               trigger.effect);
}

void place_pending_on_stack(GameState& state, TraceLog& log) {
    auto pending = std::move(state.pending_triggers);
    state.pending_triggers.clear();
    const PlayerId ap = state.active_player;
    std::ranges::stable_sort(pending, [ap](const Trigger& a, const Trigger& b) {
        const bool a_ap = a.controller == ap;
        const bool b_ap = b.controller == ap;
        if (a_ap != b_ap) return a_ap;  // active player's triggers go on the stack first
        return a.source_timestamp < b.source_timestamp;
    });
    for (auto& t : pending) {
        emit(state, log, TraceKind::TriggerFired,
             json{{"source", t.source_name}, {"source_id", t.source}, {"controller", who(t.controller)},
                  {"effect", describe_effect(t.effect)}});
        state.stack.emplace_back(std::move(t));
    }
}

void resolve_top(GameState& state, TraceLog& log) {
    StackItem item = std::move(state.stack.back());
    state.stack.pop_back();
    std::visit(overloaded{
                   [&](const Trigger& t) { resolve_trigger(state, t, log); },
                   [&](const SpellOnStack& s) { resolve_spell(state, s, log); },
               },
               item);
}

bool takes_target(std::string_view card) { return card == kCleansingBeam; }

void untap_step(GameState& state, TraceLog& log) {
    const PlayerId ap = state.active_player;
    const bool choke = !state.with<tag::Choke>().empty();
    std::vector<PermanentId> untapped;
    for (auto& p : state.battlefield) {
        if (p.phased_out || p.controller != ap || !p.tapped) continue;
        if (choke && is_island(p, state)) continue;  // Islands don't untap
        p.tapped = false;
        untapped.push_back(p.id);
        emit(state, log, TraceKind::Untap, json{{"id", p.id}, {"name", p.name}, {"controller", who(p.controller)}});
    }
    for (auto id : untapped) {
        const PlayerId controller = state.find(id)->controller;
        for (const auto* orb : state.with<tag::MesmericOrb>())
            state.pending_triggers.push_back(make_trigger(*orb, MesmericOrbMill{controller, id}));
    }
}

}  // namespace

void phasing_toggle(GameState& state, PlayerId player, TraceLog& log) {
    int phased_in = 0;
    int phased_out = 0;
    std::vector<PermanentId> flipped;
    for (auto& p : state.battlefield) {
        if (!p.has_phasing || p.controller != player) continue;
        p.phased_out = !p.phased_out;
        ++(p.phased_out ? phased_out : phased_in);
        flipped.push_back(p.id);
    }
    if (flipped.empty()) return;
    // Indirect phasing of attached Auras.
    for (auto& p : state.battlefield)
        if (p.attached_to && std::ranges::binary_search(flipped, *p.attached_to))
            p.phased_out = state.find(*p.attached_to)->phased_out;
    emit(state, log, TraceKind::PhaseToggle,
         json{{"player", who(player)}, {"phased_in", phased_in}, {"phased_out", phased_out}});
}

void forced_cast(GameState& state, PlayerId player, TraceLog& log) {
    auto& hand = state.zone(player).hand;
    if (hand.empty()) return;
    json payload{{"player", who(player)}, {"card", hand.front()}, {"hand_size", hand.size()}};
    if (hand.size() >= 2) {
        emit(state, log, TraceKind::ForcedCast, payload);
        throw ForcedMoveViolation(who(player) + " has " + std::to_string(hand.size()) +
                                  " cards in hand; the reveal is not forced");
    }
    SpellOnStack spell{hand.front(), player, std::nullopt};
    if (spell.card != kInfest && spell.card != kCleansingBeam && spell.card != kCoalitionVictory &&
        spell.card != kSoulSnuffers)
        throw EngineError("unknown card '" + spell.card + "'");
    if (takes_target(spell.card)) {
        const auto targets = legal_targets(spell.card, player, state);
        payload["legal_targets"] = targets.size();
        if (targets.size() != 1) {
            emit(state, log, TraceKind::ForcedCast, payload);
            throw ForcedMoveViolation(spell.card + " has " + std::to_string(targets.size()) +
                                      " legal targets; exactly one is required");
        }
        spell.target = targets.front();
        payload["target"] = targets.front();
    }
    hand.pop_front();
    emit(state, log, TraceKind::ForcedCast, payload);
    const std::size_t floor = state.stack.size();
    state.stack.emplace_back(std::move(spell));
    stack_and_resolve(state, log, floor);
}

void resolve_spell(GameState& state, const SpellOnStack& spell, TraceLog& log) {
    json resolved{{"card", spell.card}, {"caster", who(spell.caster)}};
    if (spell.card == kInfest) {
        UntilEotEffect effect{-2, -2, {}, spell.card};
        for (const auto& p : state.battlefield)
            if (!p.phased_out && p.is_creature) effect.scope.push_back(p.id);
        resolved["affected"] = effect.scope.size();
        state.until_eot_effects.push_back(std::move(effect));
    } else if (spell.card == kCleansingBeam) {
        const Permanent* target = spell.target ? state.find(*spell.target) : nullptr;
        if (target && !target->phased_out) {
            std::vector<PermanentId> hit{target->id};
            const ColorSet shared = target->colors;
            for (const auto& p : state.battlefield)
                if (!p.phased_out && p.is_creature && p.id != target->id && p.colors.intersects(shared))
                    hit.push_back(p.id);
            std::ranges::sort(hit);
            resolved["target"] = target->id;
            resolved["affected"] = hit.size();
            emit(state, log, TraceKind::SpellResolved, resolved);
            deal_damage(state, spell.card, hit, 2, log);
            emit(state, log, TraceKind::SpellResolved,
                 json{{"card", spell.card}, {"to", send_to_graveyard(state, spell.caster, spell.card)}});
            return;
        }
        resolved["fizzled"] = true;
    } else if (spell.card == kCoalitionVictory) {
        const ColorSet colors = colors_controlled(spell.caster, state);
        const bool lands = controls_land_of_each_basic_type(spell.caster, state);
        resolved["colors"] = colors.names();
        if (lands && colors == ColorSet::all()) {
            emit(state, log, TraceKind::SpellResolved, resolved);
            state.outcome = Outcome::AliceWins;
            emit(state, log, TraceKind::Win,
                 json{{"player", who(spell.caster)}, {"card", spell.card}, {"colors", colors.names()}});
            return;
        }
    } else if (spell.card == kSoulSnuffers) {
        Permanent body;
        body.name = std::string(kSoulSnuffers);
        body.owner = body.controller = spell.caster;
        body.is_creature = true;
        body.base_power = body.base_toughness = 3;
        body.colors = {Color::Black};
        body.add_type("Elemental");
        body.add_type("Insect");
        body.behaviors.emplace_back(tag::SoulSnuffersETB{});
        const auto& p = state.add(std::move(body));
        resolved["to"] = "battlefield";
        resolved["id"] = p.id;
        emit(state, log, TraceKind::SpellResolved, resolved);
        state.pending_triggers.push_back(make_trigger(p, SoulSnuffersCounters{}));
        state_based_actions(state, log);
        return;
    } else {
        throw EngineError("unknown card '" + spell.card + "'");
    }
    resolved["to"] = send_to_graveyard(state, spell.caster, spell.card);
    emit(state, log, TraceKind::SpellResolved, resolved);
    state_based_actions(state, log);
}

void deal_damage(GameState& state, std::string_view source, std::span<const PermanentId> targets, int amount,
                 TraceLog& log) {
    if (amount < 0) throw PreconditionError("negative damage");
    if (amount == 0) return;
    std::vector<std::string> fungus_types;
    for (const auto* f : state.with<tag::FungusSliverGrant>())
        fungus_types.push_back(f->find<tag::FungusSliverGrant>()->chosen_type);
    std::array<int, 2> prevented{};

    for (auto id : targets) {
        Permanent* p = state.find(id);
        if (!p || p->phased_out || !p->is_creature) continue;
        const bool shielded = std::ranges::any_of(state.with<tag::Vigor>(), [&](const Permanent* v) {
            return v->controller == p->controller && v->id != p->id;
        });
        if (shielded) {
            p->plus_counters += amount;
            ++prevented[static_cast<std::size_t>(p->controller)];
            continue;
        }
        p->marked_damage += amount;
        emit(state, log, TraceKind::DamageDealt,
             json{{"id", p->id}, {"name", p->name}, {"amount", amount}, {"source", source}});
        // Fungus Sliver grant: one counter per damage event.
        if (std::ranges::any_of(fungus_types, [&](const std::string& t) { return p->has_type(t); })) {
            p->plus_counters += 1;
            emit(state, log, TraceKind::CounterAdded,
                 json{{"counter", "+1/+1"}, {"count_each", 1}, {"id", p->id}, {"source", "Fungus Sliver"}});
        }
    }
    for (auto player : {PlayerId::Alice, PlayerId::Bob}) {
        const int n = prevented[static_cast<std::size_t>(player)];
        if (n == 0) continue;
        emit(state, log, TraceKind::DamagePrevented,
             json{{"controller", who(player)}, {"creatures", n}, {"counters_each", amount}, {"source", source},
                  {"by", "Vigor"}});
    }
    state_based_actions(state, log);
}

std::vector<Permanent> state_based_actions(GameState& state, TraceLog& log) {
    std::vector<Permanent> all_dead;
    while (true) {
        for (auto& p : state.battlefield) p = annihilate_counters(std::move(p));
        const auto statics = collect_static_effects(state);
        std::vector<PermanentId> dying;
        for (const auto& p : state.battlefield) {
            if (p.phased_out || !p.is_creature) continue;
            const auto s = effective_stats(p, state, statics);
            if (s.toughness <= 0 || (p.marked_damage > 0 && p.marked_damage >= s.toughness)) dying.push_back(p.id);
        }
        if (dying.empty()) break;

        std::vector<Permanent> dead;
        for (auto id : dying) {
            const Permanent& p = *state.find(id);
            const auto s = effective_stats(p, state, statics);
            emit(state, log, TraceKind::Death,
                 json{{"id", p.id},
                      {"name", p.name},
                      {"controller", who(p.controller)},
                      {"token", p.is_token},
                      {"power", s.power},
                      {"toughness", s.toughness},
                      {"damage", p.marked_damage}});
            dead.push_back(p);
        }
        for (const auto& p : dead) {
            for (const auto& other : state.battlefield)
                if (other.attached_to == p.id)
                    throw EngineError(other.name + " would leave the battlefield with its host " + p.name);
            state.remove(p.id);
            if (p.is_token) continue;  // tokens cease to exist
            if (p.name != kSoulSnuffers)
                throw EngineError("infrastructure permanent died: " + p.name + " #" + std::to_string(p.id));
            const auto to = send_to_graveyard(state, p.owner, p.name);
            emit(state, log, TraceKind::MilledToBottom,
                 json{{"player", who(p.owner)}, {"card", p.name}, {"from", "battlefield"}, {"to", to}});
        }
        for (const auto& p : dead) fire_death_triggers(state, p, log);
        all_dead.insert(all_dead.end(), dead.begin(), dead.end());
    }
    return all_dead;
}

int fire_death_triggers(GameState& state, const Permanent& dead, TraceLog& /*log*/) {
    int queued = 0;
    int program_matches = 0;
    for (const auto& p : state.battlefield) {
        if (p.phased_out || p.id == dead.id) continue;
        const TokenSpec* result = nullptr;
        std::optional<TmState> program;
        if (const auto* r = p.find<tag::RotlungTrigger>(); r && dead.has_type(r->trigger_type)) {
            result = &r->result;
            program = r->program_state;
        } else if (const auto* x = p.find<tag::XathridTrigger>();
                   x && dead.has_type(x->trigger_type) && dead.controller == p.controller) {
            result = &x->result;
            program = x->program_state;
        }
        if (!result) continue;
        if (program) ++program_matches;
        state.pending_triggers.push_back(make_trigger(p, CreateTokenEffect{*result}));
        ++queued;
    }
    if (program_matches > 1)
        throw EngineError("board corruption: " + std::to_string(program_matches) +
                          " phased-in program cards matched the death of " + dead.name);
    return queued;
}

void stack_and_resolve(GameState& state, TraceLog& log, std::size_t floor) {
    while (state.outcome == Outcome::Ongoing) {
        state_based_actions(state, log);
        if (!state.pending_triggers.empty()) {
            place_pending_on_stack(state, log);
            continue;
        }
        if (state.stack.size() <= floor) break;
        resolve_top(state, log);
    }
    if (state.outcome != Outcome::Ongoing) {
        state.stack.clear();
        state.pending_triggers.clear();
    }
}

void mill_to_bottom(GameState& state, PlayerId player, TraceLog& log) {
    auto& library = state.zone(player).library;
    if (library.empty()) {
        emit(state, log, TraceKind::MilledToBottom,
             json{{"player", who(player)}, {"card", nullptr}, {"warning", "empty library"}});
        return;
    }
    std::string card = std::move(library.front());
    library.pop_front();
    const auto to = send_to_graveyard(state, player, card);
    emit(state, log, TraceKind::MilledToBottom,
         json{{"player", who(player)}, {"card", card}, {"from", "library"}, {"to", to}});
}

void advance_turn(GameState& state, TraceLog& log) {
    if (state.outcome != Outcome::Ongoing) throw PreconditionError("the game is over");
    const PlayerId ap = state.active_player;

    state.phase = Phase::Untap;
    phasing_toggle(state, ap, log);
    untap_step(state, log);

    state.phase = Phase::Upkeep;
    // Wild Evocation; an empty hand reveals nothing.
    if (!state.zone(ap).hand.empty())
        for (const auto* evocation : state.with<tag::WildEvocation>())
            state.pending_triggers.push_back(make_trigger(*evocation, WildEvocationReveal{ap}));
    stack_and_resolve(state, log);
    if (state.outcome != Outcome::Ongoing) return;

    state.phase = Phase::Draw;
    const bool skip_draw = std::ranges::any_of(state.with<tag::Recycle>(),
                                               [&](const Permanent* r) { return r->controller == ap; });
    if (!skip_draw) {
        auto& zone = state.zone(ap);
        if (zone.library.empty()) throw EngineError(who(ap) + " would draw from an empty library");
        zone.hand.push_back(std::move(zone.library.front()));
        zone.library.pop_front();
        emit(state, log, TraceKind::Draw, json{{"player", who(ap)}, {"card", zone.hand.back()}});
    }

    // No mana is available and Blazing Archons forbid attacks: main and combat are empty.
    state.phase = Phase::Main;
    state.phase = Phase::End;

    state.phase = Phase::Cleanup;
    state.until_eot_effects.clear();
    for (auto& p : state.battlefield) p.marked_damage = 0;

    state.turn_number += 1;
    state.active_player = opponent(ap);
    state.phase = Phase::Beginning;
}

bool at_step_boundary(const GameState& state) {
    const auto& hand = state.zone(PlayerId::Alice).hand;
    return state.outcome == Outcome::Ongoing && state.active_player == PlayerId::Alice &&
           state.phase == Phase::Beginning && hand.size() == 1 && hand.front() == kInfest;
}

StepReport run_computational_step(GameState& state, TraceLog& log) {
    if (!at_step_boundary(state)) throw PreconditionError("not at a step boundary");
    StepReport report;
    while (true) {
        advance_turn(state, log);
        ++report.alice_turns;
        if (state.outcome == Outcome::AliceWins) {
            report.halted = true;
            break;
        }
        advance_turn(state, log);
        if (at_step_boundary(state)) break;
        if (report.alice_turns >= 4) throw EngineError("computational cycle did not close after 4 Alice turns");
    }
    report.state_changed = !report.halted && report.alice_turns == 3;
    state.steps_completed += 1;
    log.emit(TraceEvent{state.turn_number, state.phase, TraceKind::StepBoundary,
                        json{{"step", state.steps_completed},
                             {"alice_turns", report.alice_turns},
                             {"halted", report.halted}}});
    return report;
}

}  // namespace mtgtm
