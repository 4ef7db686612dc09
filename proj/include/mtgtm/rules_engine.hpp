#pragma once

// The forced game line: turn structure, phasing, forced casting, trigger
// stacking (APNAP), state-based actions and win detection.
//
// Every operation mutates the GameState it is given and reports what happened
// to a TraceLog. Copy the state first to keep the old position.

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "mtgtm/game_model.hpp"
#include "mtgtm/trace.hpp"

namespace mtgtm {

inline constexpr std::string_view kInfest = "Infest";
inline constexpr std::string_view kCleansingBeam = "Cleansing Beam";
inline constexpr std::string_view kCoalitionVictory = "Coalition Victory";
inline constexpr std::string_view kSoulSnuffers = "Soul Snuffers";

/// Flips phased_out on every phasing permanent `player` controls; attached
/// Auras follow their host.
void phasing_toggle(GameState& state, PlayerId player, TraceLog& log);

/// Reveals and casts the single card in `player`'s hand, then resolves the
/// stack down to where it was. No-op on an empty hand. Throws
/// ForcedMoveViolation for a hand of two or more, or a target count other than one.
void forced_cast(GameState& state, PlayerId player, TraceLog& log);

/// Resolves one of the four cycle spells and runs state-based actions.
void resolve_spell(GameState& state, const SpellOnStack& spell, TraceLog& log);

/// Deals `amount` damage from `source` to each listed creature, with Vigor
/// prevention and the Fungus Sliver grant, then runs state-based actions.
void deal_damage(GameState& state, std::string_view source, std::span<const PermanentId> targets, int amount,
                 TraceLog& log);

/// Runs to a fixpoint; returns the creatures that died (last known information).
std::vector<Permanent> state_based_actions(GameState& state, TraceLog& log);

/// Queues the death triggers for `dead`. Returns how many were queued.
int fire_death_triggers(GameState& state, const Permanent& dead, TraceLog& log);

/// Stacks pending triggers (APNAP, then ascending source timestamp) and
/// resolves until the stack is back to `floor` items with nothing pending.
void stack_and_resolve(GameState& state, TraceLog& log, std::size_t floor = 0);

/// Mesmeric Orb mill under Wheel of Sun and Moon: top card to the bottom.
void mill_to_bottom(GameState& state, PlayerId player, TraceLog& log);

/// Plays one whole turn for the active player and passes the turn.
void advance_turn(GameState& state, TraceLog& log);

/// Alice's turn is about to begin with Infest as her only card.
bool at_step_boundary(const GameState& state);

struct StepReport {
    int alice_turns = 0;
    bool state_changed = false;
    bool halted = false;
};

/// Advances from one step boundary to the next, or to Alice's win.
StepReport run_computational_step(GameState& state, TraceLog& log);

}  // namespace mtgtm
