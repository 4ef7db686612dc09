#pragma once

// Compiles a program and a tape into the starting battlefield.

#include <vector>

#include "mtgtm/game_model.hpp"
#include "mtgtm/utm.hpp"

namespace mtgtm {

struct BoardRecipe {
    std::vector<RuleCardSpec> program;
    TmTape tape;
    TmState start_state = TmState::Q1;
    ColorSet head_token_color{Color::Green};
};

/// Program cards (with their Cloaks), end-marker machinery and the rest of
/// the fixed infrastructure. Permanents come back with id 0; GameState::add
/// assigns ids.
std::vector<Permanent> instantiate_program_cards(const Program& program, TmState start_state);

/// Tape tokens and the two end markers. The head token is Bob's; Illusory
/// Gains belongs on the first token returned (the nearest left cell).
std::vector<Permanent> encode_tape_tokens(const TmTape& tape, ColorSet head_color);

/// Throws PreconditionError for an unnormalized tape or a halted start state,
/// ParseError for an invalid program.
GameState build_initial_state(const BoardRecipe& recipe);

}  // namespace mtgtm
