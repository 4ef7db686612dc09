#pragma once

// Reads the machine configuration back off the battlefield and checks the
// game against the direct interpreter, step boundary by step boundary.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mtgtm/board_compiler.hpp"
#include "mtgtm/game_model.hpp"
#include "mtgtm/rules_engine.hpp"
#include "mtgtm/trace.hpp"
#include "mtgtm/utm.hpp"

namespace mtgtm {

/// Throws ExtractionError when the board does not encode a configuration:
/// zero or several 2/2 tape tokens, toughness gaps, a mixed-color side, a
/// misplaced end marker, or an ambiguous phase partition.
TmConfig extract_config(const GameState& state);

struct AuditReport {
    std::vector<std::string> violations;
    std::uint64_t forced_casts = 0;
    std::uint64_t targeted_casts = 0;

    [[nodiscard]] bool clean() const { return violations.empty(); }
};

AuditReport audit_forced_moves(std::span<const TraceEvent> trace);

struct StepCheck {
    std::uint64_t step = 0;
    int alice_turns = 0;
    bool rule_tapped = false;
    bool halted = false;
    bool ok = true;
};

struct Divergence {
    std::uint64_t step = 0;
    std::string detail;
};

struct LockstepOptions {
    bool keep_trace = false;
    /// Fault injection: applied to the freshly built board.
    std::function<void(GameState&)> corrupt;
};

struct CaseReport {
    std::uint64_t seed = 0;
    std::uint64_t case_index = 0;
    TmTape tape;
    TmState start_state = TmState::Q1;
    std::uint64_t steps_run = 0;
    std::optional<std::uint64_t> halted_at;
    std::optional<Divergence> divergence;
    std::vector<StepCheck> steps;
    AuditReport audit;
    std::uint64_t trace_digest = 0;
    std::uint64_t trace_events = 0;
    std::vector<TraceEvent> trace;  // only with keep_trace
    std::optional<GameState> final_state;  // only with keep_trace

    [[nodiscard]] bool ok() const { return !divergence && audit.clean(); }
};

CaseReport lockstep_verify(const BoardRecipe& recipe, std::uint64_t max_steps, const LockstepOptions& options = {});

/// Uniform symbols, 1..16 cells with the head anywhere among them, either start state.
BoardRecipe random_recipe(std::uint64_t seed, std::uint64_t case_index, const std::vector<RuleCardSpec>& program);

/// Runs `cases` random recipes; results come back in case order whatever `threads` is.
std::vector<CaseReport> verify_corpus(std::uint64_t cases, std::uint64_t steps, std::uint64_t seed,
                                      const std::vector<RuleCardSpec>& program, unsigned threads = 0);

/// One "key=value ..." line per case.
std::string format_case_report(const CaseReport& report);

}  // namespace mtgtm
