#include "mtgtm/verifier.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <random>
#include <sstream>
#include <thread>

#include "mtgtm/errors.hpp"

namespace mtgtm {

namespace {

struct Cell {
    const Permanent* token;
    int toughness;
};

std::deque<TmSymbol> read_side(std::vector<Cell>& cells, const char* side) {
    std::ranges::sort(cells, {}, &Cell::toughness);
    std::deque<TmSymbol> out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const int expected = 3 + static_cast<int>(i);
        if (cells[i].toughness != expected)
            throw ExtractionError(std::string(side) + " side: expected toughness " + std::to_string(expected) +
                                  ", found " + std::to_string(cells[i].toughness) + " (" + cells[i].token->name + ")");
        out.push_back(TmSymbol::from_type(cells[i].token->creature_types.front()));
    }
    return out;
}

std::string config_text(const TmConfig& c) {
    return std::string(to_string(c.state)) + " " + format_tape(c.tape);
}

}  // namespace

TmConfig extract_config(const GameState& state) {
    const auto statics = collect_static_effects(state);
    std::vector<const Permanent*> heads;
    std::vector<Cell> left;
    std::vector<Cell> right;
    std::map<TapeSide, std::vector<Cell>> markers;

    for (const auto& p : state.battlefield) {
        if (p.phased_out || !p.is_token) continue;
        const bool cell = p.has<tag::TapeToken>();
        const auto* marker = p.find<tag::EndMarker>();
        if (!cell && !marker) continue;
        const auto s = effective_stats(p, state, statics);
        if (s.power != s.toughness)
            throw ExtractionError(p.name + " #" + std::to_string(p.id) + " has unequal power and toughness");
        if (s.toughness == 2) {
            heads.push_back(&p);
            continue;
        }
        if (marker) {
            markers[marker->side].push_back({&p, s.toughness});
            continue;
        }
        if (p.creature_types.size() != 1 || !TmSymbol::try_from_type(p.creature_types.front()))
            throw ExtractionError(p.name + " #" + std::to_string(p.id) + " is not a tape symbol");
        if (p.colors == ColorSet{Color::Green})
            left.push_back({&p, s.toughness});
        else if (p.colors == ColorSet{Color::White})
            right.push_back({&p, s.toughness});
        else
            throw ExtractionError("mixed-color side: " + p.name + " #" + std::to_string(p.id) + " is " +
                                  p.colors.names());
    }

    TmConfig config;
    const bool won = state.outcome == Outcome::AliceWins;
    if (heads.size() > 1) throw ExtractionError(std::to_string(heads.size()) + " tape tokens are 2/2");
    std::optional<TapeSide> head_on_marker;
    if (heads.size() == 1) {
        const Permanent& h = *heads.front();
        if (const auto* m = h.find<tag::EndMarker>()) {
            head_on_marker = m->side;
            config.tape.head = TmSymbol::blank();
        } else {
            config.tape.head = TmSymbol::from_type(h.creature_types.front());
        }
    } else if (won) {
        // The Assassin replaced the halting cell; it reads as the halt rule's trigger.
        const Permanent* halt_card = nullptr;
        for (const auto& p : state.battlefield) {
            if (p.phased_out || !p.program_state()) continue;
            const auto* r = p.find<tag::RotlungTrigger>();
            if (r && r->result.role == TokenRole::HaltSignal) halt_card = &p;
        }
        if (!halt_card) throw ExtractionError("game won but no phased-in halt rule card");
        config.tape.head = TmSymbol::from_type(halt_card->find<tag::RotlungTrigger>()->trigger_type);
    } else {
        throw ExtractionError("no tape token is 2/2");
    }

    config.tape.left = read_side(left, "left");
    config.tape.right = read_side(right, "right");
    if (head_on_marker == TapeSide::Left && !config.tape.left.empty())
        throw ExtractionError("head is on the Lhurgoyf marker but green cells remain");
    if (head_on_marker == TapeSide::Right && !config.tape.right.empty())
        throw ExtractionError("head is on the Rat marker but white cells remain");

    for (auto side : {TapeSide::Left, TapeSide::Right}) {
        const auto& found = markers[side];
        const std::size_t expected_count = head_on_marker == side ? 0 : 1;
        const char* name = side == TapeSide::Left ? "Lhurgoyf" : "Rat";
        if (found.size() != expected_count)
            throw ExtractionError(std::string(name) + " marker count " + std::to_string(found.size()));
        if (expected_count == 1) {
            const auto cells = side == TapeSide::Left ? config.tape.left.size() : config.tape.right.size();
            const int expected = 3 + static_cast<int>(cells);
            if (found.front().toughness != expected)
                throw ExtractionError(std::string(name) + " marker at toughness " +
                                      std::to_string(found.front().toughness) + ", expected " +
                                      std::to_string(expected));
        }
    }

    std::map<TmState, int> phased_in;
    std::map<TmState, int> total;
    for (const auto& p : state.battlefield) {
        const auto s = p.program_state();
        if (!s) continue;
        ++total[*s];
        if (!p.phased_out) ++phased_in[*s];
    }
    const bool q1_in = phased_in[TmState::Q1] > 0;
    const bool q2_in = phased_in[TmState::Q2] > 0;
    if (q1_in == q2_in) throw ExtractionError("ambiguous phase partition");
    const TmState active = q1_in ? TmState::Q1 : TmState::Q2;
    if (phased_in[active] != total[active]) throw ExtractionError("program set only partly phased in");

    config.state = won ? TmState::Halted : active;
    config.steps = state.steps_completed;
    config.tape = tape_normalize(std::move(config.tape));
    return config;
}

AuditReport audit_forced_moves(std::span<const TraceEvent> trace) {
    AuditReport report;
    std::uint64_t index = 0;
    for (const auto& e : trace) {
        ++index;
        const auto where = "event " + std::to_string(index) + " (turn " + std::to_string(e.turn_number) + "): ";
        if (e.kind != TraceKind::ForcedCast) continue;
        ++report.forced_casts;
        const auto& p = e.payload;
        if (!p.contains("hand_size") || p["hand_size"].get<int>() != 1)
            report.violations.push_back(where + "cast from a hand of size " +
                                        (p.contains("hand_size") ? p["hand_size"].dump() : std::string("?")));
        if (p.contains("legal_targets")) {
            ++report.targeted_casts;
            if (p["legal_targets"].get<int>() != 1)
                report.violations.push_back(where + p.value("card", std::string("?")) + " had " +
                                            p["legal_targets"].dump() + " legal targets");
        }
        if (e.phase != Phase::Upkeep)
            report.violations.push_back(where + "cast outside the Wild Evocation upkeep trigger");
    }
    return report;
}

CaseReport lockstep_verify(const BoardRecipe& recipe, std::uint64_t max_steps, const LockstepOptions& options) {
    if (max_steps < 1) throw PreconditionError("max_steps must be at least 1");
    const Program program(recipe.program);
    CaseReport report;
    report.tape = recipe.tape;
    report.start_state = recipe.start_state;

    GameState state = build_initial_state(recipe);
    if (options.corrupt) options.corrupt(state);
    TmConfig oracle{recipe.tape, recipe.start_state, 0};
    TraceLog log;

    for (std::uint64_t k = 1; k <= max_steps; ++k) {
        const auto& rule = program.lookup(oracle.state, oracle.tape.head);
        const TmConfig expected = tm_step(oracle, program);
        StepCheck check{k, 0, rule.result_tapped, false, true};
        auto diverge = [&](std::string detail) {
            check.ok = false;
            report.divergence = Divergence{k, std::move(detail)};
        };
        try {
            const auto step = run_computational_step(state, log);
            check.alice_turns = step.alice_turns;
            check.halted = step.halted;
            const bool oracle_halted = expected.state == TmState::Halted;
            if (step.halted != oracle_halted) {
                diverge(oracle_halted ? "oracle halted, game did not" : "game won, oracle did not halt");
            } else if (!step.halted && step.alice_turns != (rule.result_tapped ? 3 : 4)) {
                diverge("cycle took " + std::to_string(step.alice_turns) + " Alice turns for a " +
                        (rule.result_tapped ? "tapped" : "untapped") + " rule");
            } else if (step.halted && step.alice_turns != 3) {
                diverge("win came on Alice turn " + std::to_string(step.alice_turns) + " of the cycle");
            } else {
                const TmConfig got = extract_config(state);
                if (got.tape != expected.tape || got.state != expected.state || got.steps != expected.steps)
                    diverge("expected " + config_text(expected) + ", board has " + config_text(got));
            }
        } catch (const Error& e) {
            diverge(e.what());
        }
        report.steps.push_back(check);
        report.steps_run = k;
        oracle = expected;
        if (report.divergence) break;
        if (check.halted) {
            report.halted_at = k;
            break;
        }
    }

    report.audit = audit_forced_moves(log.events());
    report.trace_digest = log.digest();
    report.trace_events = log.count();
    if (options.keep_trace) {
        report.trace = log.events();
        report.final_state = std::move(state);
    }
    return report;
}

BoardRecipe random_recipe(std::uint64_t seed, std::uint64_t case_index, const std::vector<RuleCardSpec>& program) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(case_index), static_cast<std::uint32_t>(case_index >> 32)};
    std::mt19937_64 rng(seq);
    auto uniform = [&](std::uint64_t lo, std::uint64_t hi) { return lo + rng() % (hi - lo + 1); };

    const auto length = uniform(1, 16);
    const auto head = uniform(0, length - 1);
    std::vector<TmSymbol> cells;
    for (std::uint64_t i = 0; i < length; ++i) cells.emplace_back(static_cast<int>(uniform(1, kNumSymbols)));

    BoardRecipe recipe;
    recipe.program = program;
    recipe.start_state = uniform(0, 1) == 0 ? TmState::Q1 : TmState::Q2;
    recipe.tape.head = cells[head];
    for (auto i = head; i-- > 0;) recipe.tape.left.push_back(cells[i]);
    for (auto i = head + 1; i < length; ++i) recipe.tape.right.push_back(cells[i]);
    recipe.tape = tape_normalize(std::move(recipe.tape));
    return recipe;
}

std::vector<CaseReport> verify_corpus(std::uint64_t cases, std::uint64_t steps, std::uint64_t seed,
                                      const std::vector<RuleCardSpec>& program, unsigned threads) {
    std::vector<CaseReport> reports(cases);
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, std::max<std::uint64_t>(cases, 1)));
    std::atomic<std::uint64_t> next{0};
    auto worker = [&] {
        for (auto i = next++; i < cases; i = next++) {
            auto report = lockstep_verify(random_recipe(seed, i, program), steps);
            report.seed = seed;
            report.case_index = i;
            reports[i] = std::move(report);
        }
    };
    {
        std::vector<std::jthread> pool;
        for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
        worker();
    }
    return reports;
}

std::string format_case_report(const CaseReport& r) {
    std::ostringstream out;
    out << "case=" << r.case_index << " seed=" << r.seed << " start=" << to_string(r.start_state) << " tape=\""
        << format_tape(r.tape) << "\" steps=" << r.steps_run << " result=";
    if (r.divergence)
        out << "divergence@" << r.divergence->step;
    else if (r.halted_at)
        out << "halted@" << *r.halted_at;
    else
        out << "ok";
    out << " turns=";
    for (const auto& s : r.steps) out << s.alice_turns;
    out << " audit=" << r.audit.violations.size() << " events=" << r.trace_events
        << " digest=" << hex_digest(r.trace_digest);
    if (r.divergence) out << " first_divergence=\"" << r.divergence->detail << '"';
    return out.str();
}

}  // namespace mtgtm
