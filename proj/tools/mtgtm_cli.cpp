// mtgtm: run, verify and inspect the card-game Turing machine.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "mtgtm/board_compiler.hpp"
#include "mtgtm/errors.hpp"
#include "mtgtm/manifest.hpp"
#include "mtgtm/rules_engine.hpp"
#include "mtgtm/snapshot.hpp"
#include "mtgtm/trace.hpp"
#include "mtgtm/verifier.hpp"

namespace {

using namespace mtgtm;

std::vector<RuleCardSpec> load_program(const std::string& manifest) {
    if (!manifest.empty()) return load_manifest_file(manifest);
    if (const char* env = std::getenv("MTGTM_MANIFEST"); env && *env) return load_manifest_file(env);
    const auto rules = rogozhin_program().rules();
    return {rules.begin(), rules.end()};
}

BoardRecipe make_recipe(const std::string& tape_path, const std::string& state, const std::string& manifest) {
    BoardRecipe recipe;
    recipe.program = load_program(manifest);
    recipe.tape = load_tape_file(tape_path).tape;
    recipe.start_state = parse_state(state);
    return recipe;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << text;
    if (!out) throw Error("write failed: " + path);
}

int cmd_run(const std::string& tape, const std::string& state_name, std::uint64_t max_steps,
            const std::string& trace_path, const std::string& manifest) {
    const auto recipe = make_recipe(tape, state_name, manifest);
    GameState state = build_initial_state(recipe);
    TraceLog log;
    int status = 0;
    try {
        for (std::uint64_t k = 0; k < max_steps && state.outcome == Outcome::Ongoing; ++k)
            run_computational_step(state, log);
        const auto config = extract_config(state);
        if (state.outcome == Outcome::AliceWins)
            std::cout << "halted-alice-wins at step " << state.steps_completed << '\n';
        else
            std::cout << "step-limit\n";
        std::cout << "state " << to_string(config.state) << '\n' << "tape " << format_tape(config.tape) << '\n';
    } catch (const ForcedMoveViolation& e) {
        std::cerr << "forced-move violation: " << e.what() << '\n';
        if (!log.events().empty()) std::cerr << "offending event: " << log.events().back().to_json_line() << '\n';
        status = 3;
    } catch (const EngineError& e) {
        std::cerr << "engine error at step " << state.steps_completed + 1 << ": " << e.what() << '\n';
        status = 3;
    }
    if (!trace_path.empty()) write_file(trace_path, log.to_ndjson());
    return status;
}

int cmd_verify(std::uint64_t cases, std::uint64_t steps, std::uint64_t seed, unsigned threads,
               const std::string& report_path, const std::string& manifest) {
    const auto reports = verify_corpus(cases, steps, seed, load_program(manifest), threads);
    std::string text;
    std::uint64_t ok = 0;
    for (const auto& r : reports) {
        text += format_case_report(r) + '\n';
        for (const auto& v : r.audit.violations) text += "  audit: " + v + '\n';
        ok += r.ok() ? 1 : 0;
    }
    std::cout << text << ok << '/' << cases << " ok\n";
    if (!report_path.empty()) write_file(report_path, text);
    return ok == cases ? 0 : 1;
}

int cmd_dump(const std::string& tape, const std::string& state_name, const std::string& format,
             const std::string& manifest) {
    const GameState state = build_initial_state(make_recipe(tape, state_name, manifest));
    if (format == "json")
        std::cout << dump_board_json(state).dump(2) << '\n';
    else
        std::cout << dump_board_text(state);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rogozhin (2,18) universal Turing machine on a Magic: The Gathering board"};
    app.require_subcommand(1);
    std::string manifest;
    app.add_option("--manifest", manifest, "program manifest (default: $MTGTM_MANIFEST, else bundled)");

    std::string tape, state, trace, report, format = "text";
    std::uint64_t max_steps = 0, cases = 0, steps = 0, seed = 0;
    unsigned threads = 0;
    auto state_check = CLI::IsMember({"q1", "q2"});

    auto* run = app.add_subcommand("run", "build the board and play until Alice wins or the step limit");
    run->add_option("--tape", tape, "tape file (JSON)")->required()->check(CLI::ExistingFile);
    run->add_option("--state", state, "start state")->required()->check(state_check);
    run->add_option("--max-steps", max_steps, "computational steps")->required()->check(CLI::PositiveNumber);
    run->add_option("--trace", trace, "write the NDJSON trace here");
    run->add_option("--manifest", manifest, "program manifest");

    auto* verify = app.add_subcommand("verify", "lockstep-check random tapes against the interpreter");
    verify->add_option("--cases", cases, "number of random tapes")->required()->check(CLI::PositiveNumber);
    verify->add_option("--steps", steps, "steps per case")->required()->check(CLI::PositiveNumber);
    verify->add_option("--seed", seed, "corpus seed")->required();
    verify->add_option("--threads", threads, "worker threads (0 = all cores)");
    verify->add_option("--report", report, "write the per-case report here");
    verify->add_option("--manifest", manifest, "program manifest");

    auto* dump = app.add_subcommand("dump-board", "print the starting board snapshot");
    dump->add_option("--tape", tape, "tape file (JSON)")->required()->check(CLI::ExistingFile);
    dump->add_option("--state", state, "start state")->required()->check(state_check);
    dump->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));
    dump->add_option("--manifest", manifest, "program manifest");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) return cmd_run(tape, state, max_steps, trace, manifest);
        if (*verify) return cmd_verify(cases, steps, seed, threads, report, manifest);
        return cmd_dump(tape, state, format, manifest);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
