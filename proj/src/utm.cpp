#include "mtgtm/utm.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "mtgtm/errors.hpp"
#include "mtgtm/manifest.hpp"

namespace mtgtm {

namespace {

constexpr std::array<std::string_view, kNumSymbols> kTypes = {
    "Aetherborn", "Basilisk", "Cephalid", "Demon",    "Elf",      "Faerie",
    "Giant",      "Harpy",    "Illusion", "Juggernaut", "Kavu",   "Leviathan",
    "Myr",        "Noggle",   "Orc",      "Pegasus",  "Rhino",    "Sliver"};

// Rogozhin's notation, display only.
constexpr std::array<std::string_view, kNumSymbols> kLabels = {
    "1",   "->1",  "<-1",  "->1_1", "<-1_1", "b",   "->b", "<-b", "->b_1",
    "<-b_1", "b_2", "b_3", "c",     "->c",   "<-c", "->c_1", "<-c_1", "c_2"};

std::string lower(std::string_view s) {
    std::string out(s);
    std::ranges::transform(out, out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

void strip_trailing_blanks(std::deque<TmSymbol>& side) {
    while (!side.empty() && side.back().is_blank()) side.pop_back();
}

}  // namespace

TmSymbol::TmSymbol(int index) : index_(index) {
    if (index < 1 || index > kNumSymbols)
        throw PreconditionError("tape symbol index out of range: " + std::to_string(index));
}

std::string_view TmSymbol::creature_type() const { return kTypes[index_ - 1]; }
std::string_view TmSymbol::rogozhin_label() const { return kLabels[index_ - 1]; }

std::optional<TmSymbol> TmSymbol::try_from_type(std::string_view type) {
    auto it = std::ranges::find(kTypes, type);
    if (it == kTypes.end()) return std::nullopt;
    return TmSymbol(static_cast<int>(it - kTypes.begin()) + 1);
}

TmSymbol TmSymbol::from_type(std::string_view type) {
    if (auto s = try_from_type(type)) return *s;
    throw ParseError("unknown tape creature type '" + std::string(type) + "'");
}

std::span<const std::string_view> tape_creature_types() { return kTypes; }

std::string_view to_string(TmState s) {
    switch (s) {
        case TmState::Q1: return "q1";
        case TmState::Q2: return "q2";
        case TmState::Halted: return "halted";
    }
    return "?";
}

std::string_view to_string(Direction d) { return d == Direction::Left ? "left" : "right"; }

std::string_view to_string(RuleColor c) {
    switch (c) {
        case RuleColor::White: return "white";
        case RuleColor::Green: return "green";
        case RuleColor::Blue: return "blue";
    }
    return "?";
}

TmState parse_state(std::string_view text) {
    auto s = lower(text);
    if (s == "q1") return TmState::Q1;
    if (s == "q2") return TmState::Q2;
    throw ParseError("bad control state '" + std::string(text) + "' (expected q1 or q2)");
}

RuleColor parse_rule_color(std::string_view text) {
    auto s = lower(text);
    if (s == "white") return RuleColor::White;
    if (s == "green") return RuleColor::Green;
    if (s == "blue") return RuleColor::Blue;
    throw ParseError("bad color '" + std::string(text) + "' (expected white, green or blue)");
}

std::optional<Direction> RuleCardSpec::direction() const {
    switch (result_color) {
        case RuleColor::White: return Direction::Left;
        case RuleColor::Green: return Direction::Right;
        case RuleColor::Blue: break;
    }
    return std::nullopt;
}

std::optional<TmSymbol> RuleCardSpec::written_symbol() const {
    if (is_halt) return std::nullopt;
    return TmSymbol::try_from_type(result_type);
}

TmSymbol TmTape::read_left(std::size_t distance) const {
    return distance < left.size() ? left[distance] : TmSymbol::blank();
}

TmSymbol TmTape::read_right(std::size_t distance) const {
    return distance < right.size() ? right[distance] : TmSymbol::blank();
}

TmTape tape_normalize(TmTape tape) {
    strip_trailing_blanks(tape.left);
    strip_trailing_blanks(tape.right);
    return tape;
}

std::string format_tape(const TmTape& tape) {
    // Left side printed outermost-first so the line reads like the tape.
    std::ostringstream out;
    for (auto it = tape.left.rbegin(); it != tape.left.rend(); ++it) out << it->creature_type() << ' ';
    out << '[' << tape.head.creature_type() << ']';
    for (auto s : tape.right) out << ' ' << s.creature_type();
    return out.str();
}

Program::Program(std::vector<RuleCardSpec> rules) : rules_(std::move(rules)) {
    auto report = validate_program(rules_);
    if (!report.ok()) {
        std::string msg = "invalid program:";
        for (const auto& v : report.violations) msg += "\n  " + v;
        throw ParseError(msg);
    }
    for (std::size_t i = 0; i < rules_.size(); ++i) {
        const auto& r = rules_[i];
        index_[r.state == TmState::Q1 ? 0 : 1][r.trigger_type.index() - 1] = i;
    }
}

const RuleCardSpec& Program::lookup(TmState state, TmSymbol symbol) const {
    if (state == TmState::Halted) throw PreconditionError("no rule applies in the halted state");
    return rules_[index_[state == TmState::Q1 ? 0 : 1][symbol.index() - 1]];
}

const RuleCardSpec& Program::halt_rule() const {
    return *std::ranges::find_if(rules_, &RuleCardSpec::is_halt);
}

const Program& rogozhin_program() {
    static const Program program = [] {
        std::istringstream in{std::string(bundled_manifest_text())};
        return Program(load_manifest(in));
    }();
    return program;
}

TmConfig tm_step(const TmConfig& config, const Program& program) {
    if (config.state == TmState::Halted) throw PreconditionError("cannot step a halted machine");
    const auto& rule = program.lookup(config.state, config.tape.head);
    TmConfig next = config;
    next.steps += 1;
    if (rule.is_halt) {
        next.state = TmState::Halted;
        return next;
    }
    auto& tape = next.tape;
    const TmSymbol written = *rule.written_symbol();
    if (*rule.direction() == Direction::Left) {
        tape.right.push_front(written);
        tape.head = tape.left.empty() ? TmSymbol::blank() : tape.left.front();
        if (!tape.left.empty()) tape.left.pop_front();
    } else {
        tape.left.push_front(written);
        tape.head = tape.right.empty() ? TmSymbol::blank() : tape.right.front();
        if (!tape.right.empty()) tape.right.pop_front();
    }
    strip_trailing_blanks(tape.left);
    strip_trailing_blanks(tape.right);
    if (rule.result_tapped) next.state = config.state == TmState::Q1 ? TmState::Q2 : TmState::Q1;
    return next;
}

TmRunResult tm_run(const TmConfig& config, const Program& program, std::uint64_t max_steps,
                   bool keep_history) {
    if (max_steps < 1) throw PreconditionError("max_steps must be at least 1");
    TmRunResult result;
    result.final = config;
    for (std::uint64_t i = 0; i < max_steps && result.final.state != TmState::Halted; ++i) {
        result.final = tm_step(result.final, program);
        if (keep_history) result.history.push_back(result.final);
    }
    result.halted = result.final.state == TmState::Halted;
    return result;
}

}  // namespace mtgtm
