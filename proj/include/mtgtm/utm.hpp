#pragma once

// Rogozhin's (2,18) universal machine: symbols, rules and a direct interpreter.

#include <array>
#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mtgtm {

inline constexpr int kNumSymbols = 18;

/// A tape symbol, 1..18. Index i is spelled by the i-th creature type in
/// alphabetical order (1 = Aetherborn ... 18 = Sliver).
class TmSymbol {
public:
    constexpr TmSymbol() = default;
    explicit TmSymbol(int index);

    [[nodiscard]] constexpr int index() const { return index_; }
    [[nodiscard]] std::string_view creature_type() const;
    [[nodiscard]] std::string_view rogozhin_label() const;
    [[nodiscard]] bool is_blank() const { return index_ == 3; }

    static TmSymbol blank() { return TmSymbol(3); }
    /// Throws ParseError for a name outside the 18 tape types.
    static TmSymbol from_type(std::string_view type);
    static std::optional<TmSymbol> try_from_type(std::string_view type);

    friend constexpr bool operator==(TmSymbol, TmSymbol) = default;
    friend constexpr auto operator<=>(TmSymbol, TmSymbol) = default;

private:
    int index_ = 3;
};

/// The 18 creature types, in symbol order.
std::span<const std::string_view> tape_creature_types();

inline constexpr std::string_view kHaltCreatureType = "Assassin";

enum class TmState : std::uint8_t { Q1, Q2, Halted };
enum class Direction : std::uint8_t { Left, Right };
enum class RuleColor : std::uint8_t { White, Green, Blue };

std::string_view to_string(TmState s);
std::string_view to_string(Direction d);
std::string_view to_string(RuleColor c);
/// "q1" / "q2" (case-insensitive). Halted is not a valid input state.
TmState parse_state(std::string_view text);
RuleColor parse_rule_color(std::string_view text);

/// One Rotlung Reanimator / Xathrid Necromancer: (state, read symbol) ->
/// (tapped?, color, token type).
struct RuleCardSpec {
    TmState state = TmState::Q1;
    TmSymbol trigger_type;
    bool result_tapped = false;
    RuleColor result_color = RuleColor::White;
    std::string result_type;
    bool is_halt = false;

    /// White moves left, green moves right; empty for the halt rule.
    [[nodiscard]] std::optional<Direction> direction() const;
    /// The symbol written; empty for the halt rule.
    [[nodiscard]] std::optional<TmSymbol> written_symbol() const;

    friend bool operator==(const RuleCardSpec&, const RuleCardSpec&) = default;
};

/// Two-sided tape. Both sides are stored nearest-first; cells beyond the
/// stored sequences read as blank.
struct TmTape {
    std::deque<TmSymbol> left;
    TmSymbol head;
    std::deque<TmSymbol> right;

    [[nodiscard]] TmSymbol read_left(std::size_t distance) const;
    [[nodiscard]] TmSymbol read_right(std::size_t distance) const;

    friend bool operator==(const TmTape&, const TmTape&) = default;
};

/// Strips trailing (outermost) blanks from both sides.
TmTape tape_normalize(TmTape tape);
std::string format_tape(const TmTape& tape);

struct TmConfig {
    TmTape tape;
    TmState state = TmState::Q1;
    std::uint64_t steps = 0;

    friend bool operator==(const TmConfig&, const TmConfig&) = default;
};

/// A complete, validated (2,18) program with O(1) rule lookup.
class Program {
public:
    /// Throws ParseError listing every violation if `rules` is not a valid program.
    explicit Program(std::vector<RuleCardSpec> rules);

    [[nodiscard]] const RuleCardSpec& lookup(TmState state, TmSymbol symbol) const;
    [[nodiscard]] std::span<const RuleCardSpec> rules() const { return rules_; }
    [[nodiscard]] const RuleCardSpec& halt_rule() const;

private:
    std::vector<RuleCardSpec> rules_;
    std::array<std::array<std::size_t, kNumSymbols>, 2> index_{};
};

/// Rogozhin's program as shipped with the repository (parsed from the bundled manifest).
const Program& rogozhin_program();

TmConfig tm_step(const TmConfig& config, const Program& program);

struct TmRunResult {
    bool halted = false;
    TmConfig final;
    std::vector<TmConfig> history;  // configuration after each applied step
};

TmRunResult tm_run(const TmConfig& config, const Program& program, std::uint64_t max_steps,
                   bool keep_history = false);

}  // namespace mtgtm
