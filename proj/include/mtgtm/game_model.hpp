#pragma once

// Battlefield object model and the flat static-effect algebra used by the
// construction: base + counters + anthems + until-end-of-turn deltas.

#include <array>
#include <cstdint>
#include <deque>
#include <initializer_list>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mtgtm/utm.hpp"

namespace mtgtm {

enum class PlayerId : std::uint8_t { Alice = 0, Bob = 1 };

constexpr PlayerId opponent(PlayerId p) { return p == PlayerId::Alice ? PlayerId::Bob : PlayerId::Alice; }
std::string_view to_string(PlayerId p);

enum class Color : std::uint8_t { White, Blue, Black, Red, Green };
std::string_view to_string(Color c);

class ColorSet {
public:
    constexpr ColorSet() = default;
    constexpr ColorSet(std::initializer_list<Color> colors) {
        for (auto c : colors) insert(c);
    }

    constexpr void insert(Color c) { bits_ |= bit(c); }
    constexpr void erase(Color c) { bits_ &= static_cast<std::uint8_t>(~bit(c)); }
    [[nodiscard]] constexpr bool contains(Color c) const { return (bits_ & bit(c)) != 0; }
    [[nodiscard]] constexpr bool intersects(ColorSet o) const { return (bits_ & o.bits_) != 0; }
    [[nodiscard]] constexpr bool empty() const { return bits_ == 0; }
    [[nodiscard]] int size() const;
    [[nodiscard]] constexpr ColorSet united(ColorSet o) const {
        ColorSet r;
        r.bits_ = bits_ | o.bits_;
        return r;
    }
    static constexpr ColorSet all() { return {Color::White, Color::Blue, Color::Black, Color::Red, Color::Green}; }

    /// "WUBRG"-style letters in that order; "-" when colorless.
    [[nodiscard]] std::string letters() const;
    /// Lower-case names joined by '+', "colorless" when empty.
    [[nodiscard]] std::string names() const;

    friend constexpr bool operator==(ColorSet, ColorSet) = default;

private:
    static constexpr std::uint8_t bit(Color c) { return static_cast<std::uint8_t>(1u << static_cast<unsigned>(c)); }
    std::uint8_t bits_ = 0;
};

using PermanentId = std::uint32_t;

enum class TapeSide : std::uint8_t { Left, Right };

/// What a created token stands for in the encoding.
enum class TokenRole : std::uint8_t { TapeCell, EndMarker, Relay, HaltSignal };

struct TokenSpec {
    int power = 2;
    int toughness = 2;
    ColorSet colors;
    std::string creature_type;
    bool tapped = false;
    TokenRole role = TokenRole::TapeCell;
    TapeSide marker_side = TapeSide::Left;  // EndMarker only

    friend bool operator==(const TokenSpec&, const TokenSpec&) = default;
};

namespace tag {
// "Whenever this or another <trigger_type> dies, create <result>."
struct RotlungTrigger {
    std::string trigger_type;
    TokenSpec result;
    std::optional<TmState> program_state;  // empty for the end-marker Reanimators
    friend bool operator==(const RotlungTrigger&, const RotlungTrigger&) = default;
};
// As Rotlung, but only for creatures its controller controls; token is tapped.
struct XathridTrigger {
    std::string trigger_type;
    TokenSpec result;
    std::optional<TmState> program_state;
    friend bool operator==(const XathridTrigger&, const XathridTrigger&) = default;
};
struct IllusoryGains { friend bool operator==(IllusoryGains, IllusoryGains) = default; };
struct CloakOfInvisibility { friend bool operator==(CloakOfInvisibility, CloakOfInvisibility) = default; };
struct WheelOfSunAndMoon { friend bool operator==(WheelOfSunAndMoon, WheelOfSunAndMoon) = default; };
struct SteelyResolve {
    std::string chosen_type;
    friend bool operator==(const SteelyResolve&, const SteelyResolve&) = default;
};
struct DreadOfNight {
    Color chosen_color = Color::Black;
    friend bool operator==(DreadOfNight, DreadOfNight) = default;
};
struct FungusSliverGrant {
    std::string chosen_type;
    friend bool operator==(const FungusSliverGrant&, const FungusSliverGrant&) = default;
};
struct SharedTriumph {
    std::string chosen_type;
    friend bool operator==(const SharedTriumph&, const SharedTriumph&) = default;
};
struct WildEvocation { friend bool operator==(WildEvocation, WildEvocation) = default; };
struct Recycle { friend bool operator==(Recycle, Recycle) = default; };
struct PrivilegedPosition { friend bool operator==(PrivilegedPosition, PrivilegedPosition) = default; };
struct Vigor { friend bool operator==(Vigor, Vigor) = default; };
struct MesmericOrb { friend bool operator==(MesmericOrb, MesmericOrb) = default; };
struct PrismaticOmen { friend bool operator==(PrismaticOmen, PrismaticOmen) = default; };
struct Choke { friend bool operator==(Choke, Choke) = default; };
struct BlazingArchon { friend bool operator==(BlazingArchon, BlazingArchon) = default; };
struct SoulSnuffersETB { friend bool operator==(SoulSnuffersETB, SoulSnuffersETB) = default; };
struct TapeToken { friend bool operator==(TapeToken, TapeToken) = default; };
struct EndMarker {
    TapeSide side = TapeSide::Left;
    friend bool operator==(EndMarker, EndMarker) = default;
};
}  // namespace tag

using BehaviorTag =
    std::variant<tag::RotlungTrigger, tag::XathridTrigger, tag::IllusoryGains, tag::CloakOfInvisibility,
                 tag::WheelOfSunAndMoon, tag::SteelyResolve, tag::DreadOfNight, tag::FungusSliverGrant,
                 tag::SharedTriumph, tag::WildEvocation, tag::Recycle, tag::PrivilegedPosition, tag::Vigor,
                 tag::MesmericOrb, tag::PrismaticOmen, tag::Choke, tag::BlazingArchon, tag::SoulSnuffersETB,
                 tag::TapeToken, tag::EndMarker>;

std::string describe(const BehaviorTag& tag);

struct Permanent {
    PermanentId id = 0;
    std::string name;
    PlayerId owner = PlayerId::Alice;
    PlayerId controller = PlayerId::Alice;
    bool is_creature = false;
    bool is_land = false;
    int base_power = 0;
    int base_toughness = 0;
    ColorSet colors;
    std::vector<std::string> creature_types;  // sorted
    bool tapped = false;
    bool phased_out = false;
    bool has_phasing = false;
    int plus_counters = 0;
    int minus_counters = 0;
    int marked_damage = 0;
    std::optional<PermanentId> attached_to;
    std::optional<PlayerId> attached_to_player;
    std::vector<BehaviorTag> behaviors;
    bool is_token = false;
    std::uint64_t timestamp = 0;

    [[nodiscard]] bool has_type(std::string_view type) const;
    void add_type(std::string type);

    template <class T>
    [[nodiscard]] const T* find() const {
        for (const auto& b : behaviors)
            if (const T* t = std::get_if<T>(&b)) return t;
        return nullptr;
    }
    template <class T>
    [[nodiscard]] bool has() const { return find<T>() != nullptr; }

    /// Bob's phasing Rotlung/Xathrid encoding one rule; its state set.
    [[nodiscard]] std::optional<TmState> program_state() const;
};

Permanent annihilate_counters(Permanent p);

struct PlayerZone {
    PlayerId player = PlayerId::Alice;
    std::deque<std::string> hand;
    std::deque<std::string> library;  // top first
    std::vector<std::string> graveyard;
};

enum class Phase : std::uint8_t { Beginning, Untap, Upkeep, Draw, Main, End, Cleanup };
std::string_view to_string(Phase p);

enum class Outcome : std::uint8_t { Ongoing, AliceWins, StepLimit };
std::string_view to_string(Outcome o);

struct UntilEotEffect {
    int power_delta = 0;
    int toughness_delta = 0;
    std::vector<PermanentId> scope;  // sorted; creatures present when the effect began
    std::string source;
};

struct CreateTokenEffect {
    TokenSpec token;
};
struct AttachIllusoryGains {
    PermanentId creature = 0;
};
struct MesmericOrbMill {
    PlayerId player = PlayerId::Alice;
    PermanentId untapped = 0;
};
struct WildEvocationReveal {
    PlayerId player = PlayerId::Alice;
};
struct SoulSnuffersCounters {};

using TriggerEffect =
    std::variant<CreateTokenEffect, AttachIllusoryGains, MesmericOrbMill, WildEvocationReveal, SoulSnuffersCounters>;

struct Trigger {
    PermanentId source = 0;
    std::string source_name;
    PlayerId controller = PlayerId::Alice;
    std::uint64_t source_timestamp = 0;
    TriggerEffect effect;
};

struct SpellOnStack {
    std::string card;
    PlayerId caster = PlayerId::Alice;
    std::optional<PermanentId> target;
};

using StackItem = std::variant<Trigger, SpellOnStack>;

struct GameState {
    std::vector<Permanent> battlefield;  // ascending id
    std::array<PlayerZone, 2> players{PlayerZone{PlayerId::Alice, {}, {}, {}}, PlayerZone{PlayerId::Bob, {}, {}, {}}};
    PlayerId active_player = PlayerId::Alice;
    std::uint64_t turn_number = 1;
    Phase phase = Phase::Beginning;
    std::vector<Trigger> pending_triggers;
    std::vector<StackItem> stack;  // back() is the top
    std::vector<UntilEotEffect> until_eot_effects;
    Outcome outcome = Outcome::Ongoing;
    std::uint64_t steps_completed = 0;
    PermanentId next_id = 1;
    std::uint64_t next_timestamp = 1;

    PlayerZone& zone(PlayerId p) { return players[static_cast<std::size_t>(p)]; }
    [[nodiscard]] const PlayerZone& zone(PlayerId p) const { return players[static_cast<std::size_t>(p)]; }

    [[nodiscard]] const Permanent* find(PermanentId id) const;
    Permanent* find(PermanentId id);
    /// Assigns id and timestamp, keeps the battlefield ordered.
    Permanent& add(Permanent p);
    void remove(PermanentId id);

    template <class T>
    [[nodiscard]] std::vector<const Permanent*> with() const {
        std::vector<const Permanent*> out;
        for (const auto& p : battlefield)
            if (!p.phased_out && p.has<T>()) out.push_back(&p);
        return out;
    }
};

struct Stats {
    int power = 0;
    int toughness = 0;
    friend bool operator==(Stats, Stats) = default;
};

/// Anthem summary gathered once per query batch.
struct StaticEffects {
    std::map<std::string, int, std::less<>> type_bonus;  // Shared Triumph
    std::array<int, 5> color_penalty{};                  // Dread of Night, per color
};

StaticEffects collect_static_effects(const GameState& state);

/// Throws PreconditionError for a phased-out permanent.
Stats effective_stats(const Permanent& p, const GameState& state);
Stats effective_stats(const Permanent& p, const GameState& state, const StaticEffects& statics);

/// Legal targets of `spell` cast by `caster`. Only Cleansing Beam targets.
std::vector<PermanentId> legal_targets(std::string_view spell, PlayerId caster, const GameState& state);

ColorSet colors_controlled(PlayerId player, const GameState& state);

/// Island test for Choke: Prismatic Omen makes its controller's lands every basic type.
bool is_island(const Permanent& land, const GameState& state);
bool controls_land_of_each_basic_type(PlayerId player, const GameState& state);

}  // namespace mtgtm
