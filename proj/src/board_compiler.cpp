#include "mtgtm/board_compiler.hpp"

#include <algorithm>

#include "mtgtm/errors.hpp"
#include "mtgtm/rules_engine.hpp"

namespace mtgtm {

namespace {

constexpr ColorSet kLaced{Color::White, Color::Black, Color::Red, Color::Green};
constexpr std::string_view kAssemblyWorker = "Assembly-Worker";

Permanent noncreature(std::string name, PlayerId controller, BehaviorTag behavior) {
    Permanent p;
    p.name = std::move(name);
    p.owner = p.controller = controller;
    p.behaviors.push_back(std::move(behavior));
    return p;
}

// Infrastructure creatures are Prismatic-Laced, and Alice's carry the
// Assembly-Worker type that Steely Resolve protects. The two Dread of Night
// give -2/-2 to every laced creature; starting counters lift the printed body
// to an effective toughness of at least 3 so Infest can't kill it.
Permanent infrastructure_creature(std::string name, PlayerId controller, int power, int toughness,
                                  std::initializer_list<std::string_view> types) {
    Permanent p;
    p.name = std::move(name);
    p.owner = p.controller = controller;
    p.is_creature = true;
    p.base_power = power;
    p.base_toughness = toughness;
    p.colors = kLaced;
    for (auto t : types) p.add_type(std::string(t));
    if (controller == PlayerId::Alice) p.add_type(std::string(kAssemblyWorker));
    p.plus_counters = std::max(0, 3 - (toughness - 2));
    return p;
}

TokenSpec rule_token(const RuleCardSpec& rule) {
    TokenSpec t;
    t.creature_type = rule.result_type;
    t.tapped = rule.result_tapped;
    switch (rule.result_color) {
        case RuleColor::White: t.colors = {Color::White}; break;
        case RuleColor::Green: t.colors = {Color::Green}; break;
        case RuleColor::Blue: t.colors = {Color::Blue}; break;
    }
    t.role = rule.is_halt ? TokenRole::HaltSignal : TokenRole::TapeCell;
    return t;
}

Permanent marker_reanimator(PlayerId controller, std::string_view trigger, TokenSpec result) {
    auto p = infrastructure_creature("Rotlung Reanimator", controller, 2, 2, {"Zombie", "Cleric"});
    p.behaviors.emplace_back(tag::RotlungTrigger{std::string(trigger), std::move(result), std::nullopt});
    return p;
}

Permanent tape_token(TmSymbol symbol, ColorSet color, int distance) {
    Permanent p;
    p.name = std::string(symbol.creature_type()) + " token";
    p.owner = p.controller = PlayerId::Bob;
    p.is_creature = true;
    p.is_token = true;
    p.base_power = p.base_toughness = 2;
    p.plus_counters = distance - 2;
    p.colors = color;
    p.add_type(std::string(symbol.creature_type()));
    p.behaviors.emplace_back(tag::TapeToken{});
    return p;
}

Permanent end_marker(TapeSide side, int distance) {
    Permanent p;
    const bool left = side == TapeSide::Left;
    p.name = left ? "Lhurgoyf token" : "Rat token";
    p.owner = p.controller = PlayerId::Bob;
    p.is_creature = true;
    p.is_token = true;
    p.base_power = p.base_toughness = 2;
    p.plus_counters = distance - 3;  // Shared Triumph supplies the last +1/+1
    p.colors = left ? ColorSet{Color::Green} : ColorSet{Color::White};
    p.add_type(left ? "Lhurgoyf" : "Rat");
    p.behaviors.emplace_back(tag::EndMarker{side});
    return p;
}

}  // namespace

std::vector<Permanent> instantiate_program_cards(const Program& program, TmState start_state) {
    if (start_state == TmState::Halted) throw PreconditionError("start state must be q1 or q2");
    std::vector<Permanent> out;

    // Bob's phasing program cards, one per rule.
    for (const auto& rule : program.rules()) {
        Permanent p;
        const auto trigger = std::string(rule.trigger_type.creature_type());
        if (rule.result_tapped) {
            p = infrastructure_creature("Xathrid Necromancer", PlayerId::Bob, 2, 2, {"Human", "Wizard"});
            p.behaviors.emplace_back(tag::XathridTrigger{trigger, rule_token(rule), rule.state});
        } else {
            p = infrastructure_creature("Rotlung Reanimator", PlayerId::Bob, 2, 2, {"Zombie", "Cleric"});
            p.behaviors.emplace_back(tag::RotlungTrigger{trigger, rule_token(rule), rule.state});
        }
        p.has_phasing = true;
        p.phased_out = rule.state != start_state;
        out.push_back(std::move(p));
    }

    // End-of-tape relay: Bob's Reanimators re-create the marker one cell out,
    // Alice's make a black Cephalid that dies at once and reads as blank.
    TokenSpec lhurgoyf{2, 2, {Color::Green}, "Lhurgoyf", false, TokenRole::EndMarker, TapeSide::Left};
    TokenSpec rat{2, 2, {Color::White}, "Rat", false, TokenRole::EndMarker, TapeSide::Right};
    TokenSpec relay{2, 2, {Color::Black}, "Cephalid", false, TokenRole::Relay, TapeSide::Left};
    out.push_back(marker_reanimator(PlayerId::Alice, "Lhurgoyf", relay));
    out.push_back(marker_reanimator(PlayerId::Bob, "Lhurgoyf", lhurgoyf));
    out.push_back(noncreature("Shared Triumph", PlayerId::Alice, tag::SharedTriumph{"Lhurgoyf"}));
    out.push_back(marker_reanimator(PlayerId::Alice, "Rat", relay));
    out.push_back(marker_reanimator(PlayerId::Bob, "Rat", rat));
    out.push_back(noncreature("Shared Triumph", PlayerId::Alice, tag::SharedTriumph{"Rat"}));

    out.push_back(noncreature("Dread of Night", PlayerId::Alice, tag::DreadOfNight{Color::Black}));
    out.push_back(noncreature("Dread of Night", PlayerId::Alice, tag::DreadOfNight{Color::Black}));
    out.push_back(noncreature("Steely Resolve", PlayerId::Alice, tag::SteelyResolve{std::string(kAssemblyWorker)}));
    {
        auto fungus = infrastructure_creature("Fungus Sliver", PlayerId::Alice, 2, 2, {"Fungus", "Sliver"});
        fungus.behaviors.emplace_back(tag::FungusSliverGrant{"Incarnation"});
        out.push_back(std::move(fungus));
    }
    {
        auto wheel = noncreature("Wheel of Sun and Moon", PlayerId::Alice, tag::WheelOfSunAndMoon{});
        wheel.attached_to_player = PlayerId::Alice;
        out.push_back(std::move(wheel));
    }

    out.push_back(noncreature("Wild Evocation", PlayerId::Bob, tag::WildEvocation{}));
    out.push_back(noncreature("Recycle", PlayerId::Bob, tag::Recycle{}));
    out.push_back(noncreature("Privileged Position", PlayerId::Bob, tag::PrivilegedPosition{}));
    for (auto player : {PlayerId::Alice, PlayerId::Bob}) {
        auto vigor = infrastructure_creature("Vigor", player, 6, 6, {"Elemental", "Incarnation"});
        vigor.behaviors.emplace_back(tag::Vigor{});
        out.push_back(std::move(vigor));
    }
    out.push_back(noncreature("Mesmeric Orb", PlayerId::Alice, tag::MesmericOrb{}));
    {
        Permanent land;
        land.name = "Ancient Tomb";
        land.owner = land.controller = PlayerId::Alice;
        land.is_land = true;
        land.tapped = true;
        out.push_back(std::move(land));
    }
    out.push_back(noncreature("Prismatic Omen", PlayerId::Alice, tag::PrismaticOmen{}));
    out.push_back(noncreature("Choke", PlayerId::Alice, tag::Choke{}));
    for (auto player : {PlayerId::Alice, PlayerId::Bob}) {
        auto archon = infrastructure_creature("Blazing Archon", player, 6, 6, {"Archon"});
        archon.behaviors.emplace_back(tag::BlazingArchon{});
        out.push_back(std::move(archon));
    }
    return out;
}

std::vector<Permanent> encode_tape_tokens(const TmTape& tape, ColorSet head_color) {
    std::vector<Permanent> out;
    const int left = static_cast<int>(tape.left.size());
    const int right = static_cast<int>(tape.right.size());
    // Nearest left cell first: it carries Illusory Gains, standing in for the
    // most recently written cell.
    if (left > 0) {
        for (int i = 0; i < left; ++i) out.push_back(tape_token(tape.left[i], {Color::Green}, 3 + i));
        out.push_back(end_marker(TapeSide::Left, 3 + left));
    } else {
        out.push_back(end_marker(TapeSide::Left, 3));
    }
    out.push_back(tape_token(tape.head, head_color, 2));
    for (int i = 0; i < right; ++i) out.push_back(tape_token(tape.right[i], {Color::White}, 3 + i));
    out.push_back(end_marker(TapeSide::Right, 3 + right));
    return out;
}

GameState build_initial_state(const BoardRecipe& recipe) {
    if (recipe.start_state == TmState::Halted) throw PreconditionError("start state must be q1 or q2");
    if (tape_normalize(recipe.tape) != recipe.tape) throw PreconditionError("tape must be normalized");
    const Program program(recipe.program);

    GameState state;
    for (auto& p : instantiate_program_cards(program, recipe.start_state)) state.add(std::move(p));

    // One Cloak of Invisibility on each program card.
    std::vector<std::pair<PermanentId, bool>> hosts;
    for (const auto& p : state.battlefield)
        if (p.program_state()) hosts.emplace_back(p.id, p.phased_out);
    for (auto [host, out] : hosts) {
        auto cloak = noncreature("Cloak of Invisibility", PlayerId::Alice, tag::CloakOfInvisibility{});
        cloak.attached_to = host;
        cloak.phased_out = out;
        state.add(std::move(cloak));
    }

    PermanentId gains_host = 0;
    for (auto& p : encode_tape_tokens(recipe.tape, recipe.head_token_color)) {
        const auto& added = state.add(std::move(p));
        if (gains_host == 0) gains_host = added.id;
    }
    auto gains = noncreature("Illusory Gains", PlayerId::Alice, tag::IllusoryGains{});
    gains.attached_to = gains_host;
    state.add(std::move(gains));
    state.find(gains_host)->controller = PlayerId::Alice;

    state.zone(PlayerId::Alice).hand = {std::string(kInfest)};
    state.zone(PlayerId::Alice).library = {std::string(kCleansingBeam), std::string(kCoalitionVictory),
                                           std::string(kSoulSnuffers)};
    state.active_player = PlayerId::Alice;
    state.phase = Phase::Beginning;
    state.turn_number = 1;
    state.outcome = Outcome::Ongoing;
    return state;
}

}  // namespace mtgtm
