#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "mtgtm/board_compiler.hpp"
#include "mtgtm/errors.hpp"
#include "mtgtm/snapshot.hpp"
#include "mtgtm/verifier.hpp"

using namespace mtgtm;

namespace {

std::vector<RuleCardSpec> rule_table() {
    const auto rules = rogozhin_program().rules();
    return {rules.begin(), rules.end()};
}

TmTape tape_of(std::initializer_list<std::string_view> left, std::string_view head,
               std::initializer_list<std::string_view> right) {
    TmTape t;
    for (auto s : left) t.left.push_back(TmSymbol::from_type(s));
    t.head = TmSymbol::from_type(head);
    for (auto s : right) t.right.push_back(TmSymbol::from_type(s));
    return t;
}

GameState board(TmTape tape, TmState s = TmState::Q1) { return build_initial_state({rule_table(), std::move(tape), s}); }

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const Permanent* with_type(const GameState& s, std::string_view type, bool tokens_only = true) {
    for (const auto& p : s.battlefield)
        if ((!tokens_only || p.is_token) && p.has_type(type)) return &p;
    return nullptr;
}

}  // namespace

TEST(ProgramCards, RotlungXathridSplit) {
    const auto cards = instantiate_program_cards(rogozhin_program(), TmState::Q1);
    int rotlung = 0, xathrid = 0, q1_in = 0, q2_in = 0;
    for (const auto& p : cards) {
        if (!p.program_state()) continue;
        EXPECT_EQ(p.controller, PlayerId::Bob);
        EXPECT_TRUE(p.has_phasing);
        rotlung += p.name == "Rotlung Reanimator";
        xathrid += p.name == "Xathrid Necromancer";
        if (!p.phased_out) ++(*p.program_state() == TmState::Q1 ? q1_in : q2_in);
    }
    EXPECT_EQ(rotlung, 29);
    EXPECT_EQ(xathrid, 7);
    EXPECT_EQ(q1_in, 18);
    EXPECT_EQ(q2_in, 0);
}

TEST(ProgramCards, MarkerReanimatorsDoNotPhase) {
    const auto cards = instantiate_program_cards(rogozhin_program(), TmState::Q2);
    int markers = 0;
    for (const auto& p : cards) {
        const auto* r = p.find<tag::RotlungTrigger>();
        if (!r || r->program_state) continue;
        ++markers;
        EXPECT_FALSE(p.has_phasing);
        EXPECT_FALSE(p.phased_out);
    }
    EXPECT_EQ(markers, 4);
}

TEST(TapeTokens, OneLeftCell) {
    const auto s = board(tape_of({"Elf"}, "Aetherborn", {}));
    const auto* elf = with_type(s, "Elf");
    const auto* head = with_type(s, "Aetherborn");
    const auto* lhurgoyf = with_type(s, "Lhurgoyf");
    const auto* rat = with_type(s, "Rat");
    EXPECT_EQ(elf->colors, ColorSet{Color::Green});
    EXPECT_EQ(effective_stats(*elf, s), (Stats{3, 3}));
    EXPECT_EQ(effective_stats(*head, s), (Stats{2, 2}));
    EXPECT_EQ(effective_stats(*lhurgoyf, s), (Stats{4, 4}));
    EXPECT_EQ(effective_stats(*rat, s), (Stats{3, 3}));
    EXPECT_EQ(head->controller, PlayerId::Bob);
    EXPECT_EQ(elf->controller, PlayerId::Alice);  // carries Illusory Gains
}

TEST(TapeTokens, MinimalBlankBoard) {
    const auto s = board(tape_of({}, "Cephalid", {}));
    int tape_objects = 0;
    for (const auto& p : s.battlefield) tape_objects += p.is_token;
    EXPECT_EQ(tape_objects, 3);
    EXPECT_EQ(effective_stats(*with_type(s, "Cephalid"), s), (Stats{2, 2}));
    EXPECT_EQ(effective_stats(*with_type(s, "Lhurgoyf"), s), (Stats{3, 3}));
    EXPECT_EQ(effective_stats(*with_type(s, "Rat"), s), (Stats{3, 3}));
}

TEST(TapeTokens, EighteenCellRightSide) {
    TmTape t;
    t.head = TmSymbol(1);
    for (int i = 1; i <= 18; ++i) t.right.push_back(TmSymbol(i));
    const auto s = board(t);
    std::vector<int> toughness;
    for (const auto& p : s.battlefield)
        if (p.has<tag::TapeToken>() && p.colors == ColorSet{Color::White}) {
            const auto st = effective_stats(p, s);
            EXPECT_EQ(st.power, st.toughness);
            toughness.push_back(st.toughness);
        }
    std::ranges::sort(toughness);
    ASSERT_EQ(toughness.size(), 18u);
    for (int i = 0; i < 18; ++i) EXPECT_EQ(toughness[static_cast<std::size_t>(i)], 3 + i);
    EXPECT_EQ(effective_stats(*with_type(s, "Rat"), s), (Stats{21, 21}));
}

TEST(BuildInitialState, RoundTripsRandomRecipes) {
    const auto program = rule_table();
    for (std::uint64_t i = 0; i < 200; ++i) {
        const auto r = random_recipe(77, i, program);
        const auto c = extract_config(build_initial_state(r));
        EXPECT_EQ(c.tape, r.tape) << format_tape(r.tape);
        EXPECT_EQ(c.state, r.start_state);
        EXPECT_EQ(c.steps, 0u);
    }
}

TEST(BuildInitialState, RejectsBadRecipes) {
    auto t = tape_of({"Elf", "Cephalid"}, "Orc", {});
    EXPECT_THROW(build_initial_state({rule_table(), t, TmState::Q1}), PreconditionError);
    EXPECT_THROW(build_initial_state({rule_table(), tape_of({}, "Orc", {}), TmState::Halted}), PreconditionError);
    auto program = rule_table();
    program.pop_back();
    EXPECT_THROW(build_initial_state({program, tape_of({}, "Orc", {}), TmState::Q1}), ParseError);
}

TEST(BuildInitialState, ZonesAndLibraryCycle) {
    auto s = board(tape_of({"Elf"}, "Aetherborn", {"Orc"}));
    EXPECT_EQ(s.zone(PlayerId::Alice).hand, (std::deque<std::string>{"Infest"}));
    const std::deque<std::string> library{"Cleansing Beam", "Coalition Victory", "Soul Snuffers"};
    EXPECT_EQ(s.zone(PlayerId::Alice).library, library);
    EXPECT_TRUE(s.zone(PlayerId::Bob).hand.empty());
    EXPECT_TRUE(s.zone(PlayerId::Bob).library.empty());
    TraceLog log;
    ASSERT_EQ(run_computational_step(s, log).alice_turns, 4);
    EXPECT_EQ(s.zone(PlayerId::Alice).hand, (std::deque<std::string>{"Infest"}));
    EXPECT_EQ(s.zone(PlayerId::Alice).library, library);
}

TEST(Census, MatchesGolden) {
    const auto s = board(tape_of({}, "Cephalid", {}));
    EXPECT_EQ(format_census(table_census(s)), read_file(MTGTM_TEST_DIR "/golden/initial_census.txt"));
}

TEST(Census, RowSumsIndependentOfTape) {
    auto total = [](const GameState& s) {
        int n = 0;
        for (const auto& r : table_census(s)) n += r.count;
        return n;
    };
    const int blank = total(board(tape_of({}, "Cephalid", {})));
    // 36 program + 36 Cloaks + 4 marker Reanimators + 19 other permanents
    EXPECT_EQ(blank, 36 + 36 + 4 + 19);
    EXPECT_EQ(total(board(tape_of({"Elf", "Orc"}, "Myr", {"Kavu"}), TmState::Q2)), blank);
}

TEST(Dump, TextAndJsonCarrySameContent) {
    const auto s = board(tape_of({"Elf"}, "Orc", {"Myr"}));
    const auto text = dump_board_text(s);
    const auto j = dump_board_json(s);
    EXPECT_EQ(text, dump_board_text(s));
    ASSERT_TRUE(j.contains("permanents"));
    EXPECT_EQ(j["permanents"].size(), s.battlefield.size());
    std::size_t lines = 0;
    std::istringstream in(text);
    std::string line;
    bool in_perms = false;
    while (std::getline(in, line)) {
        if (line == "# permanents") in_perms = true;
        else if (in_perms) ++lines;
    }
    EXPECT_EQ(lines, s.battlefield.size());
    EXPECT_EQ(j["census"].size(), table_census(s).size());
}
