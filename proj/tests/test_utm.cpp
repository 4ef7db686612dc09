#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>

#include "mtgtm/errors.hpp"
#include "mtgtm/utm.hpp"

using namespace mtgtm;

namespace {

TmSymbol sym(std::string_view type) { return TmSymbol::from_type(type); }

TmTape tape(std::initializer_list<std::string_view> left, std::string_view head,
            std::initializer_list<std::string_view> right) {
    TmTape t;
    for (auto s : left) t.left.push_back(sym(s));
    t.head = sym(head);
    for (auto s : right) t.right.push_back(sym(s));
    return t;
}

// Independent interpreter: sparse tape keyed by absolute position, rules
// looked up by linear scan of the manifest rows.
struct SparseMachine {
    std::map<long, int> cells;
    long pos = 0;
    TmState state = TmState::Q1;

    explicit SparseMachine(const TmConfig& c) : state(c.state) {
        cells[0] = c.tape.head.index();
        for (std::size_t i = 0; i < c.tape.left.size(); ++i) cells[-1 - static_cast<long>(i)] = c.tape.left[i].index();
        for (std::size_t i = 0; i < c.tape.right.size(); ++i) cells[1 + static_cast<long>(i)] = c.tape.right[i].index();
    }
    int read(long at) const {
        auto it = cells.find(at);
        return it == cells.end() ? 3 : it->second;
    }
    bool step(std::span<const RuleCardSpec> rules) {
        for (const auto& r : rules) {
            if (r.state != state || r.trigger_type.index() != read(pos)) continue;
            if (r.is_halt) return false;
            cells[pos] = TmSymbol::from_type(r.result_type).index();
            pos += r.result_color == RuleColor::White ? -1 : 1;
            if (r.result_tapped) state = state == TmState::Q1 ? TmState::Q2 : TmState::Q1;
            return true;
        }
        ADD_FAILURE() << "no rule";
        return false;
    }
    TmTape as_tape() const {
        TmTape t;
        t.head = TmSymbol(read(pos));
        long lo = pos, hi = pos;
        for (const auto& [k, v] : cells) {
            lo = std::min(lo, k);
            hi = std::max(hi, k);
        }
        for (long k = pos - 1; k >= lo; --k) t.left.push_back(TmSymbol(read(k)));
        for (long k = pos + 1; k <= hi; ++k) t.right.push_back(TmSymbol(read(k)));
        return tape_normalize(t);
    }
};

}  // namespace

TEST(Symbols, AlphabeticalBijection) {
    const auto types = tape_creature_types();
    ASSERT_EQ(types.size(), 18u);
    EXPECT_EQ(types.front(), "Aetherborn");
    EXPECT_EQ(types[1], "Basilisk");
    EXPECT_EQ(types.back(), "Sliver");
    EXPECT_TRUE(std::ranges::is_sorted(types));
    for (int i = 1; i <= 18; ++i) EXPECT_EQ(TmSymbol::from_type(TmSymbol(i).creature_type()).index(), i);
}

TEST(Symbols, BlankIsCephalid) {
    EXPECT_EQ(TmSymbol::blank().index(), 3);
    EXPECT_EQ(TmSymbol::blank().creature_type(), "Cephalid");
    EXPECT_TRUE(sym("Cephalid").is_blank());
}

TEST(Symbols, RejectsUnknownNames) {
    EXPECT_THROW(TmSymbol::from_type("Assassin"), ParseError);
    EXPECT_THROW(TmSymbol(0), PreconditionError);
    EXPECT_THROW(TmSymbol(19), PreconditionError);
    EXPECT_FALSE(TmSymbol::try_from_type("Lhurgoyf"));
}

TEST(Program, RuleSpotChecks) {
    const auto& p = rogozhin_program();
    const auto& a = p.lookup(TmState::Q1, sym("Aetherborn"));
    EXPECT_FALSE(a.result_tapped);
    EXPECT_EQ(a.result_color, RuleColor::White);
    EXPECT_EQ(a.result_type, "Sliver");

    const auto& r = p.lookup(TmState::Q1, sym("Rhino"));
    EXPECT_TRUE(r.is_halt);
    EXPECT_EQ(r.result_color, RuleColor::Blue);
    EXPECT_EQ(r.result_type, "Assassin");
    EXPECT_EQ(&r, &p.halt_rule());

    const auto& k = p.lookup(TmState::Q2, sym("Kavu"));
    EXPECT_TRUE(k.result_tapped);
    EXPECT_EQ(k.result_color, RuleColor::Green);
    EXPECT_EQ(k.result_type, "Faerie");
}

TEST(Program, ShapeInvariants) {
    const auto rules = rogozhin_program().rules();
    ASSERT_EQ(rules.size(), 36u);
    int halts = 0, tapped = 0;
    for (const auto& r : rules) {
        halts += r.is_halt;
        tapped += r.result_tapped;
        EXPECT_EQ(r.is_halt, r.result_color == RuleColor::Blue && r.result_type == "Assassin");
        EXPECT_EQ(r.direction().has_value(), !r.is_halt);
    }
    EXPECT_EQ(halts, 1);
    EXPECT_EQ(tapped, 7);
}

TEST(Step, AetherbornWritesSliverMovesLeft) {
    const TmConfig c{tape({"Elf"}, "Aetherborn", {}), TmState::Q1, 0};
    const auto n = tm_step(c, rogozhin_program());
    EXPECT_EQ(n.state, TmState::Q1);
    EXPECT_EQ(n.steps, 1u);
    EXPECT_EQ(n.tape, tape({}, "Elf", {"Sliver"}));
}

TEST(Step, RhinoHalts) {
    const TmConfig c{tape({}, "Rhino", {}), TmState::Q1, 0};
    const auto n = tm_step(c, rogozhin_program());
    EXPECT_EQ(n.state, TmState::Halted);
    EXPECT_EQ(n.steps, 1u);
    EXPECT_EQ(n.tape, c.tape);
    EXPECT_THROW(tm_step(n, rogozhin_program()), PreconditionError);
}

TEST(Step, KavuChangesState) {
    const TmConfig c{tape({}, "Kavu", {}), TmState::Q1, 0};
    const auto n = tm_step(c, rogozhin_program());
    EXPECT_EQ(n.state, TmState::Q2);
    EXPECT_EQ(n.tape, tape({}, "Cephalid", {"Leviathan"}));
}

TEST(Step, BlankTapeQ2WritesBasiliskMovesLeft) {
    const TmConfig c{tape({}, "Cephalid", {}), TmState::Q2, 0};
    const auto n = tm_step(c, rogozhin_program());
    EXPECT_EQ(n.state, TmState::Q2);
    EXPECT_EQ(n.tape, tape({}, "Cephalid", {"Basilisk"}));
}

TEST(Run, RhinoHaltsAtStepOne) {
    const auto r = tm_run({tape({}, "Rhino", {}), TmState::Q1, 0}, rogozhin_program(), 10);
    EXPECT_TRUE(r.halted);
    EXPECT_EQ(r.final.steps, 1u);
}

TEST(Run, ZeroStepsRejected) {
    EXPECT_THROW(tm_run({tape({}, "Rhino", {}), TmState::Q1, 0}, rogozhin_program(), 0), PreconditionError);
}

TEST(Run, HistoryHasOneEntryPerStep) {
    const auto r = tm_run({tape({}, "Aetherborn", {}), TmState::Q1, 0}, rogozhin_program(), 5, true);
    EXPECT_FALSE(r.halted);
    ASSERT_EQ(r.history.size(), 5u);
    for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(r.history[i].steps, i + 1);
    EXPECT_EQ(r.history.back(), r.final);
}

TEST(Run, MatchesSparseInterpreter) {
    std::mt19937_64 rng(1234);
    const auto& program = rogozhin_program();
    for (int trial = 0; trial < 300; ++trial) {
        TmConfig c;
        c.state = rng() % 2 ? TmState::Q1 : TmState::Q2;
        c.tape.head = TmSymbol(1 + static_cast<int>(rng() % 18));
        for (auto n = rng() % 8; n > 0; --n) c.tape.left.push_back(TmSymbol(1 + static_cast<int>(rng() % 18)));
        for (auto n = rng() % 8; n > 0; --n) c.tape.right.push_back(TmSymbol(1 + static_cast<int>(rng() % 18)));
        c.tape = tape_normalize(c.tape);

        SparseMachine m(c);
        TmConfig cur = c;
        for (int k = 0; k < 200; ++k) {
            const bool running = m.step(program.rules());
            cur = tm_step(cur, program);
            if (!running) {
                ASSERT_EQ(cur.state, TmState::Halted) << "trial " << trial << " step " << k;
                break;
            }
            ASSERT_EQ(cur.state, m.state) << "trial " << trial << " step " << k;
            ASSERT_EQ(cur.tape, m.as_tape()) << "trial " << trial << " step " << k;
        }
    }
}

TEST(Normalize, StripsOnlyOutermostBlanks) {
    EXPECT_EQ(tape_normalize(tape({"Elf", "Cephalid"}, "Orc", {})), tape({"Elf"}, "Orc", {}));
    EXPECT_EQ(tape_normalize(tape({"Cephalid", "Elf"}, "Orc", {})), tape({"Cephalid", "Elf"}, "Orc", {}));
    EXPECT_EQ(tape_normalize(tape({}, "Orc", {"Cephalid", "Elf", "Cephalid", "Cephalid"})),
              tape({}, "Orc", {"Cephalid", "Elf"}));
}

TEST(Normalize, AllBlankTape) {
    const auto t = tape_normalize(tape({"Cephalid", "Cephalid"}, "Cephalid", {"Cephalid"}));
    EXPECT_TRUE(t.left.empty());
    EXPECT_TRUE(t.right.empty());
    EXPECT_TRUE(t.head.is_blank());
}

TEST(Normalize, Idempotent) {
    std::mt19937 rng(99);
    for (int trial = 0; trial < 500; ++trial) {
        TmTape t;
        t.head = TmSymbol(1 + static_cast<int>(rng() % 18));
        // bias toward blanks so trailing runs are common
        auto pick = [&] { return rng() % 3 == 0 ? TmSymbol(1 + static_cast<int>(rng() % 18)) : TmSymbol::blank(); };
        for (auto n = rng() % 6; n > 0; --n) t.left.push_back(pick());
        for (auto n = rng() % 6; n > 0; --n) t.right.push_back(pick());
        const auto once = tape_normalize(t);
        EXPECT_EQ(tape_normalize(once), once);
        for (std::size_t d = 1; d < 8; ++d) {
            EXPECT_EQ(once.read_left(d), t.read_left(d));
            EXPECT_EQ(once.read_right(d), t.read_right(d));
        }
    }
}

TEST(Format, MarksHead) {
    EXPECT_EQ(format_tape(tape({"Elf", "Orc"}, "Myr", {"Kavu"})), "Orc Elf [Myr] Kavu");
}
