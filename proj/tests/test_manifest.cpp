#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

#include "mtgtm/errors.hpp"
#include "mtgtm/manifest.hpp"

using namespace mtgtm;

namespace {

std::string bundled() { return std::string(bundled_manifest_text()); }

std::string without_line(std::string text, std::string_view prefix) {
    std::istringstream in(text);
    std::string line, out;
    while (std::getline(in, line))
        if (!line.starts_with(prefix)) out += line + '\n';
    return out;
}

std::vector<RuleCardSpec> parse(const std::string& text) {
    std::istringstream in(text);
    return load_manifest(in);
}

bool mentions(const ValidationReport& r, std::string_view needle) {
    for (const auto& v : r.violations)
        if (v.find(needle) != std::string::npos) return true;
    return false;
}

}  // namespace

TEST(Manifest, BundledLoadsAndValidates) {
    const auto specs = parse(bundled());
    ASSERT_EQ(specs.size(), 36u);
    const auto report = validate_program(specs);
    EXPECT_TRUE(report.ok());
    EXPECT_EQ(report.tapped_rows, 7);
    EXPECT_EQ(report.halt_rows, 1);
}

TEST(Manifest, RowsDecode) {
    const auto specs = parse(bundled());
    const RuleCardSpec aetherborn{TmState::Q1, TmSymbol(1), false, RuleColor::White, "Sliver", false};
    const RuleCardSpec rhino{TmState::Q1, TmSymbol(17), false, RuleColor::Blue, "Assassin", true};
    const RuleCardSpec kavu{TmState::Q2, TmSymbol(11), true, RuleColor::Green, "Faerie", false};
    EXPECT_NE(std::ranges::find(specs, aetherborn), specs.end());
    EXPECT_NE(std::ranges::find(specs, rhino), specs.end());
    EXPECT_NE(std::ranges::find(specs, kavu), specs.end());
}

TEST(Manifest, RoundTripsThroughWriter) {
    const auto specs = parse(bundled());
    EXPECT_EQ(parse(write_manifest(specs)), specs);
}

TEST(Manifest, MissingPairRejected) {
    const auto text = without_line(bundled(), "q2,Sliver,");
    EXPECT_THROW(parse(text), ParseError);
    auto specs = parse(bundled());
    std::erase_if(specs, [](const RuleCardSpec& r) { return r.state == TmState::Q2 && r.trigger_type == TmSymbol(18); });
    const auto report = validate_program(specs);
    EXPECT_FALSE(report.ok());
    EXPECT_TRUE(mentions(report, "missing"));
}

TEST(Manifest, DuplicateHaltRejected) {
    auto specs = parse(bundled());
    for (auto& r : specs)
        if (r.state == TmState::Q2 && r.trigger_type == TmSymbol(17)) {
            r.result_color = RuleColor::Blue;
            r.result_type = "Assassin";
            r.result_tapped = false;
            r.is_halt = true;
        }
    const auto report = validate_program(specs);
    EXPECT_FALSE(report.ok());
    EXPECT_EQ(report.halt_rows, 2);
    EXPECT_TRUE(mentions(report, "halt"));
}

TEST(Manifest, NoHaltRejected) {
    auto specs = parse(bundled());
    for (auto& r : specs)
        if (r.is_halt) {
            r.is_halt = false;
            r.result_color = RuleColor::Green;
            r.result_type = "Orc";
        }
    EXPECT_FALSE(validate_program(specs).ok());
}

TEST(Manifest, DuplicatePairRejected) {
    auto specs = parse(bundled());
    specs.push_back(specs.front());
    const auto report = validate_program(specs);
    EXPECT_FALSE(report.ok());
    EXPECT_TRUE(mentions(report, "duplicate"));
}

TEST(Manifest, BlueNonHaltRejected) {
    auto specs = parse(bundled());
    specs[0].result_color = RuleColor::Blue;
    EXPECT_FALSE(validate_program(specs).ok());
}

TEST(Manifest, MalformedLines) {
    const std::string header = "state,trigger_type,tapped,color,result_type,halt\n";
    EXPECT_THROW(parse(header + "q3,Aetherborn,false,white,Sliver,false\n"), ParseError);
    EXPECT_THROW(parse(header + "q1,Aetherborn,maybe,white,Sliver,false\n"), ParseError);
    EXPECT_THROW(parse(header + "q1,Aetherborn,false,red,Sliver,false\n"), ParseError);
    EXPECT_THROW(parse(header + "q1,Goblin,false,white,Sliver,false\n"), ParseError);
    EXPECT_THROW(parse(header + "q1,Aetherborn,false,white\n"), ParseError);
    EXPECT_THROW(parse(""), ParseError);
}

TEST(TapeFile, ParsesAndNormalizes) {
    const auto f = parse_tape_file(R"({"state":"q2","left":["Elf","Cephalid"],"head":"Orc","right":[]})");
    EXPECT_EQ(f.state, TmState::Q2);
    EXPECT_EQ(f.tape.head, TmSymbol::from_type("Orc"));
    ASSERT_EQ(f.tape.left.size(), 1u);
    EXPECT_EQ(f.tape.left[0], TmSymbol::from_type("Elf"));
    EXPECT_EQ(parse_tape_file(write_tape_file(f)).tape, f.tape);
}

TEST(TapeFile, Errors) {
    EXPECT_THROW(parse_tape_file("not json"), ParseError);
    EXPECT_THROW(parse_tape_file(R"({"left":[]})"), ParseError);
    EXPECT_THROW(parse_tape_file(R"({"head":"Goblin"})"), ParseError);
    EXPECT_THROW(parse_tape_file(R"({"head":"Orc","left":"Elf"})"), ParseError);
    EXPECT_THROW(load_tape_file("/nonexistent/x.tape"), Error);
}
