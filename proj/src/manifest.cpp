#include "mtgtm/manifest.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "mtgtm/errors.hpp"
#include "mtgtm_bundled_manifest.hpp"

namespace mtgtm {

namespace {

constexpr std::string_view kHeader = "state,trigger_type,tapped,color,result_type,halt";

std::string_view trim(std::string_view s) {
    const auto ws = " \t\r\n";
    auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto comma = line.find(',', start);
        out.push_back(trim(line.substr(start, comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

bool parse_bool(std::string_view text, int line_no, std::string_view field) {
    if (text == "true") return true;
    if (text == "false") return false;
    throw ParseError("line " + std::to_string(line_no) + ": field '" + std::string(field) +
                     "' must be true or false, got '" + std::string(text) + "'");
}

std::string header_without_spaces(std::string_view line) {
    std::string out;
    for (char c : line)
        if (c != ' ' && c != '\t' && c != '\r') out += c;
    return out;
}

std::string pair_name(TmState state, TmSymbol symbol) {
    return "(" + std::string(to_string(state)) + ", " + std::string(symbol.creature_type()) + ")";
}

}  // namespace

std::vector<RuleCardSpec> load_manifest(std::istream& source) {
    std::vector<RuleCardSpec> specs;
    std::string line;
    int line_no = 0;
    bool saw_header = false;
    while (std::getline(source, line)) {
        ++line_no;
        auto text = trim(line);
        if (text.empty() || text.front() == '#') continue;
        if (!saw_header) {
            if (header_without_spaces(text) != kHeader)
                throw ParseError("line " + std::to_string(line_no) + ": expected header '" +
                                 std::string(kHeader) + "'");
            saw_header = true;
            continue;
        }
        auto fields = split_fields(text);
        if (fields.size() != 6)
            throw ParseError("line " + std::to_string(line_no) + ": expected 6 fields, got " +
                             std::to_string(fields.size()));
        RuleCardSpec spec;
        try {
            spec.state = parse_state(fields[0]);
            spec.trigger_type = TmSymbol::from_type(fields[1]);
            spec.result_color = parse_rule_color(fields[3]);
        } catch (const ParseError& e) {
            throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
        }
        spec.result_tapped = parse_bool(fields[2], line_no, "tapped");
        spec.result_type = std::string(fields[4]);
        spec.is_halt = parse_bool(fields[5], line_no, "halt");
        if (spec.result_type.empty())
            throw ParseError("line " + std::to_string(line_no) + ": empty result_type");
        specs.push_back(std::move(spec));
    }
    if (!saw_header) throw ParseError("manifest is empty (header line required)");

    auto report = validate_program(specs);
    if (!report.ok()) {
        std::string msg = "invalid manifest:";
        for (const auto& v : report.violations) msg += "\n  " + v;
        throw ParseError(msg);
    }
    return specs;
}

std::vector<RuleCardSpec> load_manifest_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open manifest '" + path + "'");
    return load_manifest(in);
}

ValidationReport validate_program(std::span<const RuleCardSpec> specs) {
    ValidationReport report;
    auto& v = report.violations;
    std::map<std::pair<TmState, int>, int> seen;
    for (const auto& s : specs) {
        const auto name = pair_name(s.state, s.trigger_type);
        if (s.state == TmState::Halted) {
            v.push_back("rule for the halted state");
            continue;
        }
        if (++seen[{s.state, s.trigger_type.index()}] == 2) v.push_back("duplicate pair " + name);
        const bool blue_assassin =
            s.result_color == RuleColor::Blue && s.result_type == kHaltCreatureType;
        if (s.is_halt != blue_assassin)
            v.push_back("rule " + name + ": halt flag must be set exactly for a blue Assassin");
        if (!s.is_halt && !TmSymbol::try_from_type(s.result_type))
            v.push_back("rule " + name + ": result type '" + s.result_type + "' is not a tape type");
        if (!s.is_halt && s.result_color == RuleColor::Blue)
            v.push_back("rule " + name + ": only the halt rule may be blue");
        if (s.result_tapped) ++report.tapped_rows;
        if (s.is_halt) ++report.halt_rows;
        // The end-of-tape relay reads blank through an Alice-controlled Cephalid,
        // which a Xathrid Necromancer never sees; a tapped halt token would make
        // Mesmeric Orb skip Coalition Victory.
        if (s.result_tapped && s.trigger_type.is_blank())
            v.push_back("rule " + name + ": reading blank must not change state");
        if (s.result_tapped && s.is_halt) v.push_back("rule " + name + ": halt rule must be untapped");
    }
    for (auto state : {TmState::Q1, TmState::Q2})
        for (int i = 1; i <= kNumSymbols; ++i)
            if (!seen.contains({state, i})) v.push_back("missing pair " + pair_name(state, TmSymbol(i)));
    if (report.halt_rows == 0) v.push_back("no halt rule");
    if (report.halt_rows > 1)
        v.push_back("duplicate halt: " + std::to_string(report.halt_rows) + " halt rules");
    return report;
}

std::string write_manifest(std::span<const RuleCardSpec> specs) {
    std::ostringstream out;
    out << kHeader << '\n';
    for (const auto& s : specs)
        out << to_string(s.state) << ',' << s.trigger_type.creature_type() << ','
            << (s.result_tapped ? "true" : "false") << ',' << to_string(s.result_color) << ','
            << s.result_type << ',' << (s.is_halt ? "true" : "false") << '\n';
    return out.str();
}

std::string_view bundled_manifest_text() { return detail::kBundledManifest; }

TapeFile parse_tape_file(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("tape file: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("tape file: expected a JSON object");
    auto side = [&](const char* key) {
        std::deque<TmSymbol> out;
        if (!j.contains(key)) return out;
        if (!j[key].is_array()) throw ParseError(std::string("tape file: '") + key + "' must be an array");
        for (const auto& e : j[key]) {
            if (!e.is_string()) throw ParseError(std::string("tape file: '") + key + "' holds a non-string");
            out.push_back(TmSymbol::from_type(e.get<std::string>()));
        }
        return out;
    };
    TapeFile file;
    if (!j.contains("head") || !j["head"].is_string()) throw ParseError("tape file: missing 'head'");
    if (j.contains("state")) {
        if (!j["state"].is_string()) throw ParseError("tape file: 'state' must be a string");
        file.state = parse_state(j["state"].get<std::string>());
    }
    file.tape.head = TmSymbol::from_type(j["head"].get<std::string>());
    file.tape.left = side("left");
    file.tape.right = side("right");
    file.tape = tape_normalize(std::move(file.tape));
    return file;
}

TapeFile load_tape_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open tape file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_tape_file(buf.str());
}

std::string write_tape_file(const TapeFile& file) {
    nlohmann::ordered_json j;
    j["state"] = std::string(to_string(file.state));
    auto side = [](const std::deque<TmSymbol>& s) {
        auto arr = nlohmann::ordered_json::array();
        for (auto sym : s) arr.push_back(std::string(sym.creature_type()));
        return arr;
    };
    j["left"] = side(file.tape.left);
    j["head"] = std::string(file.tape.head.creature_type());
    j["right"] = side(file.tape.right);
    return j.dump() + "\n";
}

}  // namespace mtgtm
