#pragma once

// Program manifest (CSV with header) and tape file (JSON) formats.

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "mtgtm/utm.hpp"

namespace mtgtm {

struct ValidationReport {
    std::vector<std::string> violations;
    int tapped_rows = 0;
    int halt_rows = 0;

    [[nodiscard]] bool ok() const { return violations.empty(); }
};

/// Parses a manifest. Throws ParseError on a malformed line, and on any
/// validation failure (duplicate / missing pair, multiple halts, ...).
std::vector<RuleCardSpec> load_manifest(std::istream& source);
std::vector<RuleCardSpec> load_manifest_file(const std::string& path);

/// Never throws; the report lists every violation found.
ValidationReport validate_program(std::span<const RuleCardSpec> specs);

std::string write_manifest(std::span<const RuleCardSpec> specs);

/// Text of the bundled rule manifest.
std::string_view bundled_manifest_text();

struct TapeFile {
    TmTape tape;
    TmState state = TmState::Q1;
};

/// {"state": "q1", "left": [...], "head": "...", "right": [...]}
TapeFile parse_tape_file(std::string_view text);
TapeFile load_tape_file(const std::string& path);
std::string write_tape_file(const TapeFile& file);

}  // namespace mtgtm
