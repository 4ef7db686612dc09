#pragma once

// Board snapshot serialization (text and JSON) and the permanent census.

#include <string>
#include <vector>

#include <json.hpp>

#include "mtgtm/game_model.hpp"

namespace mtgtm {

/// Nontoken permanents grouped by (name, controller, text/choice/attachment).
struct CensusRow {
    int count = 0;
    std::string name;
    PlayerId controller = PlayerId::Alice;
    std::string detail;

    friend bool operator==(const CensusRow&, const CensusRow&) = default;
};

std::vector<CensusRow> table_census(const GameState& state);
/// One "<count> <name> | <controller> | <detail>" line per row.
std::string format_census(const std::vector<CensusRow>& rows);

/// Stable text form: zones, census, then every permanent in id order.
std::string dump_board_text(const GameState& state);
nlohmann::ordered_json dump_board_json(const GameState& state);

}  // namespace mtgtm
