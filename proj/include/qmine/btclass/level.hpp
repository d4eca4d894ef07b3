#pragma once

#include <array>
#include <string>
#include <string_view>

namespace qmine::btclass {

// Fixed report ordering: the six cognitive levels, then Irrelevant.
enum class BTLevel {
    knowledge,
    comprehension,
    application,
    analysis,
    evaluation,
    synthesis,
    irrelevant,
};

inline constexpr std::array<BTLevel, 7> all_bt_levels = {
    BTLevel::knowledge,  BTLevel::comprehension, BTLevel::application,
    BTLevel::analysis,   BTLevel::evaluation,    BTLevel::synthesis,
    BTLevel::irrelevant,
};

inline constexpr std::array<BTLevel, 6> six_bt_levels = {
    BTLevel::knowledge, BTLevel::comprehension, BTLevel::application,
    BTLevel::analysis,  BTLevel::evaluation,    BTLevel::synthesis,
};

const char* bt_level_name(BTLevel level);
BTLevel parse_bt_level(std::string_view name);  // throws input_error on unknown

inline int bt_level_index(BTLevel level) { return static_cast<int>(level); }

}  // namespace qmine::btclass
