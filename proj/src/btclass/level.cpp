#include "qmine/btclass/level.hpp"

#include "qmine/common/errors.hpp"

namespace qmine::btclass {

const char* bt_level_name(BTLevel level) {
    switch (level) {
        case BTLevel::knowledge: return "Knowledge";
        case BTLevel::comprehension: return "Comprehension";
        case BTLevel::application: return "Application";
        case BTLevel::analysis: return "Analysis";
        case BTLevel::evaluation: return "Evaluation";
        case BTLevel::synthesis: return "Synthesis";
        case BTLevel::irrelevant: return "Irrelevant";
    }
    return "unknown";
}

BTLevel parse_bt_level(std::string_view name) {
    for (BTLevel level : all_bt_levels)
        if (name == bt_level_name(level)) return level;
    throw input_error("unknown BT level: " + std::string(name));
}

}  // namespace qmine::btclass
