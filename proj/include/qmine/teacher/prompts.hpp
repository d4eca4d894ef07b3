#pragma once

#include <string>
#include <vector>

#include "qmine/btclass/level.hpp"
#include "qmine/corpus/types.hpp"

namespace qmine::teacher {

struct ChatMessage {
    std::string role;  // "system" | "user" | "assistant"
    std::string content;
};

struct PromptTemplate {
    std::string system;
    std::vector<ChatMessage> few_shots;
    std::string user_template;
};

// Versioned prompt assets; bumping either version invalidates replay caches.
inline constexpr const char* kInterrogativePromptVersion = "interrogative-v1";
inline constexpr const char* kBtGenerationPromptVersion = "bt-generation-v1";

const PromptTemplate& interrogative_prompt();
const PromptTemplate& bt_generation_prompt();

// Sample question shown as the few-shot answer for a level.
const char* bt_sample_question(btclass::BTLevel level);

std::vector<ChatMessage> render_interrogative(const std::string& statement);

// few_shot_levels picks which levels contribute a (user, system) example
// pair, in order. Throws config_error when level is Irrelevant.
std::vector<ChatMessage> render_bt_generation(btclass::BTLevel level, const std::string& topic,
                                              corpus::SubjectTag subject,
                                              const std::vector<btclass::BTLevel>& few_shot_levels);

// Throws input_error if any placeholder survives in a rendered message.
void assert_no_placeholders(const std::vector<ChatMessage>& messages);

}  // namespace qmine::teacher
