#include "qmine/teacher/prompts.hpp"

#include "qmine/common/errors.hpp"

namespace qmine::teacher {

namespace {

std::string replace_all(std::string text, const std::string& placeholder,
                        const std::string& value) {
    size_t pos = 0;
    while ((pos = text.find(placeholder, pos)) != std::string::npos) {
        text.replace(pos, placeholder.size(), value);
        pos += value.size();
    }
    return text;
}

}  // namespace

const PromptTemplate& interrogative_prompt() {
    static const PromptTemplate prompt{
        "You will be asked to classify the following sentence into interrogative (question) "
        "or non-interrogative (statement). Use the labels '0' for non-interrogative and '1' "
        "for interrogative.",
        {
            {"user",
             "In 1952, Thomas Watson, Sr. In what year did IBM open its first office in "
             "Poughkeepsie"},
            {"assistant", "1"},
            {"user",
             "What often lacks in software developed when its released that can eventually "
             "lead to errors?"},
            {"assistant", "1"},
            {"user", "there's nothing really that gets in that early"},
            {"assistant", "0"},
            {"user",
             "The President of BYU, currently Kevin J Worthen, reports to the Board, through "
             "the Commissioner of Education."},
            {"assistant", "0"},
        },
        "{Test_statement}",
    };
    return prompt;
}

const PromptTemplate& bt_generation_prompt() {
    static const PromptTemplate prompt{
        "Bloom's Taxonomy categorizes cognitive levels into six levels, each described by a "
        "specific action verb:\n"
        "- Knowledge: define, match, recall, state, list, label\n"
        "- Comprehension: discuss, review, paraphrase, describe, explain\n"
        "- Application: apply, demonstrate, illustrate, solve, use\n"
        "- Analysis: analyze, compare, contrast, differentiate, distinguish\n"
        "- Evaluation: argue, conclude, critique, evaluate, justify, verify\n"
        "- Synthesis: create, design, develop, formulate, organize, plan\n"
        "\n"
        "The following are examples of questions that correspond to one of Bloom's Cognitive "
        "Levels. Please write a question that aligns with the given Bloom's Cognitive Level "
        "and pertains to a STEM topic.",
        {
            {"user", "Generate a question that belongs to {BT_level} level."},
            {"system", "{Random Sample Question}"},
        },
        "Generate a {BT_level} question on {Topic} in {Subject}",
    };
    return prompt;
}

const char* bt_sample_question(btclass::BTLevel level) {
    switch (level) {
        case btclass::BTLevel::knowledge: return "List the planets in the solar system.";
        case btclass::BTLevel::comprehension: return "Explain the water cycle.";
        case btclass::BTLevel::application:
            return "Use the quadratic formula to solve a given quadratic equation.";
        case btclass::BTLevel::analysis:
            return "Compare four ways of serving foods made with seafood and examine which "
                   "ones have the highest health benefits.";
        case btclass::BTLevel::evaluation:
            return "Which kinds of apples are suitable for baking a pie, and why?";
        case btclass::BTLevel::synthesis: return "Make a business plan for a local company.";
        case btclass::BTLevel::irrelevant: break;
    }
    throw config_error("no sample question for level Irrelevant");
}

std::vector<ChatMessage> render_interrogative(const std::string& statement) {
    if (statement.empty()) throw input_error("statement must be non-empty");
    const PromptTemplate& prompt = interrogative_prompt();
    std::vector<ChatMessage> messages;
    messages.push_back({"system", prompt.system});
    messages.insert(messages.end(), prompt.few_shots.begin(), prompt.few_shots.end());
    messages.push_back({"user", replace_all(prompt.user_template, "{Test_statement}", statement)});
    assert_no_placeholders(messages);
    return messages;
}

std::vector<ChatMessage> render_bt_generation(btclass::BTLevel level, const std::string& topic,
                                              corpus::SubjectTag subject,
                                              const std::vector<btclass::BTLevel>& few_shot_levels) {
    if (level == btclass::BTLevel::irrelevant)
        throw config_error("cannot generate for level Irrelevant");
    const PromptTemplate& prompt = bt_generation_prompt();
    std::vector<ChatMessage> messages;
    messages.push_back({"system", prompt.system});
    for (btclass::BTLevel shot_level : few_shot_levels) {
        const char* level_name = btclass::bt_level_name(shot_level);
        messages.push_back(
            {prompt.few_shots[0].role,
             replace_all(prompt.few_shots[0].content, "{BT_level}", level_name)});
        messages.push_back({prompt.few_shots[1].role,
                            replace_all(prompt.few_shots[1].content, "{Random Sample Question}",
                                        bt_sample_question(shot_level))});
    }
    std::string user = replace_all(prompt.user_template, "{BT_level}", btclass::bt_level_name(level));
    user = replace_all(user, "{Topic}", topic);
    user = replace_all(user, "{Subject}", corpus::subject_name(subject));
    messages.push_back({"user", user});
    assert_no_placeholders(messages);
    return messages;
}

void assert_no_placeholders(const std::vector<ChatMessage>& messages) {
    static const char* placeholders[] = {"{Test_statement}", "{BT_level}", "{Topic}",
                                         "{Subject}", "{Random Sample Question}"};
    for (const ChatMessage& message : messages)
        for (const char* placeholder : placeholders)
            if (message.content.find(placeholder) != std::string::npos)
                throw input_error(std::string("unfilled placeholder ") + placeholder);
}

}  // namespace qmine::teacher
