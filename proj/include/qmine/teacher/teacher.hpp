#pragma once

#include <memory>
#include <string>
#include <vector>

#include "qmine/btclass/level.hpp"
#include "qmine/corpus/types.hpp"
#include "qmine/teacher/llm_client.hpp"
#include "qmine/teacher/soft_label.hpp"

namespace qmine::teacher {

struct GeneratedQuestion {
    std::string text;
    btclass::BTLevel bt_level = btclass::BTLevel::knowledge;
    std::string topic;
    corpus::SubjectTag subject = corpus::SubjectTag::biology;
};

struct TeacherConfig {
    std::string model = "gpt-4o";
    int few_shot_count = 3;    // few-shot pairs per generation call
    int concurrency = 4;       // batch soft-labeling workers
    int generation_retries = 3;
};

// Curated per-subject topic pool (>= 20 each); a JSON file of the form
// {"biology": ["...", ...], ...} overrides the built-in list.
const std::vector<std::string>& topic_pool(corpus::SubjectTag subject);
std::vector<std::string> load_topic_pool(const std::string& path, corpus::SubjectTag subject);

class Teacher {
public:
    Teacher(std::shared_ptr<LlmBackend> backend, TeacherConfig config = {});

    // Appendix-style binary classification with log-probability conversion.
    SoftLabel soft_label_interrogative(const std::string& statement);
    std::vector<SoftLabel> soft_label_batch(const std::vector<std::string>& statements);

    // One generated question for a BT level; retries empty generations.
    GeneratedQuestion generate_bt_question(btclass::BTLevel level, const std::string& topic,
                                           corpus::SubjectTag subject);

    const TeacherConfig& config() const { return config_; }

private:
    std::shared_ptr<LlmBackend> backend_;
    TeacherConfig config_;
};

}  // namespace qmine::teacher
