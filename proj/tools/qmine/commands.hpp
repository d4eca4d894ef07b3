#pragma once

#include <exception>
#include <string>

#include "pipeline_config.hpp"

namespace qmine::cli {

// Carries one of the documented exit codes out of a command.
class exit_error : public std::exception {
public:
    exit_error(int code, std::string message) : code_(code), message_(std::move(message)) {}
    int code() const { return code_; }
    const char* what() const noexcept override { return message_.c_str(); }

private:
    int code_;
    std::string message_;
};

inline constexpr int kExitCredentials = 2;
inline constexpr int kExitMissingModel = 3;
inline constexpr int kExitBadDataset = 4;
inline constexpr int kExitMissingLabels = 5;

int cmd_harvest(const PipelineConfig& config);
int cmd_build_corpus(const PipelineConfig& config);
int cmd_extract_questions(const PipelineConfig& config);
int cmd_train(const std::string& model, const PipelineConfig& config);
int cmd_classify(const PipelineConfig& config);
int cmd_analyze(const PipelineConfig& config);
int cmd_report(const PipelineConfig& config);

}  // namespace qmine::cli
