#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "qmine/common/errors.hpp"
#include "qmine/common/log.hpp"
#include "qmine/common/text.hpp"
#include "qmine/teacher/teacher.hpp"

namespace qmine::teacher {

namespace {

const std::vector<std::string>& builtin_topics(corpus::SubjectTag subject) {
    static const std::vector<std::string> biology{
        "gene regulation", "cell division", "photosynthesis", "natural selection",
        "protein synthesis", "the nervous system", "enzyme kinetics", "the immune system",
        "cellular respiration", "DNA replication", "ecosystem dynamics", "osmosis",
        "the circulatory system", "mitosis and meiosis", "genetic inheritance",
        "plant hormones", "bacterial growth", "viral replication", "homeostasis",
        "the endocrine system", "membrane transport", "evolutionary adaptation",
    };
    static const std::vector<std::string> chemistry{
        "chemical bonding", "acid-base reactions", "redox reactions", "the periodic table",
        "reaction kinetics", "thermochemistry", "chemical equilibrium", "stoichiometry",
        "molecular geometry", "gas laws", "electrochemistry", "organic functional groups",
        "intermolecular forces", "solubility", "atomic structure", "polymerization",
        "titration", "catalysis", "entropy and enthalpy", "isotopes",
        "crystal structures", "spectroscopy",
    };
    static const std::vector<std::string> mathematics{
        "linear equations", "derivatives", "integrals", "matrix multiplication",
        "eigenvalues", "probability distributions", "limits", "vector spaces",
        "differential equations", "sequences and series", "trigonometric identities",
        "complex numbers", "graph theory", "combinatorics", "prime numbers",
        "logarithms", "geometric proofs", "optimization", "set theory",
        "polynomial factoring", "statistics", "number theory",
    };
    static const std::vector<std::string> physics{
        "Newton's laws", "conservation of energy", "electromagnetic induction",
        "wave interference", "thermodynamics", "circular motion", "quantum states",
        "special relativity", "electric circuits", "magnetic fields", "projectile motion",
        "harmonic oscillators", "optics", "fluid dynamics", "angular momentum",
        "gravitation", "the photoelectric effect", "nuclear decay", "capacitance",
        "momentum collisions", "standing waves", "entropy",
    };
    static const std::vector<std::string> computer_science{
        "binary search", "recursion", "hash tables", "sorting algorithms",
        "linked lists", "dynamic programming", "graph traversal", "operating systems",
        "computational complexity", "databases", "machine learning", "compilers",
        "computer networks", "cryptography", "object-oriented design", "concurrency",
        "memory management", "regular expressions", "binary trees",
        "floating-point arithmetic", "caching", "version control",
    };
    switch (subject) {
        case corpus::SubjectTag::biology: return biology;
        case corpus::SubjectTag::chemistry: return chemistry;
        case corpus::SubjectTag::mathematics: return mathematics;
        case corpus::SubjectTag::physics: return physics;
        case corpus::SubjectTag::computer_science: return computer_science;
    }
    return biology;
}

std::vector<btclass::BTLevel> few_shot_levels_for(btclass::BTLevel level, int count) {
    // The requested level leads, then the remaining levels in taxonomy order.
    std::vector<btclass::BTLevel> levels{level};
    for (btclass::BTLevel other : btclass::six_bt_levels)
        if (other != level && static_cast<int>(levels.size()) < count) levels.push_back(other);
    levels.resize(std::min<size_t>(levels.size(), static_cast<size_t>(std::max(count, 0))));
    return levels;
}

}  // namespace

const std::vector<std::string>& topic_pool(corpus::SubjectTag subject) {
    return builtin_topics(subject);
}

std::vector<std::string> load_topic_pool(const std::string& path, corpus::SubjectTag subject) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open topic pool file " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw input_error("bad topic pool file " + path + ": " + e.what());
    }
    const char* name = corpus::subject_name(subject);
    if (!j.contains(name)) throw input_error(std::string("topic pool missing subject ") + name);
    auto topics = j.at(name).get<std::vector<std::string>>();
    if (topics.empty()) throw input_error(std::string("empty topic pool for ") + name);
    return topics;
}

Teacher::Teacher(std::shared_ptr<LlmBackend> backend, TeacherConfig config)
    : backend_(std::move(backend)), config_(std::move(config)) {
    if (!backend_) throw config_error("teacher requires a backend");
    if (config_.few_shot_count < 0) throw config_error("few_shot_count must be >= 0");
}

SoftLabel Teacher::soft_label_interrogative(const std::string& statement) {
    if (statement.empty()) throw input_error("statement must be non-empty");
    ChatRequest request;
    request.model = config_.model;
    request.messages = render_interrogative(statement);
    request.max_tokens = 1;
    request.want_logprobs = true;
    request.prompt_version = kInterrogativePromptVersion;

    ChatResponse response = backend_->complete(request);
    std::string token = text::trim(response.content);
    int label;
    if (token == "0")
        label = 0;
    else if (token == "1")
        label = 1;
    else
        throw annotation_error("teacher label token is neither '0' nor '1': '" + token + "'",
                               response.raw.empty() ? response.content : response.raw);

    if (response.logprobs.empty()) {
        log_warn("teacher", "provider returned no log-probs, using fallback confidence 0.99");
        SoftLabel soft;
        soft.p_interrogative = label == 1 ? 0.99 : 0.01;
        soft.p_non_interrogative = 1.0 - soft.p_interrogative;
        soft.label_token_logprob = std::log(0.99);
        soft.fallback = true;
        return soft;
    }
    double logprob = response.logprobs.front().logprob;
    if (logprob > 0.0) logprob = 0.0;
    return soft_label_from_logprob(label, logprob);
}

std::vector<SoftLabel> Teacher::soft_label_batch(const std::vector<std::string>& statements) {
    std::vector<SoftLabel> labels(statements.size());
    std::vector<std::string> errors;
    std::mutex error_mutex;
    std::atomic<size_t> next{0};
    int workers = std::max(1, std::min<int>(config_.concurrency,
                                            static_cast<int>(statements.size())));
    auto work = [&]() {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= statements.size()) return;
            try {
                labels[i] = soft_label_interrogative(statements[i]);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(error_mutex);
                errors.push_back(std::to_string(i) + ": " + e.what());
            }
        }
    };
    std::vector<std::thread> threads;
    for (int w = 0; w < workers; ++w) threads.emplace_back(work);
    for (std::thread& thread : threads) thread.join();
    if (!errors.empty())
        throw annotation_error("soft labeling failed for " + std::to_string(errors.size()) +
                                   " statements, first: " + errors.front(),
                               "");
    return labels;
}

GeneratedQuestion Teacher::generate_bt_question(btclass::BTLevel level, const std::string& topic,
                                                corpus::SubjectTag subject) {
    if (level == btclass::BTLevel::irrelevant)
        throw config_error("cannot generate for level Irrelevant");
    ChatRequest request;
    request.model = config_.model;
    request.messages =
        render_bt_generation(level, topic, subject, few_shot_levels_for(level, config_.few_shot_count));
    request.max_tokens = 128;
    request.prompt_version = kBtGenerationPromptVersion;

    for (int attempt = 0; attempt < config_.generation_retries; ++attempt) {
        ChatResponse response = backend_->complete(request);
        std::string question = text::trim(response.content);
        if (!question.empty()) {
            GeneratedQuestion generated;
            generated.text = question;
            generated.bt_level = level;
            generated.topic = topic;
            generated.subject = subject;
            return generated;
        }
        log_warn("teacher", "empty generation for level " +
                                std::string(btclass::bt_level_name(level)) + ", retrying");
    }
    throw generation_error("empty generation after " +
                           std::to_string(config_.generation_retries) + " attempts");
}

}  // namespace qmine::teacher
