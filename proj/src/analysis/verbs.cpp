#include "qmine/analysis/verbs.hpp"

#include <cctype>
#include <cstring>
#include <unordered_map>
#include <unordered_set>

#include "qmine/common/errors.hpp"
#include "qmine/common/log.hpp"
#include "qmine/common/text.hpp"

namespace qmine::analysis {

namespace {

const std::unordered_set<std::string>& verb_lexicon() {
    static const std::unordered_set<std::string> lexicon{
        // Taxonomy action verbs
        "define", "match", "recall", "state", "list", "label",
        "discuss", "review", "paraphrase", "describe", "explain",
        "apply", "demonstrate", "illustrate", "solve", "use",
        "analyze", "analyse", "compare", "contrast", "differentiate", "distinguish",
        "argue", "conclude", "critique", "evaluate", "justify", "verify",
        "create", "design", "develop", "formulate", "organize", "organise", "plan",
        // STEM classroom verbs
        "calculate", "derive", "prove", "simplify", "integrate", "graph",
        "measure", "classify", "identify", "predict", "observe", "infer",
        "summarize", "summarise", "outline", "interpret", "construct",
        "determine", "examine", "investigate", "test", "model", "balance",
        "react", "compute", "estimate", "express", "factor", "convert",
        "compile", "debug", "implement", "iterate", "optimize", "optimise",
        "parse", "program", "execute", "sort", "search", "encode", "decode",
        "assess", "relate", "deduce", "generalize", "generalise", "validate",
        "explore", "reduce", "expand", "transform", "map", "rank", "name",
        // Common verbs
        "be", "have", "do", "make", "get", "know", "think", "see", "find",
        "give", "tell", "work", "call", "try", "ask", "need", "feel",
        "become", "leave", "put", "mean", "keep", "let", "begin", "seem",
        "help", "talk", "turn", "start", "show", "hear", "play", "run",
        "move", "like", "live", "believe", "happen", "write", "provide",
        "stand", "lose", "pay", "meet", "include", "continue", "set",
        "learn", "change", "lead", "understand", "watch", "follow", "stop",
        "speak", "read", "allow", "add", "spend", "grow", "open", "walk",
        "win", "offer", "remember", "love", "consider", "appear", "buy",
        "wait", "serve", "send", "expect", "build", "stay", "fall", "cut",
        "reach", "remain", "suggest", "raise", "pass", "sell", "require",
        "report", "decide", "pull", "teach", "occur", "exist", "depend",
        "affect", "cause", "differ", "increase", "decrease", "form",
        "produce", "obtain", "involve", "represent", "result", "contain",
        "go", "come", "want", "say", "look", "take", "check", "wonder",
    };
    return lexicon;
}

// Irregular forms that the suffix rules cannot reach.
const std::unordered_map<std::string, std::string>& irregular_map() {
    static const std::unordered_map<std::string, std::string> forms{
        {"is", "be"},     {"are", "be"},     {"am", "be"},     {"was", "be"},
        {"were", "be"},   {"been", "be"},    {"being", "be"},  {"has", "have"},
        {"had", "have"},  {"does", "do"},    {"did", "do"},    {"done", "do"},
        {"said", "say"},  {"made", "make"},  {"found", "find"}, {"gave", "give"},
        {"took", "take"}, {"taken", "take"}, {"wrote", "write"}, {"written", "write"},
        {"ran", "run"},   {"chose", "choose"}, {"chosen", "choose"}, {"drew", "draw"},
        {"drawn", "draw"}, {"built", "build"}, {"thought", "think"}, {"taught", "teach"},
        {"understood", "understand"}, {"went", "go"}, {"gone", "go"}, {"came", "come"},
        {"knew", "know"},  {"known", "know"}, {"saw", "see"},
        {"seen", "see"},  {"got", "get"},    {"gotten", "get"}, {"began", "begin"},
        {"begun", "begin"}, {"kept", "keep"}, {"left", "leave"}, {"meant", "mean"},
        {"felt", "feel"}, {"told", "tell"},  {"became", "become"}, {"lost", "lose"},
        {"paid", "pay"},  {"met", "meet"},   {"led", "lead"},  {"heard", "hear"},
        {"spoke", "speak"}, {"spoken", "speak"}, {"grew", "grow"}, {"grown", "grow"},
        {"won", "win"},   {"sent", "send"},  {"fell", "fall"}, {"sold", "sell"},
        {"proved", "prove"}, {"proven", "prove"},
    };
    return forms;
}

bool ends_with(const std::string& s, const char* suffix) {
    size_t n = std::strlen(suffix);
    return s.size() >= n && s.compare(s.size() - n, n, suffix) == 0;
}

bool derivational_verb_suffix(const std::string& lemma) {
    return ends_with(lemma, "ize") || ends_with(lemma, "ise") || ends_with(lemma, "ify") ||
           ends_with(lemma, "ate");
}

bool known_verb(const std::string& lemma) {
    return verb_lexicon().count(lemma) > 0 || (lemma.size() > 4 && derivational_verb_suffix(lemma));
}

// Returns the lemma when the token is a plausible verb form, else empty.
std::string lemmatize_verb(const std::string& token) {
    if (known_verb(token)) return token;
    auto irregular = irregular_map().find(token);
    if (irregular != irregular_map().end()) return irregular->second;

    std::vector<std::string> candidates;
    if (ends_with(token, "ies") && token.size() > 3)
        candidates.push_back(token.substr(0, token.size() - 3) + "y");
    if (ends_with(token, "es") && token.size() > 2) {
        candidates.push_back(token.substr(0, token.size() - 2));
        candidates.push_back(token.substr(0, token.size() - 1));  // e.g. "uses" -> "use"
    } else if (ends_with(token, "s") && token.size() > 1) {
        candidates.push_back(token.substr(0, token.size() - 1));
    }
    if (ends_with(token, "ied") && token.size() > 3)
        candidates.push_back(token.substr(0, token.size() - 3) + "y");
    if (ends_with(token, "ed") && token.size() > 2) {
        std::string stem = token.substr(0, token.size() - 2);
        candidates.push_back(stem + "e");  // "described" -> "describe"
        candidates.push_back(stem);
        if (stem.size() > 1 && stem[stem.size() - 1] == stem[stem.size() - 2])
            candidates.push_back(stem.substr(0, stem.size() - 1));  // "planned" -> "plan"
    }
    if (ends_with(token, "ing") && token.size() > 4) {
        std::string stem = token.substr(0, token.size() - 3);
        candidates.push_back(stem + "e");  // "defining" -> "define"
        candidates.push_back(stem);
        if (stem.size() > 1 && stem[stem.size() - 1] == stem[stem.size() - 2])
            candidates.push_back(stem.substr(0, stem.size() - 1));
    }
    for (const std::string& candidate : candidates)
        if (known_verb(candidate)) return candidate;
    return {};
}

// A verb reading is blocked right after a determiner or possessive
// ("the process", "your design").
const std::unordered_set<std::string>& noun_context_words() {
    static const std::unordered_set<std::string> words{
        "the", "a", "an", "this", "that", "these", "those", "my", "your",
        "his", "her", "its", "our", "their", "each", "every", "some", "any",
        "no", "of",
    };
    return words;
}

std::string normalize_token(std::string_view raw) {
    size_t begin = 0, end = raw.size();
    while (begin < end && !std::isalpha(static_cast<unsigned char>(raw[begin]))) ++begin;
    while (end > begin && !std::isalpha(static_cast<unsigned char>(raw[end - 1]))) --end;
    std::string token(raw.substr(begin, end - begin));
    return text::to_lower_ascii(token);
}

class RuleTagger final : public VerbTagger {
public:
    const char* name() const override { return "rule-tagger-v1"; }

    std::vector<std::string> verb_lemmas(const std::string& input) const override {
        std::vector<std::string> lemmas;
        std::string previous;
        for (std::string_view raw : text::whitespace_tokens(input)) {
            std::string token = normalize_token(raw);
            if (token.empty()) continue;
            if (!noun_context_words().count(previous)) {
                std::string lemma = lemmatize_verb(token);
                if (!lemma.empty()) lemmas.push_back(std::move(lemma));
            }
            previous = std::move(token);
        }
        return lemmas;
    }
};

}  // namespace

std::unique_ptr<VerbTagger> make_rule_tagger() {
    return std::make_unique<RuleTagger>();
}

std::vector<std::string> extract_verbs(const std::string& input, const VerbTagger& tagger) {
    if (input.empty()) throw input_error("extract_verbs requires non-empty text");
    std::vector<std::string> lemmas;
    try {
        lemmas = tagger.verb_lemmas(input);
    } catch (const std::exception& e) {
        log_warn("verbs", std::string("tagger failed: ") + e.what());
        return {};
    }
    std::vector<std::string> unique;
    std::unordered_set<std::string> seen;
    for (std::string& lemma : lemmas)
        if (seen.insert(lemma).second) unique.push_back(std::move(lemma));
    return unique;
}

std::vector<std::string> extract_verbs(const std::string& input) {
    static const std::unique_ptr<VerbTagger> tagger = make_rule_tagger();
    return extract_verbs(input, *tagger);
}

}  // namespace qmine::analysis
