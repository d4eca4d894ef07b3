#include "qmine/corpus/io.hpp"

#include <filesystem>
#include <unordered_set>

#include "qmine/common/errors.hpp"
#include "qmine/common/jsonl.hpp"

namespace qmine::corpus {

namespace {

using jsonl::json;

json video_to_json(const VideoRecord& video) {
    return json{{"video_id", video.video_id},
                {"subject", subject_name(video.subject)},
                {"title", video.title},
                {"description", video.description},
                {"view_count", video.view_count},
                {"like_count", video.like_count},
                {"transcript", video.transcript},
                {"comment_ids", video.comment_ids}};
}

VideoRecord video_from_json(const json& j) {
    VideoRecord video;
    video.video_id = j.at("video_id").get<std::string>();
    video.subject = parse_subject(j.at("subject").get<std::string>());
    video.title = j.at("title").get<std::string>();
    video.description = j.at("description").get<std::string>();
    video.view_count = j.at("view_count").get<int64_t>();
    video.like_count = j.at("like_count").get<int64_t>();
    video.transcript = j.at("transcript").get<std::string>();
    if (j.contains("comment_ids")) video.comment_ids = j.at("comment_ids").get<std::vector<std::string>>();
    if (video.view_count < 0 || video.like_count < 0)
        throw dataset_error("negative count on video " + video.video_id);
    return video;
}

json comment_to_json(const CommentRecord& comment) {
    return json{{"comment_id", comment.comment_id}, {"video_id", comment.video_id},
                {"raw_text", comment.raw_text},    {"clean_text", comment.clean_text},
                {"like_count", comment.like_count}, {"reply_count", comment.reply_count},
                {"retrieval_rank", comment.retrieval_rank}};
}

CommentRecord comment_from_json(const json& j) {
    CommentRecord comment;
    comment.comment_id = j.at("comment_id").get<std::string>();
    comment.video_id = j.at("video_id").get<std::string>();
    comment.raw_text = j.at("raw_text").get<std::string>();
    comment.clean_text = j.value("clean_text", std::string());
    comment.like_count = j.value("like_count", int64_t{0});
    comment.reply_count = j.value("reply_count", int64_t{0});
    comment.retrieval_rank = j.at("retrieval_rank").get<int>();
    return comment;
}

json question_to_json(const QuestionRecord& question) {
    json j{{"question_id", question.question_id},
           {"comment_id", question.comment_id},
           {"video_id", question.video_id},
           {"subject", subject_name(question.subject)},
           {"text", question.text},
           {"detection_prob", question.detection_prob},
           {"token_count", question.token_count}};
    if (question.bt_label) j["bt_label"] = btclass::bt_level_name(*question.bt_label);
    if (question.bt_probs) j["bt_probs"] = *question.bt_probs;
    return j;
}

QuestionRecord question_from_json(const json& j) {
    QuestionRecord question;
    question.question_id = j.at("question_id").get<std::string>();
    question.comment_id = j.at("comment_id").get<std::string>();
    question.video_id = j.at("video_id").get<std::string>();
    question.subject = parse_subject(j.at("subject").get<std::string>());
    question.text = j.at("text").get<std::string>();
    question.detection_prob = j.at("detection_prob").get<double>();
    question.token_count = j.at("token_count").get<int>();
    if (j.contains("bt_label"))
        question.bt_label = btclass::parse_bt_level(j.at("bt_label").get<std::string>());
    if (j.contains("bt_probs")) question.bt_probs = j.at("bt_probs").get<std::vector<double>>();
    return question;
}

template <class Record, class ToJson>
void save_records(const std::vector<Record>& records, const std::string& path, ToJson to_json) {
    jsonl::Writer writer(path);
    for (const Record& record : records) writer.write(to_json(record));
    writer.close();
}

template <class Record, class FromJson>
std::vector<Record> load_records(const std::string& path, FromJson from_json) {
    std::vector<Record> records;
    jsonl::for_each_record(path, [&](const json& j) { records.push_back(from_json(j)); });
    return records;
}

}  // namespace

void save_videos(const std::vector<VideoRecord>& videos, const std::string& path) {
    save_records(videos, path, video_to_json);
}

void save_comments(const std::vector<CommentRecord>& comments, const std::string& path) {
    save_records(comments, path, comment_to_json);
}

void save_questions(const std::vector<QuestionRecord>& questions, const std::string& path) {
    save_records(questions, path, question_to_json);
}

std::vector<VideoRecord> load_videos(const std::string& path) {
    auto videos = load_records<VideoRecord>(path, video_from_json);
    std::unordered_set<std::string> ids;
    for (const VideoRecord& video : videos)
        if (!ids.insert(video.video_id).second)
            throw dataset_error("duplicate video_id: " + video.video_id);
    return videos;
}

std::vector<CommentRecord> load_comments(const std::string& path) {
    return load_records<CommentRecord>(path, comment_from_json);
}

std::vector<QuestionRecord> load_questions(const std::string& path) {
    return load_records<QuestionRecord>(path, question_from_json);
}

Corpus load_corpus(const std::string& dir) {
    namespace fs = std::filesystem;
    Corpus corpus;
    corpus.videos = load_videos(dir + "/videos.jsonl");
    corpus.comments = load_comments(dir + "/comments.jsonl");
    if (fs::exists(dir + "/questions.jsonl"))
        corpus.questions = load_questions(dir + "/questions.jsonl");
    return corpus;
}

void save_corpus(const Corpus& corpus, const std::string& dir) {
    std::filesystem::create_directories(dir);
    save_videos(corpus.videos, dir + "/videos.jsonl");
    save_comments(corpus.comments, dir + "/comments.jsonl");
    if (!corpus.questions.empty()) save_questions(corpus.questions, dir + "/questions.jsonl");
}

}  // namespace qmine::corpus
