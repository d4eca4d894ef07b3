#include "qmine/analysis/distribution.hpp"

#include <unordered_map>

#include "qmine/common/csv.hpp"
#include "qmine/common/errors.hpp"
#include "qmine/common/log.hpp"

namespace qmine::analysis {

std::vector<DistributionRow> bt_distribution(const std::vector<corpus::QuestionRecord>& questions,
                                             bool include_irrelevant) {
    std::vector<DistributionRow> rows;
    for (corpus::SubjectTag subject : corpus::all_subjects) {
        std::map<btclass::BTLevel, int64_t> counts;
        int64_t total = 0;
        bool seen = false;
        for (const corpus::QuestionRecord& question : questions) {
            if (question.subject != subject) continue;
            seen = true;
            if (!question.bt_label) throw input_error("question " + question.question_id + " has no bt_label");
            if (!include_irrelevant && *question.bt_label == btclass::BTLevel::irrelevant) continue;
            counts[*question.bt_label] += 1;
            ++total;
        }
        if (total == 0) {
            if (seen)
                log_warn("distribution", std::string("no countable questions for subject ") +
                                             corpus::subject_name(subject) + ", row omitted");
            continue;
        }
        DistributionRow row;
        row.subject = subject;
        row.n_questions = total;
        for (const auto& [bt_class, count] : counts)
            row.proportions[bt_class] = static_cast<double>(count) / static_cast<double>(total);
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<EngagementRow> engagement_rates(const std::vector<corpus::QuestionRecord>& questions,
                                            const std::vector<corpus::CommentRecord>& comments,
                                            const std::vector<corpus::VideoRecord>& videos) {
    std::unordered_map<std::string, const corpus::CommentRecord*> comment_by_id;
    for (const corpus::CommentRecord& comment : comments) comment_by_id[comment.comment_id] = &comment;
    std::unordered_map<std::string, const corpus::VideoRecord*> video_by_id;
    for (const corpus::VideoRecord& video : videos) video_by_id[video.video_id] = &video;

    std::map<btclass::BTLevel, EngagementRow> rows;
    int64_t excluded = 0;
    for (const corpus::QuestionRecord& question : questions) {
        if (!question.bt_label) throw input_error("question " + question.question_id + " has no bt_label");
        auto comment_it = comment_by_id.find(question.comment_id);
        if (comment_it == comment_by_id.end())
            throw input_error("question " + question.question_id + " has no joined comment");
        auto video_it = video_by_id.find(question.video_id);
        if (video_it == video_by_id.end())
            throw input_error("question " + question.question_id + " has no joined video");
        const corpus::VideoRecord& video = *video_it->second;
        if (video.view_count == 0) {
            ++excluded;
            continue;
        }
        double views = static_cast<double>(video.view_count);
        EngagementRow& row = rows[*question.bt_label];
        row.bt_class = *question.bt_label;
        row.mean_like_rate += static_cast<double>(comment_it->second->like_count) / views;
        row.mean_reply_rate += static_cast<double>(comment_it->second->reply_count) / views;
        row.n_questions += 1;
    }
    if (excluded > 0)
        log_warn("engagement", std::to_string(excluded) + " questions on zero-view videos excluded");

    std::vector<EngagementRow> out;
    for (btclass::BTLevel level : btclass::all_bt_levels) {
        auto it = rows.find(level);
        if (it == rows.end()) continue;
        EngagementRow row = it->second;
        row.mean_like_rate /= static_cast<double>(row.n_questions);
        row.mean_reply_rate /= static_cast<double>(row.n_questions);
        out.push_back(row);
    }
    return out;
}

void write_distribution_csv(const std::vector<DistributionRow>& rows, const std::string& path) {
    csv::Writer writer(path);
    std::vector<std::string> header{"subject"};
    for (btclass::BTLevel level : btclass::all_bt_levels)
        header.push_back(btclass::bt_level_name(level));
    header.push_back("n_questions");
    writer.write_row(header);
    for (const DistributionRow& row : rows) {
        std::vector<std::string> fields{corpus::subject_name(row.subject)};
        for (btclass::BTLevel level : btclass::all_bt_levels) {
            auto it = row.proportions.find(level);
            fields.push_back(csv::format_double(it == row.proportions.end() ? 0.0 : it->second));
        }
        fields.push_back(std::to_string(row.n_questions));
        writer.write_row(fields);
    }
    writer.close();
}

void write_engagement_csv(const std::vector<EngagementRow>& rows, const std::string& path) {
    csv::Writer writer(path);
    writer.write_row({"class", "mean_like_rate", "mean_reply_rate", "n_questions"});
    for (const EngagementRow& row : rows) {
        writer.write_row({btclass::bt_level_name(row.bt_class),
                          csv::format_double(row.mean_like_rate, 9),
                          csv::format_double(row.mean_reply_rate, 9),
                          std::to_string(row.n_questions)});
    }
    writer.close();
}

}  // namespace qmine::analysis
