#include "qmine/corpus/stats.hpp"

#include <map>

#include "qmine/common/csv.hpp"
#include "qmine/common/log.hpp"
#include "qmine/common/text.hpp"

namespace qmine::corpus {

CorpusStats corpus_stats(const Corpus& corpus) {
    std::map<std::string, std::vector<const CommentRecord*>> by_video;
    for (const CommentRecord& comment : corpus.comments)
        by_video[comment.video_id].push_back(&comment);

    CorpusStats stats;
    for (SubjectTag subject : all_subjects) {
        StatsRow row;
        row.subject = subject;
        double comment_token_means = 0.0;
        int64_t videos_with_comments = 0;
        for (const VideoRecord& video : corpus.videos) {
            if (video.subject != subject) continue;
            ++row.n_videos;
            row.avg_views += static_cast<double>(video.view_count);
            row.avg_likes += static_cast<double>(video.like_count);
            row.avg_transcript_tokens +=
                static_cast<double>(text::count_whitespace_tokens(video.transcript));
            auto it = by_video.find(video.video_id);
            size_t n_comments = it == by_video.end() ? 0 : it->second.size();
            row.avg_comments += static_cast<double>(n_comments);
            if (n_comments > 0) {
                double tokens = 0.0;
                for (const CommentRecord* comment : it->second)
                    tokens += static_cast<double>(text::count_whitespace_tokens(comment->clean_text));
                comment_token_means += tokens / static_cast<double>(n_comments);
                ++videos_with_comments;
            }
        }
        if (row.n_videos == 0) {
            log_warn("corpus", std::string("no videos for subject ") + subject_name(subject) +
                                   ", row omitted");
            continue;
        }
        double n = static_cast<double>(row.n_videos);
        row.avg_views /= n;
        row.avg_likes /= n;
        row.avg_comments /= n;
        row.avg_transcript_tokens /= n;
        row.avg_comment_tokens =
            videos_with_comments > 0 ? comment_token_means / static_cast<double>(videos_with_comments)
                                     : 0.0;
        for (const QuestionRecord& question : corpus.questions)
            if (question.subject == subject) ++row.n_extracted_questions;
        stats.push_back(row);
    }
    return stats;
}

void write_stats_csv(const CorpusStats& stats, const std::string& path) {
    csv::Writer writer(path);
    writer.write_row({"subject", "n_videos", "avg_views", "avg_likes", "avg_comments",
                      "avg_transcript_tokens", "avg_comment_tokens", "n_extracted_questions"});
    for (const StatsRow& row : stats) {
        writer.write_row({subject_name(row.subject), std::to_string(row.n_videos),
                          csv::format_double(row.avg_views), csv::format_double(row.avg_likes),
                          csv::format_double(row.avg_comments),
                          csv::format_double(row.avg_transcript_tokens),
                          csv::format_double(row.avg_comment_tokens),
                          std::to_string(row.n_extracted_questions)});
    }
    writer.close();
}

}  // namespace qmine::corpus
