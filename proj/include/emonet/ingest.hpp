#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "emonet/graph.hpp"
#include "emonet/lexicon.hpp"

namespace emonet {

// Raw rating data as it comes out of a collection run: one CSV row per
// answered question. Sessions are filtered for careless responding before
// aggregation into a semantic network.

enum class TaskKind { similarity, association };

const char* task_name(TaskKind task);
std::optional<TaskKind> task_from_name(const std::string& name);

enum class RecordKind { normal, catch_trial, repeat };

struct RatingRecord {
    int word_a = -1;  // -1 only on catch rows, which carry no word pair
    int word_b = -1;
    int score = 0;            // 0..7
    RecordKind kind = RecordKind::normal;
    int catch_target = -1;    // instructed answer, catch rows only
    int repeat_of = -1;       // order index of the repeated question
    int order = 0;            // presentation position within the session
    int line = 0;             // source line, for error messages
};

struct Session {
    std::string participant;
    TaskKind task = TaskKind::similarity;
    std::vector<RatingRecord> records;  // in presentation order
    bool complete = false;
    std::optional<int> age;
    std::optional<std::string> sex;

    std::size_t count(RecordKind kind) const;
};

// Counts for each filtering stage; input = defective + catch + double_pass +
// retained. `double_pass_degenerate` flags sessions removed because a repeat
// pass had zero variance (correlation undefined); they are included in
// removed_double_pass.
struct FilterReport {
    std::size_t input_sessions = 0;
    std::size_t removed_defective = 0;
    std::size_t removed_catch = 0;
    std::size_t removed_double_pass = 0;
    std::size_t double_pass_degenerate = 0;
    std::size_t retained = 0;
};

std::string filter_report_to_json(const FilterReport& report);

// Parse the rating CSV (header: participant,task,word_a,word_b,score,kind,
// catch_target,repeat_of,order). Rows are grouped into one session per
// (participant, task) and ordered by the `order` column. Throws Stage::parse
// errors naming the offending line.
std::vector<Session> parse_sessions(std::istream& in, const EmotionLexicon& lexicon);

struct SplitResult {
    std::vector<Session> retained;
    std::vector<Session> removed;
};

// A session is defective when it is structurally incomplete: it must carry
// exactly 2 catch rows, exactly 20 repeat rows, and every repeat must
// reference a normal row of the same session.
SplitResult filter_defective(const std::vector<Session>& sessions);

// Removes sessions where any catch answer differs from its target. Sessions
// with fewer than two catch rows are a protocol violation and throw.
SplitResult filter_catch(const std::vector<Session>& sessions);

// Removes sessions whose first-pass/second-pass score correlation over the
// repeated questions falls below `threshold` (or cannot be computed because
// one pass is constant; those are counted as degenerate).
struct DoublePassResult {
    std::vector<Session> retained;
    std::vector<Session> removed;
    std::size_t degenerate = 0;
};

DoublePassResult filter_double_pass(const std::vector<Session>& sessions,
                                    double threshold = 0.4);

struct FilterOutcome {
    std::vector<Session> retained;
    FilterReport report;
};

// Full pipeline: defective -> catch -> double-pass.
FilterOutcome apply_filters(const std::vector<Session>& sessions, double threshold = 0.4);

// Mean rating per ordered word pair across retained sessions, computed as
// integer score sums divided by answer counts (one division per pair, so the
// result does not depend on session order). Catch rows never contribute;
// repeat rows are second passes and are excluded from means by design.
struct AggregateResult {
    Matrix sum;        // integer-valued score totals
    Matrix count;      // answers per ordered pair
    std::vector<std::pair<int, int>> missing;  // ordered pairs with no answers
    double e_max = 7.0;
};

AggregateResult aggregate(const std::vector<Session>& sessions, const EmotionLexicon& lexicon);

enum class MissingPolicy { error, impute_global_mean };

// Builds the semantic network over the full vocabulary (node i carries word
// id i). Missing pairs are a hard error unless imputation with the global
// mean of observed pairs is requested.
SemanticNetwork make_network(const AggregateResult& agg, const EmotionLexicon& lexicon,
                             MissingPolicy policy = MissingPolicy::error);

// Score distribution (0..7) over normal records of the given sessions.
std::array<std::int64_t, 8> score_histogram(const std::vector<Session>& sessions);

void write_sessions_csv(std::ostream& out, const std::vector<Session>& sessions,
                        const EmotionLexicon& lexicon);

}  // namespace emonet
