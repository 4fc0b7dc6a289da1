#include "emonet/ingest.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "emonet/error.hpp"
#include "emonet/stats.hpp"

namespace emonet {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

int parse_int(const std::string& field, int line_no, const char* what) {
    try {
        std::size_t pos = 0;
        const int value = std::stoi(field, &pos);
        if (pos != field.size()) throw std::invalid_argument(field);
        return value;
    } catch (const std::exception&) {
        throw Error(Stage::parse, "line " + std::to_string(line_no) + ": bad " + what + " '" +
                                      field + "'");
    }
}

int parse_word(const std::string& field, const EmotionLexicon& lexicon, int line_no) {
    const auto id = lexicon.find(field);
    if (!id) {
        throw Error(Stage::parse,
                    "line " + std::to_string(line_no) + ": unknown word '" + field + "'");
    }
    return *id;
}

int parse_score(const std::string& field, int line_no, const char* what) {
    const int value = parse_int(field, line_no, what);
    if (value < 0 || value > 7) {
        throw Error(Stage::parse, "line " + std::to_string(line_no) + ": " + what + " " +
                                      std::to_string(value) + " outside 0..7");
    }
    return value;
}

}  // namespace

const char* task_name(TaskKind task) {
    return task == TaskKind::similarity ? "similarity" : "association";
}

std::optional<TaskKind> task_from_name(const std::string& name) {
    if (name == "similarity") return TaskKind::similarity;
    if (name == "association") return TaskKind::association;
    return std::nullopt;
}

std::size_t Session::count(RecordKind kind) const {
    std::size_t c = 0;
    for (const auto& r : records) {
        if (r.kind == kind) ++c;
    }
    return c;
}

std::vector<Session> parse_sessions(std::istream& in, const EmotionLexicon& lexicon) {
    std::string line;
    int line_no = 0;
    bool saw_header = false;
    // Keyed by (participant, task); insertion order is kept for output.
    std::map<std::pair<std::string, int>, std::size_t> index;
    std::vector<Session> sessions;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (!saw_header) {
            if (line.rfind("participant,", 0) != 0) {
                throw Error(Stage::parse, "line 1: missing header row");
            }
            saw_header = true;
            continue;
        }
        const auto fields = split_csv(line);
        if (fields.size() != 9) {
            throw Error(Stage::parse, "line " + std::to_string(line_no) + ": expected 9 fields, got " +
                                          std::to_string(fields.size()));
        }
        const std::string& participant = fields[0];
        if (participant.empty()) {
            throw Error(Stage::parse, "line " + std::to_string(line_no) + ": empty participant");
        }
        const auto task = task_from_name(fields[1]);
        if (!task) {
            throw Error(Stage::parse,
                        "line " + std::to_string(line_no) + ": unknown task '" + fields[1] + "'");
        }
        RatingRecord rec;
        rec.line = line_no;
        rec.score = parse_score(fields[4], line_no, "score");
        rec.order = parse_int(fields[8], line_no, "order");
        if (fields[5] == "normal") {
            rec.kind = RecordKind::normal;
        } else if (fields[5] == "catch") {
            rec.kind = RecordKind::catch_trial;
        } else if (fields[5] == "repeat") {
            rec.kind = RecordKind::repeat;
        } else {
            throw Error(Stage::parse, "line " + std::to_string(line_no) + ": unknown record kind '" +
                                          fields[5] + "'");
        }
        if (rec.kind == RecordKind::catch_trial) {
            rec.catch_target = parse_score(fields[6], line_no, "catch_target");
            if (!fields[2].empty()) rec.word_a = parse_word(fields[2], lexicon, line_no);
            if (!fields[3].empty()) rec.word_b = parse_word(fields[3], lexicon, line_no);
        } else {
            rec.word_a = parse_word(fields[2], lexicon, line_no);
            rec.word_b = parse_word(fields[3], lexicon, line_no);
            if (rec.word_a == rec.word_b) {
                throw Error(Stage::parse,
                            "line " + std::to_string(line_no) + ": word pair must be distinct");
            }
            if (rec.kind == RecordKind::repeat) {
                rec.repeat_of = parse_int(fields[7], line_no, "repeat_of");
            }
        }
        const auto key = std::make_pair(participant, static_cast<int>(*task));
        auto it = index.find(key);
        if (it == index.end()) {
            index.emplace(key, sessions.size());
            Session s;
            s.participant = participant;
            s.task = *task;
            sessions.push_back(std::move(s));
            it = index.find(key);
        }
        sessions[it->second].records.push_back(rec);
    }
    if (!saw_header) throw Error(Stage::parse, "empty input: no header row");
    for (auto& s : sessions) {
        std::stable_sort(s.records.begin(), s.records.end(),
                         [](const RatingRecord& a, const RatingRecord& b) {
                             return a.order < b.order;
                         });
        // Completeness: 2 catch rows, 20 repeats, every repeat resolving to a
        // normal row of this session.
        bool repeats_resolve = true;
        for (const auto& r : s.records) {
            if (r.kind != RecordKind::repeat) continue;
            const bool found = std::any_of(s.records.begin(), s.records.end(),
                                           [&](const RatingRecord& o) {
                                               return o.kind == RecordKind::normal &&
                                                      o.order == r.repeat_of;
                                           });
            if (!found) {
                repeats_resolve = false;
                break;
            }
        }
        s.complete = s.count(RecordKind::catch_trial) == 2 &&
                     s.count(RecordKind::repeat) == 20 && repeats_resolve;
    }
    return sessions;
}

SplitResult filter_defective(const std::vector<Session>& sessions) {
    SplitResult result;
    for (const auto& s : sessions) {
        (s.complete ? result.retained : result.removed).push_back(s);
    }
    return result;
}

SplitResult filter_catch(const std::vector<Session>& sessions) {
    SplitResult result;
    for (const auto& s : sessions) {
        if (s.count(RecordKind::catch_trial) < 2) {
            throw Error(Stage::filter, "catch filter: participant '" + s.participant +
                                           "' has fewer than 2 catch rows (protocol violation)");
        }
        bool passed = true;
        for (const auto& r : s.records) {
            if (r.kind == RecordKind::catch_trial && r.score != r.catch_target) {
                passed = false;
                break;
            }
        }
        (passed ? result.retained : result.removed).push_back(s);
    }
    return result;
}

DoublePassResult filter_double_pass(const std::vector<Session>& sessions, double threshold) {
    DoublePassResult result;
    for (const auto& s : sessions) {
        std::vector<double> first, second;
        for (const auto& r : s.records) {
            if (r.kind != RecordKind::repeat) continue;
            const auto orig = std::find_if(s.records.begin(), s.records.end(),
                                           [&](const RatingRecord& o) {
                                               return o.kind == RecordKind::normal &&
                                                      o.order == r.repeat_of;
                                           });
            if (orig == s.records.end()) {
                throw Error(Stage::filter, "double-pass filter: participant '" + s.participant +
                                               "' repeat row does not match a question");
            }
            first.push_back(static_cast<double>(orig->score));
            second.push_back(static_cast<double>(r.score));
        }
        if (first.size() < 2) {
            throw Error(Stage::filter, "double-pass filter: participant '" + s.participant +
                                           "' has too few repeat rows");
        }
        double r = 0.0;
        bool degenerate = false;
        try {
            r = pearson_r(first, second);
        } catch (const Error&) {
            degenerate = true;  // a constant pass; reliability is undefined
        }
        if (degenerate || r < threshold) {
            result.removed.push_back(s);
            if (degenerate) ++result.degenerate;
        } else {
            result.retained.push_back(s);
        }
    }
    return result;
}

FilterOutcome apply_filters(const std::vector<Session>& sessions, double threshold) {
    FilterOutcome outcome;
    outcome.report.input_sessions = sessions.size();
    auto defective = filter_defective(sessions);
    outcome.report.removed_defective = defective.removed.size();
    auto catches = filter_catch(defective.retained);
    outcome.report.removed_catch = catches.removed.size();
    auto dp = filter_double_pass(catches.retained, threshold);
    outcome.report.removed_double_pass = dp.removed.size();
    outcome.report.double_pass_degenerate = dp.degenerate;
    outcome.report.retained = dp.retained.size();
    outcome.retained = std::move(dp.retained);
    return outcome;
}

std::string filter_report_to_json(const FilterReport& report) {
    nlohmann::json doc;
    doc["input_sessions"] = report.input_sessions;
    doc["removed_defective"] = report.removed_defective;
    doc["removed_catch"] = report.removed_catch;
    doc["removed_double_pass"] = report.removed_double_pass;
    doc["double_pass_degenerate"] = report.double_pass_degenerate;
    doc["retained"] = report.retained;
    return doc.dump(2) + "\n";
}

AggregateResult aggregate(const std::vector<Session>& sessions,
                          const EmotionLexicon& lexicon) {
    if (sessions.empty()) {
        throw Error(Stage::filter, "aggregate: no sessions left to aggregate");
    }
    const std::size_t n = lexicon.size();
    AggregateResult result;
    result.sum = Matrix(n, n, 0.0);
    result.count = Matrix(n, n, 0.0);
    for (const auto& s : sessions) {
        for (const auto& r : s.records) {
            if (r.kind != RecordKind::normal) continue;  // repeats are reliability probes
            result.sum(static_cast<std::size_t>(r.word_a), static_cast<std::size_t>(r.word_b)) +=
                static_cast<double>(r.score);
            result.count(static_cast<std::size_t>(r.word_a),
                         static_cast<std::size_t>(r.word_b)) += 1.0;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j && result.count(i, j) == 0.0) {
                result.missing.emplace_back(static_cast<int>(i), static_cast<int>(j));
            }
        }
    }
    return result;
}

SemanticNetwork make_network(const AggregateResult& agg, const EmotionLexicon& lexicon,
                             MissingPolicy policy) {
    const std::size_t n = lexicon.size();
    if (agg.sum.rows() != n || agg.count.rows() != n) {
        throw Error(Stage::network, "make_network: aggregate size does not match lexicon");
    }
    if (!agg.missing.empty() && policy == MissingPolicy::error) {
        const auto& [a, b] = agg.missing.front();
        throw Error(Stage::network,
                    "make_network: " + std::to_string(agg.missing.size()) +
                        " word pairs have no answers (first: " + lexicon.word(a).english +
                        " -> " + lexicon.word(b).english + "); rerun with imputation enabled");
    }
    double grand_sum = 0.0, grand_count = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            grand_sum += agg.sum(i, j);
            grand_count += agg.count(i, j);
        }
    }
    if (grand_count == 0.0) {
        throw Error(Stage::network, "make_network: no answered pairs at all");
    }
    const double global_mean = grand_sum / grand_count;
    SemanticNetwork net;
    net.n = n;
    net.e_max = agg.e_max;
    net.words.resize(n);
    for (std::size_t i = 0; i < n; ++i) net.words[i] = static_cast<int>(i);
    net.weights = Matrix(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            if (agg.count(i, j) > 0.0) {
                net.weights(i, j) = agg.sum(i, j) / agg.count(i, j);
            } else {
                net.weights(i, j) = global_mean;
            }
        }
    }
    return net;
}

std::array<std::int64_t, 8> score_histogram(const std::vector<Session>& sessions) {
    std::array<std::int64_t, 8> counts{};
    for (const auto& s : sessions) {
        for (const auto& r : s.records) {
            if (r.kind == RecordKind::normal) counts[static_cast<std::size_t>(r.score)]++;
        }
    }
    return counts;
}

void write_sessions_csv(std::ostream& out, const std::vector<Session>& sessions,
                        const EmotionLexicon& lexicon) {
    out << "participant,task,word_a,word_b,score,kind,catch_target,repeat_of,order\n";
    for (const auto& s : sessions) {
        for (const auto& r : s.records) {
            out << s.participant << ',' << task_name(s.task) << ',';
            if (r.word_a >= 0) out << lexicon.word(r.word_a).english;
            out << ',';
            if (r.word_b >= 0) out << lexicon.word(r.word_b).english;
            out << ',' << r.score << ',';
            switch (r.kind) {
                case RecordKind::normal: out << "normal"; break;
                case RecordKind::catch_trial: out << "catch"; break;
                case RecordKind::repeat: out << "repeat"; break;
            }
            out << ',';
            if (r.catch_target >= 0) out << r.catch_target;
            out << ',';
            if (r.repeat_of >= 0) out << r.repeat_of;
            out << ',' << r.order << '\n';
        }
    }
}

}  // namespace emonet
