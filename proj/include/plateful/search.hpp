#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "plateful/engine.hpp"
#include "plateful/error.hpp"

namespace plateful {

enum class SearchMode { tfidf, bm25, ranknet };

std::string to_string(SearchMode mode);
std::optional<SearchMode> parse_mode(std::string_view name);

/// Raised when ranknet mode is requested but no ranker is loaded.
class ModelMissingError : public Error {
  public:
    using Error::Error;
};

struct SearchConfig {
    std::size_t candidate_depth = 50;
    std::size_t result_count = 10;
    SearchMode mode = SearchMode::bm25;

    /// Both counts positive and result_count <= candidate_depth.
    void validate() const;
};

struct SearchResult {
    std::string doc_id;
    double score = 0.0;
    std::size_t rank = 0;  // 1-based
    std::string snippet;
};

/// First `max_chars` code points of a UTF-8 string.
std::string utf8_prefix(std::string_view text, std::size_t max_chars);

std::vector<SearchResult> run_query(std::string_view query_text, const SearchConfig& config,
                                    const EngineState& state);

/// (1/min(|relevant|, k)) * sum of precision@i over relevant hits in the top k.
double average_precision_at_k(const std::vector<std::string>& ranked, const std::set<std::string>& relevant,
                              std::size_t k);
double reciprocal_rank(const std::vector<std::string>& ranked, const std::set<std::string>& relevant);

inline const std::vector<std::string> kMetricNames = {"MAP@1", "MAP@3", "MAP@5", "MRR"};

struct QueryMetrics {
    std::string query_id;
    std::map<std::string, double> metrics;
};

struct EvalReport {
    SearchMode mode = SearchMode::bm25;
    std::map<std::string, double> metrics;
    std::vector<QueryMetrics> per_query;
};

/// Runs every query in every configuration; queries are evaluated in input
/// order. Each query needs at least one judgment.
std::vector<EvalReport> evaluate(const std::vector<Query>& queries, const std::vector<RelevanceJudgment>& judgments,
                                 const EngineState& state, const std::vector<SearchConfig>& configs);

std::string eval_report_json(const std::vector<EvalReport>& reports);
/// Fixed-width table, one row per mode.
std::string format_eval_table(const std::vector<EvalReport>& reports);

/// Raw features for every judged (query, doc) pair.
FeatureStore compute_features(const EngineState& state, const std::vector<Query>& queries,
                              const std::vector<RelevanceJudgment>& judgments);

struct RankerTraining {
    RankerModel model;
    std::vector<double> loss_history;
    double pair_accuracy = 0.0;
    std::size_t pair_count = 0;
};

/// Fits normalization on the judged pairs, then trains the network on all
/// relevant/non-relevant pairs per query.
RankerTraining train_ranker(const EngineState& state, const std::vector<Query>& queries,
                            const std::vector<RelevanceJudgment>& judgments, const RankNetOptions& options,
                            std::size_t hidden = 8);

}  // namespace plateful
