#include "plateful/search.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace plateful {

std::string to_string(SearchMode mode)
{
    switch (mode) {
    case SearchMode::tfidf: return "tfidf";
    case SearchMode::bm25: return "bm25";
    case SearchMode::ranknet: return "ranknet";
    }
    return "?";
}

std::optional<SearchMode> parse_mode(std::string_view name)
{
    if (name == "tfidf") return SearchMode::tfidf;
    if (name == "bm25") return SearchMode::bm25;
    if (name == "ranknet") return SearchMode::ranknet;
    return std::nullopt;
}

void SearchConfig::validate() const
{
    if (result_count == 0 || candidate_depth == 0) {
        throw ArgumentError("result count and candidate depth must be positive");
    }
    if (result_count > candidate_depth) {
        throw ArgumentError("result count " + std::to_string(result_count) + " exceeds candidate depth " +
                            std::to_string(candidate_depth));
    }
}

std::string utf8_prefix(std::string_view text, std::size_t max_chars)
{
    std::size_t chars = 0;
    std::size_t i = 0;
    while (i < text.size()) {
        auto lead = static_cast<unsigned char>(text[i]);
        if ((lead & 0xC0) != 0x80) {
            if (chars == max_chars) {
                break;
            }
            ++chars;
        }
        ++i;
    }
    return std::string(text.substr(0, i));
}

namespace {

std::vector<ScoredDoc> ranknet_ranking(const std::vector<std::string>& tokens, const SearchConfig& config,
                                       const EngineState& state)
{
    const RankerModel* model = state.ranker();
    if (model == nullptr) {
        throw ModelMissingError("ranknet mode requires a trained ranker");
    }
    Vector qvec = state.embed_query(tokens);
    std::vector<ScoredDoc> first_pass;
    first_pass.reserve(state.doc_vectors().size());
    for (const auto& [id, v] : state.doc_vectors()) {
        first_pass.push_back({id, cosine(qvec, v)});
    }
    rank_and_truncate(first_pass, config.candidate_depth);

    std::vector<Candidate> candidates;
    candidates.reserve(first_pass.size());
    for (const auto& c : first_pass) {
        candidates.push_back({c.doc_id, extract_features(tokens, qvec, c.doc_id, state.text_index(),
                                                         state.category_index(), state.doc_vectors(),
                                                         state.bm25())});
    }
    auto ranked = rerank(*model, candidates);
    rank_and_truncate(ranked, config.result_count);
    return ranked;
}

}  // namespace

std::vector<SearchResult> run_query(std::string_view query_text, const SearchConfig& config,
                                    const EngineState& state)
{
    config.validate();
    auto tokens = tokenize(query_text);
    if (tokens.empty()) {
        return {};
    }
    std::vector<ScoredDoc> ranked;
    switch (config.mode) {
    case SearchMode::tfidf:
        ranked = search_field(state.text_index(), state.bm25(), tokens, config.result_count, Scorer::tfidf);
        break;
    case SearchMode::bm25:
        ranked = search_field(state.text_index(), state.bm25(), tokens, config.result_count, Scorer::bm25);
        break;
    case SearchMode::ranknet:
        ranked = ranknet_ranking(tokens, config, state);
        break;
    }
    std::vector<SearchResult> results;
    results.reserve(ranked.size());
    for (std::size_t i = 0; i < ranked.size(); ++i) {
        const Review* review = state.find_review(ranked[i].doc_id);
        results.push_back({ranked[i].doc_id, ranked[i].score, i + 1,
                           review != nullptr ? utf8_prefix(review->text, 200) : std::string()});
    }
    return results;
}

double average_precision_at_k(const std::vector<std::string>& ranked, const std::set<std::string>& relevant,
                              std::size_t k)
{
    if (k == 0) {
        throw ArgumentError("k must be at least 1");
    }
    if (relevant.empty()) {
        return 0.0;
    }
    double sum = 0.0;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < std::min(k, ranked.size()); ++i) {
        if (relevant.contains(ranked[i])) {
            ++hits;
            sum += static_cast<double>(hits) / static_cast<double>(i + 1);
        }
    }
    return sum / static_cast<double>(std::min(relevant.size(), k));
}

double reciprocal_rank(const std::vector<std::string>& ranked, const std::set<std::string>& relevant)
{
    for (std::size_t i = 0; i < ranked.size(); ++i) {
        if (relevant.contains(ranked[i])) {
            return 1.0 / static_cast<double>(i + 1);
        }
    }
    return 0.0;
}

std::vector<EvalReport> evaluate(const std::vector<Query>& queries, const std::vector<RelevanceJudgment>& judgments,
                                 const EngineState& state, const std::vector<SearchConfig>& configs)
{
    std::map<std::string, std::set<std::string>> relevant;
    std::set<std::string> judged;
    for (const auto& j : judgments) {
        judged.insert(j.query_id);
        if (j.label > 0) {
            relevant[j.query_id].insert(j.doc_id);
        }
    }
    for (const auto& q : queries) {
        if (!judged.contains(q.id)) {
            throw DataError("query '" + q.id + "' has no relevance judgments");
        }
    }

    std::vector<EvalReport> reports;
    for (const auto& config : configs) {
        EvalReport report;
        report.mode = config.mode;
        for (const auto& name : kMetricNames) {
            report.metrics[name] = 0.0;
        }
        for (const auto& q : queries) {
            std::vector<std::string> ranked;
            for (const auto& r : run_query(q.text, config, state)) {
                ranked.push_back(r.doc_id);
            }
            const auto& rel = relevant[q.id];
            QueryMetrics qm{q.id, {}};
            qm.metrics["MAP@1"] = average_precision_at_k(ranked, rel, 1);
            qm.metrics["MAP@3"] = average_precision_at_k(ranked, rel, 3);
            qm.metrics["MAP@5"] = average_precision_at_k(ranked, rel, 5);
            qm.metrics["MRR"] = reciprocal_rank(ranked, rel);
            for (const auto& [name, value] : qm.metrics) {
                report.metrics[name] += value;
            }
            report.per_query.push_back(std::move(qm));
        }
        if (!queries.empty()) {
            for (auto& [name, value] : report.metrics) {
                value /= static_cast<double>(queries.size());
            }
        }
        reports.push_back(std::move(report));
    }
    return reports;
}

std::string eval_report_json(const std::vector<EvalReport>& reports)
{
    nlohmann::json out = nlohmann::json::object();
    for (const auto& report : reports) {
        nlohmann::json per_query = nlohmann::json::array();
        for (const auto& q : report.per_query) {
            per_query.push_back({{"query_id", q.query_id}, {"metrics", q.metrics}});
        }
        out[to_string(report.mode)] = {{"metrics", report.metrics}, {"per_query", per_query}};
    }
    return out.dump(2);
}

std::string format_eval_table(const std::vector<EvalReport>& reports)
{
    std::ostringstream out;
    char line[128];
    std::snprintf(line, sizeof line, "%-8s %8s %8s %8s %8s\n", "mode", "MAP@1", "MAP@3", "MAP@5", "MRR");
    out << line;
    for (const auto& r : reports) {
        std::snprintf(line, sizeof line, "%-8s %8.4f %8.4f %8.4f %8.4f\n", to_string(r.mode).c_str(),
                      r.metrics.at("MAP@1"), r.metrics.at("MAP@3"), r.metrics.at("MAP@5"), r.metrics.at("MRR"));
        out << line;
    }
    return out.str();
}

FeatureStore compute_features(const EngineState& state, const std::vector<Query>& queries,
                              const std::vector<RelevanceJudgment>& judgments)
{
    std::map<std::string, const Query*> by_id;
    for (const auto& q : queries) {
        by_id[q.id] = &q;
    }
    std::map<std::string, std::pair<std::vector<std::string>, Vector>> prepared;
    FeatureStore store;
    for (const auto& j : judgments) {
        auto q = by_id.find(j.query_id);
        if (q == by_id.end()) {
            throw DataError("judgment refers to unknown query '" + j.query_id + "'");
        }
        if (!state.text_index().contains(j.doc_id)) {
            throw DataError("judgment refers to unknown review '" + j.doc_id + "'");
        }
        auto it = prepared.find(j.query_id);
        if (it == prepared.end()) {
            auto tokens = tokenize(q->second->text);
            auto vec = state.embed_query(tokens);
            it = prepared.emplace(j.query_id, std::make_pair(std::move(tokens), std::move(vec))).first;
        }
        store[{j.query_id, j.doc_id}] =
            extract_features(it->second.first, it->second.second, j.doc_id, state.text_index(),
                             state.category_index(), state.doc_vectors(), state.bm25());
    }
    return store;
}

RankerTraining train_ranker(const EngineState& state, const std::vector<Query>& queries,
                            const std::vector<RelevanceJudgment>& judgments, const RankNetOptions& options,
                            std::size_t hidden)
{
    FeatureStore raw = compute_features(state, queries, judgments);
    std::vector<FeatureVector> all;
    all.reserve(raw.size());
    for (const auto& [key, f] : raw) {
        all.push_back(f);
    }
    RankerTraining out;
    out.model.stats = FeatureStats::fit(all);
    FeatureStore normalized;
    for (const auto& [key, f] : raw) {
        normalized[key] = normalize(f, out.model.stats);
    }
    auto pairs = build_training_pairs(judgments, normalized);
    if (pairs.empty()) {
        throw DataError("judgments yield no relevant/non-relevant pairs to train on");
    }
    out.model.net = RankNet::initialize(hidden, options.seed);
    out.loss_history = train_ranknet(out.model.net, pairs, options);
    out.pair_accuracy = pair_accuracy(out.model.net, pairs);
    out.pair_count = pairs.size();
    return out;
}

}  // namespace plateful
