#include "plateful/text_index.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "plateful/error.hpp"

namespace plateful {

namespace {

const std::vector<Posting>* find_postings(const InvertedIndex& index, const std::string& term)
{
    const auto& postings = index.postings();
    auto it = postings.find(term);
    return it == postings.end() ? nullptr : &it->second;
}

double bm25_idf(std::size_t n, std::size_t df)
{
    auto N = static_cast<double>(n);
    auto d = static_cast<double>(df);
    return std::log((N - d + 0.5) / (d + 0.5) + 1.0);
}

double bm25_term(double idf, double tf, double doc_len, double avgdl, const Bm25Params& p)
{
    double norm = avgdl > 0.0 ? doc_len / avgdl : 0.0;
    return idf * tf * (p.k1 + 1.0) / (tf + p.k1 * (1.0 - p.b + p.b * norm));
}

double tfidf_term(double tf, std::size_t n, std::size_t df)
{
    return (1.0 + std::log(tf)) * std::log(static_cast<double>(n) / static_cast<double>(df));
}

}  // namespace

std::size_t InvertedIndex::document_frequency(const std::string& term) const
{
    const auto* list = find_postings(*this, term);
    return list == nullptr ? 0 : list->size();
}

std::uint32_t InvertedIndex::term_frequency(const std::string& term, const std::string& doc_id) const
{
    const auto* list = find_postings(*this, term);
    if (list == nullptr) {
        return 0;
    }
    auto it = std::lower_bound(list->begin(), list->end(), doc_id,
                               [](const Posting& p, const std::string& id) { return p.doc_id < id; });
    return (it != list->end() && it->doc_id == doc_id) ? it->term_frequency : 0;
}

std::uint32_t InvertedIndex::doc_length(const std::string& doc_id) const
{
    auto it = m_doc_length.find(doc_id);
    if (it == m_doc_length.end()) {
        throw ArgumentError("unknown document '" + doc_id + "' in field '" + m_field + "'");
    }
    return it->second;
}

InvertedIndex build_index(const std::vector<IndexedDoc>& docs, std::string field_name)
{
    InvertedIndex index;
    index.m_field = std::move(field_name);
    for (const auto& doc : docs) {
        if (!index.m_doc_length.emplace(doc.doc_id, static_cast<std::uint32_t>(doc.tokens.size())).second) {
            throw DataError("duplicate document id '" + doc.doc_id + "'");
        }
        std::map<std::string, std::uint32_t> counts;
        for (const auto& t : doc.tokens) {
            ++counts[t];
        }
        for (const auto& [term, tf] : counts) {
            index.m_postings[term].push_back({doc.doc_id, tf});
        }
    }
    for (auto& [term, list] : index.m_postings) {
        std::sort(list.begin(), list.end(),
                  [](const Posting& a, const Posting& b) { return a.doc_id < b.doc_id; });
    }
    if (!index.m_doc_length.empty()) {
        // Sum in doc_id order so the mean does not depend on input order.
        double total = 0.0;
        for (const auto& [id, len] : index.m_doc_length) {
            total += len;
        }
        index.m_avg_doc_length = total / static_cast<double>(index.m_doc_length.size());
    }
    return index;
}

std::vector<std::string> distinct_terms(const std::vector<std::string>& tokens)
{
    std::vector<std::string> out;
    std::unordered_set<std::string> seen;
    for (const auto& t : tokens) {
        if (seen.insert(t).second) {
            out.push_back(t);
        }
    }
    return out;
}

double bm25_score(const InvertedIndex& index, const Bm25Params& params,
                  const std::vector<std::string>& query_tokens, const std::string& doc_id)
{
    double doc_len = index.doc_length(doc_id);
    double score = 0.0;
    for (const auto& term : distinct_terms(query_tokens)) {
        auto tf = index.term_frequency(term, doc_id);
        if (tf == 0) {
            continue;
        }
        double idf = bm25_idf(index.doc_count(), index.document_frequency(term));
        score += bm25_term(idf, tf, doc_len, index.avg_doc_length(), params);
    }
    return score;
}

double tfidf_score(const InvertedIndex& index, const std::vector<std::string>& query_tokens,
                   const std::string& doc_id)
{
    index.doc_length(doc_id);  // validates doc_id
    double score = 0.0;
    for (const auto& term : distinct_terms(query_tokens)) {
        auto tf = index.term_frequency(term, doc_id);
        if (tf == 0) {
            continue;
        }
        score += tfidf_term(tf, index.doc_count(), index.document_frequency(term));
    }
    return score;
}

void rank_and_truncate(std::vector<ScoredDoc>& docs, std::size_t k)
{
    auto better = [](const ScoredDoc& a, const ScoredDoc& b) {
        if (a.score != b.score) {
            return a.score > b.score;
        }
        return a.doc_id < b.doc_id;
    };
    if (docs.size() > k) {
        std::partial_sort(docs.begin(), docs.begin() + static_cast<std::ptrdiff_t>(k), docs.end(), better);
        docs.resize(k);
    } else {
        std::sort(docs.begin(), docs.end(), better);
    }
}

std::vector<ScoredDoc> search_field(const InvertedIndex& index, const Bm25Params& params,
                                    const std::vector<std::string>& query_tokens, std::size_t k,
                                    Scorer scorer)
{
    if (k == 0) {
        throw ArgumentError("k must be at least 1");
    }
    // Accumulate term by term in the same order bm25_score/tfidf_score use,
    // so scores here are bit-identical to the per-document functions.
    std::unordered_map<std::string, double> acc;
    for (const auto& term : distinct_terms(query_tokens)) {
        const auto* list = find_postings(index, term);
        if (list == nullptr) {
            continue;
        }
        double idf = bm25_idf(index.doc_count(), list->size());
        for (const auto& p : *list) {
            double contribution =
                scorer == Scorer::bm25
                    ? bm25_term(idf, p.term_frequency, index.doc_length(p.doc_id), index.avg_doc_length(), params)
                    : tfidf_term(p.term_frequency, index.doc_count(), list->size());
            acc[p.doc_id] += contribution;
        }
    }
    std::vector<ScoredDoc> ranked;
    ranked.reserve(acc.size());
    for (const auto& [id, score] : acc) {
        if (score > 0.0) {
            ranked.push_back({id, score});
        }
    }
    rank_and_truncate(ranked, k);
    return ranked;
}

std::string dump_index_json(const InvertedIndex& index)
{
    nlohmann::json postings = nlohmann::json::object();
    for (const auto& [term, list] : index.postings()) {
        auto& arr = postings[term];
        arr = nlohmann::json::array();
        for (const auto& p : list) {
            arr.push_back({p.doc_id, p.term_frequency});
        }
    }
    nlohmann::json j = {{"version", "index-v1"},
                        {"field", index.field_name()},
                        {"doc_length", index.doc_lengths()},
                        {"postings", std::move(postings)}};
    return j.dump();
}

InvertedIndex load_index_json(const std::string& text)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw DataError(std::string("malformed index snapshot: ") + e.what());
    }
    if (j.value("version", "") != "index-v1") {
        throw DataError("unsupported index snapshot version");
    }
    try {
        InvertedIndex index;
        index.m_field = j.at("field").get<std::string>();
        index.m_doc_length = j.at("doc_length").get<std::map<std::string, std::uint32_t>>();
        for (const auto& [term, arr] : j.at("postings").items()) {
            auto& list = index.m_postings[term];
            for (const auto& entry : arr) {
                Posting p{entry.at(0).get<std::string>(), entry.at(1).get<std::uint32_t>()};
                if (p.term_frequency == 0 || !index.m_doc_length.contains(p.doc_id)) {
                    throw DataError("inconsistent posting for term '" + term + "'");
                }
                list.push_back(std::move(p));
            }
        }
        double total = 0.0;
        for (const auto& [id, len] : index.m_doc_length) {
            total += len;
        }
        index.m_avg_doc_length =
            index.m_doc_length.empty() ? 0.0 : total / static_cast<double>(index.m_doc_length.size());
        return index;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("malformed index snapshot: ") + e.what());
    }
}

}  // namespace plateful
