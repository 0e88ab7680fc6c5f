#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace plateful {

struct Posting {
    std::string doc_id;
    std::uint32_t term_frequency = 0;

    bool operator==(const Posting&) const = default;
};

struct Bm25Params {
    double k1 = 1.2;
    double b = 0.75;
};

enum class Scorer { bm25, tfidf };

struct IndexedDoc {
    std::string doc_id;
    std::vector<std::string> tokens;
};

struct ScoredDoc {
    std::string doc_id;
    double score = 0.0;

    bool operator==(const ScoredDoc&) const = default;
};

/// Term -> postings map over one document field. Postings are sorted by
/// doc_id; statistics are derived at build time and never change.
class InvertedIndex {
  public:
    InvertedIndex() = default;

    const std::string& field_name() const { return m_field; }
    const std::map<std::string, std::vector<Posting>>& postings() const { return m_postings; }
    const std::map<std::string, std::uint32_t>& doc_lengths() const { return m_doc_length; }
    std::size_t doc_count() const { return m_doc_length.size(); }
    double avg_doc_length() const { return m_avg_doc_length; }

    bool contains(const std::string& doc_id) const { return m_doc_length.contains(doc_id); }
    /// Number of documents containing `term`.
    std::size_t document_frequency(const std::string& term) const;
    /// Occurrences of `term` in `doc_id`, 0 when absent.
    std::uint32_t term_frequency(const std::string& term, const std::string& doc_id) const;
    /// Length of `doc_id`; throws ArgumentError for an unknown document.
    std::uint32_t doc_length(const std::string& doc_id) const;

    bool operator==(const InvertedIndex&) const = default;

    friend InvertedIndex build_index(const std::vector<IndexedDoc>& docs, std::string field_name);
    friend InvertedIndex load_index_json(const std::string& text);

  private:
    std::string m_field;
    std::map<std::string, std::vector<Posting>> m_postings;
    std::map<std::string, std::uint32_t> m_doc_length;
    double m_avg_doc_length = 0.0;
};

InvertedIndex build_index(const std::vector<IndexedDoc>& docs, std::string field_name);

/// Okapi BM25 with the non-negative idf ln((N - df + 0.5) / (df + 0.5) + 1).
double bm25_score(const InvertedIndex& index, const Bm25Params& params,
                  const std::vector<std::string>& query_tokens, const std::string& doc_id);

/// Sum over matching distinct terms of (1 + ln tf) * ln(N / df).
double tfidf_score(const InvertedIndex& index, const std::vector<std::string>& query_tokens,
                   const std::string& doc_id);

/// Documents with a positive score, best first, ties by ascending doc_id,
/// truncated to k.
std::vector<ScoredDoc> search_field(const InvertedIndex& index, const Bm25Params& params,
                                    const std::vector<std::string>& query_tokens, std::size_t k,
                                    Scorer scorer);

/// Distinct tokens in first-occurrence order.
std::vector<std::string> distinct_terms(const std::vector<std::string>& tokens);

/// Sorts by score descending then doc_id ascending and truncates to k.
void rank_and_truncate(std::vector<ScoredDoc>& docs, std::size_t k);

std::string dump_index_json(const InvertedIndex& index);
InvertedIndex load_index_json(const std::string& text);

}  // namespace plateful
