#pragma once

#include <map>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "plateful/corpus.hpp"
#include "plateful/embeddings.hpp"
#include "plateful/ltr.hpp"
#include "plateful/sentiment.hpp"
#include "plateful/tagging.hpp"
#include "plateful/text_index.hpp"

namespace plateful {

/// Raw material an engine snapshot is built from.
struct EngineInputs {
    std::vector<Review> reviews;
    std::vector<FoodService> services;
    std::shared_ptr<const EmbeddingTable> embeddings;      // optional
    std::map<std::string, Vector> doc_vector_overrides;     // doc_id -> precomputed vector
    std::shared_ptr<const RankerModel> ranker;              // optional
    std::shared_ptr<const SentimentClassifier> sentiment;   // optional
    Bm25Params bm25;
};

/// Derived per-review data shown alongside reviews and search hits.
struct ReviewInsight {
    int sentiment_class = 0;  // predicted when a classifier is loaded, else the stored label
    Polarity polarity = Polarity::neutral;
    std::vector<TagPair> pairs;
    std::vector<ColoredTag> tags;
};

/// Immutable snapshot: corpus, both indexes, document vectors and caches,
/// all built from the same review list.
class EngineState {
  public:
    static std::shared_ptr<const EngineState> build(EngineInputs inputs);
    /// A fresh snapshot with `review` appended; this one is left untouched.
    std::shared_ptr<const EngineState> with_review(Review review) const;

    const EngineInputs& inputs() const { return m_inputs; }
    const std::vector<Review>& reviews() const { return m_inputs.reviews; }
    const std::vector<FoodService>& services() const { return m_inputs.services; }
    const Bm25Params& bm25() const { return m_inputs.bm25; }
    const InvertedIndex& text_index() const { return m_text_index; }
    const InvertedIndex& category_index() const { return m_category_index; }
    const std::map<std::string, Vector>& doc_vectors() const { return m_doc_vectors; }
    std::size_t vector_dim() const { return m_dim; }
    const RankerModel* ranker() const { return m_inputs.ranker.get(); }
    const SentimentClassifier* sentiment() const { return m_inputs.sentiment.get(); }

    const Review* find_review(const std::string& id) const;
    const FoodService* find_service(const std::string& id) const;
    const ReviewInsight& insight(const std::string& review_id) const;

    /// Mean word vector of the query, or zeros when no table is loaded.
    Vector embed_query(const std::vector<std::string>& tokens) const;

  private:
    EngineInputs m_inputs;
    InvertedIndex m_text_index;
    InvertedIndex m_category_index;
    std::map<std::string, Vector> m_doc_vectors;
    std::size_t m_dim = 0;
    std::unordered_map<std::string, std::size_t> m_review_pos;
    std::unordered_map<std::string, std::size_t> m_service_pos;
    std::vector<ReviewInsight> m_insights;
};

/// Tokens of every category string of a review, in order.
std::vector<std::string> category_tokens(const Review& review);

}  // namespace plateful
