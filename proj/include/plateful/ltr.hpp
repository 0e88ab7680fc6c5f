#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "plateful/corpus.hpp"
#include "plateful/embeddings.hpp"
#include "plateful/text_index.hpp"

namespace plateful {

inline constexpr std::size_t kNumFeatures = 3;

/// Query-document similarity features in their fixed order.
struct FeatureVector {
    double text_bm25 = 0.0;
    double semantic_cosine = 0.0;
    double category_bm25 = 0.0;

    std::array<double, kNumFeatures> values() const { return {text_bm25, semantic_cosine, category_bm25}; }
    static FeatureVector from(const std::array<double, kNumFeatures>& v) { return {v[0], v[1], v[2]}; }
    bool operator==(const FeatureVector&) const = default;
};

/// Per-feature range observed on the training set.
struct FeatureStats {
    std::array<double, kNumFeatures> min{};
    std::array<double, kNumFeatures> max{};

    static FeatureStats fit(const std::vector<FeatureVector>& features);
};

/// BM25 of the query against the review text, cosine of the query vector
/// against the document vector, BM25 against the category field.
FeatureVector extract_features(const std::vector<std::string>& query_tokens, const Vector& query_vector,
                               const std::string& doc_id, const InvertedIndex& text_index,
                               const InvertedIndex& category_index,
                               const std::map<std::string, Vector>& doc_vectors,
                               const Bm25Params& params = {});

/// Min-max scaling into [0,1], clamped; a degenerate feature maps to 0.5.
FeatureVector normalize(const FeatureVector& features, const FeatureStats& stats);

using FeatureKey = std::pair<std::string, std::string>;  // (query_id, doc_id)
using FeatureStore = std::map<FeatureKey, FeatureVector>;

struct TrainingPair {
    std::string query_id;
    std::string pos_doc;
    std::string neg_doc;
    FeatureVector features_pos;
    FeatureVector features_neg;
};

/// Cross product of each query's relevant and non-relevant documents, ordered
/// by (query, relevant doc, non-relevant doc).
std::vector<TrainingPair> build_training_pairs(const std::vector<RelevanceJudgment>& judgments,
                                               const FeatureStore& features);

/// 3 -> hidden (tanh) -> 1 scoring network.
struct RankNet {
    std::size_t hidden = 8;
    std::vector<double> w1;  // kNumFeatures x hidden, row-major
    std::vector<double> b1;  // hidden
    std::vector<double> w2;  // hidden
    double b2 = 0.0;

    /// All parameters zero.
    static RankNet zeros(std::size_t hidden);
    /// Uniform(-0.5, 0.5) weights, zero biases.
    static RankNet initialize(std::size_t hidden, std::uint64_t seed);

    double score(const FeatureVector& normalized) const;
    /// Named flat views: w1, b1, w2, b2.
    std::vector<std::pair<std::string, std::span<double>>> tensors();
};

/// ln(1 + exp(-(s_pos - s_neg))): cross-entropy with target probability 1.
double pairwise_loss(double s_pos, double s_neg);

/// Gradient of the mean pairwise loss over `pairs`, same layout as RankNet.
RankNet pairwise_gradient(const RankNet& net, const std::vector<TrainingPair>& pairs);
double mean_pairwise_loss(const RankNet& net, const std::vector<TrainingPair>& pairs);

struct RankNetOptions {
    int epochs = 200;
    double learning_rate = 0.05;
    std::uint64_t seed = 42;
};

/// Stochastic gradient descent, one pair per step, pairs reshuffled every
/// epoch. Returns the mean pair loss over all pairs after each epoch.
std::vector<double> train_ranknet(RankNet& net, const std::vector<TrainingPair>& pairs,
                                  const RankNetOptions& options);

/// Fraction of pairs with s_pos > s_neg.
double pair_accuracy(const RankNet& net, const std::vector<TrainingPair>& pairs);

/// The deployable ranker: network plus the normalization it was trained with.
struct RankerModel {
    RankNet net;
    FeatureStats stats;
};

struct Candidate {
    std::string doc_id;
    FeatureVector features;  // raw, unnormalized
};

/// Scores normalized candidates; best first, ties by ascending doc_id.
std::vector<ScoredDoc> rerank(const RankerModel& model, const std::vector<Candidate>& candidates);

std::string dump_ranker_json(const RankerModel& model);
RankerModel load_ranker_json(const std::string& text);
void save_ranker(const std::filesystem::path& path, const RankerModel& model);
RankerModel load_ranker(const std::filesystem::path& path);

}  // namespace plateful
