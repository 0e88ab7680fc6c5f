#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "plateful/embeddings.hpp"

namespace plateful {

using Rng = std::mt19937_64;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vec = Eigen::VectorXd;

enum class Polarity { negative, neutral, positive };

std::string_view to_string(Polarity p);
/// Star class 0,1 -> negative, 2 -> neutral, 3,4 -> positive.
Polarity polarity(int star_class);

struct LstmConfig {
    int max_len = 32;
    int embed_dim = 50;
    int lstm_units = 8;  // per direction
    int hidden_dim = 8;
    int num_classes = 5;
    double dropout = 0.1;
    double recurrent_dropout = 0.1;
    double learning_rate = 1e-3;
    std::uint64_t seed = 42;

    /// Sizes of the full-scale model (sequence 500, 50-d embeddings, 100
    /// units per direction, 50 hidden).
    static LstmConfig full_scale();
    void validate() const;
};

/// Word -> index. 0 is padding, 1 is the unknown word, known words start at 2.
class Vocabulary {
  public:
    static constexpr int kPad = 0;
    static constexpr int kUnknown = 1;

    Vocabulary() = default;
    /// Words ordered by descending frequency then alphabetically.
    static Vocabulary build(const std::vector<std::vector<std::string>>& token_lists,
                            std::size_t min_count = 1);
    static Vocabulary from_words(std::vector<std::string> words);

    int index(const std::string& word) const;
    /// Total rows needed in the embedding matrix, padding and unknown included.
    std::size_t size() const { return m_words.size() + 2; }
    /// Known words; words()[i] has index i + 2.
    const std::vector<std::string>& words() const { return m_words; }

  private:
    std::vector<std::string> m_words;
    std::unordered_map<std::string, int> m_index;
};

std::vector<int> encode(const Vocabulary& vocab, const std::vector<std::string>& tokens, int max_len);

enum Gate { kInputGate = 0, kForgetGate = 1, kCellGate = 2, kOutputGate = 3 };

struct LstmDirection {
    std::array<Mat, 4> W;  // embed_dim x units, one per gate
    std::array<Mat, 4> U;  // units x units
    std::array<Vec, 4> b;  // units
};

/// Every trainable tensor. Also used for gradients and Adam moments.
struct LstmParams {
    Mat embedding;  // vocab x embed_dim, row 0 pinned to zero
    LstmDirection forward;
    LstmDirection backward;
    Mat dense_w;  // 2*units x hidden_dim
    Vec dense_b;
    Mat out_w;  // hidden_dim x num_classes
    Vec out_b;

    static LstmParams zeros(const LstmConfig& config, std::size_t vocab_size);
    /// Named flat views over every tensor in a fixed order.
    std::vector<std::pair<std::string, std::span<double>>> tensors();
    std::vector<std::pair<std::string, std::span<const double>>> tensors() const;
    void set_zero();
};

struct LstmModel {
    LstmConfig config;
    LstmParams params;

    /// Uniform(-0.05, 0.05) weights, zero biases, forget bias 1.
    static LstmModel initialize(const LstmConfig& config, std::size_t vocab_size);
    std::size_t vocab_size() const { return static_cast<std::size_t>(params.embedding.rows()); }
    /// Copies vectors of known words into the embedding rows (dimensions must match).
    std::size_t load_pretrained(const Vocabulary& vocab, const EmbeddingTable& table);
};

struct DirectionTrace {
    std::vector<int> positions;  // sequence positions in processing order
    Vec recurrent_mask;
    std::vector<Vec> x, h_in, c_prev, i, f, g, o, c, h;
};

/// Everything backward needs from one forward pass.
struct ForwardCache {
    std::vector<int> sequence;
    DirectionTrace forward;
    DirectionTrace backward;
    Vec pooled;
    std::vector<int> pool_source;  // per pooled unit, index into the direction trace, -1 if empty
    Vec dense_pre;
    Vec dense_act;
    Vec dropout_mask;
    Vec probabilities;
};

ForwardCache forward(const LstmModel& model, std::span<const int> sequence, bool training, Rng& rng);

/// Cross-entropy: -ln p[label].
double loss(std::span<const double> probabilities, int label);

/// Adds d loss / d params for one sample into `grads`.
void backward(const LstmModel& model, const ForwardCache& cache, int label, LstmParams& grads);

struct AdamState {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    std::uint64_t step = 0;
    LstmParams first_moment;
    LstmParams second_moment;

    static AdamState for_model(const LstmModel& model);
    /// One bias-corrected update of `params` with `grads`.
    void apply(LstmParams& params, const LstmParams& grads, double learning_rate);
};

struct LabeledSequence {
    std::vector<int> sequence;
    int label = 0;
};

struct EpochStats {
    double mean_loss = 0.0;
    double accuracy = 0.0;
};

/// Mini-batch Adam training with per-epoch seeded shuffling. After each epoch
/// the whole dataset is re-scored in inference mode for the history entry.
std::vector<EpochStats> train(LstmModel& model, const std::vector<LabeledSequence>& dataset, int epochs,
                              std::size_t batch_size, AdamState& adam, Rng& rng);

/// Inference-mode mean loss and accuracy.
EpochStats evaluate(const LstmModel& model, const std::vector<LabeledSequence>& dataset);

struct Prediction {
    int star_class = 0;
    std::array<double, 5> probabilities{};
};

/// Argmax with ties to the smaller class.
int argmax_class(std::span<const double> probabilities);

/// A trained model together with the vocabulary it was trained on.
struct SentimentClassifier {
    Vocabulary vocab;
    LstmModel model;

    Prediction predict(std::string_view text) const;
};

Prediction predict(const LstmModel& model, const Vocabulary& vocab, std::string_view text);

std::string dump_classifier_json(const SentimentClassifier& classifier);
SentimentClassifier load_classifier_json(const std::string& text);
void save_classifier(const std::filesystem::path& path, const SentimentClassifier& classifier);
SentimentClassifier load_classifier(const std::filesystem::path& path);

}  // namespace plateful
