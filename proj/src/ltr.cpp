#include "plateful/ltr.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "plateful/error.hpp"

namespace plateful {

namespace {

// softplus(x) = ln(1 + e^x), stable for large |x|.
double softplus(double x)
{
    return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

double logistic(double x)
{
    if (x >= 0.0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    double e = std::exp(x);
    return e / (1.0 + e);
}

// Forward pass keeping hidden activations for backprop.
double score_with_hidden(const RankNet& net, const FeatureVector& x, std::vector<double>& hidden)
{
    auto in = x.values();
    hidden.resize(net.hidden);
    double out = net.b2;
    for (std::size_t j = 0; j < net.hidden; ++j) {
        double a = net.b1[j];
        for (std::size_t f = 0; f < kNumFeatures; ++f) {
            a += in[f] * net.w1[f * net.hidden + j];
        }
        hidden[j] = std::tanh(a);
        out += net.w2[j] * hidden[j];
    }
    return out;
}

// Adds scale * d score(x) / d params into grad.
void accumulate_score_gradient(const RankNet& net, const FeatureVector& x, const std::vector<double>& hidden,
                               double scale, RankNet& grad)
{
    auto in = x.values();
    grad.b2 += scale;
    for (std::size_t j = 0; j < net.hidden; ++j) {
        grad.w2[j] += scale * hidden[j];
        double da = scale * net.w2[j] * (1.0 - hidden[j] * hidden[j]);
        grad.b1[j] += da;
        for (std::size_t f = 0; f < kNumFeatures; ++f) {
            grad.w1[f * net.hidden + j] += da * in[f];
        }
    }
}

// d loss / d (s_pos - s_neg) for one pair.
double loss_slope(double diff)
{
    return -logistic(-diff);
}

}  // namespace

FeatureStats FeatureStats::fit(const std::vector<FeatureVector>& features)
{
    FeatureStats stats;
    if (features.empty()) {
        return stats;
    }
    stats.min = features.front().values();
    stats.max = stats.min;
    for (const auto& fv : features) {
        auto v = fv.values();
        for (std::size_t f = 0; f < kNumFeatures; ++f) {
            stats.min[f] = std::min(stats.min[f], v[f]);
            stats.max[f] = std::max(stats.max[f], v[f]);
        }
    }
    return stats;
}

FeatureVector extract_features(const std::vector<std::string>& query_tokens, const Vector& query_vector,
                               const std::string& doc_id, const InvertedIndex& text_index,
                               const InvertedIndex& category_index,
                               const std::map<std::string, Vector>& doc_vectors, const Bm25Params& params)
{
    auto vec = doc_vectors.find(doc_id);
    if (vec == doc_vectors.end()) {
        throw ArgumentError("no document vector for '" + doc_id + "'");
    }
    FeatureVector fv;
    fv.text_bm25 = bm25_score(text_index, params, query_tokens, doc_id);
    fv.semantic_cosine = cosine(query_vector, vec->second);
    fv.category_bm25 = bm25_score(category_index, params, query_tokens, doc_id);
    return fv;
}

FeatureVector normalize(const FeatureVector& features, const FeatureStats& stats)
{
    auto v = features.values();
    std::array<double, kNumFeatures> out{};
    for (std::size_t f = 0; f < kNumFeatures; ++f) {
        double range = stats.max[f] - stats.min[f];
        out[f] = range > 0.0 ? std::clamp((v[f] - stats.min[f]) / range, 0.0, 1.0) : 0.5;
    }
    return FeatureVector::from(out);
}

std::vector<TrainingPair> build_training_pairs(const std::vector<RelevanceJudgment>& judgments,
                                               const FeatureStore& features)
{
    std::map<std::string, std::pair<std::set<std::string>, std::set<std::string>>> by_query;
    for (const auto& j : judgments) {
        auto& [pos, neg] = by_query[j.query_id];
        (j.label == 1 ? pos : neg).insert(j.doc_id);
    }
    auto lookup = [&features](const std::string& q, const std::string& d) -> const FeatureVector& {
        auto it = features.find({q, d});
        if (it == features.end()) {
            throw ArgumentError("no features for (" + q + ", " + d + ")");
        }
        return it->second;
    };
    std::vector<TrainingPair> pairs;
    for (const auto& [query, docs] : by_query) {
        const auto& [pos, neg] = docs;
        for (const auto& p : pos) {
            for (const auto& n : neg) {
                pairs.push_back({query, p, n, lookup(query, p), lookup(query, n)});
            }
        }
    }
    return pairs;
}

RankNet RankNet::zeros(std::size_t hidden)
{
    if (hidden == 0) {
        throw ArgumentError("RankNet needs at least one hidden unit");
    }
    RankNet net;
    net.hidden = hidden;
    net.w1.assign(kNumFeatures * hidden, 0.0);
    net.b1.assign(hidden, 0.0);
    net.w2.assign(hidden, 0.0);
    net.b2 = 0.0;
    return net;
}

RankNet RankNet::initialize(std::size_t hidden, std::uint64_t seed)
{
    RankNet net = zeros(hidden);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> init(-0.5, 0.5);
    for (auto& w : net.w1) {
        w = init(rng);
    }
    for (auto& w : net.w2) {
        w = init(rng);
    }
    return net;
}

double RankNet::score(const FeatureVector& normalized) const
{
    auto in = normalized.values();
    double out = b2;
    for (std::size_t j = 0; j < hidden; ++j) {
        double a = b1[j];
        for (std::size_t f = 0; f < kNumFeatures; ++f) {
            a += in[f] * w1[f * hidden + j];
        }
        out += w2[j] * std::tanh(a);
    }
    return out;
}

std::vector<std::pair<std::string, std::span<double>>> RankNet::tensors()
{
    return {{"w1", std::span<double>(w1)},
            {"b1", std::span<double>(b1)},
            {"w2", std::span<double>(w2)},
            {"b2", std::span<double>(&b2, 1)}};
}

double pairwise_loss(double s_pos, double s_neg)
{
    return softplus(-(s_pos - s_neg));
}

double mean_pairwise_loss(const RankNet& net, const std::vector<TrainingPair>& pairs)
{
    if (pairs.empty()) {
        return 0.0;
    }
    double total = 0.0;
    for (const auto& p : pairs) {
        total += pairwise_loss(net.score(p.features_pos), net.score(p.features_neg));
    }
    return total / static_cast<double>(pairs.size());
}

RankNet pairwise_gradient(const RankNet& net, const std::vector<TrainingPair>& pairs)
{
    RankNet grad = RankNet::zeros(net.hidden);
    if (pairs.empty()) {
        return grad;
    }
    const double inv = 1.0 / static_cast<double>(pairs.size());
    std::vector<double> h_pos;
    std::vector<double> h_neg;
    for (const auto& p : pairs) {
        double s_pos = score_with_hidden(net, p.features_pos, h_pos);
        double s_neg = score_with_hidden(net, p.features_neg, h_neg);
        double slope = loss_slope(s_pos - s_neg) * inv;
        accumulate_score_gradient(net, p.features_pos, h_pos, slope, grad);
        accumulate_score_gradient(net, p.features_neg, h_neg, -slope, grad);
    }
    return grad;
}

std::vector<double> train_ranknet(RankNet& net, const std::vector<TrainingPair>& pairs,
                                  const RankNetOptions& options)
{
    if (pairs.empty()) {
        throw ArgumentError("cannot train RankNet without training pairs");
    }
    std::mt19937_64 rng(options.seed);
    std::vector<std::size_t> order(pairs.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> history;
    std::vector<double> h_pos;
    std::vector<double> h_neg;
    RankNet grad = RankNet::zeros(net.hidden);
    for (int epoch = 0; epoch < options.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t idx : order) {
            const auto& p = pairs[idx];
            double s_pos = score_with_hidden(net, p.features_pos, h_pos);
            double s_neg = score_with_hidden(net, p.features_neg, h_neg);
            double slope = loss_slope(s_pos - s_neg);
            std::fill(grad.w1.begin(), grad.w1.end(), 0.0);
            std::fill(grad.b1.begin(), grad.b1.end(), 0.0);
            std::fill(grad.w2.begin(), grad.w2.end(), 0.0);
            grad.b2 = 0.0;
            accumulate_score_gradient(net, p.features_pos, h_pos, slope, grad);
            accumulate_score_gradient(net, p.features_neg, h_neg, -slope, grad);
            for (std::size_t k = 0; k < net.w1.size(); ++k) {
                net.w1[k] -= options.learning_rate * grad.w1[k];
            }
            for (std::size_t j = 0; j < net.hidden; ++j) {
                net.b1[j] -= options.learning_rate * grad.b1[j];
                net.w2[j] -= options.learning_rate * grad.w2[j];
            }
            // b2 cancels in every score difference, so its gradient is 0.
            net.b2 -= options.learning_rate * grad.b2;
        }
        history.push_back(mean_pairwise_loss(net, pairs));
    }
    return history;
}

double pair_accuracy(const RankNet& net, const std::vector<TrainingPair>& pairs)
{
    if (pairs.empty()) {
        return 0.0;
    }
    std::size_t ok = 0;
    for (const auto& p : pairs) {
        ok += net.score(p.features_pos) > net.score(p.features_neg) ? 1 : 0;
    }
    return static_cast<double>(ok) / static_cast<double>(pairs.size());
}

std::vector<ScoredDoc> rerank(const RankerModel& model, const std::vector<Candidate>& candidates)
{
    std::vector<ScoredDoc> out;
    out.reserve(candidates.size());
    for (const auto& c : candidates) {
        out.push_back({c.doc_id, model.net.score(normalize(c.features, model.stats))});
    }
    rank_and_truncate(out, out.size());
    return out;
}

std::string dump_ranker_json(const RankerModel& model)
{
    nlohmann::json j = {{"version", "ranknet-v1"},
                        {"hidden", model.net.hidden},
                        {"w1", model.net.w1},
                        {"b1", model.net.b1},
                        {"w2", model.net.w2},
                        {"b2", model.net.b2},
                        {"feature_min", model.stats.min},
                        {"feature_max", model.stats.max},
                        {"features", {"text_bm25", "semantic_cosine", "category_bm25"}}};
    return j.dump();
}

RankerModel load_ranker_json(const std::string& text)
{
    try {
        auto j = nlohmann::json::parse(text);
        if (j.value("version", "") != "ranknet-v1") {
            throw DataError("unsupported ranker checkpoint version");
        }
        RankerModel m;
        m.net = RankNet::zeros(j.at("hidden").get<std::size_t>());
        auto w1 = j.at("w1").get<std::vector<double>>();
        auto b1 = j.at("b1").get<std::vector<double>>();
        auto w2 = j.at("w2").get<std::vector<double>>();
        if (w1.size() != m.net.w1.size() || b1.size() != m.net.hidden || w2.size() != m.net.hidden) {
            throw DataError("ranker weight shapes do not match the hidden size");
        }
        m.net.w1 = std::move(w1);
        m.net.b1 = std::move(b1);
        m.net.w2 = std::move(w2);
        m.net.b2 = j.at("b2").get<double>();
        m.stats.min = j.at("feature_min").get<std::array<double, kNumFeatures>>();
        m.stats.max = j.at("feature_max").get<std::array<double, kNumFeatures>>();
        for (std::size_t f = 0; f < kNumFeatures; ++f) {
            if (m.stats.min[f] > m.stats.max[f]) {
                throw DataError("feature range has min > max");
            }
        }
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("malformed ranker checkpoint: ") + e.what());
    }
}

void save_ranker(const std::filesystem::path& path, const RankerModel& model)
{
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    out << dump_ranker_json(model) << '\n';
}

RankerModel load_ranker(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return load_ranker_json(buf.str());
}

}  // namespace plateful
