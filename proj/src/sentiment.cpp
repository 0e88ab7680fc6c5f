#include "plateful/sentiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "plateful/corpus.hpp"
#include "plateful/error.hpp"

namespace plateful {

namespace {

constexpr std::array<const char*, 4> kGateNames = {"i", "f", "c", "o"};

double sigmoid(double x)
{
    return 1.0 / (1.0 + std::exp(-x));
}

Vec sigmoid(const Vec& x)
{
    return x.unaryExpr([](double v) { return sigmoid(v); });
}

Vec dropout_mask(Eigen::Index n, double rate, bool training, Rng& rng)
{
    Vec mask = Vec::Ones(n);
    if (!training || rate <= 0.0) {
        return mask;
    }
    std::bernoulli_distribution keep(1.0 - rate);
    double scale = 1.0 / (1.0 - rate);
    for (Eigen::Index k = 0; k < n; ++k) {
        mask[k] = keep(rng) ? scale : 0.0;
    }
    return mask;
}

LstmDirection zero_direction(int embed, int units)
{
    LstmDirection d;
    for (int g = 0; g < 4; ++g) {
        d.W[g] = Mat::Zero(embed, units);
        d.U[g] = Mat::Zero(units, units);
        d.b[g] = Vec::Zero(units);
    }
    return d;
}

template <typename Params, typename Span>
std::vector<std::pair<std::string, Span>> collect_tensors(Params& p)
{
    std::vector<std::pair<std::string, Span>> out;
    auto add = [&out](std::string name, auto& t) {
        out.emplace_back(std::move(name), Span(t.data(), static_cast<std::size_t>(t.size())));
    };
    add("embedding", p.embedding);
    for (auto [prefix, dir] : {std::pair{"fwd", &p.forward}, std::pair{"bwd", &p.backward}}) {
        for (int g = 0; g < 4; ++g) {
            add(std::string(prefix) + ".W_" + kGateNames[g], dir->W[g]);
        }
        for (int g = 0; g < 4; ++g) {
            add(std::string(prefix) + ".U_" + kGateNames[g], dir->U[g]);
        }
        for (int g = 0; g < 4; ++g) {
            add(std::string(prefix) + ".b_" + kGateNames[g], dir->b[g]);
        }
    }
    add("dense.w", p.dense_w);
    add("dense.b", p.dense_b);
    add("out.w", p.out_w);
    add("out.b", p.out_b);
    return out;
}

void run_direction(const LstmDirection& dir, const Mat& embedding, std::span<const int> sequence,
                   DirectionTrace& trace)
{
    const auto units = dir.b[0].size();
    Vec h = Vec::Zero(units);
    Vec c = Vec::Zero(units);
    for (int pos : trace.positions) {
        Vec x = embedding.row(sequence[static_cast<std::size_t>(pos)]).transpose();
        Vec h_in = h.cwiseProduct(trace.recurrent_mask);
        auto pre = [&](int g) -> Vec { return dir.W[g].transpose() * x + dir.U[g].transpose() * h_in + dir.b[g]; };
        Vec i = sigmoid(pre(kInputGate));
        Vec f = sigmoid(pre(kForgetGate));
        Vec g = pre(kCellGate).array().tanh().matrix();
        Vec o = sigmoid(pre(kOutputGate));
        Vec c_new = f.cwiseProduct(c) + i.cwiseProduct(g);
        Vec h_new = o.cwiseProduct(c_new.array().tanh().matrix());
        trace.x.push_back(std::move(x));
        trace.h_in.push_back(std::move(h_in));
        trace.c_prev.push_back(c);
        trace.i.push_back(std::move(i));
        trace.f.push_back(std::move(f));
        trace.g.push_back(std::move(g));
        trace.o.push_back(std::move(o));
        trace.c.push_back(c_new);
        trace.h.push_back(h_new);
        c = std::move(c_new);
        h = std::move(h_new);
    }
}

// BPTT through one direction. dh_step[s] is the loss gradient arriving at the
// output of processing step s from the pooling layer.
void backprop_direction(const LstmDirection& dir, const DirectionTrace& trace, std::span<const int> sequence,
                        const std::vector<Vec>& dh_step, LstmDirection& grad, Mat& embedding_grad)
{
    const auto units = dir.b[0].size();
    Vec dh_next = Vec::Zero(units);
    Vec dc_next = Vec::Zero(units);
    for (std::size_t s = trace.positions.size(); s-- > 0;) {
        Vec dh = dh_step[s] + dh_next;
        Vec tanh_c = trace.c[s].array().tanh().matrix();
        const Vec& i = trace.i[s];
        const Vec& f = trace.f[s];
        const Vec& g = trace.g[s];
        const Vec& o = trace.o[s];
        Vec d_o = dh.cwiseProduct(tanh_c);
        Vec dc = dh.cwiseProduct(o).cwiseProduct((1.0 - tanh_c.array().square()).matrix()) + dc_next;
        std::array<Vec, 4> da;
        da[kInputGate] = dc.cwiseProduct(g).cwiseProduct(i.cwiseProduct((1.0 - i.array()).matrix()));
        da[kForgetGate] = dc.cwiseProduct(trace.c_prev[s]).cwiseProduct(f.cwiseProduct((1.0 - f.array()).matrix()));
        da[kCellGate] = dc.cwiseProduct(i).cwiseProduct((1.0 - g.array().square()).matrix());
        da[kOutputGate] = d_o.cwiseProduct(o.cwiseProduct((1.0 - o.array()).matrix()));
        dc_next = dc.cwiseProduct(f);

        Vec dx = Vec::Zero(trace.x[s].size());
        Vec dh_in = Vec::Zero(units);
        for (int k = 0; k < 4; ++k) {
            grad.W[k].noalias() += trace.x[s] * da[k].transpose();
            grad.U[k].noalias() += trace.h_in[s] * da[k].transpose();
            grad.b[k] += da[k];
            dx.noalias() += dir.W[k] * da[k];
            dh_in.noalias() += dir.U[k] * da[k];
        }
        dh_next = dh_in.cwiseProduct(trace.recurrent_mask);
        int token = sequence[static_cast<std::size_t>(trace.positions[s])];
        if (token != Vocabulary::kPad) {
            embedding_grad.row(token) += dx.transpose();
        }
    }
}

nlohmann::json config_to_json(const LstmConfig& c)
{
    return {{"max_len", c.max_len},
            {"embed_dim", c.embed_dim},
            {"lstm_units", c.lstm_units},
            {"hidden_dim", c.hidden_dim},
            {"num_classes", c.num_classes},
            {"dropout", c.dropout},
            {"recurrent_dropout", c.recurrent_dropout},
            {"learning_rate", c.learning_rate},
            {"seed", c.seed}};
}

LstmConfig config_from_json(const nlohmann::json& j)
{
    LstmConfig c;
    c.max_len = j.at("max_len").get<int>();
    c.embed_dim = j.at("embed_dim").get<int>();
    c.lstm_units = j.at("lstm_units").get<int>();
    c.hidden_dim = j.at("hidden_dim").get<int>();
    c.num_classes = j.at("num_classes").get<int>();
    c.dropout = j.at("dropout").get<double>();
    c.recurrent_dropout = j.at("recurrent_dropout").get<double>();
    c.learning_rate = j.at("learning_rate").get<double>();
    c.seed = j.at("seed").get<std::uint64_t>();
    return c;
}

}  // namespace

std::string_view to_string(Polarity p)
{
    switch (p) {
    case Polarity::negative:
        return "negative";
    case Polarity::neutral:
        return "neutral";
    case Polarity::positive:
        return "positive";
    }
    return "neutral";
}

Polarity polarity(int star_class)
{
    if (star_class < 0 || star_class >= kNumStarClasses) {
        throw ArgumentError("star class " + std::to_string(star_class) + " out of range 0..4");
    }
    if (star_class <= 1) {
        return Polarity::negative;
    }
    return star_class == 2 ? Polarity::neutral : Polarity::positive;
}

LstmConfig LstmConfig::full_scale()
{
    LstmConfig c;
    c.max_len = 500;
    c.embed_dim = 50;
    c.lstm_units = 100;
    c.hidden_dim = 50;
    return c;
}

void LstmConfig::validate() const
{
    if (max_len <= 0 || embed_dim <= 0 || lstm_units <= 0 || hidden_dim <= 0) {
        throw ArgumentError("LSTM sizes must be positive");
    }
    if (num_classes != kNumStarClasses) {
        throw ArgumentError("the classifier has exactly 5 output classes");
    }
    if (!(dropout >= 0.0 && dropout < 1.0) || !(recurrent_dropout >= 0.0 && recurrent_dropout < 1.0)) {
        throw ArgumentError("dropout rates must lie in [0, 1)");
    }
    if (!(learning_rate > 0.0)) {
        throw ArgumentError("learning rate must be positive");
    }
}

Vocabulary Vocabulary::build(const std::vector<std::vector<std::string>>& token_lists, std::size_t min_count)
{
    std::map<std::string, std::size_t> counts;
    for (const auto& tokens : token_lists) {
        for (const auto& t : tokens) {
            ++counts[t];
        }
    }
    std::vector<std::pair<std::string, std::size_t>> ordered;
    for (auto& [word, n] : counts) {
        if (n >= min_count) {
            ordered.emplace_back(word, n);
        }
    }
    std::stable_sort(ordered.begin(), ordered.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    std::vector<std::string> words;
    words.reserve(ordered.size());
    for (auto& [word, n] : ordered) {
        words.push_back(word);
    }
    return from_words(std::move(words));
}

Vocabulary Vocabulary::from_words(std::vector<std::string> words)
{
    Vocabulary v;
    v.m_words = std::move(words);
    for (std::size_t i = 0; i < v.m_words.size(); ++i) {
        if (!v.m_index.emplace(v.m_words[i], static_cast<int>(i) + 2).second) {
            throw DataError("duplicate vocabulary word '" + v.m_words[i] + "'");
        }
    }
    return v;
}

int Vocabulary::index(const std::string& word) const
{
    auto it = m_index.find(word);
    return it == m_index.end() ? kUnknown : it->second;
}

std::vector<int> encode(const Vocabulary& vocab, const std::vector<std::string>& tokens, int max_len)
{
    std::vector<int> seq(static_cast<std::size_t>(std::max(max_len, 0)), Vocabulary::kPad);
    std::size_t n = std::min(seq.size(), tokens.size());
    for (std::size_t i = 0; i < n; ++i) {
        seq[i] = vocab.index(tokens[i]);
    }
    return seq;
}

LstmParams LstmParams::zeros(const LstmConfig& config, std::size_t vocab_size)
{
    LstmParams p;
    p.embedding = Mat::Zero(static_cast<Eigen::Index>(vocab_size), config.embed_dim);
    p.forward = zero_direction(config.embed_dim, config.lstm_units);
    p.backward = zero_direction(config.embed_dim, config.lstm_units);
    p.dense_w = Mat::Zero(2 * config.lstm_units, config.hidden_dim);
    p.dense_b = Vec::Zero(config.hidden_dim);
    p.out_w = Mat::Zero(config.hidden_dim, config.num_classes);
    p.out_b = Vec::Zero(config.num_classes);
    return p;
}

std::vector<std::pair<std::string, std::span<double>>> LstmParams::tensors()
{
    return collect_tensors<LstmParams, std::span<double>>(*this);
}

std::vector<std::pair<std::string, std::span<const double>>> LstmParams::tensors() const
{
    return collect_tensors<const LstmParams, std::span<const double>>(*this);
}

void LstmParams::set_zero()
{
    for (auto& [name, t] : tensors()) {
        std::fill(t.begin(), t.end(), 0.0);
    }
}

LstmModel LstmModel::initialize(const LstmConfig& config, std::size_t vocab_size)
{
    config.validate();
    if (vocab_size < 2) {
        throw ArgumentError("vocabulary must hold at least the padding and unknown rows");
    }
    LstmModel m{config, LstmParams::zeros(config, vocab_size)};
    Rng rng(config.seed);
    std::uniform_real_distribution<double> init(-0.05, 0.05);
    auto fill = [&](Mat& w) {
        for (Eigen::Index r = 0; r < w.rows(); ++r) {
            for (Eigen::Index c = 0; c < w.cols(); ++c) {
                w(r, c) = init(rng);
            }
        }
    };
    fill(m.params.embedding);
    m.params.embedding.row(Vocabulary::kPad).setZero();
    for (auto* dir : {&m.params.forward, &m.params.backward}) {
        for (int g = 0; g < 4; ++g) {
            fill(dir->W[g]);
            fill(dir->U[g]);
        }
        dir->b[kForgetGate].setOnes();
    }
    fill(m.params.dense_w);
    fill(m.params.out_w);
    return m;
}

std::size_t LstmModel::load_pretrained(const Vocabulary& vocab, const EmbeddingTable& table)
{
    if (table.dim() != static_cast<std::size_t>(config.embed_dim)) {
        throw ArgumentError("word vectors have dimension " + std::to_string(table.dim()) +
                            " but the model expects " + std::to_string(config.embed_dim));
    }
    std::size_t copied = 0;
    const auto& words = vocab.words();
    for (std::size_t i = 0; i < words.size(); ++i) {
        if (const auto* v = table.find(words[i])) {
            auto row = static_cast<Eigen::Index>(i + 2);
            for (std::size_t k = 0; k < v->size(); ++k) {
                params.embedding(row, static_cast<Eigen::Index>(k)) = (*v)[k];
            }
            ++copied;
        }
    }
    return copied;
}

ForwardCache forward(const LstmModel& model, std::span<const int> sequence, bool training, Rng& rng)
{
    const auto& cfg = model.config;
    const auto& p = model.params;
    if (sequence.size() != static_cast<std::size_t>(cfg.max_len)) {
        throw ArgumentError("sequence length " + std::to_string(sequence.size()) + " != max_len " +
                            std::to_string(cfg.max_len));
    }
    ForwardCache cache;
    cache.sequence.assign(sequence.begin(), sequence.end());
    std::vector<int> valid;
    for (std::size_t t = 0; t < sequence.size(); ++t) {
        int token = sequence[t];
        if (token < 0 || static_cast<std::size_t>(token) >= model.vocab_size()) {
            throw ArgumentError("token index " + std::to_string(token) + " outside the vocabulary");
        }
        if (token != Vocabulary::kPad) {
            valid.push_back(static_cast<int>(t));
        }
    }
    const int units = cfg.lstm_units;
    cache.forward.positions = valid;
    cache.backward.positions.assign(valid.rbegin(), valid.rend());
    cache.forward.recurrent_mask = dropout_mask(units, cfg.recurrent_dropout, training, rng);
    cache.backward.recurrent_mask = dropout_mask(units, cfg.recurrent_dropout, training, rng);
    run_direction(p.forward, p.embedding, sequence, cache.forward);
    run_direction(p.backward, p.embedding, sequence, cache.backward);

    // Global max pool over valid steps of [h_fwd; h_bwd]. The backward trace
    // visits positions in reverse, so step s of it sits at position n-1-s.
    const auto n = valid.size();
    cache.pooled = Vec::Zero(2 * units);
    cache.pool_source.assign(static_cast<std::size_t>(2 * units), -1);
    for (int u = 0; u < 2 * units; ++u) {
        const auto& trace = u < units ? cache.forward : cache.backward;
        int unit = u < units ? u : u - units;
        for (std::size_t t = 0; t < n; ++t) {
            std::size_t s = u < units ? t : n - 1 - t;
            double v = trace.h[s][unit];
            if (cache.pool_source[static_cast<std::size_t>(u)] < 0 || v > cache.pooled[u]) {
                cache.pooled[u] = v;
                cache.pool_source[static_cast<std::size_t>(u)] = static_cast<int>(s);
            }
        }
    }

    cache.dense_pre = p.dense_w.transpose() * cache.pooled + p.dense_b;
    cache.dense_act = cache.dense_pre.cwiseMax(0.0);
    cache.dropout_mask = dropout_mask(cfg.hidden_dim, cfg.dropout, training, rng);
    Vec dropped = cache.dense_act.cwiseProduct(cache.dropout_mask);
    Vec logits = p.out_w.transpose() * dropped + p.out_b;
    Vec shifted = (logits.array() - logits.maxCoeff()).exp().matrix();
    cache.probabilities = shifted / shifted.sum();
    return cache;
}

double loss(std::span<const double> probabilities, int label)
{
    if (label < 0 || static_cast<std::size_t>(label) >= probabilities.size()) {
        throw ArgumentError("label " + std::to_string(label) + " out of range");
    }
    return -std::log(probabilities[static_cast<std::size_t>(label)]);
}

void backward(const LstmModel& model, const ForwardCache& cache, int label, LstmParams& grads)
{
    const auto& p = model.params;
    const int units = model.config.lstm_units;
    if (label < 0 || label >= model.config.num_classes) {
        throw ArgumentError("label " + std::to_string(label) + " out of range");
    }
    Vec d_logits = cache.probabilities;
    d_logits[label] -= 1.0;
    Vec dropped = cache.dense_act.cwiseProduct(cache.dropout_mask);
    grads.out_w.noalias() += dropped * d_logits.transpose();
    grads.out_b += d_logits;
    Vec d_dense = (p.out_w * d_logits).cwiseProduct(cache.dropout_mask);
    for (Eigen::Index k = 0; k < d_dense.size(); ++k) {
        if (cache.dense_pre[k] <= 0.0) {
            d_dense[k] = 0.0;
        }
    }
    grads.dense_w.noalias() += cache.pooled * d_dense.transpose();
    grads.dense_b += d_dense;
    Vec d_pooled = p.dense_w * d_dense;

    const auto n = cache.forward.positions.size();
    std::vector<Vec> dh_fwd(n, Vec::Zero(units));
    std::vector<Vec> dh_bwd(n, Vec::Zero(units));
    for (int u = 0; u < 2 * units; ++u) {
        int s = cache.pool_source[static_cast<std::size_t>(u)];
        if (s < 0) {
            continue;
        }
        if (u < units) {
            dh_fwd[static_cast<std::size_t>(s)][u] += d_pooled[u];
        } else {
            dh_bwd[static_cast<std::size_t>(s)][u - units] += d_pooled[u];
        }
    }
    backprop_direction(p.forward, cache.forward, cache.sequence, dh_fwd, grads.forward, grads.embedding);
    backprop_direction(p.backward, cache.backward, cache.sequence, dh_bwd, grads.backward, grads.embedding);
    grads.embedding.row(Vocabulary::kPad).setZero();
}

AdamState AdamState::for_model(const LstmModel& model)
{
    AdamState s;
    s.first_moment = LstmParams::zeros(model.config, model.vocab_size());
    s.second_moment = LstmParams::zeros(model.config, model.vocab_size());
    return s;
}

void AdamState::apply(LstmParams& params, const LstmParams& grads, double learning_rate)
{
    ++step;
    const double correction1 = 1.0 - std::pow(beta1, static_cast<double>(step));
    const double correction2 = 1.0 - std::pow(beta2, static_cast<double>(step));
    auto p = params.tensors();
    auto g = grads.tensors();
    auto m = first_moment.tensors();
    auto v = second_moment.tensors();
    for (std::size_t t = 0; t < p.size(); ++t) {
        auto& pt = p[t].second;
        const auto& gt = g[t].second;
        auto& mt = m[t].second;
        auto& vt = v[t].second;
        for (std::size_t k = 0; k < pt.size(); ++k) {
            mt[k] = beta1 * mt[k] + (1.0 - beta1) * gt[k];
            vt[k] = beta2 * vt[k] + (1.0 - beta2) * gt[k] * gt[k];
            double m_hat = mt[k] / correction1;
            double v_hat = vt[k] / correction2;
            pt[k] -= learning_rate * m_hat / (std::sqrt(v_hat) + epsilon);
        }
    }
}

int argmax_class(std::span<const double> probabilities)
{
    int best = 0;
    for (std::size_t k = 1; k < probabilities.size(); ++k) {
        if (probabilities[k] > probabilities[static_cast<std::size_t>(best)]) {
            best = static_cast<int>(k);
        }
    }
    return best;
}

EpochStats evaluate(const LstmModel& model, const std::vector<LabeledSequence>& dataset)
{
    EpochStats stats;
    if (dataset.empty()) {
        return stats;
    }
    Rng unused(0);
    std::size_t correct = 0;
    for (const auto& sample : dataset) {
        auto cache = forward(model, sample.sequence, false, unused);
        std::span<const double> probs(cache.probabilities.data(), static_cast<std::size_t>(cache.probabilities.size()));
        stats.mean_loss += loss(probs, sample.label);
        correct += argmax_class(probs) == sample.label ? 1 : 0;
    }
    stats.mean_loss /= static_cast<double>(dataset.size());
    stats.accuracy = static_cast<double>(correct) / static_cast<double>(dataset.size());
    return stats;
}

std::vector<EpochStats> train(LstmModel& model, const std::vector<LabeledSequence>& dataset, int epochs,
                              std::size_t batch_size, AdamState& adam, Rng& rng)
{
    if (dataset.empty()) {
        throw ArgumentError("cannot train on an empty dataset");
    }
    if (batch_size == 0) {
        throw ArgumentError("batch size must be positive");
    }
    std::vector<EpochStats> history;
    std::vector<std::size_t> order(dataset.size());
    std::iota(order.begin(), order.end(), 0);
    LstmParams grads = LstmParams::zeros(model.config, model.vocab_size());
    for (int epoch = 0; epoch < epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t start = 0; start < order.size(); start += batch_size) {
            std::size_t end = std::min(order.size(), start + batch_size);
            grads.set_zero();
            for (std::size_t j = start; j < end; ++j) {
                const auto& sample = dataset[order[j]];
                auto cache = forward(model, sample.sequence, true, rng);
                backward(model, cache, sample.label, grads);
            }
            const double scale = 1.0 / static_cast<double>(end - start);
            for (auto& [name, t] : grads.tensors()) {
                for (auto& x : t) {
                    x *= scale;
                }
            }
            adam.apply(model.params, grads, model.config.learning_rate);
        }
        history.push_back(evaluate(model, dataset));
    }
    return history;
}

Prediction predict(const LstmModel& model, const Vocabulary& vocab, std::string_view text)
{
    Rng unused(0);
    auto seq = encode(vocab, tokenize(text), model.config.max_len);
    auto cache = forward(model, seq, false, unused);
    Prediction out;
    for (std::size_t k = 0; k < out.probabilities.size(); ++k) {
        out.probabilities[k] = cache.probabilities[static_cast<Eigen::Index>(k)];
    }
    out.star_class = argmax_class(out.probabilities);
    return out;
}

Prediction SentimentClassifier::predict(std::string_view text) const
{
    return plateful::predict(model, vocab, text);
}

std::string dump_classifier_json(const SentimentClassifier& classifier)
{
    nlohmann::json tensors = nlohmann::json::object();
    for (const auto& [name, data] : classifier.model.params.tensors()) {
        tensors[name] = std::vector<double>(data.begin(), data.end());
    }
    nlohmann::json j = {{"version", "lstm-v1"},
                        {"config", config_to_json(classifier.model.config)},
                        {"vocabulary", classifier.vocab.words()},
                        {"tensors", std::move(tensors)}};
    return j.dump();
}

SentimentClassifier load_classifier_json(const std::string& text)
{
    try {
        auto j = nlohmann::json::parse(text);
        if (j.value("version", "") != "lstm-v1") {
            throw DataError("unsupported sentiment checkpoint version");
        }
        SentimentClassifier out;
        out.vocab = Vocabulary::from_words(j.at("vocabulary").get<std::vector<std::string>>());
        auto config = config_from_json(j.at("config"));
        config.validate();
        out.model = {config, LstmParams::zeros(config, out.vocab.size())};
        const auto& stored = j.at("tensors");
        for (auto& [name, data] : out.model.params.tensors()) {
            auto values = stored.at(name).get<std::vector<double>>();
            if (values.size() != data.size()) {
                throw DataError("tensor '" + name + "' has " + std::to_string(values.size()) +
                                " values, expected " + std::to_string(data.size()));
            }
            std::copy(values.begin(), values.end(), data.begin());
        }
        return out;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("malformed sentiment checkpoint: ") + e.what());
    }
}

void save_classifier(const std::filesystem::path& path, const SentimentClassifier& classifier)
{
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    out << dump_classifier_json(classifier) << '\n';
}

SentimentClassifier load_classifier(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return load_classifier_json(buf.str());
}

}  // namespace plateful
