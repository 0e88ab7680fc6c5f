#include "plateful/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "plateful/engine.hpp"
#include "plateful/search.hpp"
#include "plateful/server.hpp"

namespace plateful {

namespace fs = std::filesystem;

namespace {

/// Relative paths that do not exist in the working directory are looked up
/// under PLATEFUL_DATA_DIR.
fs::path resolve(const std::string& value)
{
    fs::path p(value);
    if (p.is_absolute() || fs::exists(p)) {
        return p;
    }
    if (const char* dir = std::getenv("PLATEFUL_DATA_DIR"); dir != nullptr && *dir != '\0') {
        fs::path candidate = fs::path(dir) / p;
        if (fs::exists(candidate)) {
            return candidate;
        }
    }
    return p;
}

/// Resolved path of an optional input: an explicitly passed flag must exist,
/// a defaulted one is skipped when missing.
std::optional<fs::path> optional_input(const CLI::Option* opt, const std::string& value)
{
    if (value.empty()) {
        return std::nullopt;
    }
    fs::path p = resolve(value);
    if (opt->count() == 0 && !fs::exists(p)) {
        return std::nullopt;
    }
    return p;
}

void write_file(const fs::path& path, const std::string& content)
{
    std::ofstream out(path);
    if (!out || !(out << content)) {
        throw IoError("cannot write " + path.string());
    }
}

struct CorpusFlags {
    std::string reviews = "reviews.jsonl";
    std::string services = "services.jsonl";
    std::string embeddings = "embeddings.txt";
    std::string doc_vectors;
    std::size_t embed_dim = 50;
    CLI::Option* services_opt = nullptr;
    CLI::Option* embeddings_opt = nullptr;
    CLI::Option* doc_vectors_opt = nullptr;

    void add_to(CLI::App* app, bool with_vectors)
    {
        app->add_option("--reviews", reviews, "Reviews JSONL")->capture_default_str();
        services_opt = app->add_option("--services", services, "Food services JSONL")->capture_default_str();
        if (with_vectors) {
            embeddings_opt = app->add_option("--embeddings", embeddings, "Word vectors, GloVe text format")
                                 ->capture_default_str();
            doc_vectors_opt =
                app->add_option("--doc-vectors", doc_vectors, "Precomputed document vectors TSV");
            app->add_option("--embed-dim", embed_dim, "Word vector dimension")->capture_default_str();
        }
    }

    EngineInputs load(bool with_vectors) const
    {
        EngineInputs in;
        in.reviews = load_reviews(resolve(reviews));
        if (auto p = optional_input(services_opt, services)) {
            in.services = load_services(*p);
            check_service_refs(in.reviews, in.services);
        }
        if (with_vectors) {
            if (auto p = optional_input(embeddings_opt, embeddings)) {
                in.embeddings = std::make_shared<const EmbeddingTable>(load_embeddings(*p, embed_dim));
            }
            if (auto p = optional_input(doc_vectors_opt, doc_vectors)) {
                in.doc_vector_overrides = load_doc_vectors(*p, embed_dim);
            }
        }
        return in;
    }
};

struct QueryFlags {
    std::string queries = "queries.tsv";
    std::string judgments = "judgments.tsv";

    void add_to(CLI::App* app)
    {
        app->add_option("--queries", queries, "Queries TSV")->capture_default_str();
        app->add_option("--judgments", judgments, "Relevance judgments TSV")->capture_default_str();
    }
};

struct SearchFlags {
    std::string mode = "bm25";
    std::size_t k = 10;
    std::size_t candidate_depth = 50;

    void add_to(CLI::App* app, bool with_mode)
    {
        if (with_mode) {
            app->add_option("--mode", mode, "tfidf, bm25 or ranknet")
                ->check(CLI::IsMember({"tfidf", "bm25", "ranknet"}))
                ->capture_default_str();
        }
        app->add_option("--k", k, "Number of results")->check(CLI::PositiveNumber)->capture_default_str();
        app->add_option("--candidate-depth", candidate_depth, "First-pass candidates re-ranked in ranknet mode")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
    }

    SearchConfig config(SearchMode m) const
    {
        SearchConfig c{candidate_depth, k, m};
        c.validate();
        return c;
    }
};

struct RankerFlags {
    int epochs = 200;
    double lr = 0.05;
    std::uint64_t seed = 42;
    std::size_t hidden = 8;

    void add_to(CLI::App* app)
    {
        app->add_option("--epochs", epochs, "Training epochs")->check(CLI::NonNegativeNumber)->capture_default_str();
        app->add_option("--lr", lr, "Learning rate")->check(CLI::PositiveNumber)->capture_default_str();
        app->add_option("--seed", seed, "Random seed")->capture_default_str();
        app->add_option("--hidden", hidden, "Hidden units")->check(CLI::PositiveNumber)->capture_default_str();
    }

    RankNetOptions options() const { return {epochs, lr, seed}; }
};

std::string fmt(const char* pattern, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, pattern, v);
    return buf;
}

void print_tags(std::ostream& out, const std::vector<TagPair>& pairs)
{
    for (const auto& p : pairs) {
        out << p.text() << '\n';
    }
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Food review search, sentiment and tagging engine", "plateful"};
    app.require_subcommand(1, 1);
    app.set_help_all_flag("--help-all", "Print help for every subcommand");

    // index
    auto* index_cmd = app.add_subcommand("index", "Build the text and category indexes and write a snapshot");
    CorpusFlags index_corpus;
    std::string index_out;
    index_corpus.add_to(index_cmd, false);
    index_cmd->add_option("--out", index_out, "Snapshot JSON to write");

    // train-sentiment
    auto* tsent_cmd = app.add_subcommand("train-sentiment", "Train the LSTM sentiment classifier");
    CorpusFlags tsent_corpus;
    std::string tsent_model_out;
    int tsent_epochs = 10;
    double tsent_lr = 1e-3;
    std::uint64_t tsent_seed = 42;
    std::size_t tsent_batch = 1;
    double tsent_holdout = 0.2;
    LstmConfig tsent_config;
    tsent_corpus.add_to(tsent_cmd, true);
    tsent_cmd->add_option("--model-out", tsent_model_out, "Checkpoint JSON to write")->required();
    tsent_cmd->add_option("--epochs", tsent_epochs, "Training epochs")->check(CLI::NonNegativeNumber)->capture_default_str();
    tsent_cmd->add_option("--lr", tsent_lr, "Adam learning rate")->check(CLI::PositiveNumber)->capture_default_str();
    tsent_cmd->add_option("--seed", tsent_seed, "Random seed")->capture_default_str();
    tsent_cmd->add_option("--batch-size", tsent_batch, "Mini-batch size")->check(CLI::PositiveNumber)->capture_default_str();
    tsent_cmd->add_option("--holdout", tsent_holdout, "Held-out fraction, 0 trains on everything")
        ->check(CLI::Range(0.0, 0.99))
        ->capture_default_str();
    tsent_cmd->add_option("--max-len", tsent_config.max_len, "Sequence length")->check(CLI::PositiveNumber)->capture_default_str();
    tsent_cmd->add_option("--units", tsent_config.lstm_units, "LSTM units per direction")->check(CLI::PositiveNumber)->capture_default_str();
    tsent_cmd->add_option("--hidden", tsent_config.hidden_dim, "Dense layer size")->check(CLI::PositiveNumber)->capture_default_str();

    // train-ranker
    auto* trank_cmd = app.add_subcommand("train-ranker", "Train the pairwise re-ranking network");
    CorpusFlags trank_corpus;
    QueryFlags trank_queries;
    trank_queries.queries = "train_queries.tsv";
    trank_queries.judgments = "train_judgments.tsv";
    RankerFlags trank_flags;
    std::string trank_model_out;
    trank_corpus.add_to(trank_cmd, true);
    trank_queries.add_to(trank_cmd);
    trank_flags.add_to(trank_cmd);
    trank_cmd->add_option("--model-out", trank_model_out, "Checkpoint JSON to write")->required();

    // tags
    auto* tags_cmd = app.add_subcommand("tags", "Extract adjective-noun review tags");
    std::string tags_text;
    std::string tags_reviews;
    std::string tags_annotated;
    auto* tags_text_opt = tags_cmd->add_option("--text", tags_text, "A single review text");
    auto* tags_reviews_opt = tags_cmd->add_option("--reviews", tags_reviews, "Reviews JSONL; prints tags per review");
    auto* tags_annotated_opt =
        tags_cmd->add_option("--annotated", tags_annotated, "Annotated corpus; scores extraction against gold pairs");
    tags_text_opt->excludes(tags_reviews_opt)->excludes(tags_annotated_opt);
    tags_reviews_opt->excludes(tags_annotated_opt);

    // search
    auto* search_cmd = app.add_subcommand("search", "Run one query and print the ranked results");
    CorpusFlags search_corpus;
    SearchFlags search_flags;
    std::string search_model_in;
    std::string search_query;
    search_corpus.add_to(search_cmd, true);
    search_flags.add_to(search_cmd, true);
    search_cmd->add_option("--model-in", search_model_in, "Ranker checkpoint for ranknet mode");
    search_cmd->add_option("query", search_query, "Query text")->required();

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "Compare tfidf, bm25 and ranknet with MAP@k and MRR");
    CorpusFlags eval_corpus;
    QueryFlags eval_queries;
    SearchFlags eval_flags;
    RankerFlags eval_ranker;
    std::string eval_model_in;
    std::string eval_train_queries = "train_queries.tsv";
    std::string eval_train_judgments = "train_judgments.tsv";
    std::string eval_out;
    eval_corpus.add_to(eval_cmd, true);
    eval_queries.add_to(eval_cmd);
    eval_flags.add_to(eval_cmd, false);
    eval_ranker.add_to(eval_cmd);
    eval_cmd->add_option("--model-in", eval_model_in, "Ranker checkpoint; trained on the fly when absent");
    eval_cmd->add_option("--train-queries", eval_train_queries, "Queries used to train the ranker on the fly")
        ->capture_default_str();
    eval_cmd->add_option("--train-judgments", eval_train_judgments, "Judgments used to train the ranker on the fly")
        ->capture_default_str();
    eval_cmd->add_option("--out", eval_out, "Report JSON to write");

    // serve
    auto* serve_cmd = app.add_subcommand("serve", "Start the HTTP JSON API");
    CorpusFlags serve_corpus;
    std::string serve_model_in;
    std::string serve_sentiment;
    std::string serve_host = "127.0.0.1";
    int serve_port = 8080;
    serve_corpus.add_to(serve_cmd, true);
    serve_cmd->add_option("--model-in", serve_model_in, "Ranker checkpoint enabling ranknet mode");
    serve_cmd->add_option("--sentiment-model", serve_sentiment, "Sentiment checkpoint enabling review submission");
    serve_cmd->add_option("--host", serve_host, "Bind address")->capture_default_str();
    serve_cmd->add_option("--port", serve_port, "TCP port")->check(CLI::Range(0, 65535))->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            app.exit(e, out, err);
            return kExitOk;
        }
        err << "error: " << e.what() << '\n';
        err << app.help() << std::flush;
        return kExitUsage;
    }

    try {
        if (index_cmd->parsed()) {
            auto state = EngineState::build(index_corpus.load(false));
            out << "indexed " << state->reviews().size() << " reviews, " << state->text_index().postings().size()
                << " text terms, " << state->category_index().postings().size() << " category terms\n";
            if (!index_out.empty()) {
                nlohmann::json snap = {{"version", "snapshot-v1"},
                                       {"text", nlohmann::json::parse(dump_index_json(state->text_index()))},
                                       {"categories", nlohmann::json::parse(dump_index_json(state->category_index()))}};
                write_file(index_out, snap.dump());
                out << "wrote " << index_out << '\n';
            }
        } else if (tsent_cmd->parsed()) {
            EngineInputs in = tsent_corpus.load(true);
            if (in.embeddings) {
                tsent_config.embed_dim = static_cast<int>(in.embeddings->dim());
            }
            tsent_config.learning_rate = tsent_lr;
            tsent_config.seed = tsent_seed;
            tsent_config.validate();
            DatasetSplit split{in.reviews, {}};
            if (tsent_holdout > 0.0) {
                split = split_dataset(in.reviews, tsent_holdout, tsent_seed);
            }
            std::vector<std::vector<std::string>> token_lists;
            for (const auto& r : split.train) {
                token_lists.push_back(tokenize(r.text));
            }
            SentimentClassifier clf;
            clf.vocab = Vocabulary::build(token_lists);
            clf.model = LstmModel::initialize(tsent_config, clf.vocab.size());
            if (in.embeddings) {
                auto loaded = clf.model.load_pretrained(clf.vocab, *in.embeddings);
                out << "initialized " << loaded << " of " << clf.vocab.words().size()
                    << " vocabulary rows from word vectors\n";
            }
            auto to_dataset = [&](const std::vector<Review>& reviews) {
                std::vector<LabeledSequence> data;
                for (const auto& r : reviews) {
                    data.push_back({encode(clf.vocab, tokenize(r.text), tsent_config.max_len), r.label});
                }
                return data;
            };
            auto train_set = to_dataset(split.train);
            AdamState adam = AdamState::for_model(clf.model);
            Rng rng(tsent_seed);
            auto history = train(clf.model, train_set, tsent_epochs, tsent_batch, adam, rng);
            for (std::size_t e = 0; e < history.size(); ++e) {
                out << "epoch " << e + 1 << " loss " << fmt("%.4f", history[e].mean_loss) << " accuracy "
                    << fmt("%.4f", history[e].accuracy) << '\n';
            }
            if (!split.test.empty()) {
                auto held = evaluate(clf.model, to_dataset(split.test));
                out << "held-out accuracy " << fmt("%.4f", held.accuracy) << " on " << split.test.size()
                    << " reviews\n";
            }
            save_classifier(tsent_model_out, clf);
            out << "wrote " << tsent_model_out << '\n';
        } else if (trank_cmd->parsed()) {
            auto state = EngineState::build(trank_corpus.load(true));
            auto queries = load_queries(resolve(trank_queries.queries));
            auto judgments = load_judgments(resolve(trank_queries.judgments));
            auto result = train_ranker(*state, queries, judgments, trank_flags.options(), trank_flags.hidden);
            if (!result.loss_history.empty()) {
                out << "final pair loss " << fmt("%.6f", result.loss_history.back()) << '\n';
            }
            out << "pair accuracy " << fmt("%.4f", result.pair_accuracy) << " over " << result.pair_count
                << " pairs\n";
            save_ranker(trank_model_out, result.model);
            out << "wrote " << trank_model_out << '\n';
        } else if (tags_cmd->parsed()) {
            if (tags_text_opt->count() > 0) {
                print_tags(out, extract_pairs_from_text(tags_text));
            } else if (tags_reviews_opt->count() > 0) {
                for (const auto& r : load_reviews(resolve(tags_reviews))) {
                    Polarity base = polarity(r.label);
                    out << r.id;
                    for (const auto& t : aggregate_tags(extract_pairs_from_text(r.text),
                                                        [base](const TagPair&) { return base; })) {
                        out << '\t' << t.text() << ':' << to_string(t.polarity);
                        if (t.count > 1) {
                            out << 'x' << t.count;
                        }
                    }
                    out << '\n';
                }
            } else if (tags_annotated_opt->count() > 0) {
                auto sentences = load_annotated(resolve(tags_annotated));
                std::vector<std::vector<TagPair>> extracted;
                std::vector<std::vector<TagPair>> gold;
                for (const auto& s : sentences) {
                    extracted.push_back(extract_pairs(s));
                    gold.push_back(s.gold_pairs.value_or(std::vector<TagPair>{}));
                }
                auto score = score_extraction(extracted, gold);
                out << "sentences " << sentences.size() << "\nextracted " << score.extracted << "\ncorrect "
                    << score.correct << "\ngold " << score.gold << "\nprecision " << fmt("%.4f", score.precision())
                    << "\nrecall " << fmt("%.4f", score.recall()) << '\n';
            } else {
                throw ArgumentError("tags needs one of --text, --reviews or --annotated");
            }
        } else if (search_cmd->parsed()) {
            EngineInputs in = search_corpus.load(true);
            SearchMode mode = *parse_mode(search_flags.mode);
            if (!search_model_in.empty()) {
                in.ranker = std::make_shared<const RankerModel>(load_ranker(resolve(search_model_in)));
            }
            auto state = EngineState::build(std::move(in));
            auto results = run_query(search_query, search_flags.config(mode), *state);
            out << "rank\tdoc_id\tscore\tsnippet\n";
            for (const auto& r : results) {
                out << r.rank << '\t' << r.doc_id << '\t' << fmt("%.5f", r.score) << '\t'
                    << utf8_prefix(r.snippet, 60) << '\n';
            }
        } else if (eval_cmd->parsed()) {
            EngineInputs in = eval_corpus.load(true);
            auto state = EngineState::build(in);
            if (!eval_model_in.empty()) {
                in.ranker = std::make_shared<const RankerModel>(load_ranker(resolve(eval_model_in)));
            } else {
                auto tq = load_queries(resolve(eval_train_queries));
                auto tj = load_judgments(resolve(eval_train_judgments));
                auto trained = train_ranker(*state, tq, tj, eval_ranker.options(), eval_ranker.hidden);
                in.ranker = std::make_shared<const RankerModel>(std::move(trained.model));
            }
            state = EngineState::build(std::move(in));
            auto queries = load_queries(resolve(eval_queries.queries));
            auto judgments = load_judgments(resolve(eval_queries.judgments));
            std::vector<SearchConfig> configs;
            for (auto m : {SearchMode::tfidf, SearchMode::bm25, SearchMode::ranknet}) {
                configs.push_back(eval_flags.config(m));
            }
            auto reports = evaluate(queries, judgments, *state, configs);
            out << format_eval_table(reports);
            if (!eval_out.empty()) {
                write_file(eval_out, eval_report_json(reports) + "\n");
            }
        } else if (serve_cmd->parsed()) {
            EngineInputs in = serve_corpus.load(true);
            if (in.services.empty()) {
                throw DataError("serve needs a services file (--services)");
            }
            if (!serve_model_in.empty()) {
                in.ranker = std::make_shared<const RankerModel>(load_ranker(resolve(serve_model_in)));
            }
            if (!serve_sentiment.empty()) {
                in.sentiment =
                    std::make_shared<const SentimentClassifier>(load_classifier(resolve(serve_sentiment)));
            }
            auto api = std::make_shared<Api>(EngineState::build(std::move(in)));
            HttpServer server(api);
            int port = server.bind(serve_host, serve_port);
            if (port < 0) {
                throw IoError("cannot bind " + serve_host + ":" + std::to_string(serve_port));
            }
            out << "listening on http://" << serve_host << ':' << port << std::endl;
            if (!server.serve()) {
                throw IoError("server stopped unexpectedly");
            }
        }
    } catch (const ArgumentError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ModelMissingError& e) {
        err << "error: " << e.what() << " (pass --model-in)\n";
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    }
    return kExitOk;
}

}  // namespace plateful
