#include <doctest.h>

#include <random>

#include "checks.hpp"
#include "plateful/search.hpp"

using namespace plateful;

namespace {

std::vector<Review> toy_reviews()
{
    return {{"d1", "s1", "cheap tasty noodles", 4, {"noodles"}, 1},
            {"d2", "s1", "tasty tasty chicken rice", 3, {"rice"}, 2},
            {"d3", "s2", "slow service", 1, {"cafe"}, 3}};
}

std::shared_ptr<const EngineState> toy_state(bool with_models)
{
    EngineInputs in;
    in.reviews = toy_reviews();
    in.services = {{"s1", "Stall", {"noodles"}, "here"}, {"s2", "Cafe", {"cafe"}, "there"}};
    if (with_models) {
        auto table = std::make_shared<EmbeddingTable>(2);
        table->insert("tasty", {1, 0});
        table->insert("noodles", {0.5, 0.5});
        table->insert("rice", {0, 1});
        table->insert("service", {-1, 0});
        in.embeddings = table;
        in.ranker = std::make_shared<RankerModel>(RankerModel{RankNet::initialize(4, 3), {{0, 0, 0}, {1, 1, 1}}});
    }
    return EngineState::build(std::move(in));
}

std::vector<std::string> ids(const std::vector<SearchResult>& results)
{
    std::vector<std::string> out;
    for (const auto& r : results) {
        out.push_back(r.doc_id);
    }
    return out;
}

}  // namespace

TEST_CASE("metric examples")
{
    std::set<std::string> rel = {"a", "c"};
    CHECK(average_precision_at_k({"a", "b", "c"}, rel, 3) == doctest::Approx(0.83333).epsilon(1e-5));
    CHECK(average_precision_at_k({"a", "c", "b"}, rel, 3) == 1.0);
    CHECK(average_precision_at_k({"b", "d"}, rel, 3) == 0.0);
    CHECK(average_precision_at_k({"a"}, {}, 3) == 0.0);
    CHECK_THROWS_AS(average_precision_at_k({"a"}, rel, 0), ArgumentError);
    CHECK(reciprocal_rank({"a", "b"}, rel) == 1.0);
    CHECK(reciprocal_rank({"x", "y", "z", "c"}, rel) == 0.25);
    CHECK(reciprocal_rank({"x"}, rel) == 0.0);
}

TEST_CASE("metrics agree with the definition oracle on constructed rankings")
{
    auto cases = checks::constructed_rankings();
    REQUIRE(cases.size() == 20);
    for (std::size_t i = 0; i < cases.size(); ++i) {
        const auto& c = cases[i];
        INFO("case " << i);
        for (std::size_t k : {1u, 2u, 3u, 5u, 10u}) {
            CHECK(std::abs(average_precision_at_k(c.ranked, c.relevant, k) -
                           oracle::average_precision(c.ranked, c.relevant, k)) <= 1e-12);
        }
        CHECK(reciprocal_rank(c.ranked, c.relevant) == oracle::reciprocal_rank(c.ranked, c.relevant));
    }
    CHECK(average_precision_at_k(cases[2].ranked, cases[2].relevant, 3) == doctest::Approx(0.83333).epsilon(1e-5));
}

TEST_CASE("metric bounds on random rankings")
{
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<std::string> ranked;
        std::set<std::string> relevant;
        int n = std::uniform_int_distribution<int>(0, 12)(rng);
        for (int i = 0; i < n; ++i) {
            ranked.push_back("d" + std::to_string(i));
            if (rng() % 3 == 0) {
                relevant.insert("d" + std::to_string(i));
            }
        }
        for (int extra = static_cast<int>(rng() % 3); extra > 0; --extra) {
            relevant.insert("missing" + std::to_string(extra));
        }
        std::shuffle(ranked.begin(), ranked.end(), rng);
        double rr = reciprocal_rank(ranked, relevant);
        CHECK(rr >= 0.0);
        CHECK(rr <= 1.0);
        for (std::size_t k : {1u, 3u, 5u}) {
            double ap = average_precision_at_k(ranked, relevant, k);
            CHECK(ap >= 0.0);
            CHECK(ap <= 1.0 + 1e-12);
        }
        CHECK(average_precision_at_k(ranked, relevant, 1) <= rr);
    }
}

TEST_CASE("run_query examples")
{
    auto state = toy_state(true);
    for (auto mode : {SearchMode::tfidf, SearchMode::bm25, SearchMode::ranknet}) {
        CHECK(run_query("", {50, 10, mode}, *state).empty());
        CHECK(run_query("  !! ", {50, 10, mode}, *state).empty());
    }
    auto bm25 = run_query("tasty", {50, 10, SearchMode::bm25}, *state);
    CHECK(ids(bm25) == std::vector<std::string>{"d2", "d1"});
    CHECK(bm25[0].score == doctest::Approx(0.59086).epsilon(1e-5));
    CHECK(bm25[0].snippet == "tasty tasty chicken rice");

    EngineInputs one;
    one.reviews = {{"only", "s1", "spicy crab", 4, {"seafood"}, 0}};
    auto table = std::make_shared<EmbeddingTable>(2);
    table->insert("crab", {1, 1});
    one.embeddings = table;
    one.ranker = std::make_shared<RankerModel>(RankerModel{RankNet::initialize(4, 1), {{0, 0, 0}, {1, 1, 1}}});
    auto single = EngineState::build(std::move(one));
    // A term in every document has tf-idf weight ln(N/df) = 0, and zero
    // scores are not results, so tf-idf finds nothing in a one-document corpus.
    CHECK(run_query("crab", {50, 10, SearchMode::tfidf}, *single).empty());
    for (auto mode : {SearchMode::bm25, SearchMode::ranknet}) {
        auto r = run_query("crab", {50, 10, mode}, *single);
        REQUIRE(r.size() == 1);
        CHECK(r[0].doc_id == "only");
        CHECK(r[0].rank == 1);
    }
}

TEST_CASE("run_query errors")
{
    auto bare = toy_state(false);
    CHECK_THROWS_AS(run_query("tasty", {50, 10, SearchMode::ranknet}, *bare), ModelMissingError);
    CHECK_THROWS_AS(run_query("tasty", {5, 10, SearchMode::bm25}, *bare), ArgumentError);
    CHECK_THROWS_AS(run_query("tasty", {5, 0, SearchMode::bm25}, *bare), ArgumentError);
    CHECK(parse_mode("ranknet") == SearchMode::ranknet);
    CHECK_FALSE(parse_mode("bert").has_value());
    CHECK(to_string(SearchMode::tfidf) == "tfidf");
}

TEST_CASE("results have contiguous ranks and respect k")
{
    auto state = toy_state(true);
    for (auto mode : {SearchMode::tfidf, SearchMode::bm25, SearchMode::ranknet}) {
        for (std::size_t k : {1u, 2u, 3u, 10u}) {
            auto r = run_query("tasty rice service noodles", {50, k, mode}, *state);
            CHECK(r.size() <= k);
            for (std::size_t i = 0; i < r.size(); ++i) {
                CHECK(r[i].rank == i + 1);
                if (i > 0) {
                    CHECK((r[i - 1].score > r[i].score ||
                           (r[i - 1].score == r[i].score && r[i - 1].doc_id < r[i].doc_id)));
                }
            }
        }
    }
}

TEST_CASE("lexical modes ignore the ranker and embeddings")
{
    auto with = toy_state(true);
    auto without = toy_state(false);
    for (auto mode : {SearchMode::tfidf, SearchMode::bm25}) {
        for (const char* q : {"tasty", "slow rice", "cheap noodles service"}) {
            auto a = run_query(q, {50, 10, mode}, *with);
            auto b = run_query(q, {50, 10, mode}, *without);
            REQUIRE(a.size() == b.size());
            for (std::size_t i = 0; i < a.size(); ++i) {
                CHECK(a[i].doc_id == b[i].doc_id);
                CHECK(a[i].score == b[i].score);
            }
        }
    }
}

TEST_CASE("utf8_prefix keeps whole code points")
{
    CHECK(utf8_prefix("abc", 2) == "ab");
    CHECK(utf8_prefix("café au lait", 4) == "café");
    CHECK(utf8_prefix("日本語", 2) == "日本");
    CHECK(utf8_prefix("", 5).empty());
}

TEST_CASE("evaluate")
{
    auto state = toy_state(true);
    std::vector<Query> queries = {{"q1", "tasty"}, {"q2", "slow service"}};
    std::vector<RelevanceJudgment> perfect = {{"q1", "d2", 1}, {"q1", "d1", 1}, {"q1", "d3", 0}, {"q2", "d3", 1}};
    auto reports = evaluate(queries, perfect, *state, {{50, 10, SearchMode::bm25}});
    REQUIRE(reports.size() == 1);
    for (const auto& name : kMetricNames) {
        CHECK(reports[0].metrics.at(name) == 1.0);
    }
    REQUIRE(reports[0].per_query.size() == 2);
    CHECK(reports[0].per_query[0].query_id == "q1");

    std::vector<RelevanceJudgment> hopeless = {{"q1", "d3", 1}, {"q2", "d1", 1}};
    auto zero = evaluate(queries, hopeless, *state, {{50, 10, SearchMode::tfidf}});
    for (const auto& name : kMetricNames) {
        CHECK(zero[0].metrics.at(name) == 0.0);
    }

    std::vector<SearchConfig> modes = {{50, 10, SearchMode::tfidf}, {50, 10, SearchMode::bm25},
                                       {50, 10, SearchMode::ranknet}};
    auto first = evaluate(queries, perfect, *state, modes);
    auto second = evaluate(queries, perfect, *state, modes);
    CHECK(eval_report_json(first) == eval_report_json(second));
    CHECK(format_eval_table(first).find("ranknet") != std::string::npos);

    std::vector<RelevanceJudgment> missing = {{"q1", "d1", 1}};
    CHECK_THROWS_AS(evaluate(queries, missing, *state, modes), DataError);
}

TEST_CASE("train_ranker on the toy state")
{
    auto state = toy_state(true);
    std::vector<Query> queries = {{"q1", "tasty"}, {"q2", "slow service"}};
    std::vector<RelevanceJudgment> judgments = {{"q1", "d2", 1}, {"q1", "d3", 0}, {"q2", "d3", 1}, {"q2", "d1", 0}};
    auto trained = train_ranker(*state, queries, judgments, {50, 0.05, 1});
    CHECK(trained.pair_count == 2);
    CHECK(trained.loss_history.size() == 50);
    CHECK(trained.pair_accuracy == 1.0);

    std::vector<RelevanceJudgment> unknown = {{"q1", "d9", 1}};
    CHECK_THROWS_AS(compute_features(*state, queries, unknown), DataError);
    std::vector<RelevanceJudgment> flat = {{"q1", "d1", 1}, {"q1", "d2", 1}};
    CHECK_THROWS_AS(train_ranker(*state, queries, flat, {5, 0.05, 1}), DataError);
}
