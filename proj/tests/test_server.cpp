#include <doctest.h>

#include <atomic>
#include <thread>

#include "plateful/search.hpp"
#include "plateful/server.hpp"

// After the library headers: httplib pulls in <resolv.h>, whose _res macro
// clashes with Eigen parameter names.
#include <httplib.h>

using namespace plateful;
using nlohmann::json;

namespace {

/// Classifier that ignores its input and always answers `star_class`.
std::shared_ptr<SentimentClassifier> constant_classifier(int star_class)
{
    auto c = std::make_shared<SentimentClassifier>();
    c->vocab = Vocabulary::from_words({"laksa", "good"});
    LstmConfig config;
    config.max_len = 8;
    config.embed_dim = 4;
    config.lstm_units = 2;
    config.hidden_dim = 2;
    c->model = LstmModel::initialize(config, c->vocab.size());
    c->model.params.out_w.setZero();
    c->model.params.out_b.setZero();
    c->model.params.out_b[star_class] = 3.0;
    return c;
}

EngineInputs inputs(bool with_sentiment)
{
    EngineInputs in;
    in.services = {{"s1", "Laksa House", {"noodles", "spicy"}, "Block 1"}, {"s2", "Cafe", {"cafe"}, "Block 2"}};
    in.reviews = {{"r1", "s1", "The broth is rich.", 4, {"noodles"}, 100},
                  {"r2", "s1", "Slow service but tasty noodles.", 3, {"noodles"}, 300},
                  {"r3", "s1", "The laksa is cold.", 1, {"noodles"}, 200},
                  {"r4", "s2", "Nice coffee.", 4, {"cafe"}, 50}};
    if (with_sentiment) {
        in.sentiment = constant_classifier(4);
    }
    return in;
}

Api make_api(bool with_sentiment = true)
{
    return Api(EngineState::build(inputs(with_sentiment)));
}

std::vector<std::string> review_ids(const json& body)
{
    std::vector<std::string> out;
    for (const auto& r : body.at("reviews")) {
        out.push_back(r.at("id").get<std::string>());
    }
    return out;
}

}  // namespace

TEST_CASE("health and services")
{
    auto api = make_api();
    CHECK(api.health().status == 200);
    CHECK(api.health().body == json{{"status", "ok"}});
    auto services = api.list_services();
    CHECK(services.status == 200);
    REQUIRE(services.body.size() == 2);
    CHECK(services.body[0]["id"] == "s1");
}

TEST_CASE("list_reviews pagination and status codes")
{
    auto api = make_api(false);
    CHECK(api.list_reviews("nope", {}).status == 404);

    auto first = api.list_reviews("s1", {{"page_size", "2"}});
    CHECK(first.status == 200);
    CHECK(review_ids(first.body) == std::vector<std::string>{"r2", "r3"});
    CHECK(first.body["total"] == 3);
    auto second = api.list_reviews("s1", {{"page", "2"}, {"page_size", "2"}});
    CHECK(review_ids(second.body) == std::vector<std::string>{"r1"});
    auto beyond = api.list_reviews("s1", {{"page", "9"}});
    CHECK(beyond.status == 200);
    CHECK(beyond.body["reviews"].empty());

    CHECK(api.list_reviews("s1", {{"page", "0"}}).status == 400);
    CHECK(api.list_reviews("s1", {{"page", "x"}}).status == 400);
    CHECK(api.list_reviews("s1", {{"page_size", "1001"}}).status == 400);

    const auto& r = first.body["reviews"][0];
    CHECK(r["sentiment_class"] == 3);
    CHECK(r["polarity"] == "positive");
    REQUIRE(r["tags"].is_array());
    for (const auto& t : r["tags"]) {
        CHECK(t.contains("text"));
        CHECK(t.contains("polarity"));
        CHECK(t.contains("negated"));
    }
}

TEST_CASE("search status codes")
{
    auto api = make_api();
    CHECK(api.search({}).status == 400);
    CHECK(api.search({{"q", "noodles"}, {"mode", "bert"}}).status == 400);
    CHECK(api.search({{"q", "noodles"}, {"k", "0"}}).status == 400);
    CHECK(api.search({{"q", "noodles"}, {"mode", "ranknet"}}).status == 409);

    auto ok = api.search({{"q", "tasty noodles"}, {"mode", "bm25"}});
    CHECK(ok.status == 200);
    CHECK(ok.body["mode"] == "bm25");
    const auto& results = ok.body["results"];
    REQUIRE(!results.empty());
    CHECK(results[0]["doc_id"] == "r2");
    for (std::size_t i = 1; i < results.size(); ++i) {
        CHECK(results[i - 1]["score"].get<double>() >= results[i]["score"].get<double>());
    }
    CHECK(results[0]["tags"].is_array());
    CHECK(results[0]["snippet"] == "Slow service but tasty noodles.");
}

TEST_CASE("read endpoints have no side effects")
{
    auto api = make_api();
    auto a = api.search({{"q", "laksa"}});
    auto b = api.list_reviews("s1", {});
    auto c = api.list_services();
    CHECK(api.search({{"q", "laksa"}}).body == a.body);
    CHECK(api.list_reviews("s1", {}).body == b.body);
    CHECK(api.list_services().body == c.body);
}

TEST_CASE("submit_review validation")
{
    auto api = make_api();
    CHECK(api.submit_review("{").status == 400);
    CHECK(api.submit_review("[1]").status == 400);
    CHECK(api.submit_review(R"({"service_id":"s1"})").status == 400);
    CHECK(api.submit_review(R"({"service_id":"s1","text":""})").status == 400);
    CHECK(api.submit_review(R"({"service_id":7,"text":"x"})").status == 400);
    CHECK(api.submit_review(R"({"service_id":"s1","text":"x","categories":"a"})").status == 400);
    CHECK(api.submit_review(R"({"service_id":"s1","text":"x","timestamp":"soon"})").status == 400);
    CHECK(api.submit_review(R"({"service_id":"s1","text":"x","id":"r1"})").status == 400);
    CHECK(api.submit_review(R"({"service_id":"s9","text":"x"})").status == 404);

    auto no_model = make_api(false);
    CHECK(no_model.submit_review(R"({"service_id":"s1","text":"x"})").status == 409);
}

TEST_CASE("a submitted review is visible immediately")
{
    auto api = make_api();
    auto before = api.snapshot();
    auto res = api.submit_review(R"({"service_id":"s1","text":"The laksa is not good.","timestamp":999})");
    REQUIRE(res.status == 201);
    CHECK(res.body["id"] == "user-5");
    CHECK(res.body["sentiment_class"] == 4);
    CHECK(res.body["categories"] == json{"noodles", "spicy"});
    CHECK(res.body["probabilities"].size() == 5);

    // The classifier calls this review positive, so the negated tag is negative.
    bool found = false;
    for (const auto& t : res.body["tags"]) {
        if (t["text"] == "not-good-laksa") {
            found = true;
            CHECK(t["polarity"] == "negative");
            CHECK(t["negated"] == true);
        }
    }
    CHECK(found);

    CHECK(api.snapshot()->text_index().doc_count() == before->text_index().doc_count() + 1);
    CHECK(before->find_review("user-5") == nullptr);

    auto listed = api.list_reviews("s1", {});
    CHECK(review_ids(listed.body).front() == "user-5");

    auto second = api.submit_review(R"({"service_id":"s2","text":"Zanzibarian pastries everywhere","id":"mine"})");
    REQUIRE(second.status == 201);
    auto hits = api.search({{"q", "zanzibarian"}});
    REQUIRE(hits.body["results"].size() == 1);
    CHECK(hits.body["results"][0]["doc_id"] == "mine");
}

TEST_CASE("readers see whole snapshots during submissions")
{
    auto api = make_api();
    std::atomic<bool> done{false};
    std::atomic<int> torn{0};
    std::thread reader([&] {
        while (!done) {
            auto state = api.snapshot();
            if (state->text_index().doc_count() != state->reviews().size() ||
                state->doc_vectors().size() != state->reviews().size()) {
                ++torn;
            }
            auto res = api.search({{"q", "unique"}});
            if (res.status != 200) {
                ++torn;
            }
        }
    });
    for (int i = 0; i < 20; ++i) {
        auto res = api.submit_review(R"({"service_id":"s1","text":"unique entry )" + std::to_string(i) + R"("})");
        CHECK(res.status == 201);
    }
    done = true;
    reader.join();
    CHECK(torn == 0);
    CHECK(api.snapshot()->reviews().size() == 24);
}

TEST_CASE("HTTP round trip")
{
    auto api = std::make_shared<Api>(EngineState::build(inputs(true)));
    HttpServer server(api);
    int port = server.bind("127.0.0.1", 0);
    REQUIRE(port > 0);
    std::thread loop([&] { server.serve(); });

    httplib::Client client("127.0.0.1", port);
    client.set_connection_timeout(5);

    auto health = client.Get("/api/health");
    REQUIRE(health);
    CHECK(health->status == 200);
    CHECK(json::parse(health->body)["status"] == "ok");

    auto services = client.Get("/api/services");
    REQUIRE(services);
    CHECK(json::parse(services->body).size() == 2);

    auto reviews = client.Get("/api/services/s1/reviews?page=1&page_size=2");
    REQUIRE(reviews);
    CHECK(reviews->status == 200);
    CHECK(json::parse(reviews->body)["reviews"].size() == 2);
    auto missing = client.Get("/api/services/zz/reviews");
    REQUIRE(missing);
    CHECK(missing->status == 404);
    CHECK(json::parse(missing->body).contains("error"));

    auto search = client.Get("/api/search?q=tasty%20noodles&mode=bm25&k=3");
    REQUIRE(search);
    CHECK(search->status == 200);
    CHECK(json::parse(search->body)["results"][0]["doc_id"] == "r2");
    auto no_q = client.Get("/api/search");
    REQUIRE(no_q);
    CHECK(no_q->status == 400);
    auto ranknet = client.Get("/api/search?q=x&mode=ranknet");
    REQUIRE(ranknet);
    CHECK(ranknet->status == 409);

    auto posted = client.Post("/api/reviews", R"({"service_id":"s2","text":"Quokka biscuits are good."})",
                              "application/json");
    REQUIRE(posted);
    CHECK(posted->status == 201);
    auto found = client.Get("/api/search?q=quokka");
    REQUIRE(found);
    CHECK(json::parse(found->body)["results"].size() == 1);
    auto bad = client.Post("/api/reviews", "nope", "application/json");
    REQUIRE(bad);
    CHECK(bad->status == 400);

    auto unknown = client.Get("/api/nothing");
    REQUIRE(unknown);
    CHECK(unknown->status == 404);
    CHECK(json::parse(unknown->body).contains("error"));

    server.stop();
    loop.join();
}
