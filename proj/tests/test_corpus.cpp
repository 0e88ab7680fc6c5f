#include <doctest.h>

#include <map>
#include <random>
#include <set>
#include <sstream>

#include "plateful/corpus.hpp"
#include "plateful/error.hpp"

using namespace plateful;

namespace {

std::vector<Review> parse(const std::string& text)
{
    std::istringstream in(text);
    return parse_reviews(in);
}

std::vector<Review> labelled(int per_label)
{
    std::vector<Review> out;
    int n = 0;
    for (int label = 0; label < kNumStarClasses; ++label) {
        for (int i = 0; i < per_label; ++i) {
            out.push_back({"r" + std::to_string(n++), "s1", "text", label, {}, 0});
        }
    }
    return out;
}

}  // namespace

TEST_CASE("tokenize lowercases and splits on non-alphanumerics")
{
    CHECK(tokenize("").empty());
    CHECK(tokenize("Great food!!") == std::vector<std::string>{"great", "food"});
    CHECK(tokenize("chicken-rice, S$3.50") == std::vector<std::string>{"chicken", "rice", "s", "3", "50"});
    CHECK(tokenize("  --  ").empty());
    CHECK(tokenize("CAFÉ Crème") == std::vector<std::string>{"café", "crème"});
    CHECK(tokenize("don't") == std::vector<std::string>{"don", "t"});
}

TEST_CASE("tokenize is idempotent on its joined output")
{
    std::mt19937_64 rng(5);
    const std::string alphabet = "abcXYZ019 ,.-!?'éÉ";
    for (int trial = 0; trial < 300; ++trial) {
        std::string text;
        std::uniform_int_distribution<int> len(0, 40);
        std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
        for (int i = len(rng); i > 0; --i) {
            char c = alphabet[pick(rng)];
            // Keep multi-byte characters whole.
            if (static_cast<unsigned char>(c) >= 0x80) {
                text += "é";
            } else {
                text += c;
            }
        }
        auto once = tokenize(text);
        std::string joined;
        for (const auto& t : once) {
            joined += t + " ";
        }
        CHECK(tokenize(joined) == once);
    }
}

TEST_CASE("parse_reviews reads JSONL")
{
    CHECK(parse("").empty());
    auto one = parse(R"({"id":"r1","service_id":"s1","text":"Great food","label":4,"categories":["noodles"]})");
    REQUIRE(one.size() == 1);
    CHECK(one[0].label == 4);
    CHECK(one[0].timestamp == 0);
    CHECK(one[0].categories == std::vector<std::string>{"noodles"});

    auto dedup = parse(R"({"id":"r1","service_id":"s1","text":"x","label":0,"categories":["Noodles","noodles","rice"],"timestamp":12})");
    CHECK(dedup[0].categories == std::vector<std::string>{"noodles", "rice"});
    CHECK(dedup[0].timestamp == 12);
}

TEST_CASE("parse_reviews reports the offending line")
{
    const std::string r1 = R"({"id":"r1","service_id":"s1","text":"a","label":1,"categories":[]})";
    try {
        parse(r1 + "\n" + r1 + "\n");
        FAIL("duplicate accepted");
    } catch (const DataError& e) {
        CHECK(e.line() == 2);
    }
    try {
        parse(r1 + "\n\n" + R"({"id":"r2","service_id":"s1","text":"a","label":5,"categories":[]})");
        FAIL("label 5 accepted");
    } catch (const DataError& e) {
        CHECK(e.line() == 3);
    }
    CHECK_THROWS_AS(parse("{not json"), DataError);
    CHECK_THROWS_AS(parse(R"({"id":"r1","service_id":"s1","label":1,"categories":[]})"), DataError);
    CHECK_THROWS_AS(parse(R"({"id":"","service_id":"s1","text":"a","label":1,"categories":[]})"), DataError);
    CHECK_THROWS_AS(parse(R"({"id":"r1","service_id":"s1","text":"a","label":"4","categories":[]})"), DataError);
}

TEST_CASE("reviews survive a write/read round trip")
{
    std::vector<Review> reviews = {
        {"r1", "s1", "Tasty \"laksa\"\nwith ünïcode", 4, {"noodles", "spicy"}, 1600000000},
        {"r2", "s2", "", 0, {}, 0},
    };
    std::ostringstream out;
    write_reviews(out, reviews);
    CHECK(parse(out.str()) == reviews);
}

TEST_CASE("services, queries and judgments")
{
    std::istringstream services(R"({"id":"s1","name":"A","categories":["x"],"location":"here"})" "\n"
                                R"({"id":"s2","name":"B","categories":[],"location":""})");
    auto s = parse_services(services);
    REQUIRE(s.size() == 2);
    CHECK(s[0].name == "A");

    std::istringstream dup(R"({"id":"s1","name":"A","categories":[],"location":""})" "\n"
                           R"({"id":"s1","name":"B","categories":[],"location":""})");
    CHECK_THROWS_AS(parse_services(dup), DataError);

    std::istringstream queries("q1\tcheap noodles\nq2\tspicy crab\n");
    auto q = parse_queries(queries);
    REQUIRE(q.size() == 2);
    CHECK(q[1].text == "spicy crab");
    std::istringstream empty_text("q1\t\n");
    CHECK_THROWS_AS(parse_queries(empty_text), DataError);

    std::istringstream judgments("q1\tr1\t1\nq1\tr2\t0\n");
    auto j = parse_judgments(judgments);
    REQUIRE(j.size() == 2);
    CHECK(j[0].label == 1);
    std::istringstream bad("q1\tr1\tyes\n");
    CHECK_THROWS_AS(parse_judgments(bad), DataError);

    std::vector<Review> reviews = {{"r1", "s1", "t", 1, {}, 0}, {"r2", "s9", "t", 1, {}, 0}};
    CHECK_THROWS_AS(check_service_refs(reviews, s), DataError);
    reviews.pop_back();
    CHECK_NOTHROW(check_service_refs(reviews, s));
}

TEST_CASE("split_dataset is stratified and seeded")
{
    auto reviews = labelled(20);
    auto split = split_dataset(reviews, 0.1, 7);
    CHECK(split.train.size() == 90);
    CHECK(split.test.size() == 10);
    std::map<int, int> per_label;
    for (const auto& r : split.test) {
        ++per_label[r.label];
    }
    for (int label = 0; label < kNumStarClasses; ++label) {
        CHECK(per_label[label] == 2);
    }
    auto again = split_dataset(reviews, 0.1, 7);
    CHECK(again.train == split.train);
    CHECK(again.test == split.test);

    CHECK_THROWS_AS(split_dataset(reviews, 1.5, 7), ArgumentError);
    CHECK_THROWS_AS(split_dataset(reviews, 0.0, 7), ArgumentError);
    CHECK_THROWS_AS(split_dataset({}, 0.5, 7), ArgumentError);
}

TEST_CASE("split_dataset partitions the input for random label mixes")
{
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<Review> reviews;
        std::uniform_int_distribution<int> size(1, 60);
        std::uniform_int_distribution<int> label(0, 4);
        int n = size(rng);
        for (int i = 0; i < n; ++i) {
            reviews.push_back({"r" + std::to_string(i), "s", "t", label(rng), {}, 0});
        }
        double fraction = std::uniform_real_distribution<double>(0.05, 0.95)(rng);
        auto split = split_dataset(reviews, fraction, static_cast<std::uint64_t>(trial));
        std::multiset<std::string> all;
        for (const auto& r : split.train) {
            all.insert(r.id);
        }
        for (const auto& r : split.test) {
            CHECK(all.count(r.id) == 0);
            all.insert(r.id);
        }
        CHECK(all.size() == reviews.size());
        std::map<int, int> total;
        std::map<int, int> test;
        for (const auto& r : reviews) {
            ++total[r.label];
        }
        for (const auto& r : split.test) {
            ++test[r.label];
        }
        for (const auto& [l, count] : total) {
            CHECK(std::abs(test[l] - fraction * count) <= 1.0);
        }
    }
}
