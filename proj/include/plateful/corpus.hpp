#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace plateful {

inline constexpr int kNumStarClasses = 5;

struct Review {
    std::string id;
    std::string service_id;
    std::string text;
    int label = 0;  // star class 0..4
    std::vector<std::string> categories;
    std::int64_t timestamp = 0;

    bool operator==(const Review&) const = default;
};

struct FoodService {
    std::string id;
    std::string name;
    std::vector<std::string> categories;
    std::string location;

    bool operator==(const FoodService&) const = default;
};

struct Query {
    std::string id;
    std::string text;
};

struct RelevanceJudgment {
    std::string query_id;
    std::string doc_id;
    int label = 0;
};

/// Lowercase and split on every non-alphanumeric code point. Empty fragments
/// are dropped; no stemming and no stop words.
std::vector<std::string> tokenize(std::string_view text);

std::vector<Review> load_reviews(const std::filesystem::path& path);
std::vector<Review> parse_reviews(std::istream& in);
void write_reviews(std::ostream& out, const std::vector<Review>& reviews);
void save_reviews(const std::filesystem::path& path, const std::vector<Review>& reviews);

/// ASCII-lowercased, duplicates dropped, first occurrence order kept.
std::vector<std::string> dedup_categories(const std::vector<std::string>& raw);

/// Validates one review against the schema invariants, throwing DataError.
void validate_review(const Review& review);

std::vector<FoodService> load_services(const std::filesystem::path& path);
std::vector<FoodService> parse_services(std::istream& in);

std::vector<Query> load_queries(const std::filesystem::path& path);
std::vector<Query> parse_queries(std::istream& in);

std::vector<RelevanceJudgment> load_judgments(const std::filesystem::path& path);
std::vector<RelevanceJudgment> parse_judgments(std::istream& in);

/// Checks that every review names an existing service.
void check_service_refs(const std::vector<Review>& reviews,
                        const std::vector<FoodService>& services);

struct DatasetSplit {
    std::vector<Review> train;
    std::vector<Review> test;
};

/// Seeded split, stratified per label: each label contributes
/// round(count * test_fraction) items to the test side.
DatasetSplit split_dataset(const std::vector<Review>& reviews, double test_fraction,
                           std::uint64_t seed);

}  // namespace plateful
