#include "plateful/corpus.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <fstream>
#include <locale>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "plateful/error.hpp"

namespace plateful {

namespace {

using nlohmann::json;

const std::locale* unicode_locale()
{
    static const std::optional<std::locale> loc = []() -> std::optional<std::locale> {
        for (const char* name : {"C.UTF-8", "C.utf8", "en_US.UTF-8"}) {
            try {
                return std::locale(name);
            } catch (const std::runtime_error&) {
            }
        }
        return std::nullopt;
    }();
    return loc ? &*loc : nullptr;
}

const std::ctype<wchar_t>* unicode_ctype()
{
    const auto* loc = unicode_locale();
    return loc != nullptr ? &std::use_facet<std::ctype<wchar_t>>(*loc) : nullptr;
}

// Decodes one code point starting at text[pos]; returns 0xFFFFFFFF for an
// invalid sequence and advances pos past the consumed bytes.
char32_t next_code_point(std::string_view text, std::size_t& pos)
{
    auto lead = static_cast<unsigned char>(text[pos++]);
    if (lead < 0x80) {
        return lead;
    }
    int extra = 0;
    char32_t cp = 0;
    if ((lead & 0xE0) == 0xC0) {
        extra = 1;
        cp = lead & 0x1F;
    } else if ((lead & 0xF0) == 0xE0) {
        extra = 2;
        cp = lead & 0x0F;
    } else if ((lead & 0xF8) == 0xF0) {
        extra = 3;
        cp = lead & 0x07;
    } else {
        return 0xFFFFFFFF;
    }
    for (int i = 0; i < extra; ++i) {
        if (pos >= text.size()) {
            return 0xFFFFFFFF;
        }
        auto cont = static_cast<unsigned char>(text[pos]);
        if ((cont & 0xC0) != 0x80) {
            return 0xFFFFFFFF;
        }
        cp = (cp << 6) | (cont & 0x3F);
        ++pos;
    }
    return cp;
}

void append_utf8(std::string& out, char32_t cp)
{
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

std::ifstream open_input(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    return in;
}

bool blank(const std::string& line)
{
    return std::all_of(line.begin(), line.end(),
                       [](unsigned char c) { return std::isspace(c) != 0; });
}

std::vector<std::string> split_tabs(const std::string& line)
{
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        auto tab = line.find('\t', start);
        fields.push_back(line.substr(start, tab - start));
        if (tab == std::string::npos) {
            break;
        }
        start = tab + 1;
    }
    if (!fields.empty() && !fields.back().empty() && fields.back().back() == '\r') {
        fields.back().pop_back();
    }
    return fields;
}

std::string lower_ascii(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

template <typename T>
T required(const json& obj, const char* key, std::size_t line)
{
    auto it = obj.find(key);
    if (it == obj.end()) {
        throw DataError(std::string("missing field '") + key + "'", line);
    }
    try {
        return it->get<T>();
    } catch (const json::exception&) {
        throw DataError(std::string("field '") + key + "' has the wrong type", line);
    }
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text)
{
    std::vector<std::string> tokens;
    std::string current;
    const auto* ctype = unicode_ctype();
    std::size_t pos = 0;
    while (pos < text.size()) {
        char32_t cp = next_code_point(text, pos);
        bool alnum = false;
        if (cp < 0x80) {
            alnum = std::isalnum(static_cast<int>(cp)) != 0;
            if (alnum) {
                cp = static_cast<char32_t>(std::tolower(static_cast<int>(cp)));
            }
        } else if (cp != 0xFFFFFFFF) {
            if (ctype != nullptr) {
                auto wc = static_cast<wchar_t>(cp);
                alnum = ctype->is(std::ctype_base::alnum, wc);
                if (alnum) {
                    cp = static_cast<char32_t>(ctype->tolower(wc));
                }
            } else {
                alnum = true;
            }
        }
        if (alnum) {
            append_utf8(current, cp);
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) {
        tokens.push_back(std::move(current));
    }
    return tokens;
}

std::vector<std::string> dedup_categories(const std::vector<std::string>& raw)
{
    std::vector<std::string> out;
    std::unordered_set<std::string> seen;
    for (const auto& c : raw) {
        auto lc = lower_ascii(c);
        if (seen.insert(lc).second) {
            out.push_back(std::move(lc));
        }
    }
    return out;
}

void validate_review(const Review& review)
{
    if (review.id.empty()) {
        throw DataError("review id is empty");
    }
    if (review.label < 0 || review.label >= kNumStarClasses) {
        throw DataError("label " + std::to_string(review.label) + " out of range 0..4");
    }
}

std::vector<Review> parse_reviews(std::istream& in)
{
    std::vector<Review> reviews;
    std::map<std::string, std::size_t> seen;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (blank(line)) {
            continue;
        }
        json obj;
        try {
            obj = json::parse(line);
        } catch (const json::parse_error& e) {
            throw DataError(std::string("malformed JSON: ") + e.what(), lineno);
        }
        if (!obj.is_object()) {
            throw DataError("expected a JSON object", lineno);
        }
        Review r;
        r.id = required<std::string>(obj, "id", lineno);
        r.service_id = required<std::string>(obj, "service_id", lineno);
        r.text = required<std::string>(obj, "text", lineno);
        r.label = required<int>(obj, "label", lineno);
        r.categories = dedup_categories(required<std::vector<std::string>>(obj, "categories", lineno));
        if (obj.contains("timestamp")) {
            r.timestamp = required<std::int64_t>(obj, "timestamp", lineno);
        }
        try {
            validate_review(r);
        } catch (const DataError& e) {
            throw DataError(e.what(), lineno);
        }
        if (auto [it, fresh] = seen.emplace(r.id, lineno); !fresh) {
            throw DataError("duplicate review id '" + r.id + "' (first seen on line " +
                                std::to_string(it->second) + ")",
                            lineno);
        }
        reviews.push_back(std::move(r));
    }
    return reviews;
}

std::vector<Review> load_reviews(const std::filesystem::path& path)
{
    auto in = open_input(path);
    return parse_reviews(in);
}

void write_reviews(std::ostream& out, const std::vector<Review>& reviews)
{
    for (const auto& r : reviews) {
        json obj = {{"id", r.id},
                    {"service_id", r.service_id},
                    {"text", r.text},
                    {"label", r.label},
                    {"categories", r.categories}};
        if (r.timestamp != 0) {
            obj["timestamp"] = r.timestamp;
        }
        out << obj.dump() << '\n';
    }
}

void save_reviews(const std::filesystem::path& path, const std::vector<Review>& reviews)
{
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    write_reviews(out, reviews);
}

std::vector<FoodService> parse_services(std::istream& in)
{
    std::vector<FoodService> services;
    std::set<std::string> seen;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (blank(line)) {
            continue;
        }
        json obj;
        try {
            obj = json::parse(line);
        } catch (const json::parse_error& e) {
            throw DataError(std::string("malformed JSON: ") + e.what(), lineno);
        }
        FoodService s;
        s.id = required<std::string>(obj, "id", lineno);
        s.name = required<std::string>(obj, "name", lineno);
        s.categories = dedup_categories(required<std::vector<std::string>>(obj, "categories", lineno));
        s.location = required<std::string>(obj, "location", lineno);
        if (s.id.empty()) {
            throw DataError("service id is empty", lineno);
        }
        if (!seen.insert(s.id).second) {
            throw DataError("duplicate service id '" + s.id + "'", lineno);
        }
        services.push_back(std::move(s));
    }
    return services;
}

std::vector<FoodService> load_services(const std::filesystem::path& path)
{
    auto in = open_input(path);
    return parse_services(in);
}

std::vector<Query> parse_queries(std::istream& in)
{
    std::vector<Query> queries;
    std::set<std::string> seen;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (blank(line)) {
            continue;
        }
        auto fields = split_tabs(line);
        if (fields.size() != 2) {
            throw DataError("expected query_id<TAB>text", lineno);
        }
        if (fields[0].empty() || blank(fields[1])) {
            throw DataError("query id and text must be nonempty", lineno);
        }
        if (!seen.insert(fields[0]).second) {
            throw DataError("duplicate query id '" + fields[0] + "'", lineno);
        }
        queries.push_back({fields[0], fields[1]});
    }
    return queries;
}

std::vector<Query> load_queries(const std::filesystem::path& path)
{
    auto in = open_input(path);
    return parse_queries(in);
}

std::vector<RelevanceJudgment> parse_judgments(std::istream& in)
{
    std::vector<RelevanceJudgment> judgments;
    std::set<std::pair<std::string, std::string>> seen;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (blank(line)) {
            continue;
        }
        auto fields = split_tabs(line);
        if (fields.size() != 3) {
            throw DataError("expected query_id<TAB>doc_id<TAB>label", lineno);
        }
        if (fields[2] != "0" && fields[2] != "1") {
            throw DataError("relevance label must be 0 or 1", lineno);
        }
        if (!seen.emplace(fields[0], fields[1]).second) {
            throw DataError("duplicate judgment for (" + fields[0] + ", " + fields[1] + ")", lineno);
        }
        judgments.push_back({fields[0], fields[1], fields[2] == "1" ? 1 : 0});
    }
    return judgments;
}

std::vector<RelevanceJudgment> load_judgments(const std::filesystem::path& path)
{
    auto in = open_input(path);
    return parse_judgments(in);
}

void check_service_refs(const std::vector<Review>& reviews,
                        const std::vector<FoodService>& services)
{
    std::unordered_set<std::string> ids;
    for (const auto& s : services) {
        ids.insert(s.id);
    }
    for (const auto& r : reviews) {
        if (!ids.contains(r.service_id)) {
            throw DataError("review '" + r.id + "' refers to unknown service '" + r.service_id + "'");
        }
    }
}

DatasetSplit split_dataset(const std::vector<Review>& reviews, double test_fraction,
                           std::uint64_t seed)
{
    if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
        throw ArgumentError("test_fraction must lie in (0, 1)");
    }
    if (reviews.empty()) {
        throw ArgumentError("cannot split an empty dataset");
    }
    std::array<std::vector<std::size_t>, kNumStarClasses> by_label;
    for (std::size_t i = 0; i < reviews.size(); ++i) {
        by_label[static_cast<std::size_t>(reviews[i].label)].push_back(i);
    }
    std::mt19937_64 rng(seed);
    std::vector<bool> in_test(reviews.size(), false);
    for (auto& members : by_label) {
        std::shuffle(members.begin(), members.end(), rng);
        auto take = static_cast<std::size_t>(std::llround(static_cast<double>(members.size()) * test_fraction));
        for (std::size_t j = 0; j < take; ++j) {
            in_test[members[j]] = true;
        }
    }
    DatasetSplit split;
    for (std::size_t i = 0; i < reviews.size(); ++i) {
        (in_test[i] ? split.test : split.train).push_back(reviews[i]);
    }
    return split;
}

}  // namespace plateful
