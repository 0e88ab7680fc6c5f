#include "plateful/embeddings.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "plateful/error.hpp"

namespace plateful {

namespace {

double parse_double(std::string_view field, std::size_t lineno)
{
    double value = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
        throw DataError("cannot parse number '" + std::string(field) + "'", lineno);
    }
    return value;
}

}  // namespace

const Vector* EmbeddingTable::find(const std::string& word) const
{
    auto it = m_vectors.find(word);
    return it == m_vectors.end() ? nullptr : &it->second;
}

bool EmbeddingTable::insert(std::string word, Vector values)
{
    if (values.size() != m_dim) {
        throw ArgumentError("vector for '" + word + "' has dimension " + std::to_string(values.size()) +
                            ", expected " + std::to_string(m_dim));
    }
    return m_vectors.emplace(std::move(word), std::move(values)).second;
}

EmbeddingTable parse_embeddings(std::istream& in, std::size_t expected_dim)
{
    if (expected_dim == 0) {
        throw ArgumentError("embedding dimension must be positive");
    }
    EmbeddingTable table(expected_dim);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        std::istringstream fields(line);
        std::string word;
        if (!(fields >> word)) {
            continue;
        }
        Vector values;
        values.reserve(expected_dim);
        std::string field;
        while (fields >> field) {
            values.push_back(parse_double(field, lineno));
        }
        if (values.size() != expected_dim) {
            throw DataError("expected " + std::to_string(expected_dim) + " values for '" + word + "', got " +
                                std::to_string(values.size()),
                            lineno);
        }
        table.insert(std::move(word), std::move(values));
    }
    return table;
}

EmbeddingTable load_embeddings(const std::filesystem::path& path, std::size_t expected_dim)
{
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    return parse_embeddings(in, expected_dim);
}

Vector embed_sentence(const EmbeddingTable& table, const std::vector<std::string>& tokens)
{
    Vector sum(table.dim(), 0.0);
    std::size_t known = 0;
    for (const auto& t : tokens) {
        if (const auto* v = table.find(t)) {
            for (std::size_t i = 0; i < sum.size(); ++i) {
                sum[i] += (*v)[i];
            }
            ++known;
        }
    }
    if (known > 0) {
        for (auto& x : sum) {
            x /= static_cast<double>(known);
        }
    }
    return sum;
}

double cosine(std::span<const double> u, std::span<const double> v)
{
    if (u.size() != v.size()) {
        throw ArgumentError("cosine of vectors with different lengths");
    }
    double dot = 0.0;
    double nu = 0.0;
    double nv = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        dot += u[i] * v[i];
        nu += u[i] * u[i];
        nv += v[i] * v[i];
    }
    if (nu == 0.0 || nv == 0.0) {
        return 0.0;
    }
    double c = dot / (std::sqrt(nu) * std::sqrt(nv));
    return std::clamp(c, -1.0, 1.0);
}

std::map<std::string, Vector> parse_doc_vectors(std::istream& in, std::size_t expected_dim)
{
    std::map<std::string, Vector> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        auto tab = line.find('\t');
        if (tab == std::string::npos || tab == 0) {
            throw DataError("expected doc_id<TAB>v1,v2,...", lineno);
        }
        std::string id = line.substr(0, tab);
        Vector values;
        std::string_view rest(line);
        rest.remove_prefix(tab + 1);
        while (true) {
            auto comma = rest.find(',');
            values.push_back(parse_double(rest.substr(0, comma), lineno));
            if (comma == std::string_view::npos) {
                break;
            }
            rest.remove_prefix(comma + 1);
        }
        if (values.size() != expected_dim) {
            throw DataError("document vector for '" + id + "' has " + std::to_string(values.size()) +
                                " values, expected " + std::to_string(expected_dim),
                            lineno);
        }
        if (!out.emplace(id, std::move(values)).second) {
            throw DataError("duplicate document vector '" + id + "'", lineno);
        }
    }
    return out;
}

std::map<std::string, Vector> load_doc_vectors(const std::filesystem::path& path, std::size_t expected_dim)
{
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    return parse_doc_vectors(in, expected_dim);
}

}  // namespace plateful
