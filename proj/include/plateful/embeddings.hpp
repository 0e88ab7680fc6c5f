#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace plateful {

using Vector = std::vector<double>;

/// Word -> dense vector table in the plain-text GloVe layout.
class EmbeddingTable {
  public:
    explicit EmbeddingTable(std::size_t dim = 0) : m_dim(dim) {}

    std::size_t dim() const { return m_dim; }
    std::size_t size() const { return m_vectors.size(); }
    /// nullptr when `word` is out of vocabulary.
    const Vector* find(const std::string& word) const;
    /// Inserts unless present; returns false when the word was already stored.
    bool insert(std::string word, Vector values);

  private:
    std::size_t m_dim;
    std::unordered_map<std::string, Vector> m_vectors;
};

EmbeddingTable load_embeddings(const std::filesystem::path& path, std::size_t expected_dim);
EmbeddingTable parse_embeddings(std::istream& in, std::size_t expected_dim);

/// Mean of in-vocabulary token vectors; zero vector when none is known.
Vector embed_sentence(const EmbeddingTable& table, const std::vector<std::string>& tokens);

/// u.v / (|u||v|), or 0 when either norm is 0.
double cosine(std::span<const double> u, std::span<const double> v);

/// Precomputed per-document vectors, TSV `doc_id<TAB>v1,v2,...`.
std::map<std::string, Vector> load_doc_vectors(const std::filesystem::path& path,
                                               std::size_t expected_dim);
std::map<std::string, Vector> parse_doc_vectors(std::istream& in, std::size_t expected_dim);

}  // namespace plateful
