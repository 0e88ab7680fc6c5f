#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "plateful/sentiment.hpp"

namespace plateful {

enum class Pos { ADJ, NOUN, VERB, ADV, DET, ADP, PART, PRON, PUNCT, OTHER };
enum class Dep { amod, acomp, nsubj, neg, root, other };

std::string_view to_string(Pos pos);
std::string_view to_string(Dep dep);
/// Accepts the tag set above plus common Universal Dependencies tags
/// (AUX -> VERB, PROPN -> NOUN, anything else -> OTHER).
Pos parse_pos(std::string_view text);
/// amod/acomp/nsubj/neg/ROOT; any other label maps to Dep::other.
Dep parse_dep(std::string_view text);

struct AnnotatedToken {
    int index = 0;
    std::string text;
    Pos pos = Pos::OTHER;
    Dep dep = Dep::other;
    int head = 0;  // self for the root
};

struct TagPair {
    bool negated = false;
    std::string adjective;
    std::string noun;

    /// "beautiful-restaurant", "not-good-food".
    std::string text() const;
    auto operator<=>(const TagPair&) const = default;
};

/// Parses "adj-noun" or "not-adj-noun".
TagPair parse_tag(std::string_view text);

struct AnnotatedSentence {
    std::vector<AnnotatedToken> tokens;
    /// Reference pairs, present when loaded from a gold-annotated file.
    std::optional<std::vector<TagPair>> gold_pairs;

    /// Tokens joined by single spaces.
    std::string text() const;
};

/// Throws DataError unless indices are contiguous from 0, heads are in
/// range, there is exactly one root and the head graph is a tree.
void validate_sentence(const AnnotatedSentence& sentence);

/// `index` and every token whose head chain reaches it, ascending.
std::vector<int> subtree(const AnnotatedSentence& sentence, int index);

bool is_negation_word(std::string_view lowercase_text);

/// Adjective-noun pairs in adjective order. amod adjectives pair with a noun
/// head; acomp adjectives pair with the leftmost nsubj noun in the subtree of
/// their head. A negation anywhere in that subtree marks the pair negated.
std::vector<TagPair> extract_pairs(const AnnotatedSentence& sentence);

/// Rule-based POS tagging and dependency assignment for plain text.
std::vector<AnnotatedSentence> annotate(std::string_view text);

/// Convenience: annotate then extract over every sentence.
std::vector<TagPair> extract_pairs_from_text(std::string_view text);

std::vector<AnnotatedSentence> load_annotated(const std::filesystem::path& path);
std::vector<AnnotatedSentence> parse_annotated(std::istream& in);
void write_annotated(std::ostream& out, const std::vector<AnnotatedSentence>& sentences);

struct ColoredTag {
    TagPair pair;
    Polarity polarity = Polarity::neutral;
    int count = 1;

    std::string text() const { return pair.text(); }
    bool operator==(const ColoredTag&) const = default;
};

/// Review polarity adjusted for negation: positive and negative swap when
/// the pair is negated, neutral stays.
Polarity tag_polarity(const TagPair& pair, Polarity review_polarity);

/// Merges identical pairs with counts, sorted by count descending then by
/// tag text. `review_polarity_of` supplies the base polarity of each pair.
std::vector<ColoredTag> aggregate_tags(const std::vector<TagPair>& pairs,
                                       const std::function<Polarity(const TagPair&)>& review_polarity_of);

struct ExtractionScore {
    std::size_t extracted = 0;
    std::size_t correct = 0;
    std::size_t gold = 0;

    double precision() const { return extracted == 0 ? 0.0 : static_cast<double>(correct) / extracted; }
    double recall() const { return gold == 0 ? 0.0 : static_cast<double>(correct) / gold; }
};

/// Per-pair precision/recall of `extracted[i]` against `gold[i]`, with
/// multiset matching inside each sentence.
ExtractionScore score_extraction(const std::vector<std::vector<TagPair>>& extracted,
                                 const std::vector<std::vector<TagPair>>& gold);

}  // namespace plateful
