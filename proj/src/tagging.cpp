#include "plateful/tagging.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_set>

#include "plateful/error.hpp"

namespace plateful {

namespace {

std::string lower(std::string_view s)
{
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

using WordSet = std::unordered_set<std::string_view>;

const WordSet kNegations = {"not", "n't", "never", "no"};

const WordSet kDeterminers = {"the", "a", "an", "this", "that", "these", "those", "my", "your", "his",
                              "her", "its", "our", "their", "some", "any", "every", "each", "all",
                              "no", "another", "both", "either", "neither", "much", "many", "few",
                              "several", "what", "which", "whose"};

const WordSet kPronouns = {"i", "you", "he", "she", "it", "we", "they", "me", "him", "them", "us",
                           "myself", "something", "everything", "nothing", "anything", "someone",
                           "everyone", "anyone", "who", "whom", "there", "one", "mine", "yours", "ours"};

const WordSet kAdpositions = {"of", "in", "on", "at", "from", "with", "for", "by", "about", "near",
                              "after", "before", "than", "over", "under", "without", "during", "across",
                              "around", "behind", "into", "like", "to", "per", "along", "beside",
                              "inside", "outside", "through", "despite", "except", "until", "via"};

const WordSet kConjunctions = {"and", "but", "or", "yet", "nor", "because", "although", "though",
                               "while", "if", "when", "since", "whereas", "unless", "so", "then"};

const WordSet kBeVerbs = {"is", "are", "was", "were", "be", "been", "being", "am", "'re", "'m"};

const WordSet kLinkingVerbs = {"seem", "seems", "seemed", "look", "looks", "looked", "taste", "tastes",
                               "tasted", "smell", "smells", "smelled", "feel", "feels", "felt", "became",
                               "become", "becomes", "remain", "remains", "remained", "stay", "stays",
                               "stayed", "sound", "sounds", "sounded", "get", "gets", "got"};

const WordSet kVerbs = {"have", "has", "had", "do", "does", "did", "ca", "can", "could", "will", "wo",
                        "would", "shall", "should", "may", "might", "must", "ordered", "order", "orders",
                        "tried", "try", "tries", "love", "loved", "loves", "like", "liked", "likes",
                        "enjoy", "enjoyed", "enjoys", "hate", "hated", "hates", "came", "come", "comes",
                        "went", "go", "goes", "recommend", "recommended", "found", "find", "finds",
                        "waited", "wait", "served", "serve", "serves", "make", "makes", "made", "ate",
                        "eat", "eats", "eaten", "want", "wanted", "wants", "need", "needs", "needed",
                        "return", "returned", "visit", "visited", "think", "thought", "know", "knew",
                        "expect", "expected", "paid", "pay", "pays", "cost", "costs", "took", "take",
                        "takes", "gave", "give", "gives", "offer", "offers", "offered", "say", "said",
                        "says", "let", "keep", "kept", "miss", "missed", "queue", "queued", "share",
                        "shared", "spent", "spend", "forgot", "forget", "arrived", "arrive", "arrives",
                        "left", "leave", "bought", "buy", "complain", "complained", "disappoint",
                        "disappointed", "cooked", "grilled", "steamed", "roasted", "baked",
                        "topped", "filled", "packed", "mixed", "used", "uses", "use", "comes", "tasted"};

const WordSet kAdverbs = {"very", "really", "so", "too", "quite", "extremely", "also", "just", "always",
                          "never", "still", "even", "rather", "super", "incredibly", "absolutely",
                          "totally", "fairly", "slightly", "here", "again", "definitely", "highly",
                          "overall", "almost", "simply", "truly", "somewhat", "way", "pretty", "bit",
                          "abit", "kinda", "sometimes", "often", "usually", "ever", "already", "only",
                          "however", "though", "today", "yesterday", "tonight", "now", "soon", "twice",
                          "once", "well", "enough", "more", "most", "less", "least", "as", "not"};

const WordSet kAdjectives = {
    "good", "great", "bad", "awful", "terrible", "horrible", "tasty", "delicious", "yummy", "bland",
    "salty", "sweet", "sour", "spicy", "hot", "cold", "warm", "fresh", "stale", "cheap", "expensive",
    "pricey", "affordable", "reasonable", "friendly", "rude", "slow", "fast", "quick", "clean", "dirty",
    "nice", "amazing", "excellent", "fantastic", "wonderful", "decent", "average", "mediocre", "poor",
    "generous", "small", "big", "large", "huge", "tiny", "long", "short", "crispy", "crunchy", "soggy",
    "tender", "juicy", "dry", "oily", "greasy", "soft", "hard", "chewy", "rich", "creamy", "thick",
    "thin", "beautiful", "cozy", "cosy", "noisy", "quiet", "crowded", "empty", "busy", "polite",
    "helpful", "attentive", "overpriced", "authentic", "fragrant", "flavourful", "flavorful",
    "tasteless", "perfect", "worst", "best", "better", "worse", "new", "old", "favourite", "favorite",
    "comfortable", "spacious", "cramped", "lukewarm", "bitter", "savoury", "savory", "smooth", "fluffy",
    "burnt", "raw", "undercooked", "overcooked", "mushy", "inexpensive", "pleasant", "awesome", "superb",
    "lovely", "ok", "okay", "fine", "fair", "filling", "limited", "wide", "extensive", "efficient",
    "prompt", "lazy", "fatty", "lean", "healthy", "unhealthy", "hearty", "light", "heavy", "satisfying",
    "disappointing", "impressive", "memorable", "forgettable", "sad", "happy", "sticky", "free", "extra",
    "worth", "gross", "nasty", "stingy", "huge", "mild", "fiery", "numbing", "aromatic", "succulent",
    "moist", "watery", "bouncy", "silky", "springy", "stuffy", "bright", "dim", "dark",
    "warm", "welcoming", "hostile", "cheerful", "grumpy", "unfriendly", "professional", "sloppy",
    "tidy", "messy", "spotless", "filthy", "pricy", "costly", "decadent", "refreshing",
    "icy", "chilled", "hot", "sizzling", "tangy", "zesty", "smoky", "charred", "pungent", "sublime",
    "incredible", "outstanding", "exceptional", "ordinary", "plain", "simple", "boring", "interesting",
    "unique", "special", "popular", "famous", "local", "traditional", "modern", "vegetarian", "vegan",
    "sluggish", "speedy", "attentive", "inattentive", "careless", "courteous", "knowledgeable",
    "tough", "rubbery", "flaky", "buttery", "doughy", "loud", "peaceful",
    "relaxing", "strong", "weak", "right", "wrong", "full", "stuffed", "hungry", "delightful", "fab",
    "skimpy", "meagre", "meager", "ample", "bountiful", "massive", "enormous", "minuscule", "measly"};

// -ly words that are not adverbs.
const WordSet kLyAdjectives = {"friendly", "lovely", "oily", "ugly", "lonely", "lively", "costly", "curly",
                               "silly", "smelly", "chilly", "homely", "unfriendly", "early", "ghastly"};
const WordSet kLyNouns = {"family", "jelly", "belly", "bully", "rally", "tally", "lily", "italy", "assembly",
                          "supply", "reply", "ally"};

bool is_adjective_word(const std::string& w)
{
    if (kAdjectives.contains(w) || kLyAdjectives.contains(w)) {
        return true;
    }
    auto ends = [&w](std::string_view suffix) {
        return w.size() > suffix.size() + 2 && w.compare(w.size() - suffix.size(), suffix.size(), suffix) == 0;
    };
    return ends("ous") || ends("ful") || ends("ive") || ends("able") || ends("ible") || ends("less") ||
           ends("ish");
}

bool is_copula(const std::string& w)
{
    return kBeVerbs.contains(w) || kLinkingVerbs.contains(w);
}

struct RawToken {
    std::string text;
    bool word = false;
};

bool word_char(unsigned char c)
{
    return std::isalnum(c) != 0 || c >= 0x80;
}

// Splits text into words, contraction pieces and single punctuation marks.
std::vector<RawToken> raw_tokens(std::string_view text)
{
    std::string normalized;
    normalized.reserve(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        // U+2019 right single quotation mark -> apostrophe
        if (i + 2 < text.size() && static_cast<unsigned char>(text[i]) == 0xE2 &&
            static_cast<unsigned char>(text[i + 1]) == 0x80 && static_cast<unsigned char>(text[i + 2]) == 0x99) {
            normalized.push_back('\'');
            i += 2;
        } else {
            normalized.push_back(text[i]);
        }
    }
    std::vector<RawToken> out;
    std::size_t i = 0;
    const auto n = normalized.size();
    while (i < n) {
        auto c = static_cast<unsigned char>(normalized[i]);
        if (std::isspace(c) != 0) {
            ++i;
            continue;
        }
        if (word_char(c)) {
            std::size_t j = i;
            while (j < n) {
                auto d = static_cast<unsigned char>(normalized[j]);
                if (word_char(d)) {
                    ++j;
                } else if ((d == '-' || d == '\'') && j + 1 < n &&
                           word_char(static_cast<unsigned char>(normalized[j + 1])) && d == '-') {
                    ++j;
                } else if (d == '.' && j > i && std::isdigit(static_cast<unsigned char>(normalized[j - 1])) != 0 &&
                           j + 1 < n && std::isdigit(static_cast<unsigned char>(normalized[j + 1])) != 0) {
                    ++j;
                } else {
                    break;
                }
            }
            std::string word = normalized.substr(i, j - i);
            i = j;
            // Contractions: "isn't" -> "is" "n't", "it's" -> "it" "'s".
            if (i + 1 < n && normalized[i] == '\'' &&
                std::isalpha(static_cast<unsigned char>(normalized[i + 1])) != 0) {
                std::size_t k = i + 1;
                while (k < n && std::isalpha(static_cast<unsigned char>(normalized[k])) != 0) {
                    ++k;
                }
                std::string tail = lower(normalized.substr(i, k - i));
                if (tail == "'t" && word.size() > 1 && std::tolower(static_cast<unsigned char>(word.back())) == 'n') {
                    word.pop_back();
                    out.push_back({word, true});
                    out.push_back({"n't", true});
                    i = k;
                    continue;
                }
                if (tail == "'s" || tail == "'re" || tail == "'m" || tail == "'ve" || tail == "'ll" || tail == "'d") {
                    out.push_back({word, true});
                    out.push_back({normalized.substr(i, k - i), true});
                    i = k;
                    continue;
                }
            }
            out.push_back({std::move(word), true});
            continue;
        }
        out.push_back({std::string(1, static_cast<char>(c)), false});
        ++i;
    }
    return out;
}

Pos tag_word(const std::vector<RawToken>& toks, std::size_t i)
{
    const auto& tok = toks[i];
    if (!tok.word) {
        return Pos::PUNCT;
    }
    std::string w = lower(tok.text);
    auto next_lower = [&](std::size_t k) { return k < toks.size() ? lower(toks[k].text) : std::string(); };
    if (w == "n't" || w == "not") {
        return Pos::PART;
    }
    if (w == "'s") {
        std::string prev = i > 0 ? lower(toks[i - 1].text) : std::string();
        return (kPronouns.contains(prev) || prev == "that" || prev == "what" || prev == "here")
                   ? Pos::VERB
                   : Pos::PART;
    }
    if (w == "'ve" || w == "'ll" || w == "'d" || kBeVerbs.contains(w)) {
        return Pos::VERB;
    }
    if (std::all_of(w.begin(), w.end(), [](unsigned char c) { return std::isdigit(c) != 0 || c == '.'; })) {
        return Pos::OTHER;
    }
    if (w == "like") {
        std::string prev = i > 0 ? lower(toks[i - 1].text) : std::string();
        bool verb = kPronouns.contains(prev) || kNegations.contains(prev) || prev == "do" || prev == "did" ||
                    prev == "really" || prev == "would";
        return verb ? Pos::VERB : Pos::ADP;
    }
    if (w == "to") {
        return kVerbs.contains(next_lower(i + 1)) ? Pos::PART : Pos::ADP;
    }
    if (w == "pretty" || w == "super" || w == "way") {
        return is_adjective_word(next_lower(i + 1)) ? Pos::ADV : (w == "way" ? Pos::NOUN : Pos::ADJ);
    }
    if (w == "that" || w == "this" || w == "these" || w == "those") {
        return Pos::DET;
    }
    if (kConjunctions.contains(w)) {
        return w == "so" && is_adjective_word(next_lower(i + 1)) ? Pos::ADV : Pos::OTHER;
    }
    if (kDeterminers.contains(w)) {
        return Pos::DET;
    }
    if (kPronouns.contains(w)) {
        return Pos::PRON;
    }
    if (kAdpositions.contains(w)) {
        return Pos::ADP;
    }
    if (kAdverbs.contains(w)) {
        return Pos::ADV;
    }
    if (kVerbs.contains(w) || kLinkingVerbs.contains(w)) {
        // Participles right before a noun ("fried rice") stay verbs so they
        // never form adjective pairs.
        return Pos::VERB;
    }
    if (is_adjective_word(w)) {
        return Pos::ADJ;
    }
    if (w.size() > 3 && w.ends_with("ly") && !kLyNouns.contains(w)) {
        return Pos::ADV;
    }
    return Pos::NOUN;
}

// Heuristic dependency assignment for one sentence whose tokens already carry
// POS tags. Produces a tree rooted at the first verb group (or a noun/adjective
// for verbless fragments).
void assign_dependencies(AnnotatedSentence& sentence)
{
    auto& t = sentence.tokens;
    const int n = static_cast<int>(t.size());
    std::vector<std::string> lw(t.size());
    for (int i = 0; i < n; ++i) {
        lw[static_cast<std::size_t>(i)] = lower(t[static_cast<std::size_t>(i)].text);
    }
    auto tok = [&t](int i) -> AnnotatedToken& { return t[static_cast<std::size_t>(i)]; };
    auto pos = [&](int i) { return tok(i).pos; };
    auto word = [&](int i) -> const std::string& { return lw[static_cast<std::size_t>(i)]; };
    std::vector<bool> assigned(t.size(), false);
    auto attach = [&](int i, int head, Dep dep) {
        tok(i).head = head;
        tok(i).dep = dep;
        assigned[static_cast<std::size_t>(i)] = true;
    };

    // Verb groups: VERB ((ADV|PART)* VERB)*; the last verb heads the group.
    struct Group {
        int begin, end, head;
        bool copular;
    };
    std::vector<Group> groups;
    for (int i = 0; i < n;) {
        if (pos(i) != Pos::VERB) {
            ++i;
            continue;
        }
        int end = i;
        int k = i + 1;
        while (true) {
            int m = k;
            while (m < n && (pos(m) == Pos::ADV || pos(m) == Pos::PART)) {
                ++m;
            }
            if (m < n && pos(m) == Pos::VERB) {
                end = m;
                k = m + 1;
            } else {
                break;
            }
        }
        groups.push_back({i, end, end, is_copula(word(end))});
        i = end + 1;
    }

    // Noun runs: maximal NOUN sequences; the last noun is the head.
    std::vector<int> run_head(t.size(), -1);
    for (int i = 0; i < n;) {
        if (pos(i) != Pos::NOUN) {
            ++i;
            continue;
        }
        int j = i;
        while (j + 1 < n && pos(j + 1) == Pos::NOUN) {
            ++j;
        }
        for (int k = i; k <= j; ++k) {
            run_head[static_cast<std::size_t>(k)] = j;
        }
        i = j + 1;
    }
    auto run_start = [&](int head) {
        int s = head;
        while (s > 0 && run_head[static_cast<std::size_t>(s - 1)] == head) {
            --s;
        }
        return s;
    };
    // True when the noun run is the object of a preposition: walking left over
    // determiners, adjectives, adverbs and numbers reaches an ADP.
    auto prepositional = [&](int head) -> int {
        for (int k = run_start(head) - 1; k >= 0; --k) {
            Pos p = pos(k);
            if (p == Pos::ADP) {
                return k;
            }
            if (p != Pos::DET && p != Pos::ADJ && p != Pos::ADV && p != Pos::OTHER) {
                return -1;
            }
            if (p == Pos::OTHER && !std::isdigit(static_cast<unsigned char>(word(k)[0]))) {
                return -1;
            }
        }
        return -1;
    };

    int root = -1;
    if (!groups.empty()) {
        root = groups.front().head;
    } else {
        for (int i = n - 1; i >= 0 && root < 0; --i) {
            if (pos(i) == Pos::NOUN && run_head[static_cast<std::size_t>(i)] == i) {
                root = i;
            }
        }
        for (int i = 0; i < n && root < 0; ++i) {
            if (pos(i) == Pos::ADJ) {
                root = i;
            }
        }
        if (root < 0) {
            root = 0;
        }
    }
    attach(root, root, Dep::root);

    // Clause spans: each verb group owns the tokens from the last boundary
    // word before it up to the next clause.
    auto boundary = [&](int i) {
        return (pos(i) == Pos::OTHER && kConjunctions.contains(word(i))) || word(i) == "," || word(i) == ";" ||
               word(i) == "which" || word(i) == "who";
    };
    std::vector<int> clause_begin(groups.size(), 0);
    for (std::size_t g = 1; g < groups.size(); ++g) {
        int lo = groups[g - 1].end + 1;
        int b = lo;
        for (int k = lo; k < groups[g].begin; ++k) {
            if (boundary(k)) {
                b = k + 1;
            }
        }
        clause_begin[g] = b;
    }
    std::vector<int> clause_of(t.size(), -1);
    for (std::size_t g = 0; g < groups.size(); ++g) {
        int lo = clause_begin[g];
        int hi = g + 1 < groups.size() ? clause_begin[g + 1] : n;
        for (int k = lo; k < hi; ++k) {
            clause_of[static_cast<std::size_t>(k)] = static_cast<int>(g);
        }
    }
    auto clause_head = [&](int i) {
        int g = clause_of[static_cast<std::size_t>(i)];
        return g < 0 ? root : groups[static_cast<std::size_t>(g)].head;
    };

    for (std::size_t g = 0; g < groups.size(); ++g) {
        const auto& grp = groups[g];
        for (int k = grp.begin; k <= grp.end; ++k) {
            if (k == grp.head || assigned[static_cast<std::size_t>(k)]) {
                continue;
            }
            attach(k, grp.head, kNegations.contains(word(k)) ? Dep::neg : Dep::other);
        }
        if (grp.head != root) {
            attach(grp.head, root, Dep::other);
        }
        // Subject: first noun run in the pre-verb region that is not a
        // prepositional object; otherwise a pronoun.
        int subject = -1;
        for (int k = clause_begin[g]; k < grp.begin && subject < 0; ++k) {
            if (pos(k) == Pos::NOUN && run_head[static_cast<std::size_t>(k)] == k && prepositional(k) < 0) {
                subject = k;
            }
        }
        for (int k = clause_begin[g]; k < grp.begin && subject < 0; ++k) {
            if (pos(k) == Pos::PRON && (k == 0 || pos(k - 1) != Pos::ADP)) {
                subject = k;
            }
        }
        if (subject >= 0 && !assigned[static_cast<std::size_t>(subject)]) {
            attach(subject, grp.head, Dep::nsubj);
        }
    }

    // amod: adjective whose following non-adjective token starts a noun run.
    for (int i = 0; i < n; ++i) {
        if (pos(i) != Pos::ADJ || assigned[static_cast<std::size_t>(i)]) {
            continue;
        }
        int j = i + 1;
        while (j < n && pos(j) == Pos::ADJ) {
            ++j;
        }
        if (j < n && pos(j) == Pos::NOUN) {
            attach(i, run_head[static_cast<std::size_t>(j)], Dep::amod);
        }
    }

    // Predicate adjectives and negation after copular verbs.
    for (const auto& grp : groups) {
        if (!grp.copular) {
            continue;
        }
        int g = clause_of[static_cast<std::size_t>(grp.head)];
        int hi = n;
        for (std::size_t h = 0; h < groups.size(); ++h) {
            if (static_cast<int>(h) == g + 1) {
                hi = clause_begin[h];
            }
        }
        for (int k = grp.end + 1; k < hi; ++k) {
            Pos p = pos(k);
            if (p == Pos::NOUN || p == Pos::ADP || p == Pos::PUNCT || p == Pos::VERB) {
                break;
            }
            if (assigned[static_cast<std::size_t>(k)]) {
                continue;
            }
            if (p == Pos::ADJ) {
                attach(k, grp.head, Dep::acomp);
            } else if (kNegations.contains(word(k))) {
                attach(k, grp.head, Dep::neg);
            }
        }
    }

    // Everything else.
    for (int i = 0; i < n; ++i) {
        if (assigned[static_cast<std::size_t>(i)]) {
            continue;
        }
        Pos p = pos(i);
        const std::string& w = word(i);
        if (p == Pos::NOUN) {
            int head = run_head[static_cast<std::size_t>(i)];
            if (head != i) {
                attach(i, head, Dep::other);
            } else if (int adp = prepositional(i); adp >= 0) {
                attach(i, adp, Dep::other);
            } else {
                attach(i, clause_head(i), Dep::other);
            }
        } else if (kNegations.contains(w) && p != Pos::DET) {
            attach(i, clause_head(i), Dep::neg);
        } else if (p == Pos::DET || p == Pos::OTHER) {
            int head = -1;
            for (int k = i + 1; k < n && k <= i + 4 && head < 0; ++k) {
                if (pos(k) == Pos::NOUN) {
                    head = run_head[static_cast<std::size_t>(k)];
                } else if (pos(k) == Pos::VERB || pos(k) == Pos::PUNCT || pos(k) == Pos::ADP ||
                           (pos(k) == Pos::OTHER && kConjunctions.contains(word(k)))) {
                    break;
                }
            }
            attach(i, head >= 0 ? head : clause_head(i), Dep::other);
        } else if (p == Pos::ADV) {
            int head = (i + 1 < n && (pos(i + 1) == Pos::ADJ || pos(i + 1) == Pos::ADV)) ? i + 1 : clause_head(i);
            attach(i, head, Dep::other);
        } else if (p == Pos::ADP) {
            int head = clause_head(i);
            for (int k = i - 1; k >= 0; --k) {
                if (pos(k) == Pos::NOUN || pos(k) == Pos::VERB) {
                    head = pos(k) == Pos::NOUN ? run_head[static_cast<std::size_t>(k)] : k;
                    break;
                }
                if (boundary(k)) {
                    break;
                }
            }
            attach(i, head, Dep::other);
        } else {
            attach(i, clause_head(i), Dep::other);
        }
    }

    // Break any cycle the local rules produced by hanging it off the root.
    for (int i = 0; i < n; ++i) {
        int cur = i;
        for (int steps = 0; steps <= n && cur != root; ++steps) {
            cur = tok(cur).head;
        }
        if (cur != root) {
            tok(i).head = root;
            if (tok(i).dep == Dep::root) {
                tok(i).dep = Dep::other;
            }
        }
    }
}

}  // namespace

std::string_view to_string(Pos pos)
{
    switch (pos) {
    case Pos::ADJ: return "ADJ";
    case Pos::NOUN: return "NOUN";
    case Pos::VERB: return "VERB";
    case Pos::ADV: return "ADV";
    case Pos::DET: return "DET";
    case Pos::ADP: return "ADP";
    case Pos::PART: return "PART";
    case Pos::PRON: return "PRON";
    case Pos::PUNCT: return "PUNCT";
    case Pos::OTHER: return "OTHER";
    }
    return "OTHER";
}

std::string_view to_string(Dep dep)
{
    switch (dep) {
    case Dep::amod: return "amod";
    case Dep::acomp: return "acomp";
    case Dep::nsubj: return "nsubj";
    case Dep::neg: return "neg";
    case Dep::root: return "ROOT";
    case Dep::other: return "other";
    }
    return "other";
}

Pos parse_pos(std::string_view text)
{
    static const std::map<std::string_view, Pos> table = {
        {"ADJ", Pos::ADJ},     {"NOUN", Pos::NOUN}, {"PROPN", Pos::NOUN}, {"VERB", Pos::VERB},
        {"AUX", Pos::VERB},    {"ADV", Pos::ADV},   {"DET", Pos::DET},    {"ADP", Pos::ADP},
        {"PART", Pos::PART},   {"PRON", Pos::PRON}, {"PUNCT", Pos::PUNCT}, {"OTHER", Pos::OTHER}};
    auto it = table.find(text);
    return it == table.end() ? Pos::OTHER : it->second;
}

Dep parse_dep(std::string_view text)
{
    if (text == "amod") return Dep::amod;
    if (text == "acomp") return Dep::acomp;
    if (text == "nsubj") return Dep::nsubj;
    if (text == "neg") return Dep::neg;
    if (text == "ROOT" || text == "root") return Dep::root;
    return Dep::other;
}

std::string TagPair::text() const
{
    return (negated ? "not-" : "") + adjective + "-" + noun;
}

TagPair parse_tag(std::string_view text)
{
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        auto dash = text.find('-', start);
        parts.emplace_back(text.substr(start, dash - start));
        if (dash == std::string_view::npos) {
            break;
        }
        start = dash + 1;
    }
    TagPair pair;
    std::size_t first = 0;
    if (parts.size() >= 3 && parts[0] == "not") {
        pair.negated = true;
        first = 1;
    }
    if (parts.size() - first < 2) {
        throw DataError("malformed tag '" + std::string(text) + "'");
    }
    pair.noun = lower(parts.back());
    std::string adj;
    for (std::size_t k = first; k + 1 < parts.size(); ++k) {
        adj += (adj.empty() ? "" : "-") + parts[k];
    }
    pair.adjective = lower(adj);
    if (pair.adjective.empty() || pair.noun.empty()) {
        throw DataError("malformed tag '" + std::string(text) + "'");
    }
    return pair;
}

std::string AnnotatedSentence::text() const
{
    std::string out;
    for (const auto& tok : tokens) {
        if (!out.empty()) {
            out.push_back(' ');
        }
        out += tok.text;
    }
    return out;
}

void validate_sentence(const AnnotatedSentence& sentence)
{
    const auto n = static_cast<int>(sentence.tokens.size());
    int roots = 0;
    for (int i = 0; i < n; ++i) {
        const auto& tok = sentence.tokens[static_cast<std::size_t>(i)];
        if (tok.index != i) {
            throw DataError("token indices must be contiguous from 0 (found " + std::to_string(tok.index) +
                            " at position " + std::to_string(i) + ")");
        }
        if (tok.head < 0 || tok.head >= n) {
            throw DataError("head " + std::to_string(tok.head) + " of token " + std::to_string(i) +
                            " is out of range");
        }
        if (tok.dep == Dep::root) {
            ++roots;
            if (tok.head != i) {
                throw DataError("root token " + std::to_string(i) + " must be its own head");
            }
        } else if (tok.head == i) {
            throw DataError("non-root token " + std::to_string(i) + " is its own head");
        }
    }
    if (n > 0 && roots != 1) {
        throw DataError("sentence has " + std::to_string(roots) + " roots, expected 1");
    }
    for (int i = 0; i < n; ++i) {
        int cur = i;
        int steps = 0;
        while (sentence.tokens[static_cast<std::size_t>(cur)].dep != Dep::root) {
            cur = sentence.tokens[static_cast<std::size_t>(cur)].head;
            if (++steps > n) {
                throw DataError("dependency cycle through token " + std::to_string(i));
            }
        }
    }
}

std::vector<int> subtree(const AnnotatedSentence& sentence, int index)
{
    const auto n = static_cast<int>(sentence.tokens.size());
    if (index < 0 || index >= n) {
        throw ArgumentError("token index " + std::to_string(index) + " out of range");
    }
    std::vector<std::vector<int>> children(static_cast<std::size_t>(n));
    for (const auto& tok : sentence.tokens) {
        if (tok.head != tok.index) {
            children[static_cast<std::size_t>(tok.head)].push_back(tok.index);
        }
    }
    std::vector<int> out;
    std::vector<int> stack = {index};
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    while (!stack.empty()) {
        int cur = stack.back();
        stack.pop_back();
        if (seen[static_cast<std::size_t>(cur)]) {
            continue;
        }
        seen[static_cast<std::size_t>(cur)] = true;
        out.push_back(cur);
        for (int c : children[static_cast<std::size_t>(cur)]) {
            stack.push_back(c);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool is_negation_word(std::string_view lowercase_text)
{
    return kNegations.contains(lowercase_text);
}

std::vector<TagPair> extract_pairs(const AnnotatedSentence& sentence)
{
    std::vector<TagPair> pairs;
    const auto& toks = sentence.tokens;
    for (const auto& adj : toks) {
        if (adj.pos != Pos::ADJ) {
            continue;
        }
        int noun = -1;
        if (adj.dep == Dep::amod) {
            if (toks[static_cast<std::size_t>(adj.head)].pos == Pos::NOUN) {
                noun = adj.head;
            }
        } else if (adj.dep == Dep::acomp) {
            for (int k : subtree(sentence, adj.head)) {
                const auto& cand = toks[static_cast<std::size_t>(k)];
                if (cand.pos == Pos::NOUN && cand.dep == Dep::nsubj) {
                    noun = k;
                    break;
                }
            }
        }
        if (noun < 0) {
            continue;
        }
        bool negated = false;
        for (int k : subtree(sentence, adj.head)) {
            const auto& cand = toks[static_cast<std::size_t>(k)];
            if (cand.dep == Dep::neg || is_negation_word(lower(cand.text))) {
                negated = true;
                break;
            }
        }
        pairs.push_back({negated, lower(adj.text), lower(toks[static_cast<std::size_t>(noun)].text)});
    }
    return pairs;
}

std::vector<AnnotatedSentence> annotate(std::string_view text)
{
    auto toks = raw_tokens(text);
    std::vector<AnnotatedSentence> sentences;
    std::size_t start = 0;
    auto flush = [&](std::size_t end) {
        if (end <= start) {
            return;
        }
        std::vector<RawToken> slice(toks.begin() + static_cast<std::ptrdiff_t>(start),
                                    toks.begin() + static_cast<std::ptrdiff_t>(end));
        AnnotatedSentence s;
        for (std::size_t i = 0; i < slice.size(); ++i) {
            s.tokens.push_back({static_cast<int>(i), slice[i].text, tag_word(slice, i), Dep::other, 0});
        }
        assign_dependencies(s);
        sentences.push_back(std::move(s));
        start = end;
    };
    for (std::size_t i = 0; i < toks.size(); ++i) {
        const auto& w = toks[i].text;
        bool terminal = !toks[i].word && (w == "." || w == "!" || w == "?");
        bool next_terminal = i + 1 < toks.size() && !toks[i + 1].word &&
                             (toks[i + 1].text == "." || toks[i + 1].text == "!" || toks[i + 1].text == "?");
        if (terminal && !next_terminal) {
            flush(i + 1);
        }
    }
    flush(toks.size());
    return sentences;
}

std::vector<TagPair> extract_pairs_from_text(std::string_view text)
{
    std::vector<TagPair> out;
    for (const auto& s : annotate(text)) {
        auto pairs = extract_pairs(s);
        out.insert(out.end(), pairs.begin(), pairs.end());
    }
    return out;
}

std::vector<AnnotatedSentence> parse_annotated(std::istream& in)
{
    std::vector<AnnotatedSentence> sentences;
    AnnotatedSentence current;
    std::size_t sentence_line = 0;
    auto finish = [&]() {
        if (current.tokens.empty()) {
            if (current.gold_pairs) {
                throw DataError("gold pairs without tokens", sentence_line);
            }
            return;
        }
        try {
            validate_sentence(current);
        } catch (const DataError& e) {
            throw DataError(e.what(), sentence_line);
        }
        sentences.push_back(std::move(current));
        current = AnnotatedSentence{};
    };
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.find_first_not_of(" \t") == std::string::npos) {
            finish();
            continue;
        }
        if (current.tokens.empty() && !current.gold_pairs) {
            sentence_line = lineno;
        }
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, '\t')) {
            fields.push_back(field);
        }
        if (line.rfind("#pairs", 0) == 0) {
            std::vector<TagPair> gold;
            if (fields.size() >= 2) {
                std::stringstream tags(fields[1]);
                std::string tag;
                while (std::getline(tags, tag, ',')) {
                    tag.erase(0, tag.find_first_not_of(' '));
                    tag.erase(tag.find_last_not_of(' ') + 1);
                    if (!tag.empty()) {
                        try {
                            gold.push_back(parse_tag(tag));
                        } catch (const DataError& e) {
                            throw DataError(e.what(), lineno);
                        }
                    }
                }
            }
            current.gold_pairs = std::move(gold);
            continue;
        }
        if (line[0] == '#') {
            continue;
        }
        if (fields.size() != 5) {
            throw DataError("expected index<TAB>text<TAB>pos<TAB>head<TAB>dep", lineno);
        }
        AnnotatedToken tok;
        try {
            std::size_t used = 0;
            tok.index = std::stoi(fields[0], &used);
            if (used != fields[0].size()) {
                throw std::invalid_argument("index");
            }
            tok.head = std::stoi(fields[3], &used);
            if (used != fields[3].size()) {
                throw std::invalid_argument("head");
            }
        } catch (const std::logic_error&) {
            throw DataError("token index and head must be integers", lineno);
        }
        tok.text = fields[1];
        tok.pos = parse_pos(fields[2]);
        tok.dep = parse_dep(fields[4]);
        current.tokens.push_back(std::move(tok));
    }
    finish();
    return sentences;
}

std::vector<AnnotatedSentence> load_annotated(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    return parse_annotated(in);
}

void write_annotated(std::ostream& out, const std::vector<AnnotatedSentence>& sentences)
{
    for (const auto& s : sentences) {
        for (const auto& tok : s.tokens) {
            out << tok.index << '\t' << tok.text << '\t' << to_string(tok.pos) << '\t' << tok.head << '\t'
                << to_string(tok.dep) << '\n';
        }
        if (s.gold_pairs) {
            out << "#pairs\t";
            for (std::size_t k = 0; k < s.gold_pairs->size(); ++k) {
                out << (k ? "," : "") << (*s.gold_pairs)[k].text();
            }
            out << '\n';
        }
        out << '\n';
    }
}

Polarity tag_polarity(const TagPair& pair, Polarity review_polarity)
{
    if (!pair.negated || review_polarity == Polarity::neutral) {
        return review_polarity;
    }
    return review_polarity == Polarity::positive ? Polarity::negative : Polarity::positive;
}

std::vector<ColoredTag> aggregate_tags(const std::vector<TagPair>& pairs,
                                       const std::function<Polarity(const TagPair&)>& review_polarity_of)
{
    std::map<TagPair, int> counts;
    std::vector<TagPair> order;
    for (const auto& p : pairs) {
        if (counts[p]++ == 0) {
            order.push_back(p);
        }
    }
    std::vector<ColoredTag> tags;
    tags.reserve(order.size());
    for (const auto& p : order) {
        tags.push_back({p, tag_polarity(p, review_polarity_of(p)), counts[p]});
    }
    std::stable_sort(tags.begin(), tags.end(), [](const ColoredTag& a, const ColoredTag& b) {
        if (a.count != b.count) {
            return a.count > b.count;
        }
        return a.text() < b.text();
    });
    return tags;
}

ExtractionScore score_extraction(const std::vector<std::vector<TagPair>>& extracted,
                                 const std::vector<std::vector<TagPair>>& gold)
{
    if (extracted.size() != gold.size()) {
        throw ArgumentError("extracted and gold lists differ in length");
    }
    ExtractionScore score;
    for (std::size_t i = 0; i < extracted.size(); ++i) {
        std::map<TagPair, int> remaining;
        for (const auto& g : gold[i]) {
            ++remaining[g];
        }
        score.gold += gold[i].size();
        score.extracted += extracted[i].size();
        for (const auto& e : extracted[i]) {
            auto it = remaining.find(e);
            if (it != remaining.end() && it->second > 0) {
                --it->second;
                ++score.correct;
            }
        }
    }
    return score;
}

}  // namespace plateful
