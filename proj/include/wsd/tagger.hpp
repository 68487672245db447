#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace wsd {

/// The 45-tag Penn Treebank tagset.
enum class Tag : std::uint8_t {
    CC, CD, DT, EX, FW, IN, JJ, JJR, JJS, LS, MD, NN, NNS, NNP, NNPS, PDT, POS, PRP, PRP_S,
    RB, RBR, RBS, RP, SYM, TO, UH, VB, VBD, VBG, VBN, VBP, VBZ, WDT, WP, WP_S, WRB,
    Pound, Dollar, OpenQuote, CloseQuote, LeftParen, RightParen, Comma, Period, Colon,
};

inline constexpr std::size_t kTagCount = 45;

/// Every tag in enumeration order.
const std::array<Tag, kTagCount>& all_tags();

/// Penn symbol, e.g. "NNP", "PRP$", ",".
std::string_view tag_name(Tag t);

/// Parses a Penn symbol; accepts -LRB-/-RRB- for parentheses. Throws wsd::Error("unknown tag ...").
Tag parse_tag(std::string_view symbol);
std::optional<Tag> try_parse_tag(std::string_view symbol);

struct TaggedToken {
    std::string surface;
    Tag tag;

    friend bool operator==(const TaggedToken&, const TaggedToken&) = default;
};

enum class TagFamily : std::uint8_t { noun, verb, adjective, adverb, other };

TagFamily family_of(Tag t);

/// Equivalence class used by partial-tag matching: the four open-class families collapse
/// their tags (NN/NNS/NNP/NNPS are one class); every other tag is a class of its own.
class PartialTagClass {
public:
    static PartialTagClass of(Tag t);

    TagFamily family() const { return family_; }
    /// Canonical tag of the class: NN, VB, JJ, RB for the families, the tag itself otherwise.
    Tag representative() const { return representative_; }
    /// "NOUN", "VERB", "ADJ", "ADV", or the tag symbol for singleton classes.
    std::string name() const;

    friend bool operator==(PartialTagClass, PartialTagClass) = default;
    friend auto operator<=>(PartialTagClass a, PartialTagClass b) { return a.representative_ <=> b.representative_; }

private:
    PartialTagClass(TagFamily f, Tag rep) : family_(f), representative_(rep) {}
    TagFamily family_;
    Tag representative_;
};

PartialTagClass partial_tag(Tag t);

/// Every distinct partial-tag class, ordered by name.
const std::vector<PartialTagClass>& all_partial_classes();

/// True for the noun, verb and adjective families.
bool is_content(Tag t);

/// A contextual transformation "FROM TO WHEN <condition> is <value>".
struct TagRule {
    enum class Condition { prev_tag, next_tag, prev_word, next_word };
    Tag from;
    Tag to;
    Condition condition;
    std::string value;  // tag symbol or surface form
};

/// Lexicon lookup, unknown-word heuristics, then ordered contextual rules.
///
/// Unknown words: numbers -> CD; capitalized words not at sentence start -> NNP; then suffix
/// heuristics (-ing VBG, -ed VBN/VBD, -ly RB, -s NNS, adjectival suffixes JJ, ...); otherwise NN.
class Tagger {
public:
    Tagger() = default;
    Tagger(std::unordered_map<std::string, Tag> lexicon, std::vector<TagRule> rules);

    /// Lexicon: "word<TAB>tag" lines. Rules: "FROM TO WHEN prev_tag|next_tag|prev_word|next_word is X".
    /// Blank lines and lines starting with '#' are ignored in both.
    static Tagger load(const std::filesystem::path& lexicon, const std::optional<std::filesystem::path>& rules);
    /// The lexicon and rule files shipped in the data directory.
    static Tagger load_default();

    std::vector<TaggedToken> tag_sentence(const std::vector<std::string>& tokens) const;

    std::optional<Tag> lookup(std::string_view word) const;
    Tag guess_unknown(std::string_view word, bool sentence_initial) const;

    std::size_t lexicon_size() const { return lexicon_.size(); }
    const std::vector<TagRule>& rules() const { return rules_; }

private:
    std::unordered_map<std::string, Tag> lexicon_;
    std::vector<TagRule> rules_;
};

std::unordered_map<std::string, Tag> read_lexicon(const std::filesystem::path& path);
std::vector<TagRule> read_rules(const std::filesystem::path& path);
TagRule parse_rule(std::string_view line);

}  // namespace wsd
