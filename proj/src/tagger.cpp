#include "wsd/tagger.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include "wsd/error.hpp"
#include "wsd/text.hpp"

namespace wsd {

namespace {

constexpr std::array<std::string_view, kTagCount> kNames = {
    "CC", "CD", "DT", "EX", "FW", "IN", "JJ", "JJR", "JJS", "LS", "MD", "NN", "NNS", "NNP", "NNPS",
    "PDT", "POS", "PRP", "PRP$", "RB", "RBR", "RBS", "RP", "SYM", "TO", "UH", "VB", "VBD", "VBG",
    "VBN", "VBP", "VBZ", "WDT", "WP", "WP$", "WRB", "#", "$", "``", "''", "(", ")", ",", ".", ":",
};

bool ends_with(std::string_view s, std::string_view suffix) {
    return s.size() > suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

bool is_number(std::string_view s) {
    bool digit = false;
    for (char c : s) {
        if (std::isdigit(static_cast<unsigned char>(c))) digit = true;
        else if (c != '.' && c != ',' && c != '-' && c != '/' && c != '%') return false;
    }
    return digit;
}

std::optional<Tag> punctuation_tag(std::string_view s) {
    if (s == "." || s == "!" || s == "?") return Tag::Period;
    if (s == ",") return Tag::Comma;
    if (s == ":" || s == ";" || s == "--" || s == "-" || s == "...") return Tag::Colon;
    if (s == "(" || s == "[" || s == "{") return Tag::LeftParen;
    if (s == ")" || s == "]" || s == "}") return Tag::RightParen;
    if (s == "``" || s == "`" || s == "\"") return Tag::OpenQuote;
    if (s == "''" || s == "'") return Tag::CloseQuote;
    if (s == "$") return Tag::Dollar;
    if (s == "#") return Tag::Pound;
    if (!s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return text::is_punct(c); })) return Tag::SYM;
    return std::nullopt;
}

std::string trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return std::string(s);
}

}  // namespace

const std::array<Tag, kTagCount>& all_tags() {
    static const auto tags = [] {
        std::array<Tag, kTagCount> a{};
        for (std::size_t i = 0; i < kTagCount; ++i) a[i] = static_cast<Tag>(i);
        return a;
    }();
    return tags;
}

std::string_view tag_name(Tag t) { return kNames.at(static_cast<std::size_t>(t)); }

std::optional<Tag> try_parse_tag(std::string_view symbol) {
    if (symbol == "-LRB-") return Tag::LeftParen;
    if (symbol == "-RRB-") return Tag::RightParen;
    for (std::size_t i = 0; i < kTagCount; ++i)
        if (kNames[i] == symbol) return static_cast<Tag>(i);
    return std::nullopt;
}

Tag parse_tag(std::string_view symbol) {
    if (auto t = try_parse_tag(symbol)) return *t;
    throw Error("unknown tag \"" + std::string(symbol) + "\"");
}

TagFamily family_of(Tag t) {
    switch (t) {
        case Tag::NN: case Tag::NNS: case Tag::NNP: case Tag::NNPS:
            return TagFamily::noun;
        case Tag::VB: case Tag::VBD: case Tag::VBG: case Tag::VBN: case Tag::VBP: case Tag::VBZ:
            return TagFamily::verb;
        case Tag::JJ: case Tag::JJR: case Tag::JJS:
            return TagFamily::adjective;
        case Tag::RB: case Tag::RBR: case Tag::RBS:
            return TagFamily::adverb;
        default:
            return TagFamily::other;
    }
}

PartialTagClass PartialTagClass::of(Tag t) {
    switch (const auto f = family_of(t)) {
        case TagFamily::noun: return {f, Tag::NN};
        case TagFamily::verb: return {f, Tag::VB};
        case TagFamily::adjective: return {f, Tag::JJ};
        case TagFamily::adverb: return {f, Tag::RB};
        case TagFamily::other: return {f, t};
    }
    return {TagFamily::other, t};
}

std::string PartialTagClass::name() const {
    switch (family_) {
        case TagFamily::noun: return "NOUN";
        case TagFamily::verb: return "VERB";
        case TagFamily::adjective: return "ADJ";
        case TagFamily::adverb: return "ADV";
        case TagFamily::other: break;
    }
    return std::string(tag_name(representative_));
}

PartialTagClass partial_tag(Tag t) { return PartialTagClass::of(t); }

const std::vector<PartialTagClass>& all_partial_classes() {
    static const auto classes = [] {
        std::vector<PartialTagClass> v;
        for (auto t : all_tags()) {
            auto c = partial_tag(t);
            if (std::find(v.begin(), v.end(), c) == v.end()) v.push_back(c);
        }
        std::sort(v.begin(), v.end(), [](auto a, auto b) { return a.name() < b.name(); });
        return v;
    }();
    return classes;
}

bool is_content(Tag t) {
    const auto f = family_of(t);
    return f == TagFamily::noun || f == TagFamily::verb || f == TagFamily::adjective;
}

Tagger::Tagger(std::unordered_map<std::string, Tag> lexicon, std::vector<TagRule> rules)
    : lexicon_(std::move(lexicon)), rules_(std::move(rules)) {}

std::optional<Tag> Tagger::lookup(std::string_view word) const {
    if (auto it = lexicon_.find(std::string(word)); it != lexicon_.end()) return it->second;
    if (auto it = lexicon_.find(text::to_lower(word)); it != lexicon_.end()) return it->second;
    return std::nullopt;
}

Tag Tagger::guess_unknown(std::string_view word, bool sentence_initial) const {
    if (auto p = punctuation_tag(word)) return *p;
    if (is_number(word)) return Tag::CD;
    const bool capitalized = std::isupper(static_cast<unsigned char>(word.front())) != 0;
    if (capitalized && !sentence_initial) return ends_with(word, "s") && word.size() > 3 ? Tag::NNPS : Tag::NNP;

    const auto w = text::to_lower(word);
    if (w.find('-') != std::string::npos) return Tag::JJ;
    if (ends_with(w, "ing")) return Tag::VBG;
    if (ends_with(w, "ed")) return Tag::VBN;
    if (ends_with(w, "ly")) return Tag::RB;
    for (auto suffix : {"able", "ible", "ous", "ful", "ive", "ical", "less", "ish", "ic", "al"})
        if (ends_with(w, suffix)) return Tag::JJ;
    if (ends_with(w, "est")) return Tag::JJS;
    for (auto suffix : {"tion", "sion", "ment", "ness", "ity", "ism", "ance", "ence", "ship"})
        if (ends_with(w, suffix)) return Tag::NN;
    if (ends_with(w, "s") && !ends_with(w, "ss") && !ends_with(w, "us") && !ends_with(w, "is")) return Tag::NNS;
    return Tag::NN;
}

std::vector<TaggedToken> Tagger::tag_sentence(const std::vector<std::string>& tokens) const {
    std::vector<TaggedToken> out;
    out.reserve(tokens.size());
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const auto& w = tokens[i];
        auto tag = lookup(w);
        out.push_back({w, tag ? *tag : guess_unknown(w, i == 0)});
    }
    for (const auto& rule : rules_) {
        for (std::size_t i = 0; i < out.size(); ++i) {
            if (out[i].tag != rule.from) continue;
            bool fire = false;
            switch (rule.condition) {
                case TagRule::Condition::prev_tag:
                    fire = i > 0 && tag_name(out[i - 1].tag) == rule.value;
                    break;
                case TagRule::Condition::next_tag:
                    fire = i + 1 < out.size() && tag_name(out[i + 1].tag) == rule.value;
                    break;
                case TagRule::Condition::prev_word:
                    fire = i > 0 && text::to_lower(out[i - 1].surface) == rule.value;
                    break;
                case TagRule::Condition::next_word:
                    fire = i + 1 < out.size() && text::to_lower(out[i + 1].surface) == rule.value;
                    break;
            }
            if (fire) out[i].tag = rule.to;
        }
    }
    return out;
}

std::unordered_map<std::string, Tag> read_lexicon(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open lexicon " + path.string());
    std::unordered_map<std::string, Tag> lexicon;
    std::string line;
    for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
        const auto t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto tab = t.find('\t');
        const auto where = path.string() + ":" + std::to_string(lineno);
        if (tab == std::string::npos) throw ParseError(where + ": expected \"word<TAB>tag\"");
        const auto word = trim(std::string_view(t).substr(0, tab));
        const auto sym = trim(std::string_view(t).substr(tab + 1));
        auto tag = try_parse_tag(sym);
        if (word.empty() || !tag) throw ParseError(where + ": unknown tag \"" + sym + "\"");
        lexicon.insert_or_assign(word, *tag);
    }
    return lexicon;
}

TagRule parse_rule(std::string_view line) {
    const auto f = text::split_whitespace(line);
    if (f.size() != 6 || f[2] != "WHEN" || f[4] != "is")
        throw Error("malformed rule \"" + std::string(line) + "\" (expected FROM TO WHEN <condition> is X)");
    TagRule rule{parse_tag(f[0]), parse_tag(f[1]), TagRule::Condition::prev_tag, f[5]};
    if (f[3] == "prev_tag" || f[3] == "next_tag") {
        rule.condition = f[3] == "prev_tag" ? TagRule::Condition::prev_tag : TagRule::Condition::next_tag;
        rule.value = std::string(tag_name(parse_tag(f[5])));
    } else if (f[3] == "prev_word" || f[3] == "next_word") {
        rule.condition = f[3] == "prev_word" ? TagRule::Condition::prev_word : TagRule::Condition::next_word;
        rule.value = text::to_lower(f[5]);
    } else {
        throw Error("unknown rule condition \"" + f[3] + "\"");
    }
    return rule;
}

std::vector<TagRule> read_rules(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open rule file " + path.string());
    std::vector<TagRule> rules;
    std::string line;
    for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
        const auto t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        try {
            rules.push_back(parse_rule(t));
        } catch (const Error& e) {
            throw ParseError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return rules;
}

Tagger Tagger::load(const std::filesystem::path& lexicon, const std::optional<std::filesystem::path>& rules) {
    return Tagger(read_lexicon(lexicon), rules ? read_rules(*rules) : std::vector<TagRule>{});
}

Tagger Tagger::load_default() {
    const std::filesystem::path dir = WSD_DATA_DIR;
    return load(dir / "lexicon.tsv", dir / "rules.txt");
}

}  // namespace wsd
