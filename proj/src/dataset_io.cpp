#include "wsd/dataset_io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "wsd/binary_io.hpp"
#include "wsd/error.hpp"
#include "wsd/text.hpp"

namespace wsd {

namespace pt = boost::property_tree;

namespace {

constexpr std::string_view kSchemaMagic = "WSDSCHEM";
constexpr std::string_view kVectorMagic = "WSDVECTS";
constexpr std::uint32_t kSchemaVersion = 1;
constexpr std::uint32_t kVectorVersion = 1;

bool blank(std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; });
}

std::string attr(const pt::ptree& node, const char* name) {
    return node.get<std::string>(std::string("<xmlattr>.") + name, "");
}

bool sentence_end(const TaggedToken& t) { return t.tag == Tag::Period; }

struct RawToken {
    std::string text;
    int head_span = 0;  // 0 outside any <head>, otherwise 1-based span number
};

Example build_example(const std::string& id, const std::vector<RawToken>& raw, const Tagger& tagger) {
    Example ex;
    ex.instance_id = id;

    std::vector<std::optional<TaggedToken>> pretagged;
    pretagged.reserve(raw.size());
    bool all_tagged = !raw.empty();
    for (const auto& t : raw) {
        pretagged.push_back(split_pretagged(t.text));
        if (!pretagged.back()) all_tagged = false;
    }

    std::vector<std::vector<std::pair<TaggedToken, int>>> sentences(1);
    if (all_tagged) {
        for (std::size_t i = 0; i < raw.size(); ++i) {
            sentences.back().emplace_back(*pretagged[i], raw[i].head_span);
            if (sentence_end(*pretagged[i])) sentences.emplace_back();
        }
    } else {
        std::vector<std::vector<std::pair<std::string, int>>> words(1);
        for (const auto& t : raw) {
            for (const auto& w : text::context_tokens(t.text)) {
                words.back().emplace_back(w, t.head_span);
                if (w == "." || w == "!" || w == "?") words.emplace_back();
            }
        }
        sentences.clear();
        for (const auto& s : words) {
            if (s.empty()) continue;
            std::vector<std::string> surface;
            for (const auto& [w, _] : s) surface.push_back(w);
            const auto tagged = tagger.tag_sentence(surface);
            auto& out = sentences.emplace_back();
            for (std::size_t i = 0; i < s.size(); ++i) out.emplace_back(tagged[i], s[i].second);
        }
    }

    for (const auto& s : sentences) {
        if (s.empty()) continue;
        auto& tokens = ex.sentences.emplace_back();
        int previous = 0;
        for (const auto& [tok, span] : s) {
            // a marked span contributes only its first token
            if (span != 0 && span != previous) ex.heads.push_back({ex.sentences.size() - 1, tokens.size()});
            previous = span;
            tokens.push_back(tok);
        }
    }
    return ex;
}

std::vector<RawToken> read_context(const pt::ptree& context, const std::string& where) {
    std::vector<RawToken> out;
    int head_index = 0;
    for (const auto& [name, child] : context) {
        if (name == "<xmlattr>" || name == "<xmlcomment>") continue;
        if (name == "<xmltext>") {
            for (auto& w : text::split_whitespace(child.data())) out.push_back({std::move(w), 0});
        } else if (name == "head") {
            // with no_concat_text the element text arrives as <xmltext> children
            std::string content = child.data();
            for (const auto& [n, part] : child) {
                if (n == "<xmltext>")
                    content += " " + part.data();
                else if (n != "<xmlattr>")
                    throw ParseError(where + ": unexpected <" + n + "> inside <head>");
            }
            const auto words = text::split_whitespace(content);
            if (words.empty()) throw ParseError(where + ": empty <head> element");
            ++head_index;
            for (const auto& w : words) out.push_back({w, head_index});
        } else {
            throw ParseError(where + ": unexpected <" + name + "> inside <context>");
        }
    }
    if (head_index == 0) throw ParseError(where + ": no <head> element marks the head word");
    return out;
}

LexicalSample read_lexelt(const pt::ptree& lexelt, const std::string& source, const Tagger& tagger) {
    LexicalSample sample;
    sample.item = attr(lexelt, "item");
    if (sample.item.empty()) throw ParseError(source + ": <lexelt> without item attribute");
    const auto dot = sample.item.find('.');
    sample.lemma = sample.item.substr(0, dot);

    std::set<std::string> ids;
    for (const auto& [name, inst] : lexelt) {
        if (name == "<xmlattr>" || name == "<xmlcomment>") continue;
        if (name == "<xmltext>") {
            if (!blank(inst.data())) throw ParseError(source + ": stray text in <lexelt " + sample.item + ">");
            continue;
        }
        if (name != "instance") throw ParseError(source + ": unexpected <" + name + "> in <lexelt " + sample.item + ">");
        const auto id = attr(inst, "id");
        if (id.empty()) throw ParseError(source + ": <instance> without id in lexelt " + sample.item);
        const auto where = source + ": instance " + id;
        if (!ids.insert(id).second) throw ParseError(where + ": duplicate instance id");

        std::vector<std::string> labels;
        const pt::ptree* context = nullptr;
        for (const auto& [cname, child] : inst) {
            if (cname == "<xmlattr>" || cname == "<xmlcomment>") continue;
            if (cname == "<xmltext>") {
                if (!blank(child.data())) throw ParseError(where + ": stray text in <instance>");
            } else if (cname == "answer") {
                auto sense = attr(child, "senseid");
                if (sense.empty()) throw ParseError(where + ": <answer> without senseid");
                const auto target = attr(child, "instance");
                if (!target.empty() && target != id) throw ParseError(where + ": <answer> refers to instance " + target);
                for (auto& s : text::split_whitespace(sense)) labels.push_back(std::move(s));
            } else if (cname == "context") {
                if (context) throw ParseError(where + ": more than one <context>");
                context = &child;
            } else {
                throw ParseError(where + ": unexpected <" + cname + "> in <instance>");
            }
        }
        if (!context) throw ParseError(where + ": missing <context>");
        auto ex = build_example(id, read_context(*context, where), tagger);
        if (ex.heads.empty()) throw ParseError(where + ": no head token found");
        ex.labels = std::move(labels);
        sample.examples.push_back(std::move(ex));
    }
    sample.inventory = build_inventory(sample.lemma, sample.examples);
    return sample;
}

// Shortest round-trip form, padded to at least six significant digits.
std::string format_probability(double p) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, p);
    if (ec != std::errc{}) throw Error("cannot format probability");
    std::string shortest(buf, end);
    const auto mantissa = shortest.substr(0, shortest.find('e'));
    const auto first = mantissa.find_first_not_of("0.");
    const auto digits = first == std::string::npos
                            ? 0
                            : std::count_if(mantissa.begin() + static_cast<std::ptrdiff_t>(first), mantissa.end(),
                                            [](char c) { return c >= '0' && c <= '9'; });
    if (digits >= 6) return shortest;
    std::snprintf(buf, sizeof buf, "%#.6g", p);
    return buf;
}

void check_field(const std::string& f, const char* what) {
    if (f.empty() || std::any_of(f.begin(), f.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); }))
        throw Error(std::string("answer record: ") + what + " \"" + f + "\" is empty or contains whitespace");
}

}  // namespace

std::optional<TaggedToken> split_pretagged(std::string_view token) {
    const auto us = token.rfind('_');
    if (us == std::string_view::npos || us == 0 || us + 1 == token.size()) return std::nullopt;
    auto tag = try_parse_tag(token.substr(us + 1));
    if (!tag) return std::nullopt;
    return TaggedToken{std::string(token.substr(0, us)), *tag};
}

std::vector<LexicalSample> parse_lexical_sample(std::istream& in, const std::string& source, const Tagger& tagger) {
    pt::ptree tree;
    try {
        pt::read_xml(in, tree, pt::xml_parser::no_concat_text);
    } catch (const pt::xml_parser_error& e) {
        throw ParseError(source + ":" + std::to_string(e.line()) + ": malformed XML: " + e.message());
    }
    std::vector<LexicalSample> samples;
    for (const auto& [name, node] : tree) {
        if (name == "<xmlcomment>") continue;
        if (name == "lexelt") {
            samples.push_back(read_lexelt(node, source, tagger));
        } else if (name == "corpus") {
            for (const auto& [cname, child] : node) {
                if (cname == "<xmlattr>" || cname == "<xmlcomment>") continue;
                if (cname == "<xmltext>") {
                    if (!blank(child.data())) throw ParseError(source + ": stray text in <corpus>");
                    continue;
                }
                if (cname != "lexelt") throw ParseError(source + ": unexpected <" + cname + "> in <corpus>");
                samples.push_back(read_lexelt(child, source, tagger));
            }
        } else {
            throw ParseError(source + ": unexpected root element <" + name + ">");
        }
    }
    return samples;
}

std::vector<LexicalSample> parse_lexical_sample(const std::filesystem::path& path, const Tagger& tagger) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open dataset " + path.string());
    return parse_lexical_sample(in, path.string(), tagger);
}

CoarseMap read_sense_map(std::istream& in, const std::string& source) {
    CoarseMap map;
    std::string line;
    for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (blank(line) || line.front() == '#') continue;
        const auto tab = line.find('\t');
        const auto where = source + ":" + std::to_string(lineno);
        if (tab == std::string::npos) throw ParseError(where + ": expected \"sense<TAB>coarse_class\"");
        auto fine = text::split_whitespace(line.substr(0, tab));
        auto coarse = text::split_whitespace(line.substr(tab + 1));
        if (fine.size() != 1 || coarse.size() != 1) throw ParseError(where + ": expected exactly one sense and one class");
        if (fine[0] == kUnassignable && coarse[0] != kUnassignable) throw ParseError(where + ": U must map to U");
        auto [it, inserted] = map.emplace(fine[0], coarse[0]);
        if (!inserted && it->second != coarse[0]) throw ParseError(where + ": conflicting mapping for " + fine[0]);
    }
    return map;
}

CoarseMap read_sense_map(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open sense map " + path.string());
    return read_sense_map(in, path.string());
}

std::string SenseInventory::coarse_of(const std::string& sense) const {
    if (sense == kUnassignable) return kUnassignable;
    auto it = coarse.find(sense);
    return it == coarse.end() ? sense : it->second;
}

SenseInventory build_inventory(const std::string& lemma, const std::vector<Example>& examples, const CoarseMap& coarse) {
    SenseInventory inv;
    inv.lemma = lemma;
    std::set<std::string> senses;
    for (const auto& ex : examples)
        for (const auto& l : ex.labels) {
            if (l == kUnassignable) inv.has_unassignable = true;
            else senses.insert(l);
        }
    inv.senses.assign(senses.begin(), senses.end());
    for (const auto& s : inv.senses) {
        auto it = coarse.find(s);
        inv.coarse[s] = it == coarse.end() ? s : it->second;
    }
    return inv;
}

std::vector<Example> coarse_relabel(std::vector<Example> examples, const CoarseMap& coarse) {
    for (auto& ex : examples) {
        for (auto& l : ex.labels) {
            if (l == kUnassignable) continue;
            auto it = coarse.find(l);
            if (it == coarse.end())
                throw Error("coarse relabel: sense \"" + l + "\" (instance " + ex.instance_id + ") is not in the sense map");
            l = it->second;
        }
    }
    return examples;
}

void write_answers(std::ostream& out, const std::vector<AnswerRecord>& records) {
    for (const auto& r : records) {
        check_field(r.head_word, "head word");
        check_field(r.instance_id, "instance id");
        check_field(r.sense, "sense");
        if (!(r.probability >= 0.0 && r.probability <= 1.0))
            throw Error("answer record " + r.instance_id + ": probability outside [0, 1]");
        out << r.head_word << ' ' << r.instance_id << ' ' << r.sense << ' ' << format_probability(r.probability) << '\n';
    }
}

void write_answers(const std::filesystem::path& path, const std::vector<AnswerRecord>& records) {
    std::ostringstream os;
    write_answers(os, records);
    write_text_file(path, os.str());
}

std::vector<AnswerRecord> read_answers(std::istream& in, const std::string& source) {
    std::vector<AnswerRecord> out;
    std::string line;
    for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
        if (blank(line)) continue;
        const auto where = source + ":" + std::to_string(lineno);
        const auto f = text::split_whitespace(line);
        if (f.size() != 4) throw ParseError(where + ": expected \"headword instanceid senseid probability\"");
        AnswerRecord r{f[0], f[1], f[2], 0.0};
        const auto& p = f[3];
        auto [end, ec] = std::from_chars(p.data(), p.data() + p.size(), r.probability);
        if (ec != std::errc{} || end != p.data() + p.size()) throw ParseError(where + ": bad probability \"" + p + "\"");
        if (!(r.probability >= 0.0 && r.probability <= 1.0)) throw ParseError(where + ": probability outside [0, 1]");
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<AnswerRecord> read_answers(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open answers " + path.string());
    return read_answers(in, path.string());
}

GoldKey read_key(std::istream& in, const std::string& source) {
    GoldKey key;
    std::string line;
    for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
        if (blank(line)) continue;
        const auto where = source + ":" + std::to_string(lineno);
        auto f = text::split_whitespace(line);
        if (f.size() < 3) throw ParseError(where + ": expected \"headword instanceid sense [sense ...]\"");
        GoldEntry e{f[0], {f.begin() + 2, f.end()}};
        if (!key.emplace(f[1], std::move(e)).second) throw ParseError(where + ": duplicate instance " + f[1]);
    }
    return key;
}

GoldKey read_key(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open key " + path.string());
    return read_key(in, path.string());
}

void write_key(std::ostream& out, const GoldKey& key) {
    for (const auto& [id, e] : key) {
        out << e.head_word << ' ' << id;
        for (const auto& s : e.senses) out << ' ' << s;
        out << '\n';
    }
}

GoldKey key_from_samples(const std::vector<LexicalSample>& samples) {
    GoldKey key;
    for (const auto& s : samples)
        for (const auto& ex : s.examples)
            if (!ex.labels.empty()) key[ex.instance_id] = {s.item, ex.labels};
    return key;
}

// ---- schema / vectors ----

namespace {

void write_semantic(ByteWriter& w, const SemanticFeature& f) {
    w.u8(f.kind == SemanticFeature::Kind::avg ? 1 : 0);
    w.u8(f.direction == Direction::fol ? 1 : 0);
    w.str(f.model);
    w.str(f.sense);
}

SemanticFeature read_semantic(ByteReader& r, SemanticFeature::Kind expected) {
    SemanticFeature f;
    const auto kind = r.u8();
    const auto dir = r.u8();
    if (kind > 1 || dir > 1) r.fail("bad semantic feature tag");
    f.kind = kind ? SemanticFeature::Kind::avg : SemanticFeature::Kind::model;
    if (f.kind != expected) r.fail("semantic feature kind out of place");
    f.direction = dir ? Direction::fol : Direction::pre;
    f.model = r.str();
    f.sense = r.str();
    return f;
}

Tag read_tag(ByteReader& r) {
    const auto name = r.str();
    auto t = try_parse_tag(name);
    if (!t) r.fail("unknown tag \"" + name + "\"");
    return *t;
}

}  // namespace

std::string serialize_schema(const FeatureSchema& schema) {
    ByteWriter w;
    w.magic(kSchemaMagic);
    w.u32(kSchemaVersion);
    w.str(schema.head_word);
    w.u64(schema.syntactic.size());
    for (const auto& f : schema.syntactic) {
        w.u8(static_cast<std::uint8_t>(f.match));
        w.i64(f.position);
        switch (f.match) {
            case MatchType::ptag: w.str(tag_name(std::get<PartialTagClass>(f.model).representative())); break;
            case MatchType::tag: w.str(tag_name(std::get<Tag>(f.model))); break;
            case MatchType::word: w.str(std::get<std::string>(f.model)); break;
        }
    }
    w.u64(schema.semantic.size());
    for (const auto& f : schema.semantic) write_semantic(w, f);
    w.u64(schema.averages.size());
    for (const auto& f : schema.averages) write_semantic(w, f);
    return w.bytes();
}

FeatureSchema deserialize_schema(std::string bytes, std::string source) {
    ByteReader r(std::move(bytes), std::move(source));
    r.expect_magic(kSchemaMagic);
    r.expect_version(kSchemaVersion);
    FeatureSchema s;
    s.head_word = r.str();
    const auto nsyn = r.u64();
    for (std::uint64_t i = 0; i < nsyn; ++i) {
        SyntacticFeature f;
        const auto match = r.u8();
        if (match > 2) r.fail("bad match type");
        f.match = static_cast<MatchType>(match);
        f.position = static_cast<int>(r.i64());
        if (f.position < -kSyntacticRadius || f.position > kSyntacticRadius) r.fail("syntactic position out of range");
        switch (f.match) {
            case MatchType::ptag: {
                const auto cls = partial_tag(read_tag(r));
                f.model = cls;
                break;
            }
            case MatchType::tag: f.model = read_tag(r); break;
            case MatchType::word: f.model = r.str(); break;
        }
        s.syntactic.push_back(std::move(f));
    }
    const auto nsem = r.u64();
    for (std::uint64_t i = 0; i < nsem; ++i) s.semantic.push_back(read_semantic(r, SemanticFeature::Kind::model));
    const auto navg = r.u64();
    for (std::uint64_t i = 0; i < navg; ++i) s.averages.push_back(read_semantic(r, SemanticFeature::Kind::avg));
    r.expect_end();
    return s;
}

std::uint64_t schema_hash(const FeatureSchema& schema) { return fnv1a64(serialize_schema(schema)); }

void save_schema(const std::filesystem::path& path, const FeatureSchema& schema) {
    write_text_file(path, serialize_schema(schema));
}

FeatureSchema load_schema(const std::filesystem::path& path) {
    return deserialize_schema(read_text_file(path), path.string());
}

std::string serialize_vectors(const VectorSet& set) {
    ByteWriter w;
    w.magic(kVectorMagic);
    w.u32(kVectorVersion);
    w.str(set.head_word);
    w.u64(set.schema_hash);
    w.u64(set.dimension);
    w.u64(set.vectors.size());
    for (const auto& v : set.vectors) {
        if (v.values.size() != set.dimension)
            throw Error("vector " + v.instance_id + " does not match the set dimension");
        w.str(v.instance_id);
        w.u8(v.label ? 1 : 0);
        w.str(v.label.value_or(""));
        w.f64s(v.values);
    }
    return w.bytes();
}

VectorSet deserialize_vectors(std::string bytes, std::string source, std::optional<std::uint64_t> expected_schema_hash) {
    ByteReader r(std::move(bytes), std::move(source));
    r.expect_magic(kVectorMagic);
    r.expect_version(kVectorVersion);
    VectorSet set;
    set.head_word = r.str();
    set.schema_hash = r.u64();
    if (expected_schema_hash && *expected_schema_hash != set.schema_hash)
        r.fail("vectors were built against a different schema (hash mismatch)");
    set.dimension = r.u64();
    const auto n = r.u64();
    for (std::uint64_t i = 0; i < n; ++i) {
        FeatureVector v;
        v.instance_id = r.str();
        const bool has_label = r.u8() != 0;
        auto label = r.str();
        if (has_label) v.label = std::move(label);
        v.values = r.f64s();
        if (v.values.size() != set.dimension) r.fail("vector " + v.instance_id + " has the wrong dimension");
        set.vectors.push_back(std::move(v));
    }
    r.expect_end();
    return set;
}

void save_vectors(const std::filesystem::path& path, const VectorSet& set) {
    write_text_file(path, serialize_vectors(set));
}

VectorSet load_vectors(const std::filesystem::path& path, std::optional<std::uint64_t> expected_schema_hash) {
    return deserialize_vectors(read_text_file(path), path.string(), expected_schema_hash);
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error("write failed: " + path.string());
}

}  // namespace wsd
