#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wsd/semantic_features.hpp"
#include "wsd/tagger.hpp"
#include "wsd/window.hpp"

namespace wsd {

/// Sense id for unassignable occurrences.
inline const std::string kUnassignable = "U";

using CoarseMap = std::map<std::string, std::string>;

struct SenseInventory {
    std::string lemma;
    std::vector<std::string> senses;  // sorted, U excluded
    bool has_unassignable = false;
    /// Total over `senses`; U always maps to U.
    CoarseMap coarse;

    /// Coarse class of `sense`: U -> U, mapped senses -> their class, anything else -> itself.
    std::string coarse_of(const std::string& sense) const;
};

/// All instances of one <lexelt>.
struct LexicalSample {
    std::string item;  // e.g. "argument.n"
    std::string lemma; // e.g. "argument"
    std::vector<Example> examples;
    SenseInventory inventory;
};

/// Parses the lexical-sample XML subset:
///
///   <corpus> <lexelt item="argument.n">
///     <instance id="...">
///       <answer instance="..." senseid="..."/>   (zero or more)
///       <context> text <head>argument</head> text </context>
///     </instance> ...
///   </lexelt> </corpus>
///
/// A context whose every token has the form word_TAG (TAG a Penn symbol) is taken as pre-tagged
/// and bypasses the tagger. Sentences end after ".", "!" or "?" tokens. A <head> spanning several
/// tokens is reduced to its first token. Throws ParseError carrying the file and instance id.
std::vector<LexicalSample> parse_lexical_sample(const std::filesystem::path& path, const Tagger& tagger);
std::vector<LexicalSample> parse_lexical_sample(std::istream& in, const std::string& source, const Tagger& tagger);

/// "sense<TAB>coarse_class" lines.
CoarseMap read_sense_map(const std::filesystem::path& path);
CoarseMap read_sense_map(std::istream& in, const std::string& source);

/// Inventory of the labels in `examples`, with an identity coarse map extended by `coarse`.
SenseInventory build_inventory(const std::string& lemma, const std::vector<Example>& examples,
                               const CoarseMap& coarse = {});

/// Replaces every label with its coarse class. Throws wsd::Error naming any unmapped label.
std::vector<Example> coarse_relabel(std::vector<Example> examples, const CoarseMap& coarse);

struct AnswerRecord {
    std::string head_word;
    std::string instance_id;
    std::string sense;
    double probability = 0.0;

    friend bool operator==(const AnswerRecord&, const AnswerRecord&) = default;
};

/// One "headword instanceid senseid probability" line per record. Probabilities are printed in
/// the shortest form that reads back to the identical double.
void write_answers(std::ostream& out, const std::vector<AnswerRecord>& records);
void write_answers(const std::filesystem::path& path, const std::vector<AnswerRecord>& records);
std::vector<AnswerRecord> read_answers(std::istream& in, const std::string& source);
std::vector<AnswerRecord> read_answers(const std::filesystem::path& path);

/// Gold key: instance id -> acceptable senses.
struct GoldEntry {
    std::string head_word;
    std::vector<std::string> senses;
};
using GoldKey = std::map<std::string, GoldEntry>;

/// "headword instanceid sense [sense ...]" lines.
GoldKey read_key(std::istream& in, const std::string& source);
GoldKey read_key(const std::filesystem::path& path);
void write_key(std::ostream& out, const GoldKey& key);
GoldKey key_from_samples(const std::vector<LexicalSample>& samples);

std::string serialize_schema(const FeatureSchema& schema);
FeatureSchema deserialize_schema(std::string bytes, std::string source = "<memory>");
void save_schema(const std::filesystem::path& path, const FeatureSchema& schema);
FeatureSchema load_schema(const std::filesystem::path& path);

/// Fingerprint of the serialized schema.
std::uint64_t schema_hash(const FeatureSchema& schema);

struct VectorSet {
    std::string head_word;
    std::uint64_t schema_hash = 0;
    std::size_t dimension = 0;
    std::vector<FeatureVector> vectors;

    friend bool operator==(const VectorSet&, const VectorSet&) = default;
};

std::string serialize_vectors(const VectorSet& set);
/// Throws FormatError when `expected_schema_hash` is given and differs from the stored hash.
VectorSet deserialize_vectors(std::string bytes, std::string source = "<memory>",
                              std::optional<std::uint64_t> expected_schema_hash = std::nullopt);
void save_vectors(const std::filesystem::path& path, const VectorSet& set);
VectorSet load_vectors(const std::filesystem::path& path, std::optional<std::uint64_t> expected_schema_hash = std::nullopt);

/// Splits "word_TAG" at the last underscore; nullopt unless TAG is a Penn symbol and word is nonempty.
std::optional<TaggedToken> split_pretagged(std::string_view token);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace wsd
