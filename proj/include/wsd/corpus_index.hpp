#pragma once

#include <cstdint>
#include <filesystem>
#include <mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace wsd {

struct IndexConfig {
    /// Maximum token distance at which two positions co-occur.
    std::uint32_t neighborhood = 20;
    /// Additive (Laplace) smoothing constant applied to every count.
    double smoothing_alpha = 1.0;
    bool case_folding = true;

    /// Throws wsd::Error when a field is out of range.
    void validate() const;
    /// Human-readable statement of the smoothed estimator, embedded in run reports.
    std::string estimator_description() const;
};

/// Sequence of documents, each a sequence of tokens.
using Corpus = std::vector<std::vector<std::string>>;

/// Positional index over an unlabeled corpus.
///
/// Each term maps to its postings: a sorted list of packed (document, position) keys.
/// Counting queries merge two postings lists with a sliding window, so a co-occurrence
/// count costs O(|postings(w1)| + |postings(w2)|).
///
/// PMI uses the additive estimator
///   p(w)       = (c(w) + a) / (T + 2a)
///   p(w1 ^ w2) = (c12  + a) / (P + 2a)
/// where T is the token total and P the number of ordered position pairs (i, j), i != j,
/// lying in one document at distance <= N.
class CooccurrenceIndex {
public:
    static CooccurrenceIndex build(const Corpus& documents, const IndexConfig& config);

    const IndexConfig& config() const { return config_; }
    std::uint64_t token_total() const { return token_total_; }
    std::uint64_t pair_total() const { return pair_total_; }
    const std::vector<std::uint32_t>& doc_lengths() const { return doc_lengths_; }
    std::size_t vocabulary_size() const { return terms_.size(); }

    std::uint64_t term_frequency(std::string_view w) const;

    /// Number of position pairs (i, j) in one document with token(i) = w1, token(j) = w2,
    /// i != j and |i - j| <= N. When w1 == w2 each unordered pair is counted once.
    std::uint64_t cooccurrence_count(std::string_view w1, std::string_view w2) const;

    double pmi(std::string_view w1, std::string_view w2) const;

    /// Sorted (document, position) postings for `w`; empty when unseen.
    std::vector<std::pair<std::uint32_t, std::uint32_t>> postings(std::string_view w) const;

    void save(const std::filesystem::path& path) const;
    static CooccurrenceIndex load(const std::filesystem::path& path);

    std::string serialize() const;
    static CooccurrenceIndex deserialize(std::string bytes, std::string source = "<memory>");

private:
    std::string normalize(std::string_view w) const;
    const std::vector<std::uint64_t>* find(std::string_view w) const;
    std::uint64_t count_keys(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b,
                             bool same) const;

    IndexConfig config_;
    std::vector<std::string> terms_;  // sorted
    std::vector<std::vector<std::uint64_t>> postings_;
    std::unordered_map<std::string, std::uint32_t> term_ids_;
    std::vector<std::uint32_t> doc_lengths_;
    std::uint64_t token_total_ = 0;
    std::uint64_t pair_total_ = 0;
};

/// Number of ordered position pairs (i, j), i != j, |i - j| <= n in a document of `length` tokens.
std::uint64_t ordered_pairs_within(std::uint64_t length, std::uint64_t n);

/// Thread-safe memo over CooccurrenceIndex::pmi. Feature extraction asks for the same
/// (context word, model word) pair many times.
class PmiCache {
public:
    explicit PmiCache(const CooccurrenceIndex& index) : index_(&index) {}

    double operator()(std::string_view w1, std::string_view w2) const;
    const CooccurrenceIndex& index() const { return *index_; }

private:
    const CooccurrenceIndex* index_;
    mutable std::mutex mutex_;
    mutable std::unordered_map<std::string, double> memo_;
};

/// Reads a corpus: a directory holds one document per regular file (visited in path order);
/// a file holds one document per non-empty line.
enum class CorpusLayout { directory, lines };
Corpus read_corpus(const std::filesystem::path& path, CorpusLayout layout, bool fold_case);

}  // namespace wsd
