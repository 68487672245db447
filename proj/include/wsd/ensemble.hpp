#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "wsd/learners.hpp"
#include "wsd/semantic_features.hpp"

namespace wsd {

struct EnsembleConfig {
    int bagging_rounds = 10;
    /// Bag size as a fraction of the training set, drawn with replacement.
    double bag_fraction = 1.0;
    /// When false every round trains on the full training set in its original order.
    bool resample = true;
    std::vector<ml::LearnerSpec> base_learners = ml::default_learners();
    std::uint64_t seed = 1;

    void validate() const;
};

struct Prediction {
    std::string sense;
    double probability = 0.0;
    /// Aligned with the model's sense order.
    std::vector<double> distribution;
};

/// One-against-all reduction with a probability-averaging vote of the base learners per sense.
class OneVsAllVote {
public:
    /// `senses` fixes the output order; labels must all be members.
    static OneVsAllVote train(const ml::Matrix& x, std::span<const std::string> labels,
                              const std::vector<std::string>& senses, const std::vector<ml::LearnerSpec>& learners,
                              std::uint64_t seed);

    /// Averaged per-sense positive probabilities divided by their sum (uniform when the sum is 0).
    std::vector<double> distribution(std::span<const double> x) const;
    /// Unnormalized vote averages, one per sense.
    std::vector<double> scores(std::span<const double> x) const;

    const std::vector<std::vector<ml::BinaryModel>>& voters() const { return voters_; }

    void write(ByteWriter& w) const;
    static OneVsAllVote read(ByteReader& r, std::size_t senses, std::size_t learners);

private:
    std::vector<std::vector<ml::BinaryModel>> voters_;  // [sense][learner]
};

class EnsembleModel {
public:
    const EnsembleConfig& config() const { return config_; }
    /// Ordered by training frequency (descending) then sense id; argmax ties resolve to the earliest.
    const std::vector<std::string>& senses() const { return senses_; }
    std::uint64_t schema_hash() const { return schema_hash_; }
    std::size_t feature_count() const { return feature_count_; }
    const std::vector<OneVsAllVote>& rounds() const { return rounds_; }

    /// Mean over bagging rounds of each round's normalized distribution. Throws wsd::Error on a
    /// dimension mismatch.
    Prediction predict(std::span<const double> x) const;

    std::string serialize() const;
    static EnsembleModel deserialize(std::string bytes, std::string source = "<memory>");
    void save(const std::filesystem::path& path) const;
    static EnsembleModel load(const std::filesystem::path& path);

private:
    friend EnsembleModel train_ensemble(const std::vector<FeatureVector>&, const EnsembleConfig&, std::uint64_t);

    EnsembleConfig config_;
    std::vector<std::string> senses_;
    std::uint64_t schema_hash_ = 0;
    std::size_t feature_count_ = 0;
    std::vector<OneVsAllVote> rounds_;
};

/// Sense order used by the model: descending training frequency, then lexicographic.
std::vector<std::string> ordered_senses(std::span<const std::string> labels);

/// Row indices of the training set for each round, drawn up front from the seed.
std::vector<std::vector<std::size_t>> draw_bags(std::size_t n, const EnsembleConfig& config);

/// Seed the ensemble hands to round `round`'s one-vs-all vote.
std::uint64_t round_seed(const EnsembleConfig& config, std::size_t round);

ml::Matrix to_matrix(const std::vector<FeatureVector>& vectors);

/// Throws wsd::Error("insufficient data ...") for fewer than two vectors, and on unlabeled or
/// ragged input.
EnsembleModel train_ensemble(const std::vector<FeatureVector>& vectors, const EnsembleConfig& config,
                             std::uint64_t schema_hash);

}  // namespace wsd
