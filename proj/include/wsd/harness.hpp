#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "wsd/corpus_index.hpp"
#include "wsd/dataset_io.hpp"
#include "wsd/ensemble.hpp"

namespace wsd {

enum class Grain { fine, coarse };

std::string_view grain_name(Grain g);
Grain parse_grain(std::string_view s);

/// When the training U fraction p reaches `trigger`, the ceil(p * n) lowest-probability predictions
/// are relabeled U (ties broken by instance id). Otherwise the records are returned unchanged.
std::vector<AnswerRecord> relabel_u(std::vector<AnswerRecord> predictions, double train_u_fraction, double trigger);

struct ScoreResult {
    std::size_t correct = 0;
    std::size_t answered = 0;
    std::size_t total = 0;

    /// Percentage of gold instances answered correctly; 0 for an empty key.
    double recall() const { return total == 0 ? 0.0 : 100.0 * static_cast<double>(correct) / static_cast<double>(total); }
};

/// Recall against `gold`. An answer is correct when its sense is among the instance's gold senses,
/// compared through `coarse` for Grain::coarse (senses missing from the map stand for themselves;
/// U maps to U). Unanswered gold instances count as wrong. Throws wsd::Error for answers to
/// instances absent from the key, and for duplicate answers.
ScoreResult score(const std::vector<AnswerRecord>& answers, const GoldKey& gold, Grain grain, const CoarseMap& coarse);

/// Labels every test instance with the most frequent training sense (ties: smallest sense id),
/// with its training frequency as the probability.
std::vector<AnswerRecord> baseline_mfs(const std::string& head_word, const std::vector<Example>& training,
                                       const std::vector<Example>& test);

/// Fraction of labeled examples whose training label is U.
double unassignable_fraction(const std::vector<Example>& examples);

struct ExtractOptions {
    double threshold = 0.0;
    Grain grain = Grain::fine;
    CoarseMap coarse;
};

struct HeadFeatures {
    std::string item;
    std::string lemma;
    FeatureSchema schema;            // after selection
    std::size_t semantic_before = 0; // model features before selection
    std::size_t train_instances = 0;
    double u_fraction = 0.0;
    VectorSet train;                 // U-labeled examples removed
    VectorSet test;
};

/// Windows, schema generation, PMI selection and vectorization for one head word.
HeadFeatures extract_features(const LexicalSample& train, const LexicalSample* test, const PmiCache& pmi,
                              const ExtractOptions& options);

struct RunConfig {
    std::filesystem::path corpus;
    CorpusLayout corpus_layout = CorpusLayout::lines;
    /// Prebuilt index; when set, `corpus` and the index parameters are ignored.
    std::filesystem::path index_file;
    std::filesystem::path train;
    std::filesystem::path test;
    std::filesystem::path sense_map;
    std::filesystem::path gold_key;
    std::filesystem::path lexicon;
    std::filesystem::path rules;
    std::filesystem::path output_dir;

    IndexConfig index;
    std::string selection_preset = "fine";
    std::optional<double> threshold;
    EnsembleConfig ensemble;
    double u_trigger = 0.05;
    Grain grain = Grain::fine;
    std::uint64_t seed = 1;

    /// Threshold override if set, else the preset's value.
    double effective_threshold() const;
    void validate() const;
    nlohmann::json to_json() const;
};

struct RunResult {
    std::vector<AnswerRecord> answers;
    std::vector<AnswerRecord> baseline;
    nlohmann::json report;
};

/// Invoked with each head word's final training vectors just before training.
using TrainingAudit = std::function<void(const std::string& item, const std::vector<FeatureVector>& training)>;

/// Every stage for every head word of `train`, against an already built index. Stage failures are
/// recorded in report["errors"] and the remaining head words still run.
RunResult run_experiment(const std::vector<LexicalSample>& train, const std::vector<LexicalSample>& test,
                         const CooccurrenceIndex& index, const RunConfig& config,
                         const std::optional<GoldKey>& gold = std::nullopt, const TrainingAudit& audit = {});

/// Loads inputs named by `config`, runs the experiment, and writes answers.txt, baseline_mfs.txt,
/// report.json and table.txt into config.output_dir when it is set.
RunResult run_pipeline(const RunConfig& config, const TrainingAudit& audit = {});

/// Plain-text table of system and most-frequent-sense recall, fine and coarse columns, one row
/// per labeled report. A coarse-trained run shows NA in the fine column.
std::string render_table(const std::vector<std::pair<std::string, nlohmann::json>>& reports);

std::uint64_t head_seed(std::uint64_t master, const std::string& item);

}  // namespace wsd
