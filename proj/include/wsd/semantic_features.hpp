#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wsd/corpus_index.hpp"
#include "wsd/syntactic_features.hpp"
#include "wsd/window.hpp"

namespace wsd {

enum class Direction { pre, fol };

std::string_view direction_name(Direction d);

/// Real-valued PMI feature.
///
/// kind == model: "pre_<model>" / "fol_<model>", valued PMI(nearest content word, model);
///   `sense` is the label of the training window the model word came from.
/// kind == avg: "avg_<direction>_<sense>", the mean of the normalized model features of that
///   direction whose source sense is `sense`.
struct SemanticFeature {
    enum class Kind { model, avg };
    Kind kind = Kind::model;
    Direction direction = Direction::pre;
    std::string model;
    std::string sense;

    std::string name() const;

    friend bool operator==(const SemanticFeature&, const SemanticFeature&) = default;
};

/// Per-head-word feature layout: syntactic, then model features (pre, then fol), then avg.
struct FeatureSchema {
    std::string head_word;
    std::vector<SyntacticFeature> syntactic;
    std::vector<SemanticFeature> semantic;
    std::vector<SemanticFeature> averages;

    std::size_t size() const { return syntactic.size() + semantic.size() + averages.size(); }
    std::vector<std::string> names() const;

    friend bool operator==(const FeatureSchema&, const FeatureSchema&) = default;
};

struct FeatureVector {
    std::string instance_id;
    std::vector<double> values;
    std::optional<std::string> label;

    friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

struct LabeledWindow {
    Window window;
    std::string sense;
};

/// Nearest noun/verb/adjective scanning outward from the head on one side; nullopt if none.
std::optional<std::string> nearest_content(const Window& window, Direction direction);

/// Model features keyed by (direction, lowercased model word, source sense), each sorted by
/// (model, sense); then one avg feature per direction and distinct training sense.
std::vector<SemanticFeature> generate_semantic_schema(const std::vector<LabeledWindow>& training);

/// Builds the full schema for a head word from its labeled training windows.
FeatureSchema generate_schema(std::string head_word, const std::vector<LabeledWindow>& training);

/// PMI(nearest content word on the feature's side, model); 0 when there is no such word.
double raw_semantic_value(const SemanticFeature& feature, const Window& window, const PmiCache& pmi);

/// Maps each value v to 100 * |{u : u <= v}| / m within the given partition.
std::vector<double> percentile_normalize(std::span<const double> values);

/// Mean of `normalized` over model features of `direction` with source sense `sense`;
/// 0 when there are none. `normalized` is aligned with `schema.semantic`.
double avg_value(std::span<const double> normalized, Direction direction, const std::string& sense,
                 const FeatureSchema& schema);

/// Named selection thresholds: "fine" keeps fewer features than "fine2"; "none" keeps all.
double selection_threshold(std::string_view preset);

/// Drops model features whose PMI with the head word is below `threshold`. Syntactic and avg
/// features are kept; avg values are computed over the survivors at vectorization time.
FeatureSchema select_features(const FeatureSchema& schema, const std::string& head_word, const PmiCache& pmi,
                              double threshold);

FeatureVector vectorize(const Window& window, const FeatureSchema& schema, const PmiCache& pmi,
                        std::string instance_id = {}, std::optional<std::string> label = std::nullopt);

}  // namespace wsd
