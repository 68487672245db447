#include "wsd/semantic_features.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <tuple>

#include "wsd/error.hpp"
#include "wsd/text.hpp"

namespace wsd {

std::string_view direction_name(Direction d) { return d == Direction::pre ? "pre" : "fol"; }

std::string SemanticFeature::name() const {
    if (kind == Kind::avg) return "avg_" + std::string(direction_name(direction)) + "_" + sense;
    return std::string(direction_name(direction)) + "_" + model;
}

std::vector<std::string> FeatureSchema::names() const {
    std::vector<std::string> out;
    out.reserve(size());
    for (const auto& f : syntactic) out.push_back(f.name());
    for (const auto& f : semantic) out.push_back(f.name());
    for (const auto& f : averages) out.push_back(f.name());
    return out;
}

std::optional<std::string> nearest_content(const Window& window, Direction direction) {
    const int step = direction == Direction::pre ? -1 : 1;
    for (int off = step; off >= -kWindowRadius && off <= kWindowRadius; off += step) {
        const auto& slot = window.at(off);
        if (slot && is_content(slot->tag)) return slot->surface;
    }
    return std::nullopt;
}

std::vector<SemanticFeature> generate_semantic_schema(const std::vector<LabeledWindow>& training) {
    std::set<std::tuple<int, std::string, std::string>> models;
    std::set<std::string> senses;
    for (const auto& [window, sense] : training) {
        senses.insert(sense);
        for (auto dir : {Direction::pre, Direction::fol})
            if (auto w = nearest_content(window, dir)) models.emplace(static_cast<int>(dir), text::to_lower(*w), sense);
    }
    std::vector<SemanticFeature> out;
    for (const auto& [dir, model, sense] : models)
        out.push_back({SemanticFeature::Kind::model, static_cast<Direction>(dir), model, sense});
    for (auto dir : {Direction::pre, Direction::fol})
        for (const auto& sense : senses) out.push_back({SemanticFeature::Kind::avg, dir, {}, sense});
    return out;
}

FeatureSchema generate_schema(std::string head_word, const std::vector<LabeledWindow>& training) {
    if (training.empty()) throw Error("head word " + head_word + ": no training windows");
    FeatureSchema schema;
    schema.head_word = std::move(head_word);
    std::vector<Window> windows;
    windows.reserve(training.size());
    for (const auto& t : training) windows.push_back(t.window);
    schema.syntactic = generate_syntactic_schema(windows);
    for (auto& f : generate_semantic_schema(training))
        (f.kind == SemanticFeature::Kind::avg ? schema.averages : schema.semantic).push_back(std::move(f));
    return schema;
}

double raw_semantic_value(const SemanticFeature& feature, const Window& window, const PmiCache& pmi) {
    const auto w = nearest_content(window, feature.direction);
    if (!w) return 0.0;
    return pmi(text::to_lower(*w), feature.model);
}

std::vector<double> percentile_normalize(std::span<const double> values) {
    const auto m = values.size();
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> out;
    out.reserve(m);
    for (double v : values) {
        const auto rank = std::upper_bound(sorted.begin(), sorted.end(), v) - sorted.begin();
        out.push_back(100.0 * static_cast<double>(rank) / static_cast<double>(m));
    }
    return out;
}

double avg_value(std::span<const double> normalized, Direction direction, const std::string& sense,
                 const FeatureSchema& schema) {
    if (normalized.size() != schema.semantic.size()) throw Error("avg_value: values not aligned with schema");
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < schema.semantic.size(); ++i) {
        const auto& f = schema.semantic[i];
        if (f.direction == direction && f.sense == sense) {
            sum += normalized[i];
            ++n;
        }
    }
    return n == 0 ? 0.0 : sum / static_cast<double>(n);
}

double selection_threshold(std::string_view preset) {
    if (preset == "fine") return 0.0;
    if (preset == "fine2") return -1.0;
    if (preset == "none") return -std::numeric_limits<double>::infinity();
    throw Error("unknown selection preset \"" + std::string(preset) + "\" (expected fine, fine2 or none)");
}

FeatureSchema select_features(const FeatureSchema& schema, const std::string& head_word, const PmiCache& pmi,
                              double threshold) {
    FeatureSchema out = schema;
    out.semantic.clear();
    for (const auto& f : schema.semantic)
        if (!(pmi(f.model, text::to_lower(head_word)) < threshold)) out.semantic.push_back(f);
    return out;
}

FeatureVector vectorize(const Window& window, const FeatureSchema& schema, const PmiCache& pmi,
                        std::string instance_id, std::optional<std::string> label) {
    FeatureVector v{std::move(instance_id), {}, std::move(label)};
    v.values.reserve(schema.size());
    for (const auto& f : schema.syntactic) v.values.push_back(evaluate_syntactic(f, window));

    // Normalize each direction's partition separately, then scatter back into schema order.
    std::vector<double> normalized(schema.semantic.size());
    for (auto dir : {Direction::pre, Direction::fol}) {
        std::vector<std::size_t> members;
        std::vector<double> raw;
        for (std::size_t i = 0; i < schema.semantic.size(); ++i) {
            if (schema.semantic[i].direction != dir) continue;
            members.push_back(i);
            raw.push_back(raw_semantic_value(schema.semantic[i], window, pmi));
        }
        const auto pct = percentile_normalize(raw);
        for (std::size_t k = 0; k < members.size(); ++k) normalized[members[k]] = pct[k];
    }
    v.values.insert(v.values.end(), normalized.begin(), normalized.end());
    for (const auto& f : schema.averages) v.values.push_back(avg_value(normalized, f.direction, f.sense, schema));
    return v;
}

}  // namespace wsd
