#include "wsd/syntactic_features.hpp"

#include <algorithm>
#include <set>

namespace wsd {

std::string SyntacticFeature::name() const {
    std::string prefix;
    std::string model_name;
    switch (match) {
        case MatchType::ptag:
            prefix = "ptag";
            model_name = std::get<PartialTagClass>(model).name();
            break;
        case MatchType::tag:
            prefix = "tag";
            model_name = std::string(tag_name(std::get<Tag>(model)));
            break;
        case MatchType::word:
            prefix = "word";
            model_name = std::get<std::string>(model);
            break;
    }
    return prefix + "_" + slot_name(position) + "_" + model_name;
}

std::vector<SyntacticFeature> generate_syntactic_schema(const std::vector<Window>& training_windows) {
    std::vector<SyntacticFeature> schema;

    for (int pos = -kSyntacticRadius; pos <= kSyntacticRadius; ++pos)
        for (auto cls : all_partial_classes()) schema.push_back({MatchType::ptag, pos, cls});

    std::vector<Tag> tags(all_tags().begin(), all_tags().end());
    std::sort(tags.begin(), tags.end(), [](Tag a, Tag b) { return tag_name(a) < tag_name(b); });
    for (int pos = -kSyntacticRadius; pos <= kSyntacticRadius; ++pos)
        for (auto t : tags) schema.push_back({MatchType::tag, pos, t});

    for (int pos = -kSyntacticRadius; pos <= kSyntacticRadius; ++pos) {
        std::set<std::string> words;
        for (const auto& w : training_windows) {
            const auto& slot = w.at(pos);
            if (slot && !is_content(slot->tag)) words.insert(slot->surface);
        }
        for (const auto& word : words) schema.push_back({MatchType::word, pos, word});
    }
    return schema;
}

int evaluate_syntactic(const SyntacticFeature& feature, const Window& window) {
    const auto& slot = window.at(feature.position);
    if (!slot) return 0;
    switch (feature.match) {
        case MatchType::ptag:
            return partial_tag(slot->tag) == std::get<PartialTagClass>(feature.model) ? 1 : 0;
        case MatchType::tag:
            return slot->tag == std::get<Tag>(feature.model) ? 1 : 0;
        case MatchType::word:
            return slot->surface == std::get<std::string>(feature.model) ? 1 : 0;
    }
    return 0;
}

}  // namespace wsd
