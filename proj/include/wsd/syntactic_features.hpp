#pragma once

#include <string>
#include <variant>
#include <vector>

#include "wsd/tagger.hpp"
#include "wsd/window.hpp"

namespace wsd {

enum class MatchType { ptag, tag, word };

/// Binary feature "matchtype_position_model" over the five central slots (hm2..hp2).
struct SyntacticFeature {
    MatchType match = MatchType::tag;
    int position = 0;  // -2..2
    std::variant<Tag, PartialTagClass, std::string> model;

    /// e.g. "ptag_hm1_NOUN", "tag_hp1_NNP", "word_hp1_of"
    std::string name() const;

    friend bool operator==(const SyntacticFeature&, const SyntacticFeature&) = default;
};

inline constexpr int kSyntacticRadius = 2;

/// Every ptag class and every tag at each of the five positions, plus one word feature per
/// (position, surface form) observed in training, skipping tokens tagged noun/verb/adjective.
/// Order: ptag, tag, word; positions left to right; models by name.
std::vector<SyntacticFeature> generate_syntactic_schema(const std::vector<Window>& training_windows);

/// 1 when the slot at the feature's position matches its model; a null slot never matches.
int evaluate_syntactic(const SyntacticFeature& feature, const Window& window);

}  // namespace wsd
