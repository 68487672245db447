#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>

#include "support/generators.hpp"
#include "wsd/syntactic_features.hpp"

using wsd::MatchType;
using wsd::SyntacticFeature;
using wsd::Tag;

namespace {

wsd::Window make(std::initializer_list<std::pair<int, wsd::TaggedToken>> filled) {
    std::array<wsd::Window::Slot, wsd::kWindowSize> slots{};
    slots[wsd::kWindowRadius] = wsd::TaggedToken{"argument", Tag::NN};
    for (const auto& [off, tok] : filled) slots[static_cast<std::size_t>(off + wsd::kWindowRadius)] = tok;
    return wsd::Window(slots);
}

std::set<std::string> names(const std::vector<SyntacticFeature>& schema) {
    std::set<std::string> out;
    for (const auto& f : schema) out.insert(f.name());
    return out;
}

}  // namespace

TEST_CASE("word features come only from non-content tokens") {
    const auto schema = wsd::generate_syntactic_schema({make({{1, {"of", Tag::IN}}}), make({{1, {"dog", Tag::NN}}})});
    const auto n = names(schema);
    CHECK(n.count("word_hp1_of") == 1);
    CHECK(n.count("word_hp1_dog") == 0);
}

TEST_CASE("tag models cover the whole inventory from a single window") {
    const auto schema = wsd::generate_syntactic_schema({make({})});
    const auto n = names(schema);
    for (int pos = -2; pos <= 2; ++pos) {
        for (auto t : wsd::all_tags()) CHECK(n.count("tag_" + wsd::slot_name(pos) + "_" + std::string(wsd::tag_name(t))) == 1);
        for (const auto& c : wsd::all_partial_classes()) CHECK(n.count("ptag_" + wsd::slot_name(pos) + "_" + c.name()) == 1);
    }
    // the head itself is a word feature only when it is not a content word
    CHECK(schema.size() == 5 * (wsd::kTagCount + wsd::all_partial_classes().size()));
}

TEST_CASE("evaluation") {
    const auto w = make({{1, {"Smith", Tag::NNP}}, {-1, {"examples", Tag::NNS}}});
    CHECK(wsd::evaluate_syntactic({MatchType::tag, 1, Tag::NNP}, w) == 1);
    CHECK(wsd::evaluate_syntactic({MatchType::tag, 1, Tag::NN}, w) == 0);
    CHECK(wsd::evaluate_syntactic({MatchType::ptag, -1, wsd::partial_tag(Tag::NN)}, w) == 1);
    CHECK(wsd::evaluate_syntactic({MatchType::word, 2, std::string("of")}, w) == 0);  // null slot
    CHECK(wsd::evaluate_syntactic({MatchType::tag, 2, Tag::NN}, w) == 0);
    CHECK(wsd::evaluate_syntactic({MatchType::word, 1, std::string("Smith")}, w) == 1);
}

TEST_CASE("feature names") {
    CHECK(SyntacticFeature{MatchType::ptag, -1, wsd::partial_tag(Tag::NNS)}.name() == "ptag_hm1_NOUN");
    CHECK(SyntacticFeature{MatchType::tag, 1, Tag::NNP}.name() == "tag_hp1_NNP");
    CHECK(SyntacticFeature{MatchType::word, 1, std::string("of")}.name() == "word_hp1_of");
    CHECK(SyntacticFeature{MatchType::tag, 0, Tag::PRP_S}.name() == "tag_hd0_PRP$");
}

TEST_CASE("property: strictness, uniqueness and determinism") {
    gen::Rng rng(44);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<wsd::Window> training;
        const auto k = rng.between(1, 6);
        for (std::size_t i = 0; i < k; ++i) training.push_back(gen::window(rng));
        const auto schema = wsd::generate_syntactic_schema(training);
        REQUIRE(schema == wsd::generate_syntactic_schema(training));
        REQUIRE(names(schema).size() == schema.size());

        for (int probe = 0; probe < 5; ++probe) {
            const auto w = gen::window(rng);
            std::map<int, int> word_hits;
            for (const auto& f : schema) {
                const int v = wsd::evaluate_syntactic(f, w);
                REQUIRE((v == 0 || v == 1));
                if (f.match == MatchType::tag && v == 1) {
                    const SyntacticFeature coarse{MatchType::ptag, f.position, wsd::partial_tag(std::get<Tag>(f.model))};
                    REQUIRE(wsd::evaluate_syntactic(coarse, w) == 1);
                }
                if (f.match == MatchType::word) word_hits[f.position] += v;
            }
            for (const auto& [pos, hits] : word_hits) REQUIRE(hits <= 1);
        }
    }
}
