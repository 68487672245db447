#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <set>

#include "support/generators.hpp"
#include "wsd/error.hpp"
#include "wsd/tagger.hpp"

using wsd::Tag;

namespace {

std::vector<Tag> tags_of(const std::vector<wsd::TaggedToken>& tokens) {
    std::vector<Tag> out;
    for (const auto& t : tokens) out.push_back(t.tag);
    return out;
}

const wsd::Tagger& shipped() {
    static const auto t = wsd::Tagger::load_default();
    return t;
}

}  // namespace

TEST_CASE("shipped lexicon and rules on a frozen mini-corpus") {
    const auto& t = shipped();
    CHECK(tags_of(t.tag_sentence({"the", "dog", "runs"})) == std::vector{Tag::DT, Tag::NN, Tag::VBZ});
    CHECK(tags_of(t.tag_sentence({"I", "want", "to", "walk"}))[3] == Tag::VB);
    CHECK(tags_of(t.tag_sentence({"she", "has", "walked"}))[2] == Tag::VBN);
    CHECK(tags_of(t.tag_sentence({"The", "dog", "runs", "."})).back() == Tag::Period);
}

TEST_CASE("unknown words") {
    const auto& t = shipped();
    const auto tagged = t.tag_sentence({"we", "met", "Zorblax", "yesterday"});
    CHECK(tagged[2].tag == Tag::NNP);
    CHECK(t.guess_unknown("Zorblax", true) != Tag::NNP);
    CHECK(t.guess_unknown("1984", false) == Tag::CD);
    CHECK(t.guess_unknown("3.14", false) == Tag::CD);
    CHECK(t.guess_unknown("glorping", false) == Tag::VBG);
    CHECK(t.guess_unknown("frobbed", false) == Tag::VBN);
    CHECK(t.guess_unknown("quizzly", false) == Tag::RB);
    CHECK(t.guess_unknown("blorpable", false) == Tag::JJ);
    CHECK(t.guess_unknown("well-known", false) == Tag::JJ);
    CHECK(t.guess_unknown("zinks", false) == Tag::NNS);
    CHECK(t.guess_unknown("zink", false) == Tag::NN);
    CHECK(t.guess_unknown(",", false) == Tag::Comma);
}

TEST_CASE("lexicon lookup falls back to lowercase") {
    const auto& t = shipped();
    CHECK(t.lookup("Dog") == Tag::NN);
    CHECK_FALSE(t.lookup("zzzzq").has_value());
}

TEST_CASE("partial tag classes") {
    CHECK(wsd::partial_tag(Tag::NNS) == wsd::partial_tag(Tag::NNP));
    CHECK(wsd::partial_tag(Tag::NNS).family() == wsd::TagFamily::noun);
    CHECK(wsd::partial_tag(Tag::VBD) == wsd::partial_tag(Tag::VBZ));
    CHECK(wsd::partial_tag(Tag::DT).representative() == Tag::DT);
    CHECK(wsd::partial_tag(Tag::DT) != wsd::partial_tag(Tag::PDT));
    CHECK(wsd::partial_tag(Tag::JJS).name() == "ADJ");
    CHECK(wsd::partial_tag(Tag::DT).name() == "DT");
    CHECK(wsd::all_partial_classes().size() == 33);
}

TEST_CASE("content tags") {
    CHECK(wsd::is_content(Tag::JJ));
    CHECK_FALSE(wsd::is_content(Tag::RB));
    CHECK(wsd::is_content(Tag::NNPS));
    CHECK_FALSE(wsd::is_content(Tag::DT));
    CHECK_THROWS_WITH_AS(wsd::parse_tag("XYZ"), doctest::Contains("unknown tag"), wsd::Error);
}

TEST_CASE("exhaustive tagset properties") {
    std::set<std::string> names;
    for (auto t : wsd::all_tags()) {
        names.insert(std::string(wsd::tag_name(t)));
        CHECK(wsd::parse_tag(wsd::tag_name(t)) == t);
        if (wsd::is_content(t)) {
            const auto f = wsd::partial_tag(t).family();
            CHECK((f == wsd::TagFamily::noun || f == wsd::TagFamily::verb || f == wsd::TagFamily::adjective));
        }
        for (auto u : wsd::all_tags()) {
            const bool same_class = wsd::partial_tag(t) == wsd::partial_tag(u);
            const bool same_family = wsd::family_of(t) == wsd::family_of(u) && wsd::family_of(t) != wsd::TagFamily::other;
            CHECK(same_class == (t == u || same_family));
        }
    }
    CHECK(names.size() == wsd::kTagCount);
    CHECK(wsd::parse_tag("-LRB-") == Tag::LeftParen);
    CHECK(wsd::parse_tag("PRP$") == Tag::PRP_S);
}

TEST_CASE("property: output length equals input length") {
    gen::Rng rng(12);
    const std::vector<std::string> pool{"the", "Dog", "runs", "to", "walk", "has", "walked", ",", ".", "zinks",
                                        "Zorblax", "42", "quickly", "of", "bank", "can", "run"};
    for (int i = 0; i < 500; ++i) {
        std::vector<std::string> words(rng.below(20));
        for (auto& w : words) w = rng.pick(pool);
        const auto tagged = shipped().tag_sentence(words);
        REQUIRE(tagged.size() == words.size());
        for (std::size_t k = 0; k < words.size(); ++k) REQUIRE(tagged[k].surface == words[k]);
    }
}

TEST_CASE("rule parsing and file errors") {
    const auto r = wsd::parse_rule("NN VB WHEN prev_tag is TO");
    CHECK(r.from == Tag::NN);
    CHECK(r.to == Tag::VB);
    CHECK(r.condition == wsd::TagRule::Condition::prev_tag);
    CHECK(r.value == "TO");
    CHECK(wsd::parse_rule("VBD VBN WHEN prev_word is Has").value == "has");
    CHECK_THROWS_AS(wsd::parse_rule("NN VB IF prev_tag is TO"), wsd::Error);
    CHECK_THROWS_AS(wsd::parse_rule("NN QQ WHEN prev_tag is TO"), wsd::Error);
    CHECK_THROWS_AS(wsd::parse_rule("NN VB WHEN left_tag is TO"), wsd::Error);
    CHECK_THROWS_AS(wsd::parse_rule("NN VB WHEN prev_tag is XX"), wsd::Error);

    const auto dir = std::filesystem::temp_directory_path() / "wsd-tagger-test";
    std::filesystem::create_directories(dir);
    std::ofstream(dir / "lex.tsv") << "# comment\nbank\tNN\nflow\tVB\n";
    std::ofstream(dir / "bad.tsv") << "bank\tNN\nflow VB\n";
    std::ofstream(dir / "rules.txt") << "VB NN WHEN prev_word is the\n";
    const auto t = wsd::Tagger::load(dir / "lex.tsv", dir / "rules.txt");
    CHECK(t.lexicon_size() == 2);
    CHECK(tags_of(t.tag_sentence({"the", "flow"}))[1] == Tag::NN);
    CHECK(tags_of(t.tag_sentence({"banks", "flow"}))[1] == Tag::VB);
    CHECK_THROWS_WITH_AS(wsd::read_lexicon(dir / "bad.tsv"), doctest::Contains(":2"), wsd::Error);
    CHECK_THROWS_AS(wsd::read_lexicon(dir / "missing.tsv"), wsd::Error);
    std::filesystem::remove_all(dir);
}
