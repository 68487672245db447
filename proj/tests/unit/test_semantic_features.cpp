#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "support/generators.hpp"
#include "wsd/error.hpp"
#include "wsd/semantic_features.hpp"

using wsd::Direction;
using wsd::SemanticFeature;
using wsd::Tag;

namespace {

wsd::Window make(std::initializer_list<std::pair<int, wsd::TaggedToken>> filled) {
    std::array<wsd::Window::Slot, wsd::kWindowSize> slots{};
    slots[wsd::kWindowRadius] = wsd::TaggedToken{"argument", Tag::NN};
    for (const auto& [off, tok] : filled) slots[static_cast<std::size_t>(off + wsd::kWindowRadius)] = tok;
    return wsd::Window(slots);
}

SemanticFeature model(Direction d, std::string w, std::string sense) {
    return {SemanticFeature::Kind::model, d, std::move(w), std::move(sense)};
}

const wsd::CooccurrenceIndex& toy_index() {
    static const auto idx = [] {
        wsd::Corpus docs{{"compelling", "argument", "strong", "case", "compelling", "argument"},
                         {"heated", "argument", "loud", "voice", "heated", "debate"},
                         {"strong", "case", "evidence", "court", "strong", "evidence"},
                         {"river", "bank", "water", "river", "flow", "water"}};
        return wsd::CooccurrenceIndex::build(docs, {});
    }();
    return idx;
}

}  // namespace

TEST_CASE("nearest content word") {
    CHECK(wsd::nearest_content(make({{-1, {"compelling", Tag::JJ}}}), Direction::pre) == "compelling");
    CHECK(wsd::nearest_content(make({{-1, {"the", Tag::DT}}, {-2, {"case", Tag::NN}}}), Direction::pre) == "case");
    CHECK_FALSE(wsd::nearest_content(make({{-1, {"the", Tag::DT}}, {-3, {"very", Tag::RB}}}), Direction::pre));
    CHECK(wsd::nearest_content(make({{3, {"ran", Tag::VBD}}}), Direction::fol) == "ran");
}

TEST_CASE("semantic schema") {
    const std::vector<wsd::LabeledWindow> training{
        {make({{-1, {"compelling", Tag::JJ}}, {1, {"for", Tag::IN}}}), "s1"},
        {make({{-1, {"heated", Tag::JJ}}, {2, {"Debate", Tag::NN}}}), "s2"},
    };
    const auto schema = wsd::generate_semantic_schema(training);
    std::set<std::string> models, avgs;
    for (const auto& f : schema) (f.kind == SemanticFeature::Kind::avg ? avgs : models).insert(f.name());
    CHECK(models == std::set<std::string>{"pre_compelling", "pre_heated", "fol_debate"});
    CHECK(avgs == std::set<std::string>{"avg_pre_s1", "avg_pre_s2", "avg_fol_s1", "avg_fol_s2"});

    // one word seen under two senses yields one feature per sense
    const auto twice = wsd::generate_semantic_schema({{make({{-1, {"strong", Tag::JJ}}}), "a"}, {make({{-1, {"strong", Tag::JJ}}}), "b"}});
    CHECK(std::count_if(twice.begin(), twice.end(), [](const auto& f) { return f.kind == SemanticFeature::Kind::model; }) == 2);
}

TEST_CASE("raw values") {
    const wsd::PmiCache pmi(toy_index());
    const auto w = make({{-1, {"heated", Tag::JJ}}});
    CHECK(wsd::raw_semantic_value(model(Direction::pre, "compelling", "s"), w, pmi) == toy_index().pmi("heated", "compelling"));
    CHECK(wsd::raw_semantic_value(model(Direction::fol, "compelling", "s"), w, pmi) == 0.0);
}

TEST_CASE("a model word equal to the context word scores its clustered self-association") {
    // 20 filler documents; "strong" appears five times in a burst inside one of them
    gen::Rng rng(2);
    wsd::Corpus docs(20);
    for (auto& d : docs)
        for (int i = 0; i < 50; ++i) d.push_back("f" + std::to_string(rng.below(200)));
    for (int i = 0; i < 5; ++i) docs[7][10 + 2 * i] = "strong";
    const auto idx = wsd::CooccurrenceIndex::build(docs, {});
    const wsd::PmiCache pmi(idx);

    // brute force: pairs of "strong" positions within 20 tokens, and all ordered pairs
    double c12 = 0, pairs = 0, c = 0, t = 0;
    for (const auto& d : docs) {
        for (std::size_t i = 0; i < d.size(); ++i) {
            t += 1;
            c += d[i] == "strong";
            for (std::size_t j = 0; j < d.size(); ++j) {
                const std::size_t dist = i > j ? i - j : j - i;
                if (i == j || dist > 20) continue;
                pairs += 1;
                if (i < j && d[i] == "strong" && d[j] == "strong") c12 += 1;
            }
        }
    }
    const double expected = std::log2(((c12 + 1) / (pairs + 2)) / std::pow((c + 1) / (t + 2), 2));
    const double v = wsd::raw_semantic_value(model(Direction::pre, "strong", "s"), make({{-1, {"Strong", Tag::JJ}}}), pmi);
    CHECK(v == doctest::Approx(expected).epsilon(1e-12));
    CHECK(v > 2.0);
}

TEST_CASE("percentile normalization") {
    const std::vector<double> raw{5.0, 1.0, 3.0};
    const auto out = wsd::percentile_normalize(raw);
    CHECK(out[0] == doctest::Approx(100.0));
    CHECK(out[1] == doctest::Approx(33.33).epsilon(1e-3));
    CHECK(out[2] == doctest::Approx(66.67).epsilon(1e-3));
    CHECK(wsd::percentile_normalize(std::vector<double>{2.0, 2.0, 2.0}) == std::vector<double>{100.0, 100.0, 100.0});
    CHECK(wsd::percentile_normalize(std::vector<double>{}).empty());
    const double ninf = -std::numeric_limits<double>::infinity();
    CHECK(wsd::percentile_normalize(std::vector<double>{ninf, 0.0}) == std::vector<double>{50.0, 100.0});
}

TEST_CASE("avg values") {
    wsd::FeatureSchema schema;
    schema.semantic = {model(Direction::pre, "x", "argument_1_10_02")};
    CHECK(wsd::avg_value(std::vector<double>{66.67}, Direction::pre, "argument_1_10_02", schema) == doctest::Approx(66.67));
    schema.semantic = {model(Direction::pre, "x", "s"), model(Direction::pre, "y", "s"), model(Direction::fol, "z", "s")};
    CHECK(wsd::avg_value(std::vector<double>{100.0, 0.0, 40.0}, Direction::pre, "s", schema) == 50.0);
    CHECK(wsd::avg_value(std::vector<double>{100.0, 0.0, 40.0}, Direction::fol, "t", schema) == 0.0);
    CHECK_THROWS_AS(wsd::avg_value(std::vector<double>{1.0}, Direction::pre, "s", schema), wsd::Error);
}

TEST_CASE("selection thresholds") {
    const wsd::PmiCache pmi(toy_index());
    wsd::FeatureSchema schema;
    schema.head_word = "argument";
    for (const char* w : {"compelling", "heated", "water", "evidence", "unseenword"}) schema.semantic.push_back(model(Direction::pre, w, "s"));
    const auto all = wsd::select_features(schema, "argument", pmi, -std::numeric_limits<double>::infinity());
    CHECK(all.semantic.size() == schema.semantic.size());
    CHECK(wsd::select_features(schema, "argument", pmi, std::numeric_limits<double>::infinity()).semantic.empty());
    const auto fine = wsd::select_features(schema, "argument", pmi, wsd::selection_threshold("fine"));
    const auto fine2 = wsd::select_features(schema, "argument", pmi, wsd::selection_threshold("fine2"));
    CHECK(fine2.semantic.size() >= fine.semantic.size());
    CHECK(std::any_of(fine.semantic.begin(), fine.semantic.end(), [](const auto& f) { return f.model == "compelling"; }));
    CHECK_FALSE(std::any_of(fine.semantic.begin(), fine.semantic.end(), [](const auto& f) { return f.model == "water"; }));
    CHECK_THROWS_AS(wsd::selection_threshold("medium"), wsd::Error);
}

TEST_CASE("vectorize with no context content") {
    const wsd::PmiCache pmi(toy_index());
    const std::vector<wsd::LabeledWindow> training{{make({{-1, {"compelling", Tag::JJ}}, {1, {"case", Tag::NN}}}), "s1"},
                                                   {make({{-1, {"heated", Tag::JJ}}}), "s2"}};
    const auto schema = wsd::generate_schema("argument", training);
    const auto v = wsd::vectorize(make({{-1, {"the", Tag::DT}}}), schema, pmi, "id", std::string("s1"));
    REQUIRE(v.values.size() == schema.size());
    CHECK(v.label == "s1");
    const auto sem0 = schema.syntactic.size();
    for (std::size_t i = 0; i < schema.semantic.size(); ++i) CHECK(v.values[sem0 + i] == 100.0);
    // every model value ties at 100; an avg over no models is 0
    for (std::size_t i = 0; i < schema.averages.size(); ++i) {
        const auto& a = schema.averages[i];
        const bool has_models = std::any_of(schema.semantic.begin(), schema.semantic.end(),
                                            [&](const auto& f) { return f.direction == a.direction && f.sense == a.sense; });
        CHECK(v.values[sem0 + schema.semantic.size() + i] == (has_models ? 100.0 : 0.0));
    }
    CHECK(schema.names().size() == schema.size());
}

TEST_CASE("property: vectors are total, aligned, bounded and deterministic") {
    gen::Rng rng(5150);
    wsd::Corpus docs(30);
    for (auto& d : docs)
        for (int i = 0; i < 80; ++i) d.push_back("t" + std::to_string(rng.below(12)));
    const auto idx = wsd::CooccurrenceIndex::build(docs, {});
    const wsd::PmiCache pmi(idx);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<wsd::LabeledWindow> training;
        for (std::size_t i = 0, n = rng.between(1, 8); i < n; ++i)
            training.push_back({gen::window(rng), "s" + std::to_string(rng.below(3))});
        const auto full = wsd::generate_schema("t0", training);
        const double hi = rng.real(-2.0, 2.0), lo = hi - rng.real(0.0, 2.0);
        const auto strict = wsd::select_features(full, "t0", pmi, hi);
        const auto loose = wsd::select_features(full, "t0", pmi, lo);
        for (const auto& f : strict.semantic) REQUIRE(std::find(loose.semantic.begin(), loose.semantic.end(), f) != loose.semantic.end());

        const auto w = gen::window(rng);
        const auto v = wsd::vectorize(w, loose, pmi, "x", {});
        REQUIRE(v.values.size() == loose.size());
        REQUIRE(v.values == wsd::vectorize(w, loose, pmi, "x", {}).values);
        const auto sem0 = loose.syntactic.size();
        double pre_max = 0, fol_max = 0;
        for (std::size_t i = 0; i < loose.semantic.size(); ++i) {
            const double x = v.values[sem0 + i];
            REQUIRE(x > 0.0);
            REQUIRE(x <= 100.0);
            (loose.semantic[i].direction == Direction::pre ? pre_max : fol_max) = std::max(
                loose.semantic[i].direction == Direction::pre ? pre_max : fol_max, x);
        }
        const bool has_pre = std::any_of(loose.semantic.begin(), loose.semantic.end(), [](const auto& f) { return f.direction == Direction::pre; });
        if (has_pre) REQUIRE(pre_max == 100.0);
        for (std::size_t i = 0; i < loose.averages.size(); ++i) {
            const double a = v.values[sem0 + loose.semantic.size() + i];
            REQUIRE(a >= 0.0);
            REQUIRE(a <= 100.0);
        }
    }
}
