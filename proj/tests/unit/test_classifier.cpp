#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "support/generators.hpp"
#include "wsd/binary_io.hpp"
#include "wsd/ensemble.hpp"
#include "wsd/error.hpp"

using wsd::ml::LearnerKind;
using wsd::ml::LearnerSpec;
using wsd::ml::Matrix;

namespace {

const std::vector<LearnerKind> kAllKinds{LearnerKind::linear_svm, LearnerKind::logitboost_stump,
                                         LearnerKind::logitboost_linear, LearnerKind::boosted_tree,
                                         LearnerKind::rule_list};

struct Binary {
    Matrix x;
    std::vector<int> y;
};

// Label decided by the informative dimensions; the rest is uniform noise.
Binary separable_binary(gen::Rng& rng, std::size_t n, std::size_t informative, std::size_t noise) {
    Binary b{Matrix(n, informative + noise), std::vector<int>(n)};
    for (std::size_t i = 0; i < n; ++i) {
        const int label = rng.coin() ? 1 : 0;
        b.y[i] = label;
        for (std::size_t d = 0; d < informative; ++d) b.x(i, d) = label ? rng.real(55.0, 100.0) : rng.real(0.0, 45.0);
        for (std::size_t d = informative; d < informative + noise; ++d) b.x(i, d) = rng.real(0.0, 100.0);
    }
    return b;
}

double accuracy(const wsd::ml::BinaryModel& m, const Binary& b) {
    std::size_t ok = 0;
    for (std::size_t i = 0; i < b.x.rows(); ++i) ok += (m.probability(b.x.row(i)) >= 0.5) == (b.y[i] == 1);
    return static_cast<double>(ok) / static_cast<double>(b.x.rows());
}

std::vector<wsd::FeatureVector> multiclass(gen::Rng& rng, std::size_t n, std::size_t classes, std::size_t noise) {
    std::vector<wsd::FeatureVector> out;
    for (std::size_t i = 0; i < n; ++i) {
        const auto c = rng.below(classes);
        wsd::FeatureVector v{"v" + std::to_string(i), {}, "s" + std::to_string(c)};
        for (std::size_t d = 0; d < 2 * classes; ++d) v.values.push_back(d / 2 == c ? rng.real(60, 100) : rng.real(0, 40));
        for (std::size_t d = 0; d < noise; ++d) v.values.push_back(rng.real(0, 100));
        out.push_back(std::move(v));
    }
    return out;
}

double ensemble_accuracy(const wsd::EnsembleModel& m, const std::vector<wsd::FeatureVector>& data) {
    std::size_t ok = 0;
    for (const auto& v : data) ok += m.predict(v.values).sense == *v.label;
    return static_cast<double>(ok) / static_cast<double>(data.size());
}

}  // namespace

TEST_CASE("learner names") {
    for (auto k : kAllKinds) CHECK(wsd::ml::parse_learner(wsd::ml::learner_name(k)) == k);
    CHECK_THROWS_AS(wsd::ml::parse_learner("naive_bayes"), wsd::Error);
    CHECK(wsd::ml::default_learners().size() == 5);
}

TEST_CASE("constant-label data gives the prior") {
    Matrix x(6, 2);
    for (std::size_t i = 0; i < 6; ++i) x(i, 0) = static_cast<double>(i);
    for (int label : {0, 1}) {
        const std::vector<int> y(6, label);
        for (auto k : kAllKinds) {
            const auto m = wsd::ml::train_base({k}, x, y, 1);
            CHECK(std::holds_alternative<wsd::ml::ConstantModel>(m.variant()));
            CHECK(m.probability(x.row(3)) == doctest::Approx(label));
        }
    }
}

TEST_CASE("boosted stumps separate one-dimensional threshold data") {
    gen::Rng rng(1);
    Binary b{Matrix(120, 1), std::vector<int>(120)};
    for (std::size_t i = 0; i < 120; ++i) {
        b.x(i, 0) = rng.real(0.0, 10.0);
        b.y[i] = b.x(i, 0) > 6.3 ? 1 : 0;
    }
    const auto m = wsd::ml::train_base({LearnerKind::logitboost_stump}, b.x, b.y, 3);
    CHECK(accuracy(m, b) == 1.0);
}

TEST_CASE("linear learner puts its weight on the informative dimension") {
    gen::Rng rng(2);
    const auto b = separable_binary(rng, 200, 1, 9);
    const auto lin = wsd::ml::train_linear_svm(b.x, b.y, 1.0, 4);
    const double informative = std::abs(lin.weights[0]);
    for (std::size_t d = 1; d < lin.weights.size(); ++d) CHECK(informative > std::abs(lin.weights[d]));
    CHECK(lin.platt_a < 0.0);  // larger margins mean higher probability
}

TEST_CASE("every learner fits separable data") {
    gen::Rng rng(3);
    const auto train = separable_binary(rng, 200, 10, 20);
    const auto test = separable_binary(rng, 200, 10, 20);
    for (auto k : kAllKinds) {
        CAPTURE(wsd::ml::learner_name(k));
        const auto m = wsd::ml::train_base({k}, train.x, train.y, 9);
        CHECK(accuracy(m, train) >= 0.95);
        CHECK(accuracy(m, test) >= 0.9);
        for (std::size_t i = 0; i < 10; ++i) {
            const double p = m.probability(test.x.row(i));
            CHECK(p >= 0.0);
            CHECK(p <= 1.0);
        }
    }
}

TEST_CASE("regression stump matches exhaustive split search") {
    gen::Rng rng(4);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = rng.between(2, 25), dims = rng.between(1, 3);
        Matrix x(n, dims);
        std::vector<double> z(n), w(n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t d = 0; d < dims; ++d) x(i, d) = static_cast<double>(rng.below(6));
            z[i] = rng.real(-3.0, 3.0);
            w[i] = rng.real(0.1, 1.0);
        }
        auto sse_of = [&](auto&& predict) {
            double s = 0;
            for (std::size_t i = 0; i < n; ++i) s += w[i] * std::pow(z[i] - predict(x.row(i)), 2);
            return s;
        };
        double best = sse_of([&](auto) {
            double sw = 0, swz = 0;
            for (std::size_t i = 0; i < n; ++i) sw += w[i], swz += w[i] * z[i];
            return swz / sw;
        });
        for (std::size_t d = 0; d < dims; ++d)
            for (double t = 0.5; t < 6; t += 1.0) {
                double lw = 0, lz = 0, rw = 0, rz = 0;
                for (std::size_t i = 0; i < n; ++i) (x(i, d) <= t ? lw : rw) += w[i], (x(i, d) <= t ? lz : rz) += w[i] * z[i];
                if (lw == 0 || rw == 0) continue;
                best = std::min(best, sse_of([&](auto row) { return row[d] <= t ? lz / lw : rz / rw; }));
            }
        const auto tree = wsd::ml::fit_regression_tree(x, z, w, 1);
        CHECK(sse_of([&](auto row) { return tree.predict(row); }) == doctest::Approx(best).epsilon(1e-9));
    }
}

TEST_CASE("simple linear regression matches the closed form") {
    gen::Rng rng(5);
    const std::size_t n = 40;
    Matrix x(n, 3);
    std::vector<double> z(n), w(n, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        x(i, 0) = rng.real(0, 1);
        x(i, 1) = rng.real(0, 1);
        x(i, 2) = rng.real(0, 1);
        z[i] = 2.0 * x(i, 1) - 0.5 + rng.real(-0.01, 0.01);
    }
    const auto r = wsd::ml::fit_simple_linear(x, z, w);
    CHECK(r.feature == 1);
    CHECK(r.slope == doctest::Approx(2.0).epsilon(0.02));
    CHECK(r.intercept == doctest::Approx(-0.5).epsilon(0.05));
}

TEST_CASE("binary models survive serialization") {
    gen::Rng rng(6);
    const auto b = separable_binary(rng, 80, 3, 3);
    for (auto k : kAllKinds) {
        const auto m = wsd::ml::train_base({k}, b.x, b.y, 2);
        wsd::ByteWriter w;
        m.write(w);
        wsd::ByteReader r(w.bytes(), "mem");
        const auto back = wsd::ml::BinaryModel::read(r);
        for (std::size_t i = 0; i < b.x.rows(); ++i) CHECK(back.probability(b.x.row(i)) == m.probability(b.x.row(i)));
    }
}

TEST_CASE("seed derivation") {
    CHECK(wsd::ml::derive_seed(1, 2) == wsd::ml::derive_seed(1, 2));
    std::set<std::uint64_t> seen;
    for (std::uint64_t k = 0; k < 1000; ++k) seen.insert(wsd::ml::derive_seed(42, k));
    CHECK(seen.size() == 1000);
}

TEST_CASE("ensemble configuration and data errors") {
    wsd::EnsembleConfig cfg;
    cfg.bagging_rounds = 0;
    CHECK_THROWS_AS(cfg.validate(), wsd::Error);
    cfg = {};
    cfg.bag_fraction = 0.0;
    CHECK_THROWS_AS(cfg.validate(), wsd::Error);
    cfg.bag_fraction = 1.5;
    CHECK_THROWS_AS(cfg.validate(), wsd::Error);
    cfg = {};
    cfg.base_learners.clear();
    CHECK_THROWS_AS(cfg.validate(), wsd::Error);

    const std::vector<wsd::FeatureVector> one{{"a", {1.0}, "s"}};
    CHECK_THROWS_WITH_AS(wsd::train_ensemble(one, {}, 0), doctest::Contains("insufficient data"), wsd::Error);
    const std::vector<wsd::FeatureVector> unlabeled{{"a", {1.0}, "s"}, {"b", {2.0}, std::nullopt}};
    CHECK_THROWS_AS(wsd::train_ensemble(unlabeled, {}, 0), wsd::Error);
}

TEST_CASE("single-sense training predicts that sense with certainty") {
    const std::vector<wsd::FeatureVector> data{{"a", {1.0, 0.0}, "s"}, {"b", {0.0, 1.0}, "s"}, {"c", {0.5, 0.5}, "s"}};
    const auto m = wsd::train_ensemble(data, {}, 0);
    for (auto x : {std::vector<double>{9.0, -3.0}, std::vector<double>{0.0, 0.0}}) {
        const auto p = m.predict(x);
        CHECK(p.sense == "s");
        CHECK(p.probability == 1.0);
    }
}

TEST_CASE("sense ordering and bags") {
    const std::vector<std::string> labels{"b", "a", "c", "b", "a", "b"};
    CHECK(wsd::ordered_senses(labels) == std::vector<std::string>{"b", "a", "c"});

    wsd::EnsembleConfig cfg;
    cfg.bag_fraction = 0.5;
    const auto bags = wsd::draw_bags(11, cfg);
    CHECK(bags.size() == 10);
    for (const auto& bag : bags) {
        CHECK(bag.size() == 5);  // floor(0.5 * 11)
        for (auto i : bag) CHECK(i < 11);
    }
    CHECK(bags == wsd::draw_bags(11, cfg));
    cfg.resample = false;
    cfg.bag_fraction = 1.0;
    for (const auto& bag : wsd::draw_bags(5, cfg)) CHECK(bag == std::vector<std::size_t>{0, 1, 2, 3, 4});
}

TEST_CASE("two-sense separable data") {
    gen::Rng rng(7);
    auto data = multiclass(rng, 200, 2, 40);
    const auto m = wsd::train_ensemble(data, {}, 0);
    CHECK(ensemble_accuracy(m, data) >= 0.95);
}

TEST_CASE("predictions are probability vectors and deterministic") {
    gen::Rng rng(8);
    const auto train = multiclass(rng, 150, 3, 10);
    const auto test = multiclass(rng, 50, 3, 10);
    wsd::EnsembleConfig cfg;
    cfg.seed = 99;
    const auto a = wsd::train_ensemble(train, cfg, 0);
    const auto b = wsd::train_ensemble(train, cfg, 0);
    CHECK(a.serialize() == b.serialize());
    for (const auto& v : test) {
        const auto p = a.predict(v.values);
        const double sum = std::accumulate(p.distribution.begin(), p.distribution.end(), 0.0);
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
        for (double q : p.distribution) CHECK(q >= 0.0);
        CHECK(p.probability == *std::max_element(p.distribution.begin(), p.distribution.end()));
        CHECK(p.sense == b.predict(v.values).sense);
    }
    CHECK_THROWS_WITH_AS(a.predict(std::vector<double>(3)), doctest::Contains("schema mismatch"), wsd::Error);
}

TEST_CASE("vote distribution is the normalized score vector") {
    gen::Rng rng(9);
    const auto train = multiclass(rng, 90, 3, 5);
    std::vector<std::string> labels;
    for (const auto& v : train) labels.push_back(*v.label);
    const auto senses = wsd::ordered_senses(labels);
    const auto vote = wsd::OneVsAllVote::train(wsd::to_matrix(train), labels, senses, wsd::ml::default_learners(), 5);
    for (const auto& v : train) {
        const auto s = vote.scores(v.values);
        const auto d = vote.distribution(v.values);
        const double total = std::accumulate(s.begin(), s.end(), 0.0);
        for (std::size_t i = 0; i < s.size(); ++i) CHECK(d[i] == doctest::Approx(s[i] / total));
        // scaling every score leaves the argmax alone
        std::vector<double> scaled;
        for (double x : s) scaled.push_back(x * 3.7);
        CHECK(std::max_element(scaled.begin(), scaled.end()) - scaled.begin() ==
              std::max_element(d.begin(), d.end()) - d.begin());
    }
}

TEST_CASE("ensemble is no worse than its best member by more than 0.05") {
    gen::Rng rng(10);
    const auto train = multiclass(rng, 200, 3, 40);
    const auto test = multiclass(rng, 200, 3, 40);
    wsd::EnsembleConfig cfg;
    cfg.seed = 3;
    const double ens = ensemble_accuracy(wsd::train_ensemble(train, cfg, 0), test);
    double best = 0.0;
    for (auto k : kAllKinds) {
        wsd::EnsembleConfig single = cfg;
        single.bagging_rounds = 1;
        single.resample = false;
        single.base_learners = {LearnerSpec{k}};
        best = std::max(best, ensemble_accuracy(wsd::train_ensemble(train, single, 0), test));
    }
    CHECK(ens >= best - 0.05);
}

TEST_CASE("model files round trip and reject corruption") {
    gen::Rng rng(11);
    const auto train = multiclass(rng, 60, 3, 4);
    wsd::EnsembleConfig cfg;
    cfg.bagging_rounds = 3;
    const auto m = wsd::train_ensemble(train, cfg, 0xfeedULL);
    const auto bytes = m.serialize();
    const auto back = wsd::EnsembleModel::deserialize(bytes);
    CHECK(back.schema_hash() == 0xfeedULL);
    CHECK(back.feature_count() == train[0].values.size());
    CHECK(back.senses() == m.senses());
    CHECK(back.serialize() == bytes);
    for (const auto& v : train) CHECK(back.predict(v.values).distribution == m.predict(v.values).distribution);

    CHECK_THROWS_AS(wsd::EnsembleModel::deserialize("WSDMODEX" + bytes.substr(8)), wsd::FormatError);
    auto version = bytes;
    version[8] = 7;
    CHECK_THROWS_AS(wsd::EnsembleModel::deserialize(version), wsd::FormatError);
    for (std::size_t cut : {std::size_t{12}, bytes.size() / 3, bytes.size() - 1})
        CHECK_THROWS_AS(wsd::EnsembleModel::deserialize(bytes.substr(0, cut)), wsd::FormatError);
}
