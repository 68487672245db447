#include "wsd/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <map>
#include <random>

#include "wsd/binary_io.hpp"
#include "wsd/error.hpp"

namespace wsd {

namespace {

constexpr std::string_view kMagic = "WSDMODEL";
constexpr std::uint32_t kVersion = 1;

void check_features(const ml::BinaryModel& m, std::size_t features, ByteReader& r) {
    auto bad = [&](std::int64_t f) { return f < 0 || static_cast<std::size_t>(f) >= features; };
    std::visit(
        [&](const auto& model) {
            using T = std::decay_t<decltype(model)>;
            if constexpr (std::is_same_v<T, ml::LinearModel>) {
                if (model.weights.size() != features) r.fail("linear model dimension mismatch");
            } else if constexpr (std::is_same_v<T, ml::BoostedModel>) {
                for (const auto& s : model.stages) {
                    if (const auto* t = std::get_if<ml::RegressionTree>(&s)) {
                        for (const auto& nd : t->nodes)
                            if (nd.feature >= 0 && bad(nd.feature)) r.fail("tree feature out of range");
                    } else if (const auto& lr = std::get<ml::LinearRegressor>(s); lr.feature >= 0 && bad(lr.feature)) {
                        r.fail("regressor feature out of range");
                    }
                }
            } else if constexpr (std::is_same_v<T, ml::RuleList>) {
                for (const auto& rule : model.rules)
                    for (const auto& c : rule.conditions)
                        if (bad(c.feature)) r.fail("rule feature out of range");
            }
        },
        m.variant());
}

}  // namespace

void EnsembleConfig::validate() const {
    if (bagging_rounds < 1) throw Error("ensemble config: bagging_rounds must be >= 1");
    if (!(bag_fraction > 0.0 && bag_fraction <= 1.0)) throw Error("ensemble config: bag_fraction must be in (0, 1]");
    if (base_learners.empty()) throw Error("ensemble config: at least one base learner is required");
}

std::vector<std::string> ordered_senses(std::span<const std::string> labels) {
    std::map<std::string, std::size_t> freq;
    for (const auto& l : labels) ++freq[l];
    std::vector<std::pair<std::string, std::size_t>> v(freq.begin(), freq.end());
    std::stable_sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    std::vector<std::string> out;
    for (auto& [s, _] : v) out.push_back(s);
    return out;
}

std::vector<std::vector<std::size_t>> draw_bags(std::size_t n, const EnsembleConfig& config) {
    std::vector<std::vector<std::size_t>> bags(static_cast<std::size_t>(config.bagging_rounds));
    std::mt19937_64 rng(ml::derive_seed(config.seed, 0x6261677300ull));
    const auto size = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(config.bag_fraction * static_cast<double>(n))));
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (auto& bag : bags) {
        if (!config.resample) {
            bag.resize(n);
            for (std::size_t i = 0; i < n; ++i) bag[i] = i;
            continue;
        }
        bag.resize(size);
        for (auto& i : bag) i = pick(rng);
    }
    return bags;
}

std::uint64_t round_seed(const EnsembleConfig& config, std::size_t round) {
    return ml::derive_seed(config.seed, round);
}

ml::Matrix to_matrix(const std::vector<FeatureVector>& vectors) {
    const auto d = vectors.empty() ? 0 : vectors.front().values.size();
    ml::Matrix x(vectors.size(), d);
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        if (vectors[i].values.size() != d)
            throw Error("vector " + vectors[i].instance_id + " has " + std::to_string(vectors[i].values.size()) +
                        " values, expected " + std::to_string(d));
        std::copy(vectors[i].values.begin(), vectors[i].values.end(), x.row(i).begin());
    }
    return x;
}

OneVsAllVote OneVsAllVote::train(const ml::Matrix& x, std::span<const std::string> labels,
                                 const std::vector<std::string>& senses,
                                 const std::vector<ml::LearnerSpec>& learners, std::uint64_t seed) {
    OneVsAllVote vote;
    std::vector<int> y(labels.size());
    for (std::size_t s = 0; s < senses.size(); ++s) {
        for (std::size_t i = 0; i < labels.size(); ++i) y[i] = labels[i] == senses[s] ? 1 : 0;
        std::vector<ml::BinaryModel> voters;
        for (std::size_t l = 0; l < learners.size(); ++l)
            voters.push_back(ml::train_base(learners[l], x, y, ml::derive_seed(seed, s * learners.size() + l)));
        vote.voters_.push_back(std::move(voters));
    }
    return vote;
}

std::vector<double> OneVsAllVote::scores(std::span<const double> x) const {
    std::vector<double> out;
    out.reserve(voters_.size());
    for (const auto& voters : voters_) {
        double sum = 0.0;
        for (const auto& v : voters) sum += v.probability(x);
        out.push_back(sum / static_cast<double>(voters.size()));
    }
    return out;
}

std::vector<double> OneVsAllVote::distribution(std::span<const double> x) const {
    auto s = scores(x);
    double total = 0.0;
    for (double v : s) total += v;
    for (auto& v : s) v = total > 0.0 ? v / total : 1.0 / static_cast<double>(s.size());
    return s;
}

void OneVsAllVote::write(ByteWriter& w) const {
    for (const auto& voters : voters_)
        for (const auto& v : voters) v.write(w);
}

OneVsAllVote OneVsAllVote::read(ByteReader& r, std::size_t senses, std::size_t learners) {
    OneVsAllVote vote;
    vote.voters_.resize(senses);
    for (auto& voters : vote.voters_)
        for (std::size_t l = 0; l < learners; ++l) voters.push_back(ml::BinaryModel::read(r));
    return vote;
}

Prediction EnsembleModel::predict(std::span<const double> x) const {
    if (x.size() != feature_count_)
        throw Error("schema mismatch: vector has " + std::to_string(x.size()) + " values, model expects " +
                    std::to_string(feature_count_));
    Prediction p;
    p.distribution.assign(senses_.size(), 0.0);
    for (const auto& round : rounds_) {
        const auto d = round.distribution(x);
        for (std::size_t s = 0; s < d.size(); ++s) p.distribution[s] += d[s];
    }
    for (auto& v : p.distribution) v /= static_cast<double>(rounds_.size());
    const auto best = static_cast<std::size_t>(std::max_element(p.distribution.begin(), p.distribution.end()) -
                                               p.distribution.begin());
    p.sense = senses_[best];
    p.probability = p.distribution[best];
    return p;
}

EnsembleModel train_ensemble(const std::vector<FeatureVector>& vectors, const EnsembleConfig& config,
                             std::uint64_t schema_hash) {
    config.validate();
    if (vectors.size() < 2)
        throw Error("insufficient data: " + std::to_string(vectors.size()) + " training vector(s), need at least 2");
    std::vector<std::string> labels;
    labels.reserve(vectors.size());
    for (const auto& v : vectors) {
        if (!v.label) throw Error("training vector " + v.instance_id + " has no label");
        labels.push_back(*v.label);
    }
    const auto x = to_matrix(vectors);

    EnsembleModel model;
    model.config_ = config;
    model.senses_ = ordered_senses(labels);
    model.schema_hash_ = schema_hash;
    model.feature_count_ = x.cols();

    const auto bags = draw_bags(vectors.size(), config);
    for (std::size_t r = 0; r < bags.size(); ++r) {
        const auto& bag = bags[r];
        ml::Matrix bx(bag.size(), x.cols());
        std::vector<std::string> by;
        by.reserve(bag.size());
        for (std::size_t k = 0; k < bag.size(); ++k) {
            const auto row = x.row(bag[k]);
            std::copy(row.begin(), row.end(), bx.row(k).begin());
            by.push_back(labels[bag[k]]);
        }
        model.rounds_.push_back(OneVsAllVote::train(bx, by, model.senses_, config.base_learners, round_seed(config, r)));
    }
    return model;
}

std::string EnsembleModel::serialize() const {
    ByteWriter w;
    w.magic(kMagic);
    w.u32(kVersion);
    w.u64(static_cast<std::uint64_t>(config_.bagging_rounds));
    w.f64(config_.bag_fraction);
    w.u8(config_.resample ? 1 : 0);
    w.u64(config_.seed);
    w.u64(config_.base_learners.size());
    for (const auto& l : config_.base_learners) {
        w.str(ml::learner_name(l.kind));
        w.i64(l.iterations);
        w.f64(l.complexity);
        w.i64(l.max_depth);
    }
    w.u64(schema_hash_);
    w.u64(feature_count_);
    w.u64(senses_.size());
    for (const auto& s : senses_) w.str(s);
    for (const auto& round : rounds_) round.write(w);
    return w.bytes();
}

EnsembleModel EnsembleModel::deserialize(std::string bytes, std::string source) {
    ByteReader r(std::move(bytes), std::move(source));
    r.expect_magic(kMagic);
    r.expect_version(kVersion);
    EnsembleModel m;
    const auto rounds = r.u64();
    if (rounds == 0 || rounds > (1u << 16)) r.fail("bad round count");
    m.config_.bagging_rounds = static_cast<int>(rounds);
    m.config_.bag_fraction = r.f64();
    m.config_.resample = r.u8() != 0;
    m.config_.seed = r.u64();
    const auto learners = r.u64();
    if (learners == 0 || learners > 64) r.fail("bad learner count");
    m.config_.base_learners.clear();
    for (std::uint64_t l = 0; l < learners; ++l) {
        ml::LearnerSpec spec;
        try {
            spec.kind = ml::parse_learner(r.str());
        } catch (const Error& e) {
            r.fail(e.what());
        }
        spec.iterations = static_cast<int>(r.i64());
        spec.complexity = r.f64();
        spec.max_depth = static_cast<int>(r.i64());
        m.config_.base_learners.push_back(spec);
    }
    try {
        m.config_.validate();
    } catch (const Error& e) {
        r.fail(e.what());
    }
    m.schema_hash_ = r.u64();
    m.feature_count_ = r.u64();
    const auto senses = r.u64();
    if (senses == 0 || senses > (1u << 16)) r.fail("bad sense count");
    for (std::uint64_t s = 0; s < senses; ++s) m.senses_.push_back(r.str());
    for (std::uint64_t k = 0; k < rounds; ++k) {
        auto vote = OneVsAllVote::read(r, senses, learners);
        for (const auto& voters : vote.voters())
            for (const auto& v : voters) check_features(v, m.feature_count_, r);
        m.rounds_.push_back(std::move(vote));
    }
    r.expect_end();
    return m;
}

void EnsembleModel::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    const auto bytes = serialize();
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error("write failed: " + path.string());
}

EnsembleModel EnsembleModel::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return deserialize(std::move(bytes), path.string());
}

}  // namespace wsd
