#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace wsd {
class ByteWriter;
class ByteReader;
}  // namespace wsd

namespace wsd::ml {

/// Dense row-major sample matrix.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Base learner families voting inside the ensemble.
enum class LearnerKind {
    linear_svm,         // linear max-margin classifier, dual coordinate descent, logistic calibration
    logitboost_stump,   // LogitBoost over regression stumps
    logitboost_linear,  // LogitBoost over single-attribute least-squares lines
    boosted_tree,       // LogitBoost over depth-limited regression trees
    rule_list,          // greedy grow-and-prune rule list
};

std::string_view learner_name(LearnerKind k);
LearnerKind parse_learner(std::string_view name);

struct LearnerSpec {
    LearnerKind kind = LearnerKind::linear_svm;
    int iterations = 10;     // boosting rounds
    double complexity = 1.0; // SVM C
    int max_depth = 3;       // boosted_tree only

    friend bool operator==(const LearnerSpec&, const LearnerSpec&) = default;
};

/// The five default learners, in voting order.
std::vector<LearnerSpec> default_learners();

struct ConstantModel {
    double probability = 0.5;
};

struct LinearModel {
    std::vector<double> offset;  // per-feature min
    std::vector<double> scale;   // 1 / (max - min), 0 for constant features
    std::vector<double> weights; // in scaled space
    double bias = 0.0;
    double platt_a = -1.0;
    double platt_b = 0.0;

    double decision(std::span<const double> x) const;
};

struct RegressionTree {
    struct Node {
        std::int32_t feature = -1;  // -1 marks a leaf
        double threshold = 0.0;     // go left when x[feature] <= threshold
        std::int32_t left = -1;
        std::int32_t right = -1;
        double value = 0.0;
    };
    std::vector<Node> nodes;

    double predict(std::span<const double> x) const;
};

struct LinearRegressor {
    std::int32_t feature = -1;  // -1: intercept only
    double intercept = 0.0;
    double slope = 0.0;

    double predict(std::span<const double> x) const {
        return intercept + (feature < 0 ? 0.0 : slope * x[static_cast<std::size_t>(feature)]);
    }
};

using WeakRegressor = std::variant<RegressionTree, LinearRegressor>;

/// Additive logistic model: F(x) = sum 0.5 f_m(x), P(y=1|x) = 1 / (1 + exp(-2F)).
struct BoostedModel {
    std::vector<WeakRegressor> stages;

    double score(std::span<const double> x) const;
};

struct RuleList {
    struct Condition {
        std::int32_t feature = 0;
        bool less_equal = true;  // x <= threshold, else x > threshold
        double threshold = 0.0;
    };
    struct Rule {
        std::vector<Condition> conditions;
        double probability = 0.5;  // P(y=1) for covered samples

        bool covers(std::span<const double> x) const;
    };
    std::vector<Rule> rules;
    double default_probability = 0.5;
};

/// Probabilistic binary classifier: maps a feature vector to P(y = 1).
class BinaryModel {
public:
    using Variant = std::variant<ConstantModel, LinearModel, BoostedModel, RuleList>;

    BinaryModel() = default;
    explicit BinaryModel(Variant v) : model_(std::move(v)) {}

    double probability(std::span<const double> x) const;
    const Variant& variant() const { return model_; }

    void write(ByteWriter& w) const;
    static BinaryModel read(ByteReader& r);

private:
    Variant model_;
};

/// Trains one base learner on 0/1 labels. Single-class data yields a constant model at the
/// class prior.
BinaryModel train_base(const LearnerSpec& spec, const Matrix& x, std::span<const int> y, std::uint64_t seed);

LinearModel train_linear_svm(const Matrix& x, std::span<const int> y, double complexity, std::uint64_t seed);
BoostedModel train_logitboost(const Matrix& x, std::span<const int> y, LearnerKind weak, int iterations,
                              int max_depth);
RuleList train_rule_list(const Matrix& x, std::span<const int> y, std::uint64_t seed);

/// Weighted least-squares regression tree on (x, z, w), grown level by level to `max_depth`.
RegressionTree fit_regression_tree(const Matrix& x, std::span<const double> z, std::span<const double> w,
                                   int max_depth);
/// Best single-attribute weighted least-squares line.
LinearRegressor fit_simple_linear(const Matrix& x, std::span<const double> z, std::span<const double> w);

/// Sigmoid (a, b) for P(y=1|f) = 1 / (1 + exp(a f + b)), fitted by regularized Newton iterations.
std::pair<double, double> fit_platt(std::span<const double> decision, std::span<const int> y);

/// Deterministic seed stream: distinct `k` give statistically independent seeds.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t k);

}  // namespace wsd::ml
