#include "wsd/learners.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "wsd/binary_io.hpp"
#include "wsd/error.hpp"

namespace wsd::ml {

namespace {

using Orders = std::vector<std::vector<std::uint32_t>>;

Orders feature_orders(const Matrix& x) {
    Orders orders(x.cols());
    std::vector<std::uint32_t> base(x.rows());
    std::iota(base.begin(), base.end(), 0u);
    for (std::size_t j = 0; j < x.cols(); ++j) {
        auto& o = orders[j];
        o = base;
        std::stable_sort(o.begin(), o.end(), [&](auto a, auto b) { return x(a, j) < x(b, j); });
    }
    return orders;
}

double sigmoid_platt(double f, double a, double b) {
    const double t = f * a + b;
    return t >= 0 ? std::exp(-t) / (1.0 + std::exp(-t)) : 1.0 / (1.0 + std::exp(t));
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

RegressionTree fit_tree(const Matrix& x, const Orders& orders, std::span<const double> z,
                        std::span<const double> w, int max_depth) {
    const auto n = x.rows();
    RegressionTree tree;
    tree.nodes.emplace_back();
    std::vector<std::int32_t> node_of(n, 0);

    struct Totals {
        double w = 0, s = 0;
    };
    auto leaf_values = [&](const std::vector<std::int32_t>& active) {
        std::vector<Totals> totals(tree.nodes.size());
        for (std::size_t i = 0; i < n; ++i) {
            totals[static_cast<std::size_t>(node_of[i])].w += w[i];
            totals[static_cast<std::size_t>(node_of[i])].s += w[i] * z[i];
        }
        for (auto k : active) {
            const auto& t = totals[static_cast<std::size_t>(k)];
            tree.nodes[static_cast<std::size_t>(k)].value = t.w > 0 ? t.s / t.w : 0.0;
        }
        return totals;
    };

    std::vector<std::int32_t> active{0};
    for (int depth = 0; depth < max_depth && !active.empty(); ++depth) {
        const auto totals = leaf_values(active);
        std::vector<int> slot(tree.nodes.size(), -1);
        for (std::size_t a = 0; a < active.size(); ++a) slot[static_cast<std::size_t>(active[a])] = static_cast<int>(a);

        struct Best {
            double gain = 1e-10;
            std::int32_t feature = -1;
            double threshold = 0;
        };
        struct Scan {
            double wl = 0, sl = 0, last = 0;
            bool any = false;
        };
        std::vector<Best> best(active.size());
        std::vector<Scan> scan(active.size());
        for (std::size_t j = 0; j < x.cols(); ++j) {
            std::fill(scan.begin(), scan.end(), Scan{});
            for (auto i : orders[j]) {
                const int a = slot[static_cast<std::size_t>(node_of[i])];
                if (a < 0) continue;
                auto& st = scan[static_cast<std::size_t>(a)];
                const double v = x(i, j);
                if (st.any && v > st.last) {
                    const auto& t = totals[static_cast<std::size_t>(active[static_cast<std::size_t>(a)])];
                    const double wr = t.w - st.wl;
                    if (st.wl > 1e-12 && wr > 1e-12) {
                        const double sr = t.s - st.sl;
                        const double gain = st.sl * st.sl / st.wl + sr * sr / wr - t.s * t.s / t.w;
                        auto& b = best[static_cast<std::size_t>(a)];
                        if (gain > b.gain) {
                            b.gain = gain;
                            b.feature = static_cast<std::int32_t>(j);
                            b.threshold = st.last + (v - st.last) / 2;
                        }
                    }
                }
                st.wl += w[i];
                st.sl += w[i] * z[i];
                st.last = v;
                st.any = true;
            }
        }

        std::vector<std::int32_t> next;
        for (std::size_t a = 0; a < active.size(); ++a) {
            if (best[a].feature < 0) continue;
            const auto k = static_cast<std::size_t>(active[a]);
            const auto left = static_cast<std::int32_t>(tree.nodes.size());
            tree.nodes.emplace_back();
            tree.nodes.emplace_back();
            tree.nodes[k].feature = best[a].feature;
            tree.nodes[k].threshold = best[a].threshold;
            tree.nodes[k].left = left;
            tree.nodes[k].right = left + 1;
            next.push_back(left);
            next.push_back(left + 1);
        }
        for (std::size_t i = 0; i < n; ++i) {
            const auto& node = tree.nodes[static_cast<std::size_t>(node_of[i])];
            if (node.feature >= 0 && slot[static_cast<std::size_t>(node_of[i])] >= 0)
                node_of[i] = x(i, static_cast<std::size_t>(node.feature)) <= node.threshold ? node.left : node.right;
        }
        active = std::move(next);
    }
    leaf_values(active);
    return tree;
}

}  // namespace

std::string_view learner_name(LearnerKind k) {
    switch (k) {
        case LearnerKind::linear_svm: return "linear_svm";
        case LearnerKind::logitboost_stump: return "logitboost_stump";
        case LearnerKind::logitboost_linear: return "logitboost_linear";
        case LearnerKind::boosted_tree: return "boosted_tree";
        case LearnerKind::rule_list: return "rule_list";
    }
    return "?";
}

LearnerKind parse_learner(std::string_view name) {
    for (auto k : {LearnerKind::linear_svm, LearnerKind::logitboost_stump, LearnerKind::logitboost_linear,
                   LearnerKind::boosted_tree, LearnerKind::rule_list})
        if (learner_name(k) == name) return k;
    throw Error("unknown learner \"" + std::string(name) + "\"");
}

std::vector<LearnerSpec> default_learners() {
    return {
        {LearnerKind::linear_svm},
        {LearnerKind::logitboost_stump},
        {LearnerKind::logitboost_linear},
        {LearnerKind::boosted_tree},
        {LearnerKind::rule_list},
    };
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t k) {
    // splitmix64 finalizer over a golden-ratio stride
    std::uint64_t z = master + 0x9e3779b97f4a7c15ull * (k + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

double LinearModel::decision(std::span<const double> x) const {
    double s = bias;
    for (std::size_t j = 0; j < weights.size(); ++j) s += weights[j] * (x[j] - offset[j]) * scale[j];
    return s;
}

double RegressionTree::predict(std::span<const double> x) const {
    std::size_t k = 0;
    while (nodes[k].feature >= 0)
        k = static_cast<std::size_t>(x[static_cast<std::size_t>(nodes[k].feature)] <= nodes[k].threshold ? nodes[k].left
                                                                                                           : nodes[k].right);
    return nodes[k].value;
}

double BoostedModel::score(std::span<const double> x) const {
    double f = 0.0;
    for (const auto& stage : stages) f += 0.5 * std::visit([&](const auto& m) { return m.predict(x); }, stage);
    return f;
}

bool RuleList::Rule::covers(std::span<const double> x) const {
    for (const auto& c : conditions) {
        const double v = x[static_cast<std::size_t>(c.feature)];
        if (c.less_equal ? !(v <= c.threshold) : !(v > c.threshold)) return false;
    }
    return true;
}

double BinaryModel::probability(std::span<const double> x) const {
    return std::visit(
        [&](const auto& m) -> double {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, ConstantModel>) {
                return m.probability;
            } else if constexpr (std::is_same_v<T, LinearModel>) {
                return sigmoid_platt(m.decision(x), m.platt_a, m.platt_b);
            } else if constexpr (std::is_same_v<T, BoostedModel>) {
                return 1.0 / (1.0 + std::exp(-2.0 * m.score(x)));
            } else {
                for (const auto& rule : m.rules)
                    if (rule.covers(x)) return rule.probability;
                return m.default_probability;
            }
        },
        model_);
}

std::pair<double, double> fit_platt(std::span<const double> decision, std::span<const int> y) {
    const auto n = decision.size();
    double prior1 = 0, prior0 = 0;
    for (auto label : y) (label ? prior1 : prior0) += 1;
    const double hi = (prior1 + 1.0) / (prior1 + 2.0);
    const double lo = 1.0 / (prior0 + 2.0);
    std::vector<double> t(n);
    for (std::size_t i = 0; i < n; ++i) t[i] = y[i] ? hi : lo;

    auto objective = [&](double a, double b) {
        double f = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double v = decision[i] * a + b;
            f += v >= 0 ? t[i] * v + std::log1p(std::exp(-v)) : (t[i] - 1) * v + std::log1p(std::exp(v));
        }
        return f;
    };

    double a = 0.0;
    double b = std::log((prior0 + 1.0) / (prior1 + 1.0));
    double fval = objective(a, b);
    for (int iter = 0; iter < 100; ++iter) {
        double h11 = 1e-12, h22 = 1e-12, h21 = 0, g1 = 0, g2 = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double v = decision[i] * a + b;
            double p, q;
            if (v >= 0) {
                p = std::exp(-v) / (1.0 + std::exp(-v));
                q = 1.0 / (1.0 + std::exp(-v));
            } else {
                p = 1.0 / (1.0 + std::exp(v));
                q = std::exp(v) / (1.0 + std::exp(v));
            }
            const double d2 = p * q;
            h11 += decision[i] * decision[i] * d2;
            h22 += d2;
            h21 += decision[i] * d2;
            const double d1 = t[i] - p;
            g1 += decision[i] * d1;
            g2 += d1;
        }
        if (std::abs(g1) < 1e-5 && std::abs(g2) < 1e-5) break;
        const double det = h11 * h22 - h21 * h21;
        const double da = -(h22 * g1 - h21 * g2) / det;
        const double db = -(-h21 * g1 + h11 * g2) / det;
        const double gd = g1 * da + g2 * db;
        double step = 1.0;
        while (step >= 1e-10) {
            const double na = a + step * da, nb = b + step * db;
            const double nf = objective(na, nb);
            if (nf < fval + 1e-4 * step * gd) {
                a = na;
                b = nb;
                fval = nf;
                break;
            }
            step /= 2;
        }
        if (step < 1e-10) break;
    }
    return {a, b};
}

LinearModel train_linear_svm(const Matrix& x, std::span<const int> y, double complexity, std::uint64_t seed) {
    const auto n = x.rows();
    const auto d = x.cols();
    LinearModel m;
    m.offset.assign(d, 0.0);
    m.scale.assign(d, 0.0);
    for (std::size_t j = 0; j < d; ++j) {
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (std::size_t i = 0; i < n; ++i) {
            lo = std::min(lo, x(i, j));
            hi = std::max(hi, x(i, j));
        }
        m.offset[j] = lo;
        m.scale[j] = hi > lo ? 1.0 / (hi - lo) : 0.0;
    }
    Matrix xs(n, d);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) xs(i, j) = (x(i, j) - m.offset[j]) * m.scale[j];

    // Dual coordinate descent for the hinge-loss SVM; the bias is an extra constant-1 feature.
    std::vector<double> alpha(n, 0.0), qii(n);
    std::vector<double> w(d, 0.0);
    double bias = 0.0;
    for (std::size_t i = 0; i < n; ++i) qii[i] = dot(xs.row(i), xs.row(i)) + 1.0;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(seed);
    const double c = complexity;
    for (int epoch = 0; epoch < 1000; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        double pg_max = -std::numeric_limits<double>::infinity();
        double pg_min = std::numeric_limits<double>::infinity();
        for (auto i : order) {
            const double yi = y[i] ? 1.0 : -1.0;
            const auto xi = xs.row(i);
            const double g = yi * (dot(w, xi) + bias) - 1.0;
            double pg = g;
            if (alpha[i] == 0.0) pg = std::min(g, 0.0);
            else if (alpha[i] == c) pg = std::max(g, 0.0);
            pg_max = std::max(pg_max, pg);
            pg_min = std::min(pg_min, pg);
            if (std::abs(pg) > 1e-12) {
                const double old = alpha[i];
                alpha[i] = std::clamp(alpha[i] - g / qii[i], 0.0, c);
                const double delta = (alpha[i] - old) * yi;
                for (std::size_t j = 0; j < d; ++j) w[j] += delta * xi[j];
                bias += delta;
            }
        }
        if (pg_max - pg_min < 1e-3) break;
    }
    m.weights = std::move(w);
    m.bias = bias;

    std::vector<double> decision(n);
    for (std::size_t i = 0; i < n; ++i) decision[i] = dot(m.weights, xs.row(i)) + m.bias;
    std::tie(m.platt_a, m.platt_b) = fit_platt(decision, y);
    return m;
}

LinearRegressor fit_simple_linear(const Matrix& x, std::span<const double> z, std::span<const double> w) {
    const auto n = x.rows();
    double sw = 0, sz = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sw += w[i];
        sz += w[i] * z[i];
    }
    LinearRegressor best;
    if (sw <= 0) return best;
    const double zbar = sz / sw;
    best.intercept = zbar;
    double best_sse_drop = 1e-12;
    for (std::size_t j = 0; j < x.cols(); ++j) {
        double sx = 0;
        for (std::size_t i = 0; i < n; ++i) sx += w[i] * x(i, j);
        const double xbar = sx / sw;
        double sxx = 0, sxz = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double dx = x(i, j) - xbar;
            sxx += w[i] * dx * dx;
            sxz += w[i] * dx * (z[i] - zbar);
        }
        if (sxx <= 1e-12) continue;
        const double slope = sxz / sxx;
        const double drop = slope * sxz;  // reduction in weighted SSE versus the intercept-only fit
        if (drop > best_sse_drop) {
            best_sse_drop = drop;
            best.feature = static_cast<std::int32_t>(j);
            best.slope = slope;
            best.intercept = zbar - slope * xbar;
        }
    }
    return best;
}

RegressionTree fit_regression_tree(const Matrix& x, std::span<const double> z, std::span<const double> w,
                                   int max_depth) {
    return fit_tree(x, feature_orders(x), z, w, max_depth);
}

BoostedModel train_logitboost(const Matrix& x, std::span<const int> y, LearnerKind weak, int iterations,
                              int max_depth) {
    constexpr double kZMax = 3.0;
    const auto n = x.rows();
    const int depth = weak == LearnerKind::logitboost_stump ? 1 : max_depth;
    Orders orders;
    if (weak != LearnerKind::logitboost_linear) orders = feature_orders(x);

    BoostedModel model;
    std::vector<double> f(n, 0.0), p(n, 0.5), z(n), w(n);
    for (int m = 0; m < iterations; ++m) {
        for (std::size_t i = 0; i < n; ++i) {
            if (y[i]) z[i] = std::min(1.0 / p[i], kZMax);
            else z[i] = std::max(-1.0 / (1.0 - p[i]), -kZMax);
            w[i] = std::max(p[i] * (1.0 - p[i]), 1e-24);
        }
        WeakRegressor stage;
        if (weak == LearnerKind::logitboost_linear) stage = fit_simple_linear(x, z, w);
        else stage = fit_tree(x, orders, z, w, depth);
        for (std::size_t i = 0; i < n; ++i) {
            f[i] += 0.5 * std::visit([&](const auto& r) { return r.predict(x.row(i)); }, stage);
            p[i] = 1.0 / (1.0 + std::exp(-2.0 * f[i]));
        }
        model.stages.push_back(std::move(stage));
    }
    return model;
}

RuleList train_rule_list(const Matrix& x, std::span<const int> y, std::uint64_t seed) {
    constexpr std::size_t kMaxRules = 32;
    constexpr std::size_t kMaxConditions = 16;
    const auto n = x.rows();
    const auto orders = feature_orders(x);

    std::size_t positives = 0;
    for (auto v : y) positives += v ? 1 : 0;
    // Rules describe the minority class; everything else falls to the default rule.
    const int target = positives * 2 <= n ? 1 : 0;
    auto is_target = [&](std::size_t i) { return (y[i] ? 1 : 0) == target; };
    auto as_probability = [&](double p_target) { return target == 1 ? p_target : 1.0 - p_target; };

    std::mt19937_64 rng(seed);
    std::vector<char> remaining(n, 1);
    RuleList list;

    auto count = [&](const std::vector<char>& mask, const RuleList::Rule& rule, std::size_t upto) {
        std::size_t p = 0, q = 0;
        RuleList::Rule prefix;
        prefix.conditions.assign(rule.conditions.begin(), rule.conditions.begin() + static_cast<std::ptrdiff_t>(upto));
        for (std::size_t i = 0; i < n; ++i) {
            if (!mask[i] || !prefix.covers(x.row(i))) continue;
            (is_target(i) ? p : q) += 1;
        }
        return std::pair{p, q};
    };

    while (list.rules.size() < kMaxRules) {
        std::vector<std::size_t> pos, neg;
        for (std::size_t i = 0; i < n; ++i)
            if (remaining[i]) (is_target(i) ? pos : neg).push_back(i);
        if (pos.empty()) break;

        // stratified 2/3 grow, 1/3 prune split
        std::shuffle(pos.begin(), pos.end(), rng);
        std::shuffle(neg.begin(), neg.end(), rng);
        std::vector<char> grow(n, 0), prune(n, 0);
        for (auto* group : {&pos, &neg}) {
            const auto cut = (group->size() * 2 + 2) / 3;
            for (std::size_t k = 0; k < group->size(); ++k) ((k < cut) ? grow : prune)[(*group)[k]] = 1;
        }

        // grow by FOIL gain
        RuleList::Rule rule;
        std::vector<char> covered = grow;
        auto [p0, n0] = count(covered, rule, 0);
        while (n0 > 0 && rule.conditions.size() < kMaxConditions) {
            double best_gain = 1e-12;
            RuleList::Condition best{};
            const double base = std::log2(static_cast<double>(p0) / static_cast<double>(p0 + n0));
            for (std::size_t j = 0; j < x.cols(); ++j) {
                std::size_t cp = 0, cn = 0;
                double last = 0;
                bool any = false;
                for (auto i : orders[j]) {
                    if (!covered[i]) continue;
                    const double v = x(i, j);
                    if (any && v > last) {
                        const double thr = last + (v - last) / 2;
                        for (bool le : {true, false}) {
                            const auto p1 = le ? cp : p0 - cp;
                            const auto n1 = le ? cn : n0 - cn;
                            if (p1 == 0) continue;
                            const double gain =
                                static_cast<double>(p1) *
                                (std::log2(static_cast<double>(p1) / static_cast<double>(p1 + n1)) - base);
                            if (gain > best_gain) {
                                best_gain = gain;
                                best = {static_cast<std::int32_t>(j), le, thr};
                            }
                        }
                    }
                    (is_target(i) ? cp : cn) += 1;
                    last = v;
                    any = true;
                }
            }
            if (best_gain <= 1e-12) break;
            rule.conditions.push_back(best);
            for (std::size_t i = 0; i < n; ++i)
                if (covered[i] && !RuleList::Rule{{best}, 0}.covers(x.row(i))) covered[i] = 0;
            std::tie(p0, n0) = count(covered, RuleList::Rule{}, 0);
        }
        if (rule.conditions.empty()) break;

        // prune the final sequence of conditions maximizing (p - n) / (p + n) on the prune set
        std::size_t keep = rule.conditions.size();
        double best_value = -std::numeric_limits<double>::infinity();
        bool prune_covered = false;
        for (std::size_t k = 1; k <= rule.conditions.size(); ++k) {
            const auto [p, q] = count(prune, rule, k);
            if (p + q == 0) continue;
            prune_covered = true;
            const double v = (static_cast<double>(p) - static_cast<double>(q)) / static_cast<double>(p + q);
            if (v > best_value) {
                best_value = v;
                keep = k;
            }
        }
        rule.conditions.resize(keep);

        if (prune_covered) {
            const auto [p, q] = count(prune, rule, keep);
            if (p + q > 0 && q >= p) break;
        } else {
            const auto [p, q] = count(grow, rule, keep);
            if (q >= p) break;
        }

        const auto [p, q] = count(remaining, rule, keep);
        if (p == 0) break;
        rule.probability = as_probability((static_cast<double>(p) + 1.0) / (static_cast<double>(p + q) + 2.0));
        for (std::size_t i = 0; i < n; ++i)
            if (remaining[i] && rule.covers(x.row(i))) remaining[i] = 0;
        list.rules.push_back(std::move(rule));
    }

    std::size_t p = 0, q = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (remaining[i]) (is_target(i) ? p : q) += 1;
    list.default_probability = as_probability((static_cast<double>(p) + 1.0) / (static_cast<double>(p + q) + 2.0));
    return list;
}

BinaryModel train_base(const LearnerSpec& spec, const Matrix& x, std::span<const int> y, std::uint64_t seed) {
    if (x.rows() == 0 || x.rows() != y.size()) throw Error("train_base: empty or misaligned training data");
    std::size_t positives = 0;
    for (auto v : y) positives += v ? 1 : 0;
    if (positives == 0 || positives == y.size())
        return BinaryModel(ConstantModel{static_cast<double>(positives) / static_cast<double>(y.size())});
    switch (spec.kind) {
        case LearnerKind::linear_svm:
            return BinaryModel(train_linear_svm(x, y, spec.complexity, seed));
        case LearnerKind::logitboost_stump:
        case LearnerKind::logitboost_linear:
        case LearnerKind::boosted_tree:
            return BinaryModel(train_logitboost(x, y, spec.kind, spec.iterations, spec.max_depth));
        case LearnerKind::rule_list:
            return BinaryModel(train_rule_list(x, y, seed));
    }
    throw Error("train_base: unhandled learner");
}

// ---- serialization ----

namespace {

void write_tree(ByteWriter& w, const RegressionTree& t) {
    w.u64(t.nodes.size());
    for (const auto& nd : t.nodes) {
        w.i64(nd.feature);
        w.f64(nd.threshold);
        w.i64(nd.left);
        w.i64(nd.right);
        w.f64(nd.value);
    }
}

RegressionTree read_tree(ByteReader& r, std::size_t) {
    RegressionTree t;
    const auto n = r.u64();
    if (n == 0 || n > (1u << 24)) r.fail("bad tree size");
    t.nodes.resize(n);
    for (auto& nd : t.nodes) {
        nd.feature = static_cast<std::int32_t>(r.i64());
        nd.threshold = r.f64();
        nd.left = static_cast<std::int32_t>(r.i64());
        nd.right = static_cast<std::int32_t>(r.i64());
        nd.value = r.f64();
    }
    for (std::size_t k = 0; k < n; ++k) {
        const auto& nd = t.nodes[k];
        if (nd.feature >= 0 && (nd.left <= static_cast<std::int32_t>(k) || nd.right <= static_cast<std::int32_t>(k) ||
                                nd.left >= static_cast<std::int32_t>(n) || nd.right >= static_cast<std::int32_t>(n)))
            r.fail("bad tree child index");
    }
    return t;
}

}  // namespace

void BinaryModel::write(ByteWriter& w) const {
    w.u8(static_cast<std::uint8_t>(model_.index()));
    std::visit(
        [&](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, ConstantModel>) {
                w.f64(m.probability);
            } else if constexpr (std::is_same_v<T, LinearModel>) {
                w.f64s(m.offset);
                w.f64s(m.scale);
                w.f64s(m.weights);
                w.f64(m.bias);
                w.f64(m.platt_a);
                w.f64(m.platt_b);
            } else if constexpr (std::is_same_v<T, BoostedModel>) {
                w.u64(m.stages.size());
                for (const auto& s : m.stages) {
                    w.u8(static_cast<std::uint8_t>(s.index()));
                    if (const auto* tree = std::get_if<RegressionTree>(&s)) {
                        write_tree(w, *tree);
                    } else {
                        const auto& lr = std::get<LinearRegressor>(s);
                        w.i64(lr.feature);
                        w.f64(lr.intercept);
                        w.f64(lr.slope);
                    }
                }
            } else {
                w.u64(m.rules.size());
                for (const auto& rule : m.rules) {
                    w.u64(rule.conditions.size());
                    for (const auto& c : rule.conditions) {
                        w.i64(c.feature);
                        w.u8(c.less_equal ? 1 : 0);
                        w.f64(c.threshold);
                    }
                    w.f64(rule.probability);
                }
                w.f64(m.default_probability);
            }
        },
        model_);
}

BinaryModel BinaryModel::read(ByteReader& r) {
    switch (r.u8()) {
        case 0:
            return BinaryModel(ConstantModel{r.f64()});
        case 1: {
            LinearModel m;
            m.offset = r.f64s();
            m.scale = r.f64s();
            m.weights = r.f64s();
            if (m.scale.size() != m.offset.size() || m.weights.size() != m.offset.size())
                r.fail("linear model arrays disagree in length");
            m.bias = r.f64();
            m.platt_a = r.f64();
            m.platt_b = r.f64();
            return BinaryModel(std::move(m));
        }
        case 2: {
            BoostedModel m;
            const auto stages = r.u64();
            if (stages > (1u << 20)) r.fail("bad stage count");
            for (std::uint64_t s = 0; s < stages; ++s) {
                const auto kind = r.u8();
                if (kind == 0) {
                    m.stages.emplace_back(read_tree(r, 0));
                } else if (kind == 1) {
                    LinearRegressor lr;
                    lr.feature = static_cast<std::int32_t>(r.i64());
                    lr.intercept = r.f64();
                    lr.slope = r.f64();
                    m.stages.emplace_back(lr);
                } else {
                    r.fail("unknown weak regressor tag");
                }
            }
            return BinaryModel(std::move(m));
        }
        case 3: {
            RuleList m;
            const auto rules = r.u64();
            if (rules > (1u << 20)) r.fail("bad rule count");
            for (std::uint64_t k = 0; k < rules; ++k) {
                RuleList::Rule rule;
                const auto conds = r.u64();
                if (conds > (1u << 20)) r.fail("bad condition count");
                for (std::uint64_t c = 0; c < conds; ++c) {
                    RuleList::Condition cond;
                    cond.feature = static_cast<std::int32_t>(r.i64());
                    cond.less_equal = r.u8() != 0;
                    cond.threshold = r.f64();
                    rule.conditions.push_back(cond);
                }
                rule.probability = r.f64();
                m.rules.push_back(std::move(rule));
            }
            m.default_probability = r.f64();
            return BinaryModel(std::move(m));
        }
        default:
            r.fail("unknown binary model tag");
    }
}

}  // namespace wsd::ml
