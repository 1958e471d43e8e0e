#ifndef DQA_LEARNERS_HPP
#define DQA_LEARNERS_HPP

#include "dataset.hpp"
#include "stats.hpp"

#include <memory>
#include <variant>

namespace dqa {

/// Dense row-major feature matrix. Masked cells are read as 0.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
    double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    const double* row(std::size_t i) const { return data.data() + i * cols; }
};

inline Matrix to_matrix(const Dataset& ds, const std::vector<std::string>& features) {
    Matrix m{ds.rows(), features.size(), std::vector<double>(ds.rows() * features.size(), 0.0)};
    for (std::size_t k = 0; k < features.size(); ++k) {
        const auto j = ds.find(features[k]);
        if (!j) {
            throw Error("dataset lacks model feature '" + features[k] + "'");
        }
        for (std::size_t i = 0; i < ds.rows(); ++i) {
            if (!ds.is_missing(i, *j)) {
                m(i, k) = ds.value(i, *j);
            }
        }
    }
    return m;
}

enum class LearnerKind { lr, rf };

inline const char* to_string(LearnerKind k) {
    return k == LearnerKind::lr ? "LR" : "RF";
}

inline LearnerKind parse_learner(std::string_view s) {
    if (s == "LR" || s == "lr") {
        return LearnerKind::lr;
    }
    if (s == "RF" || s == "rf") {
        return LearnerKind::rf;
    }
    throw Error("unknown learner '" + std::string(s) + "' (expected LR or RF)");
}

struct LrParams {
    bool l2 = true;       // false: no penalty
    double c = 1.0;       // inverse regularization strength
};

struct RfParams {
    bool entropy = false; // false: gini
    std::size_t n_estimators = 100;
    double min_samples_split_fraction = 0.0;
};

struct HyperParams {
    LearnerKind learner = LearnerKind::lr;
    LrParams lr;
    RfParams rf;
};

inline std::string to_string(const HyperParams& hp) {
    if (hp.learner == LearnerKind::lr) {
        return std::string("penalty=") + (hp.lr.l2 ? "l2" : "none") + " C=" + format_double(hp.lr.c);
    }
    return std::string("criterion=") + (hp.rf.entropy ? "entropy" : "gini") + " n_estimators=" + std::to_string(hp.rf.n_estimators) +
           " min_samples_split=" + format_double(hp.rf.min_samples_split_fraction);
}

/// One draw from the tuning grid of a learner.
inline HyperParams sample_hyperparams(LearnerKind k, Rng& rng) {
    HyperParams hp;
    hp.learner = k;
    if (k == LearnerKind::lr) {
        hp.lr.l2 = rng.index(2) == 0;
        hp.lr.c = static_cast<double>(rng.integer(1, 499));
    } else {
        static constexpr std::size_t trees[] = {50, 150, 250, 500, 750};
        hp.rf.entropy = rng.index(2) == 1;
        hp.rf.n_estimators = trees[rng.index(5)];
        hp.rf.min_samples_split_fraction = rng.uniform(0.0, 0.1);
    }
    return hp;
}

class Model {
public:
    virtual ~Model() = default;
    /// P(defective) per row of a matrix in feature order.
    virtual std::vector<double> predict_matrix(const Matrix& x) const = 0;

    std::vector<double> predict(const Dataset& ds) const { return predict_matrix(to_matrix(ds, features_)); }
    const std::vector<std::string>& features() const { return features_; }
    const Warnings& warnings() const { return warnings_; }

protected:
    std::vector<std::string> features_;
    Warnings warnings_;
};

// -------------------------------------------------------- logistic regression

namespace detail {

inline double softplus(double z) {
    return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

inline double sigmoid(double z) {
    if (z >= 0.0) {
        return 1.0 / (1.0 + std::exp(-z));
    }
    const double e = std::exp(z);
    return e / (1.0 + e);
}

} // namespace detail

/**
 * Binary logistic regression minimizing mean log-loss + |w|^2 / (2 C n)
 * (intercept unpenalized), by preconditioned gradient descent with Armijo
 * backtracking. Stops when the largest gradient component is below `tol`.
 */
struct LogisticOptions {
    std::size_t max_iterations = 500;
    double tol = 1e-6;
};

class LogisticRegression final : public Model {
public:
    using Options = LogisticOptions;

    static std::unique_ptr<LogisticRegression> fit(const Matrix& x, std::span<const std::uint8_t> y, const LrParams& hp,
                                                   std::vector<std::string> features, Options opt = {}) {
        auto m = std::make_unique<LogisticRegression>();
        m->features_ = std::move(features);
        const std::size_t n = x.rows, p = x.cols;
        const double nd = static_cast<double>(n);
        const double lambda = hp.l2 ? 1.0 / (hp.c * nd) : 0.0;
        std::vector<double> w(p + 1, 0.0); // w[p] is the intercept
        std::vector<double> z(n), g(p + 1), d(p + 1), trial(p + 1), precond(p + 1);

        for (std::size_t j = 0; j < p; ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                s += x(i, j) * x(i, j);
            }
            precond[j] = 1.0 / (0.25 * s / nd + lambda + 1e-8);
        }
        precond[p] = 4.0;

        auto margins = [&](const std::vector<double>& v, std::vector<double>& out) {
            for (std::size_t i = 0; i < n; ++i) {
                double s = v[p];
                const double* r = x.row(i);
                for (std::size_t j = 0; j < p; ++j) {
                    s += r[j] * v[j];
                }
                out[i] = s;
            }
        };
        auto loss = [&](const std::vector<double>& v, const std::vector<double>& zz) {
            double l = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                l += y[i] ? detail::softplus(-zz[i]) : detail::softplus(zz[i]);
            }
            double reg = 0.0;
            for (std::size_t j = 0; j < p; ++j) {
                reg += v[j] * v[j];
            }
            return l / nd + 0.5 * lambda * reg;
        };

        margins(w, z);
        double f = loss(w, z);
        m->converged_ = false;
        std::vector<double> zt(n);
        for (m->iterations_ = 0; m->iterations_ < opt.max_iterations; ++m->iterations_) {
            std::fill(g.begin(), g.end(), 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                const double r = detail::sigmoid(z[i]) - static_cast<double>(y[i]);
                const double* row = x.row(i);
                for (std::size_t j = 0; j < p; ++j) {
                    g[j] += r * row[j];
                }
                g[p] += r;
            }
            double gmax = 0.0;
            for (std::size_t j = 0; j <= p; ++j) {
                g[j] /= nd;
                if (j < p) {
                    g[j] += lambda * w[j];
                }
                gmax = std::max(gmax, std::fabs(g[j]));
            }
            if (gmax < opt.tol) {
                m->converged_ = true;
                break;
            }
            double slope = 0.0;
            for (std::size_t j = 0; j <= p; ++j) {
                d[j] = -precond[j] * g[j];
                slope += g[j] * d[j];
            }
            double t = 1.0;
            double ft = f;
            for (int k = 0; k < 60; ++k, t *= 0.5) {
                for (std::size_t j = 0; j <= p; ++j) {
                    trial[j] = w[j] + t * d[j];
                }
                margins(trial, zt);
                ft = loss(trial, zt);
                if (ft <= f + 1e-4 * t * slope) {
                    break;
                }
            }
            if (!(ft < f)) {
                m->converged_ = true; // no further decrease representable
                break;
            }
            w.swap(trial);
            z.swap(zt);
            f = ft;
        }
        if (!m->converged_) {
            m->warnings_.push_back("logistic regression did not converge within " + std::to_string(opt.max_iterations) + " iterations");
        }
        m->intercept_ = w[p];
        w.pop_back();
        m->weights_ = std::move(w);
        return m;
    }

    std::vector<double> predict_matrix(const Matrix& x) const override {
        std::vector<double> out(x.rows);
        for (std::size_t i = 0; i < x.rows; ++i) {
            double s = intercept_;
            for (std::size_t j = 0; j < x.cols; ++j) {
                s += weights_[j] * x(i, j);
            }
            out[i] = detail::sigmoid(s);
        }
        return out;
    }

    const std::vector<double>& weights() const { return weights_; }
    double intercept() const { return intercept_; }
    bool converged() const { return converged_; }
    std::size_t iterations() const { return iterations_; }

private:
    std::vector<double> weights_;
    double intercept_ = 0.0;
    bool converged_ = false;
    std::size_t iterations_ = 0;
};

// -------------------------------------------------------------- random forest

class DecisionTree {
public:
    struct Node {
        int feature = -1;       // -1 marks a leaf
        double threshold = 0.0; // left: x <= threshold
        int left = -1;
        int right = -1;
        double value = 0.0;     // positive-class fraction at the node
    };

    struct Options {
        bool entropy = false;
        std::size_t min_samples_split = 2;
        std::size_t max_features = 0; // 0: all
    };

    /// Grows a tree on the given sample (indices may repeat).
    void fit(const Matrix& x, std::span<const std::uint8_t> y, std::vector<std::size_t> sample, const Options& opt, Rng& rng) {
        nodes_.clear();
        x_ = &x;
        y_ = y;
        opt_ = opt;
        rng_ = &rng;
        order_.resize(x.cols);
        std::iota(order_.begin(), order_.end(), std::size_t{0});
        grow(sample, 0, sample.size());
        x_ = nullptr;
        rng_ = nullptr;
    }

    double predict_row(const double* row) const {
        int k = 0;
        while (nodes_[static_cast<std::size_t>(k)].feature >= 0) {
            const auto& nd = nodes_[static_cast<std::size_t>(k)];
            k = row[nd.feature] <= nd.threshold ? nd.left : nd.right;
        }
        return nodes_[static_cast<std::size_t>(k)].value;
    }

    const std::vector<Node>& nodes() const { return nodes_; }

private:
    double impurity(double pos, double total) const {
        if (total <= 0.0) {
            return 0.0;
        }
        const double p = pos / total, q = 1.0 - p;
        if (opt_.entropy) {
            double h = 0.0;
            if (p > 0.0) h -= p * std::log2(p);
            if (q > 0.0) h -= q * std::log2(q);
            return h;
        }
        return 1.0 - p * p - q * q;
    }

    int grow(std::vector<std::size_t>& s, std::size_t lo, std::size_t hi) {
        const std::size_t n = hi - lo;
        std::size_t pos = 0;
        for (std::size_t k = lo; k < hi; ++k) {
            pos += y_[s[k]];
        }
        const int id = static_cast<int>(nodes_.size());
        nodes_.push_back({});
        nodes_.back().value = static_cast<double>(pos) / static_cast<double>(n);
        if (pos == 0 || pos == n || n < opt_.min_samples_split) {
            return id;
        }
        const double nd = static_cast<double>(n);
        const double parent = impurity(static_cast<double>(pos), nd);
        const std::size_t p = x_->cols;
        const std::size_t mtry = opt_.max_features == 0 ? p : std::min(opt_.max_features, p);

        // visit features in random order until mtry non-constant ones are evaluated
        for (std::size_t i = p; i > 1; --i) {
            std::swap(order_[i - 1], order_[rng_->index(i)]);
        }
        const std::vector<std::size_t> feats = order_;
        double best_gain = -1.0;
        int best_feature = -1;
        double best_threshold = 0.0;
        std::vector<std::pair<double, std::uint8_t>> vals(n);
        std::size_t evaluated = 0;
        for (std::size_t f : feats) {
            if (evaluated >= mtry) {
                break;
            }
            for (std::size_t k = 0; k < n; ++k) {
                vals[k] = {(*x_)(s[lo + k], f), y_[s[lo + k]]};
            }
            std::sort(vals.begin(), vals.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
            if (vals.front().first == vals.back().first) {
                continue;
            }
            ++evaluated;
            double left_pos = 0.0;
            for (std::size_t k = 0; k + 1 < n; ++k) {
                left_pos += vals[k].second;
                if (vals[k].first == vals[k + 1].first) {
                    continue;
                }
                const double nl = static_cast<double>(k + 1), nr = nd - nl;
                const double child = (nl * impurity(left_pos, nl) + nr * impurity(static_cast<double>(pos) - left_pos, nr)) / nd;
                const double gain = parent - child;
                if (gain > best_gain) {
                    best_gain = gain;
                    best_feature = static_cast<int>(f);
                    best_threshold = vals[k].first + (vals[k + 1].first - vals[k].first) / 2.0;
                    if (best_threshold >= vals[k + 1].first) {
                        best_threshold = vals[k].first;
                    }
                }
            }
        }
        if (best_feature < 0) {
            return id;
        }
        auto mid = std::partition(s.begin() + static_cast<std::ptrdiff_t>(lo), s.begin() + static_cast<std::ptrdiff_t>(hi),
                                  [&](std::size_t r) { return (*x_)(r, static_cast<std::size_t>(best_feature)) <= best_threshold; });
        const auto m = static_cast<std::size_t>(mid - s.begin());
        nodes_[static_cast<std::size_t>(id)].feature = best_feature;
        nodes_[static_cast<std::size_t>(id)].threshold = best_threshold;
        const int l = grow(s, lo, m);
        nodes_[static_cast<std::size_t>(id)].left = l;
        const int r = grow(s, m, hi);
        nodes_[static_cast<std::size_t>(id)].right = r;
        return id;
    }

    std::vector<Node> nodes_;
    const Matrix* x_ = nullptr;
    std::span<const std::uint8_t> y_;
    Options opt_;
    Rng* rng_ = nullptr;
    std::vector<std::size_t> order_;
};

/**
 * Bootstrap-aggregated CART trees with ceil(sqrt(p)) features tried per
 * split. The probability is the mean over trees of the leaf's positive
 * fraction; nodes with fewer than max(2, ceil(f * n)) rows are not split.
 */
class RandomForest final : public Model {
public:
    static std::unique_ptr<RandomForest> fit(const Matrix& x, std::span<const std::uint8_t> y, const RfParams& hp,
                                             std::vector<std::string> features, std::uint64_t seed) {
        if (hp.n_estimators < 1) {
            throw Error("random forest: n_estimators must be at least 1");
        }
        if (!(hp.min_samples_split_fraction >= 0.0 && hp.min_samples_split_fraction <= 1.0)) {
            throw Error("random forest: min_samples_split fraction must lie in [0, 1]");
        }
        auto m = std::make_unique<RandomForest>();
        m->features_ = std::move(features);
        const std::size_t n = x.rows;
        DecisionTree::Options opt;
        opt.entropy = hp.entropy;
        opt.min_samples_split = std::max<std::size_t>(
            2, static_cast<std::size_t>(std::ceil(hp.min_samples_split_fraction * static_cast<double>(n) - 1e-12)));
        opt.max_features = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(x.cols))));
        Rng rng(seed);
        m->trees_.resize(hp.n_estimators);
        std::vector<std::size_t> sample(n);
        for (auto& t : m->trees_) {
            for (auto& s : sample) {
                s = rng.index(n);
            }
            t.fit(x, y, sample, opt, rng);
        }
        return m;
    }

    std::vector<double> predict_matrix(const Matrix& x) const override {
        std::vector<double> out(x.rows, 0.0);
        for (const auto& t : trees_) {
            for (std::size_t i = 0; i < x.rows; ++i) {
                out[i] += t.predict_row(x.row(i));
            }
        }
        for (double& v : out) {
            v /= static_cast<double>(trees_.size());
        }
        return out;
    }

    const std::vector<DecisionTree>& trees() const { return trees_; }

private:
    std::vector<DecisionTree> trees_;
};

namespace detail {

inline void require_two_classes(std::span<const std::uint8_t> y, const char* what) {
    const auto pos = std::count(y.begin(), y.end(), std::uint8_t{1});
    if (pos == 0 || pos == static_cast<std::ptrdiff_t>(y.size())) {
        throw Error(std::string(what) + ": training data has a single class");
    }
}

} // namespace detail

inline std::unique_ptr<Model> train_matrix(const Matrix& x, std::span<const std::uint8_t> y, const HyperParams& hp,
                                           std::vector<std::string> features, std::uint64_t seed) {
    detail::require_two_classes(y, hp.learner == LearnerKind::lr ? "logistic regression" : "random forest");
    if (hp.learner == LearnerKind::lr) {
        return LogisticRegression::fit(x, y, hp.lr, std::move(features));
    }
    return RandomForest::fit(x, y, hp.rf, std::move(features), seed);
}

/// Trains on every feature of `train` under its active label.
inline std::unique_ptr<Model> train_model(const Dataset& train, const HyperParams& hp, std::uint64_t seed) {
    const auto& f = train.feature_names();
    return train_matrix(to_matrix(train, f), train.labels(), hp, f, seed);
}

inline std::unique_ptr<Model> train_logreg(const Dataset& train, const LrParams& hp) {
    return train_model(train, HyperParams{LearnerKind::lr, hp, {}}, 0);
}

inline std::unique_ptr<Model> train_random_forest(const Dataset& train, const RfParams& hp, std::uint64_t seed) {
    return train_model(train, HyperParams{LearnerKind::rf, {}, hp}, seed);
}

// -------------------------------------------------------------------- metrics

struct ConfusionMatrix {
    std::size_t tp = 0, tn = 0, fp = 0, fn = 0;
    std::size_t total() const { return tp + tn + fp + fn; }
};

/// Predicted defective when score > threshold.
inline ConfusionMatrix confusion(std::span<const double> scores, std::span<const std::uint8_t> labels, double threshold = 0.5) {
    if (scores.size() != labels.size()) {
        throw Error("confusion: score and label lengths differ");
    }
    ConfusionMatrix c;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        const bool pred = scores[i] > threshold;
        if (labels[i]) {
            (pred ? c.tp : c.fn)++;
        } else {
            (pred ? c.fp : c.tn)++;
        }
    }
    return c;
}

inline double precision(const ConfusionMatrix& c) {
    return c.tp + c.fp == 0 ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
}

inline double recall(const ConfusionMatrix& c) {
    if (c.tp + c.fn == 0) {
        throw Error("recall undefined: no positive rows");
    }
    return static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
}

inline double f1(const ConfusionMatrix& c) {
    const double d = static_cast<double>(2 * c.tp + c.fp + c.fn);
    return d == 0.0 ? 0.0 : 2.0 * static_cast<double>(c.tp) / d;
}

/// (TP*TN - FP*FN) / sqrt((TP+FP)(TP+FN)(TN+FP)(TN+FN)); 0 when a factor is 0.
inline double mcc(const ConfusionMatrix& c) {
    const double tp = static_cast<double>(c.tp), tn = static_cast<double>(c.tn);
    const double fp = static_cast<double>(c.fp), fn = static_cast<double>(c.fn);
    const double d = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
    if (d == 0.0) {
        return 0.0;
    }
    return std::clamp((tp * tn - fp * fn) / std::sqrt(d), -1.0, 1.0);
}

namespace detail {

inline std::pair<std::size_t, std::size_t> class_counts(std::span<const std::uint8_t> labels) {
    const auto pos = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), std::uint8_t{1}));
    if (pos == 0 || pos == labels.size()) {
        throw Error("AU-ROC undefined: test labels contain a single class");
    }
    return {pos, labels.size() - pos};
}

// Indices sorted by descending score.
inline std::vector<std::size_t> descending(std::span<const double> scores) {
    std::vector<std::size_t> idx(scores.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    return idx;
}

} // namespace detail

/// P(score+ > score-) + P(tie) / 2 via average ranks.
inline double auroc_rank(std::span<const double> scores, std::span<const std::uint8_t> labels) {
    const auto [n1, n0] = detail::class_counts(labels);
    const auto ranks = stats::average_ranks(scores);
    double sum = 0.0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i]) {
            sum += ranks[i];
        }
    }
    const double a = static_cast<double>(n1), b = static_cast<double>(n0);
    return (sum - a * (a + 1.0) / 2.0) / (a * b);
}

/// Trapezoidal area under the ROC polyline built from distinct thresholds.
inline double auroc_trapezoid(std::span<const double> scores, std::span<const std::uint8_t> labels) {
    const auto [n1, n0] = detail::class_counts(labels);
    const auto idx = detail::descending(scores);
    // integer counts keep the area exact up to the final division
    long double area2 = 0.0L;
    std::size_t tp = 0, fp = 0;
    for (std::size_t k = 0; k < idx.size();) {
        std::size_t dtp = 0, dfp = 0;
        const double s = scores[idx[k]];
        while (k < idx.size() && scores[idx[k]] == s) {
            (labels[idx[k]] ? dtp : dfp)++;
            ++k;
        }
        area2 += static_cast<long double>(dfp) * static_cast<long double>(2 * tp + dtp);
        tp += dtp;
        fp += dfp;
    }
    return static_cast<double>(area2 / (2.0L * static_cast<long double>(n1) * static_cast<long double>(n0)));
}

/// Average precision: sum over distinct thresholds of (R_k - R_{k-1}) P_k.
inline double average_precision(std::span<const double> scores, std::span<const std::uint8_t> labels) {
    const auto [n1, n0] = detail::class_counts(labels);
    (void)n0;
    const auto idx = detail::descending(scores);
    double ap = 0.0;
    std::size_t tp = 0, seen = 0;
    for (std::size_t k = 0; k < idx.size();) {
        std::size_t dtp = 0;
        const double s = scores[idx[k]];
        while (k < idx.size() && scores[idx[k]] == s) {
            dtp += labels[idx[k]];
            ++seen;
            ++k;
        }
        tp += dtp;
        if (dtp) {
            ap += static_cast<double>(dtp) / static_cast<double>(n1) * static_cast<double>(tp) / static_cast<double>(seen);
        }
    }
    return ap;
}

struct EvalResult {
    double precision = 0.0, recall = 0.0, f1 = 0.0, mcc = 0.0, auroc = 0.0, auprc = 0.0;
    ConfusionMatrix confusion;
};

inline const std::array<std::string_view, 6>& metric_names() {
    static const std::array<std::string_view, 6> names = {"precision", "recall", "f1", "mcc", "auroc", "auprc"};
    return names;
}

inline double metric_value(const EvalResult& e, std::string_view name) {
    if (name == "precision") return e.precision;
    if (name == "recall") return e.recall;
    if (name == "f1") return e.f1;
    if (name == "mcc") return e.mcc;
    if (name == "auroc") return e.auroc;
    if (name == "auprc") return e.auprc;
    throw Error("unknown metric '" + std::string(name) + "'");
}

inline EvalResult evaluate_scores(std::span<const double> scores, std::span<const std::uint8_t> labels, double threshold = 0.5) {
    if (scores.empty()) {
        throw Error("evaluate: empty test set");
    }
    for (double s : scores) {
        if (!std::isfinite(s)) {
            throw Error("evaluate: non-finite score");
        }
    }
    EvalResult e;
    e.confusion = confusion(scores, labels, threshold);
    e.auroc = auroc_rank(scores, labels);
    e.auprc = average_precision(scores, labels);
    e.precision = precision(e.confusion);
    e.recall = recall(e.confusion);
    e.f1 = f1(e.confusion);
    e.mcc = mcc(e.confusion);
    return e;
}

/// Scores the realistic-label test set (active label of `test`).
inline EvalResult evaluate(const Model& model, const Dataset& test, double threshold = 0.5) {
    return evaluate_scores(model.predict(test), test.labels(), threshold);
}

// -------------------------------------------------------------- random search

struct SearchResult {
    HyperParams best;
    double best_score = 0.0;
    std::vector<HyperParams> candidates;
    std::vector<double> scores;   // mean fold AU-ROC per candidate
    std::size_t fits = 0;
};

/**
 * Random search over the learner's grid; each draw is scored by mean
 * AU-ROC over k stratified folds. Ties keep the earliest draw.
 */
inline SearchResult random_search(const Dataset& train, LearnerKind learner, std::uint64_t seed, std::size_t n_iter = 10, std::size_t k = 3) {
    if (n_iter < 1) {
        throw Error("random_search: n_iter must be at least 1");
    }
    const auto& f = train.feature_names();
    const Matrix x = to_matrix(train, f);
    const auto y = train.labels();
    const auto folds = stratified_folds(y, k, derive_seed(seed, 1));
    std::vector<Matrix> fold_train(k), fold_test(k);
    std::vector<std::vector<std::uint8_t>> ytr(k), yte(k);
    for (std::size_t fold = 0; fold < k; ++fold) {
        for (std::size_t i = 0; i < x.rows; ++i) {
            auto& m = folds[i] == fold ? fold_test[fold] : fold_train[fold];
            auto& yy = folds[i] == fold ? yte[fold] : ytr[fold];
            m.data.insert(m.data.end(), x.row(i), x.row(i) + x.cols);
            ++m.rows;
            yy.push_back(y[i]);
        }
        fold_train[fold].cols = fold_test[fold].cols = x.cols;
    }
    SearchResult res;
    Rng rng(derive_seed(seed, 2));
    for (std::size_t it = 0; it < n_iter; ++it) {
        const auto hp = sample_hyperparams(learner, rng);
        double total = 0.0;
        for (std::size_t fold = 0; fold < k; ++fold) {
            auto model = train_matrix(fold_train[fold], ytr[fold], hp, f, derive_seed(seed, 3, it, fold));
            ++res.fits;
            total += auroc_rank(model->predict_matrix(fold_test[fold]), yte[fold]);
        }
        const double score = total / static_cast<double>(k);
        res.candidates.push_back(hp);
        res.scores.push_back(score);
        if (it == 0 || score > res.best_score) {
            res.best = hp;
            res.best_score = score;
        }
    }
    return res;
}

} // namespace dqa

#endif
