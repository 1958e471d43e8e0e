#ifndef DQA_DATASET_HPP
#define DQA_DATASET_HPP

#include "core.hpp"

#include <algorithm>
#include <bit>
#include <tuple>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace dqa {

enum class LabelKind { heuristic, realistic };

inline const char* to_string(LabelKind k) {
    return k == LabelKind::heuristic ? "heuristic" : "realistic";
}

/**
 * Column-major numeric table with two binary label vectors.
 *
 * Every row carries a stable identifier (its position in the originally
 * loaded file) so that subsets, cleaning logs and injected datasets can be
 * related back to the source rows. Values are immutable once constructed;
 * the `with_*` / `select_*` members return modified copies.
 */
class Dataset {
public:
    Dataset() = default;

    Dataset(std::string id,
            std::vector<std::string> feature_names,
            std::vector<std::vector<double>> columns,
            std::vector<std::uint8_t> label_heuristic,
            std::vector<std::uint8_t> label_realistic,
            LabelKind active = LabelKind::realistic,
            std::vector<std::vector<std::uint8_t>> missing = {},
            std::vector<std::size_t> row_ids = {})
        : id_(std::move(id)),
          names_(std::move(feature_names)),
          columns_(std::move(columns)),
          missing_(std::move(missing)),
          heuristic_(std::move(label_heuristic)),
          realistic_(std::move(label_realistic)),
          row_ids_(std::move(row_ids)),
          active_(active) {
        const std::size_t n = realistic_.size();
        if (heuristic_.size() != n) {
            throw Error("dataset '" + id_ + "': label vectors differ in length");
        }
        if (names_.size() != columns_.size()) {
            throw Error("dataset '" + id_ + "': feature name count does not match column count");
        }
        for (const auto& col : columns_) {
            if (col.size() != n) {
                throw Error("dataset '" + id_ + "': column length does not match row count");
            }
        }
        if (missing_.empty()) {
            missing_.assign(columns_.size(), std::vector<std::uint8_t>(n, 0));
        } else if (missing_.size() != columns_.size()) {
            throw Error("dataset '" + id_ + "': missing mask has wrong column count");
        }
        for (const auto& m : missing_) {
            if (m.size() != n) {
                throw Error("dataset '" + id_ + "': missing mask has wrong row count");
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (heuristic_[i] > 1 || realistic_[i] > 1) {
                throw Error("dataset '" + id_ + "': non-binary label at row " + std::to_string(i));
            }
        }
        std::unordered_set<std::string> seen;
        for (const auto& name : names_) {
            if (!seen.insert(name).second) {
                throw Error("dataset '" + id_ + "': duplicate feature name '" + name + "'");
            }
        }
        if (row_ids_.empty()) {
            row_ids_.resize(n);
            std::iota(row_ids_.begin(), row_ids_.end(), std::size_t{0});
        } else if (row_ids_.size() != n) {
            throw Error("dataset '" + id_ + "': row id count does not match row count");
        }
    }

    const std::string& id() const { return id_; }
    std::size_t rows() const { return realistic_.size(); }
    std::size_t cols() const { return columns_.size(); }

    const std::vector<std::string>& feature_names() const { return names_; }
    const std::string& name(std::size_t col) const { return names_.at(col); }

    std::optional<std::size_t> find(std::string_view name) const {
        for (std::size_t j = 0; j < names_.size(); ++j) {
            if (names_[j] == name) {
                return j;
            }
        }
        return std::nullopt;
    }

    std::size_t index_of(std::string_view name) const {
        auto j = find(name);
        if (!j) {
            throw Error("unknown column '" + std::string(name) + "'");
        }
        return *j;
    }

    std::span<const double> column(std::size_t j) const { return columns_.at(j); }
    std::span<const std::uint8_t> missing_column(std::size_t j) const { return missing_.at(j); }
    double value(std::size_t row, std::size_t col) const { return columns_[col][row]; }
    bool is_missing(std::size_t row, std::size_t col) const { return missing_[col][row] != 0; }

    bool any_missing() const {
        for (const auto& m : missing_) {
            if (std::find(m.begin(), m.end(), std::uint8_t{1}) != m.end()) {
                return true;
            }
        }
        return false;
    }

    /// Non-missing values of one column, in row order.
    std::vector<double> present_values(std::size_t j) const {
        std::vector<double> out;
        out.reserve(rows());
        for (std::size_t i = 0; i < rows(); ++i) {
            if (!missing_[j][i]) {
                out.push_back(columns_[j][i]);
            }
        }
        return out;
    }

    LabelKind active_label() const { return active_; }
    std::span<const std::uint8_t> labels() const { return labels(active_); }
    std::span<const std::uint8_t> labels(LabelKind k) const {
        return k == LabelKind::heuristic ? std::span<const std::uint8_t>(heuristic_) : std::span<const std::uint8_t>(realistic_);
    }

    std::span<const std::size_t> row_ids() const { return row_ids_; }
    std::size_t row_id(std::size_t row) const { return row_ids_[row]; }

    std::size_t positives(LabelKind k) const {
        auto l = labels(k);
        return static_cast<std::size_t>(std::count(l.begin(), l.end(), std::uint8_t{1}));
    }
    std::size_t positives() const { return positives(active_); }

    Dataset with_active_label(LabelKind k) const {
        Dataset out = *this;
        out.active_ = k;
        return out;
    }

    Dataset with_id(std::string id) const {
        Dataset out = *this;
        out.id_ = std::move(id);
        return out;
    }

    /// Rows at the given positions, in the given order.
    Dataset select_rows(std::span<const std::size_t> positions) const {
        const std::size_t m = positions.size();
        std::vector<std::vector<double>> out_cols(columns_.size());
        std::vector<std::vector<std::uint8_t>> miss(columns_.size());
        for (std::size_t j = 0; j < out_cols.size(); ++j) {
            out_cols[j].reserve(m);
            miss[j].reserve(m);
            for (auto i : positions) {
                out_cols[j].push_back(columns_[j].at(i));
                miss[j].push_back(missing_[j][i]);
            }
        }
        std::vector<std::uint8_t> h, r;
        std::vector<std::size_t> ids;
        h.reserve(m);
        r.reserve(m);
        ids.reserve(m);
        for (auto i : positions) {
            h.push_back(heuristic_.at(i));
            r.push_back(realistic_[i]);
            ids.push_back(row_ids_[i]);
        }
        return rebuilt(names_, std::move(out_cols), std::move(miss), std::move(h), std::move(r), std::move(ids));
    }

    /// Drops the rows at the given positions.
    Dataset drop_rows(std::span<const std::size_t> positions) const {
        std::vector<std::uint8_t> drop(rows(), 0);
        for (auto i : positions) {
            drop.at(i) = 1;
        }
        std::vector<std::size_t> keep;
        for (std::size_t i = 0; i < rows(); ++i) {
            if (!drop[i]) {
                keep.push_back(i);
            }
        }
        return select_rows(keep);
    }

    /// Columns with the given names, in the given order.
    Dataset select_columns(std::span<const std::string> names) const {
        std::vector<std::string> nn;
        std::vector<std::vector<double>> cols;
        std::vector<std::vector<std::uint8_t>> miss;
        for (const auto& name : names) {
            auto j = index_of(name);
            nn.push_back(name);
            cols.push_back(columns_[j]);
            miss.push_back(missing_[j]);
        }
        return rebuilt(std::move(nn), std::move(cols), std::move(miss), heuristic_, realistic_, row_ids_);
    }

    Dataset drop_columns(std::span<const std::string> names) const {
        std::unordered_set<std::string> drop(names.begin(), names.end());
        for (const auto& name : names) {
            index_of(name);
        }
        std::vector<std::string> keep;
        for (const auto& name : names_) {
            if (!drop.count(name)) {
                keep.push_back(name);
            }
        }
        return select_columns(keep);
    }

    /// Replaces one column's values; the missing mask is kept.
    Dataset with_column_values(std::size_t j, std::vector<double> values) const {
        if (values.size() != rows()) {
            throw Error("with_column_values: length mismatch");
        }
        Dataset out = *this;
        out.columns_.at(j) = std::move(values);
        return out;
    }

    Dataset with_appended_column(std::string name, std::vector<double> values, std::vector<std::uint8_t> missing = {}) const {
        if (find(name)) {
            throw Error("column '" + name + "' already exists");
        }
        if (values.size() != rows()) {
            throw Error("with_appended_column: length mismatch");
        }
        if (missing.empty()) {
            missing.assign(rows(), 0);
        }
        Dataset out = *this;
        out.names_.push_back(std::move(name));
        out.columns_.push_back(std::move(values));
        out.missing_.push_back(std::move(missing));
        return out;
    }

    /// Label vector replacement (used by the injector to plant label noise).
    Dataset with_labels(LabelKind k, std::vector<std::uint8_t> labels) const {
        if (labels.size() != rows()) {
            throw Error("with_labels: length mismatch");
        }
        Dataset out = *this;
        (k == LabelKind::heuristic ? out.heuristic_ : out.realistic_) = std::move(labels);
        return out;
    }

    /// Row concatenation; both tables must share the same feature names in the
    /// same order.
    Dataset append_rows(const Dataset& other) const {
        if (other.names_ != names_) {
            throw Error("append_rows: feature names differ");
        }
        Dataset out = *this;
        for (std::size_t j = 0; j < cols(); ++j) {
            out.columns_[j].insert(out.columns_[j].end(), other.columns_[j].begin(), other.columns_[j].end());
            out.missing_[j].insert(out.missing_[j].end(), other.missing_[j].begin(), other.missing_[j].end());
        }
        out.heuristic_.insert(out.heuristic_.end(), other.heuristic_.begin(), other.heuristic_.end());
        out.realistic_.insert(out.realistic_.end(), other.realistic_.begin(), other.realistic_.end());
        out.row_ids_.insert(out.row_ids_.end(), other.row_ids_.begin(), other.row_ids_.end());
        return out;
    }

    /// Position of each row id (row ids are unique within datasets built by
    /// this library, but appended duplicates keep the first position).
    std::unordered_map<std::size_t, std::size_t> row_positions() const {
        std::unordered_map<std::size_t, std::size_t> out;
        for (std::size_t i = 0; i < rows(); ++i) {
            out.emplace(row_ids_[i], i);
        }
        return out;
    }

    friend bool operator==(const Dataset& a, const Dataset& b) {
        if (a.id_ != b.id_ || a.names_ != b.names_ || a.heuristic_ != b.heuristic_ || a.realistic_ != b.realistic_ ||
            a.row_ids_ != b.row_ids_ || a.active_ != b.active_ || a.missing_ != b.missing_) {
            return false;
        }
        // bitwise comparison so NaN-filled missing cells compare equal
        for (std::size_t j = 0; j < a.columns_.size(); ++j) {
            for (std::size_t i = 0; i < a.columns_[j].size(); ++i) {
                if (std::bit_cast<std::uint64_t>(a.columns_[j][i]) != std::bit_cast<std::uint64_t>(b.columns_[j][i])) {
                    return false;
                }
            }
        }
        return true;
    }

    // Label column names used when the dataset was read; reused on write.
    std::string heuristic_column = "HeuBug";
    std::string realistic_column = "RealBug";

private:
    Dataset rebuilt(std::vector<std::string> names, std::vector<std::vector<double>> cols,
                    std::vector<std::vector<std::uint8_t>> miss, std::vector<std::uint8_t> h,
                    std::vector<std::uint8_t> r, std::vector<std::size_t> ids) const {
        Dataset out(id_, std::move(names), std::move(cols), std::move(h), std::move(r), active_, std::move(miss), std::move(ids));
        out.heuristic_column = heuristic_column;
        out.realistic_column = realistic_column;
        return out;
    }

    std::string id_;
    std::vector<std::string> names_;
    std::vector<std::vector<double>> columns_;
    std::vector<std::vector<std::uint8_t>> missing_;
    std::vector<std::uint8_t> heuristic_;
    std::vector<std::uint8_t> realistic_;
    std::vector<std::size_t> row_ids_;
    LabelKind active_ = LabelKind::realistic;
};

struct ColumnStats {
    double mean = 0.0;
    double sd = 0.0;
    double variance = 0.0;
    double min = 0.0;
    double max = 0.0;
    double trimmed_mean = 0.0;
    double trimmed_sd = 0.0;
    double trim_fraction = 0.0;
    std::size_t count = 0;
};

/// Sample mean and (n - 1) variance; variance is 0 for a single value.
inline std::pair<double, double> mean_variance(std::span<const double> v) {
    if (v.empty()) {
        return {0.0, 0.0};
    }
    double mean = 0.0;
    for (double x : v) {
        mean += x;
    }
    mean /= static_cast<double>(v.size());
    if (v.size() < 2) {
        return {mean, 0.0};
    }
    double ss = 0.0;
    for (double x : v) {
        ss += (x - mean) * (x - mean);
    }
    return {mean, ss / static_cast<double>(v.size() - 1)};
}

/**
 * Summary statistics over the non-missing cells of a value vector.
 *
 * Trimming drops floor(n * trim_fraction) values from each tail.
 */
inline ColumnStats summarize(std::vector<double> values, double trim_fraction = 0.10) {
    if (!(trim_fraction >= 0.0 && trim_fraction < 0.5)) {
        throw Error("trim_fraction must lie in [0, 0.5)");
    }
    if (values.empty()) {
        throw Error("column has no non-missing values");
    }
    ColumnStats s;
    s.count = values.size();
    s.trim_fraction = trim_fraction;
    std::tie(s.mean, s.variance) = mean_variance(values);
    // constant columns can pick up rounding noise in the two-pass variance
    std::sort(values.begin(), values.end());
    s.min = values.front();
    s.max = values.back();
    if (s.min == s.max) {
        s.variance = 0.0;
        s.mean = s.min;
    }
    s.sd = std::sqrt(s.variance);
    const auto cut = static_cast<std::size_t>(std::floor(static_cast<double>(values.size()) * trim_fraction));
    if (2 * cut >= values.size()) {
        throw Error("trimming leaves no values");
    }
    std::span<const double> core(values.data() + cut, values.size() - 2 * cut);
    auto [tm, tv] = mean_variance(core);
    if (core.front() == core.back()) {
        tm = core.front();
        tv = 0.0;
    }
    s.trimmed_mean = std::clamp(tm, s.min, s.max);
    s.trimmed_sd = std::sqrt(tv);
    return s;
}

inline ColumnStats column_stats(const Dataset& ds, std::string_view col, double trim_fraction = 0.10) {
    return summarize(ds.present_values(ds.index_of(col)), trim_fraction);
}

inline ColumnStats column_stats(const Dataset& ds, std::size_t col, double trim_fraction = 0.10) {
    return summarize(ds.present_values(col), trim_fraction);
}

struct Split {
    Dataset train;
    Dataset test;
};

/**
 * Stratified split under the active label.
 *
 * Each class contributes round-down(train_fraction * class size) rows to the
 * test side's complement; the remainder row of a class goes to training, so
 * the test side receives floor((1 - train_fraction) * class size) rows of that
 * class. Both classes must land at least once on each side.
 */
inline Split split_stratified(const Dataset& ds, double train_fraction, std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw Error("train_fraction must lie in (0, 1)");
    }
    if (ds.rows() < 5) {
        throw Error("split_stratified: need at least 5 rows");
    }
    auto labels = ds.labels();
    std::vector<std::size_t> by_class[2];
    for (std::size_t i = 0; i < ds.rows(); ++i) {
        by_class[labels[i]].push_back(i);
    }
    if (by_class[0].empty() || by_class[1].empty()) {
        throw Error("split_stratified: single-class dataset");
    }
    Rng rng(seed);
    std::vector<std::size_t> train, test;
    for (auto& members : by_class) {
        rng.shuffle(members);
        // the 1e-9 guards against 0.2 * 100 evaluating to 19.999...
        const auto n_test = static_cast<std::size_t>(std::floor(static_cast<double>(members.size()) * (1.0 - train_fraction) + 1e-9));
        if (n_test == 0 || n_test >= members.size()) {
            throw Error("split_stratified: too few rows to place each class in both splits");
        }
        test.insert(test.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(n_test));
        train.insert(train.end(), members.begin() + static_cast<std::ptrdiff_t>(n_test), members.end());
    }
    std::sort(train.begin(), train.end());
    std::sort(test.begin(), test.end());
    return {ds.select_rows(train), ds.select_rows(test)};
}

/// Stratified k-fold assignment: fold index per row under the active label.
inline std::vector<std::size_t> stratified_folds(std::span<const std::uint8_t> labels, std::size_t k, std::uint64_t seed) {
    if (k < 2) {
        throw Error("stratified_folds: k must be at least 2");
    }
    std::vector<std::size_t> by_class[2];
    for (std::size_t i = 0; i < labels.size(); ++i) {
        by_class[labels[i]].push_back(i);
    }
    for (const auto& members : by_class) {
        if (members.size() < k) {
            throw Error("fold construction impossible: a class has fewer rows than folds");
        }
    }
    Rng rng(seed);
    std::vector<std::size_t> fold(labels.size(), 0);
    std::size_t offset = 0;
    for (auto& members : by_class) {
        rng.shuffle(members);
        for (std::size_t i = 0; i < members.size(); ++i) {
            fold[members[i]] = (i + offset) % k;
        }
        offset += members.size();
    }
    return fold;
}

} // namespace dqa

#endif
