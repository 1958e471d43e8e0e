#ifndef DQA_CLEANERS_HPP
#define DQA_CLEANERS_HPP

#include "detectors.hpp"

#include <array>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace dqa {

enum class Step { Fi, Tr, Mi, Ov };

inline constexpr std::array<Step, 4> all_steps = {Step::Fi, Step::Tr, Step::Mi, Step::Ov};

inline const char* to_string(Step s) {
    switch (s) {
    case Step::Fi: return "Fi";
    case Step::Tr: return "Tr";
    case Step::Mi: return "Mi";
    case Step::Ov: return "Ov";
    }
    return "?";
}

inline Step parse_step(std::string_view s) {
    for (auto st : all_steps) {
        if (s == to_string(st)) {
            return st;
        }
    }
    throw Error("unknown cleaning step '" + std::string(s) + "'");
}

struct CleaningOrder {
    std::array<Step, 4> steps{Step::Fi, Step::Tr, Step::Mi, Step::Ov};

    std::size_t position(Step s) const {
        return static_cast<std::size_t>(std::find(steps.begin(), steps.end(), s) - steps.begin());
    }
    bool before(Step a, Step b) const { return position(a) < position(b); }

    friend bool operator==(const CleaningOrder&, const CleaningOrder&) = default;
    friend auto operator<=>(const CleaningOrder&, const CleaningOrder&) = default;
};

inline std::string to_string(const CleaningOrder& o) {
    std::string s;
    for (auto st : o.steps) {
        s += to_string(st);
    }
    return s;
}

/// Parses four two-letter step codes, e.g. "FiTrMiOv"; each step exactly once.
inline CleaningOrder parse_order(std::string_view text) {
    if (text.size() != 8) {
        throw Error("invalid cleaning order '" + std::string(text) + "': expected four steps such as FiTrMiOv");
    }
    CleaningOrder o;
    for (std::size_t i = 0; i < 4; ++i) {
        o.steps[i] = parse_step(text.substr(2 * i, 2));
    }
    for (auto st : all_steps) {
        if (std::count(o.steps.begin(), o.steps.end(), st) != 1) {
            throw Error("invalid cleaning order '" + std::string(text) + "': step " + to_string(st) + " must occur exactly once");
        }
    }
    return o;
}

/// All 24 permutations in lexicographic step order.
inline std::vector<CleaningOrder> all_orders() {
    std::array<Step, 4> s = all_steps;
    std::vector<CleaningOrder> out;
    do {
        out.push_back(CleaningOrder{s});
    } while (std::next_permutation(s.begin(), s.end()));
    return out;
}

/**
 * Representative of an order's equivalence class. Mi commutes with Fi and Tr,
 * so only the relative order of Fi, Tr, Ov and the side of Ov that Mi sits on
 * matter; the representative places Mi adjacent to Ov on that side.
 */
inline CleaningOrder canonicalize(const CleaningOrder& o) {
    const bool mi_first = o.before(Step::Mi, Step::Ov);
    std::vector<Step> rest;
    for (auto st : o.steps) {
        if (st != Step::Mi) {
            rest.push_back(st);
        }
    }
    auto ov = std::find(rest.begin(), rest.end(), Step::Ov);
    rest.insert(mi_first ? ov : ov + 1, Step::Mi);
    CleaningOrder c;
    std::copy(rest.begin(), rest.end(), c.steps.begin());
    return c;
}

/// The 12 class representatives, sorted by name.
inline std::vector<CleaningOrder> canonical_orders() {
    std::vector<CleaningOrder> out;
    for (const auto& o : all_orders()) {
        auto c = canonicalize(o);
        if (std::find(out.begin(), out.end(), c) == out.end()) {
            out.push_back(c);
        }
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return to_string(a) < to_string(b); });
    return out;
}

/// Representative -> all permutations in its class.
inline std::map<std::string, std::vector<CleaningOrder>> equivalence_classes() {
    std::map<std::string, std::vector<CleaningOrder>> out;
    for (const auto& o : all_orders()) {
        out[to_string(canonicalize(o))].push_back(o);
    }
    return out;
}

/// Splits orders by whether a precedes b.
inline std::pair<std::vector<CleaningOrder>, std::vector<CleaningOrder>>
subsequence_partition(const std::vector<CleaningOrder>& orders, Step a, Step b) {
    if (a == b) {
        throw Error("subsequence_partition: steps must differ");
    }
    std::pair<std::vector<CleaningOrder>, std::vector<CleaningOrder>> out;
    for (const auto& o : orders) {
        (o.before(a, b) ? out.first : out.second).push_back(o);
    }
    return out;
}

/// The four sub-sequences compared in the odds analysis, as (A, B) with A first.
inline const std::array<std::pair<Step, Step>, 4>& odds_pairs() {
    static const std::array<std::pair<Step, Step>, 4> pairs = {
        std::pair{Step::Mi, Step::Ov}, std::pair{Step::Fi, Step::Tr}, std::pair{Step::Tr, Step::Ov}, std::pair{Step::Fi, Step::Ov}};
    return pairs;
}

// ----------------------------------------------------------------- parameters

enum class TransformKind { none, log, zscore, log_then_zscore };

inline const char* to_string(TransformKind k) {
    switch (k) {
    case TransformKind::none: return "none";
    case TransformKind::log: return "log";
    case TransformKind::zscore: return "zscore";
    case TransformKind::log_then_zscore: return "log_then_zscore";
    }
    return "?";
}

struct ColumnTransform {
    TransformKind kind = TransformKind::none;
    double shift = 0.0;  // added before log1p; -min when the fitted column had negatives
    double mean = 0.0;
    double sd = 1.0;

    bool has_log() const { return kind == TransformKind::log || kind == TransformKind::log_then_zscore; }
    bool has_zscore() const { return kind == TransformKind::zscore || kind == TransformKind::log_then_zscore; }

    double apply(double x) const {
        if (has_log()) {
            // values below the fitted minimum are clamped to the log domain
            x = std::log1p(std::max(x + shift, 0.0));
        }
        if (has_zscore()) {
            x = (x - mean) / sd;
        }
        return x;
    }

    friend bool operator==(const ColumnTransform&, const ColumnTransform&) = default;
};

struct TransformParams {
    std::map<std::string, ColumnTransform> columns;
    std::optional<std::vector<std::string>> kept_columns; // unset keeps every column

    bool empty() const { return columns.empty() && !kept_columns; }
};

struct FilterOptions {
    std::vector<SchemaRule> rules;
    CorrelationOptions correlation;
};

struct TransformOptions {
    double tailed_threshold = 0.25;
    double z_threshold = 3.0;
    double trim_fraction = 0.10;
    bool apply_log = true;
    bool apply_zscore = true;
};

struct CleanParams {
    FilterOptions filter;
    TransformOptions transform;
    OverlapOptions overlap;
};

struct RowRemoval {
    std::string reason;
    std::vector<std::size_t> row_ids;
};

struct ColumnRemoval {
    std::string reason;
    std::vector<std::string> columns;
};

struct StepLog {
    Step step = Step::Fi;
    std::vector<RowRemoval> rows_removed;
    std::vector<ColumnRemoval> columns_removed;
    bool label_switched = false;
    std::map<std::string, ColumnTransform> transforms;
    Warnings warnings;

    bool empty() const {
        auto no_rows = std::all_of(rows_removed.begin(), rows_removed.end(), [](const auto& r) { return r.row_ids.empty(); });
        auto no_cols = std::all_of(columns_removed.begin(), columns_removed.end(), [](const auto& c) { return c.columns.empty(); });
        return no_rows && no_cols && !label_switched && transforms.empty();
    }
};

struct CleaningLog {
    std::string order;
    std::vector<StepLog> steps;

    bool empty() const {
        return std::all_of(steps.begin(), steps.end(), [](const auto& s) { return s.empty(); });
    }
};

namespace detail {

inline void guard_classes(const Dataset& ds, const char* step) {
    if (ds.rows() == 0) {
        throw Error(std::string(step) + ": class eliminated (no rows left)");
    }
    const std::size_t pos = ds.positives();
    if (pos == 0 || pos == ds.rows()) {
        throw Error(std::string(step) + ": class eliminated");
    }
}

inline std::vector<std::size_t> ids_of(const Dataset& ds, const std::vector<std::size_t>& positions) {
    std::vector<std::size_t> ids;
    ids.reserve(positions.size());
    for (auto p : positions) {
        ids.push_back(ds.row_id(p));
    }
    return ids;
}

} // namespace detail

// ---------------------------------------------------------------------- steps

struct StepResult {
    Dataset data;
    StepLog log;
};

namespace detail {

/// Rows of `raw` carrying the row ids of `ds`, in `ds` order.
inline Dataset rows_by_id(const Dataset& raw, const Dataset& ds) {
    std::unordered_map<std::size_t, std::size_t> pos;
    for (std::size_t i = 0; i < raw.rows(); ++i) {
        pos.emplace(raw.row_id(i), i);
    }
    std::vector<std::size_t> sel;
    sel.reserve(ds.rows());
    for (std::size_t i = 0; i < ds.rows(); ++i) {
        auto it = pos.find(ds.row_id(i));
        if (it == pos.end()) {
            throw Error("filter: row id " + std::to_string(ds.row_id(i)) + " absent from the untransformed data");
        }
        sel.push_back(it->second);
    }
    return raw.select_rows(sel);
}

} // namespace detail

/**
 * Schema-violating rows, duplicate rows, constant columns, then correlated
 * and redundant columns, in that fixed order. When `untransformed` is given,
 * schema rules are evaluated on its rows with matching row ids, so rules stay
 * in the units they are written in.
 */
inline StepResult step_filter(const Dataset& ds, const FilterOptions& opt, const Dataset* untransformed = nullptr) {
    StepResult res{ds, {}};
    res.log.step = Step::Fi;

    auto schema = untransformed ? detect_schema_violations(detail::rows_by_id(*untransformed, res.data), opt.rules)
                                : detect_schema_violations(res.data, opt.rules);
    res.log.rows_removed.push_back({"schema_violation", detail::ids_of(res.data, schema.flagged_rows)});
    res.data = res.data.drop_rows(schema.flagged_rows);
    detail::guard_classes(res.data, "filter");

    auto dups = detect_duplicates(res.data);
    res.log.rows_removed.push_back({"duplicate", detail::ids_of(res.data, dups.flagged_rows)});
    res.data = res.data.drop_rows(dups.flagged_rows);
    detail::guard_classes(res.data, "filter");

    auto constant = detect_constant(res.data);
    res.log.columns_removed.push_back({"constant", constant.flagged_columns});
    res.data = res.data.drop_columns(constant.flagged_columns);

    if (res.data.cols() >= 2) {
        auto corr = analyze_correlation(res.data, opt.correlation);
        res.log.columns_removed.push_back({"correlated", corr.correlated});
        res.log.columns_removed.push_back({"redundant", corr.redundant});
        auto drop = corr.correlated;
        drop.insert(drop.end(), corr.redundant.begin(), corr.redundant.end());
        res.data = res.data.drop_columns(drop);
        res.log.warnings.insert(res.log.warnings.end(), corr.warnings.begin(), corr.warnings.end());
    } else {
        res.log.warnings.push_back("fewer than 2 columns; correlation filter skipped");
    }
    if (res.data.cols() == 0) {
        throw Error("filter: every column was removed");
    }
    return res;
}

struct TransformResult {
    Dataset data;
    StepLog log;
    std::map<std::string, ColumnTransform> fitted;
};

/**
 * Log-transforms tailed columns and z-scores unnormalized ones; a column
 * flagged by both is logged first and z-scored on the logged values. Both
 * detectors see the untransformed input.
 */
inline TransformResult step_transform(const Dataset& ds, const TransformOptions& opt) {
    TransformResult res{ds, {}, {}};
    res.log.step = Step::Tr;
    std::set<std::string> tailed, unnormalized;
    if (opt.apply_log && ds.rows() > 0) {
        auto r = detect_tailed(ds, opt.tailed_threshold, opt.trim_fraction);
        tailed.insert(r.flagged_columns.begin(), r.flagged_columns.end());
        res.log.warnings.insert(res.log.warnings.end(), r.warnings.begin(), r.warnings.end());
    }
    if (opt.apply_zscore && ds.cols() >= 2 && ds.rows() > 0) {
        auto r = detect_unnormalized(ds, opt.z_threshold, opt.trim_fraction);
        unnormalized.insert(r.flagged_columns.begin(), r.flagged_columns.end());
        res.log.warnings.insert(res.log.warnings.end(), r.warnings.begin(), r.warnings.end());
    }
    for (std::size_t j = 0; j < ds.cols(); ++j) {
        const auto& name = ds.name(j);
        const bool lg = tailed.count(name) > 0;
        bool zs = unnormalized.count(name) > 0;
        if (!lg && !zs) {
            continue;
        }
        ColumnTransform t;
        auto present = ds.present_values(j);
        if (lg) {
            const double lo = *std::min_element(present.begin(), present.end());
            t.shift = lo < 0.0 ? -lo : 0.0;
            t.kind = TransformKind::log;
            for (double& x : present) {
                x = t.apply(x);
            }
        }
        if (zs) {
            const auto [m, var] = mean_variance(present);
            const double sd = std::sqrt(var);
            if (!(sd > 0.0)) {
                res.log.warnings.push_back("column '" + name + "' has zero sd; z-score skipped");
                zs = false;
            } else {
                t.mean = m;
                t.sd = sd;
                t.kind = lg ? TransformKind::log_then_zscore : TransformKind::zscore;
            }
        }
        if (t.kind == TransformKind::none) {
            continue;
        }
        std::vector<double> values(ds.column(j).begin(), ds.column(j).end());
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (!ds.is_missing(i, j)) {
                values[i] = t.apply(values[i]);
            }
        }
        res.data = res.data.with_column_values(j, std::move(values));
        res.fitted[name] = t;
    }
    res.log.transforms = res.fitted;
    return res;
}

/// Switches training to the realistic labels.
inline StepResult step_mislabel(const Dataset& ds) {
    StepResult res{ds.with_active_label(LabelKind::realistic), {}};
    res.log.step = Step::Mi;
    res.log.label_switched = ds.active_label() != LabelKind::realistic;
    return res;
}

/// Removes the IKMCCA overlap set computed under the current active label.
inline StepResult step_overlap(const Dataset& ds, const OverlapOptions& opt, std::uint64_t seed) {
    detail::guard_classes(ds, "overlap");
    auto rep = detect_class_overlap_ikmcca(ds, seed, opt);
    StepResult res{ds.drop_rows(rep.flagged_rows), {}};
    res.log.step = Step::Ov;
    res.log.rows_removed.push_back({"class_overlap", detail::ids_of(ds, rep.flagged_rows)});
    res.log.warnings = rep.warnings;
    detail::guard_classes(res.data, "overlap");
    return res;
}

// ------------------------------------------------------------------ pipeline

struct CleanResult {
    Dataset data;
    CleaningLog log;
    TransformParams transform;
};

inline CleanResult clean(const Dataset& ds, const CleaningOrder& order, const CleanParams& params, std::uint64_t seed) {
    CleanResult res{ds, {}, {}};
    res.log.order = to_string(order);
    for (auto st : order.steps) {
        switch (st) {
        case Step::Fi: {
            auto r = step_filter(res.data, params.filter, res.transform.columns.empty() ? nullptr : &ds);
            res.data = std::move(r.data);
            res.log.steps.push_back(std::move(r.log));
            break;
        }
        case Step::Tr: {
            auto r = step_transform(res.data, params.transform);
            res.data = std::move(r.data);
            for (auto& [name, t] : r.fitted) {
                res.transform.columns[name] = t;
            }
            res.log.steps.push_back(std::move(r.log));
            break;
        }
        case Step::Mi: {
            auto r = step_mislabel(res.data);
            res.data = std::move(r.data);
            res.log.steps.push_back(std::move(r.log));
            break;
        }
        case Step::Ov: {
            auto r = step_overlap(res.data, params.overlap, seed);
            res.data = std::move(r.data);
            res.log.steps.push_back(std::move(r.log));
            break;
        }
        }
    }
    // transforms of columns dropped afterwards are irrelevant to the test side
    for (auto it = res.transform.columns.begin(); it != res.transform.columns.end();) {
        it = res.data.find(it->first) ? std::next(it) : res.transform.columns.erase(it);
    }
    if (res.data.feature_names() != ds.feature_names()) {
        res.transform.kept_columns = res.data.feature_names();
    }
    return res;
}

/// Applies training-fitted transforms and the training column selection.
inline Dataset apply_transform_to_test(const Dataset& test, const TransformParams& params) {
    Dataset out = test;
    if (params.kept_columns) {
        for (const auto& c : *params.kept_columns) {
            if (!test.find(c)) {
                throw Error("apply_transform_to_test: test set lacks column '" + c + "'");
            }
        }
        out = test.select_columns(*params.kept_columns);
    }
    for (const auto& [name, t] : params.columns) {
        auto j = out.find(name);
        if (!j) {
            throw Error("apply_transform_to_test: test set lacks column '" + name + "'");
        }
        std::vector<double> values(out.column(*j).begin(), out.column(*j).end());
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (!out.is_missing(i, *j)) {
                values[i] = t.apply(values[i]);
            }
        }
        out = out.with_column_values(*j, std::move(values));
    }
    return out;
}

} // namespace dqa

#endif
