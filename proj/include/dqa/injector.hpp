#ifndef DQA_INJECTOR_HPP
#define DQA_INJECTOR_HPP

#include "cleaners.hpp"

#include <set>

namespace dqa {

/// Conditions evaluated per split: the clean control plus one per injection.
inline const std::vector<std::string>& injection_conditions() {
    static const std::vector<std::string> names = {
        "Clean", "Tailed", "Unnormalized", "Constant", "Duplicates", "SchemaViolation",
        "CorrRedundant", "Mislabel", "ClassOverlap", "ClassImbalance",
    };
    return names;
}

struct Artifacts {
    // row artifacts live in the baseline feature space with realistic labels
    Dataset schema_rows;
    Dataset duplicate_rows;
    Dataset overlap_rows;
    // column artifacts hold raw values aligned with the baseline rows
    Dataset constant_columns;
    Dataset corr_columns;
    std::vector<std::string> tailed_columns;
    std::vector<std::string> unnormalized_columns;
    std::vector<std::size_t> mislabel_row_ids;   // baseline rows whose two labels differ
    double original_minority_ratio = 0.0;
    Dataset post_filter;                          // training data after Fi, before Tr

    std::size_t count(std::string_view condition) const {
        if (condition == "SchemaViolation") return schema_rows.rows();
        if (condition == "Duplicates") return duplicate_rows.rows();
        if (condition == "ClassOverlap") return overlap_rows.rows();
        if (condition == "Constant") return constant_columns.cols();
        if (condition == "CorrRedundant") return corr_columns.cols();
        if (condition == "Tailed") return tailed_columns.size();
        if (condition == "Unnormalized") return unnormalized_columns.size();
        if (condition == "Mislabel") return mislabel_row_ids.size();
        return 0;
    }
};

struct Baseline {
    Dataset clean;
    TransformParams transform;
    CleaningLog log;
    CleanParams params;
    Artifacts artifacts;
};

namespace detail {

inline Dataset rows_by_id(const Dataset& ds, const std::vector<std::size_t>& ids) {
    const auto pos = ds.row_positions();
    std::vector<std::size_t> p;
    p.reserve(ids.size());
    for (auto id : ids) {
        auto it = pos.find(id);
        if (it == pos.end()) {
            throw Error("row id " + std::to_string(id) + " not present");
        }
        p.push_back(it->second);
    }
    return ds.select_rows(p);
}

inline const std::vector<std::size_t>& removed(const StepLog& log, std::string_view reason) {
    static const std::vector<std::size_t> none;
    for (const auto& r : log.rows_removed) {
        if (r.reason == reason) {
            return r.row_ids;
        }
    }
    return none;
}

inline std::vector<std::string> removed_columns(const StepLog& log, std::initializer_list<std::string_view> reasons) {
    std::vector<std::string> out;
    for (const auto& c : log.columns_removed) {
        if (std::find(reasons.begin(), reasons.end(), c.reason) != reasons.end()) {
            out.insert(out.end(), c.columns.begin(), c.columns.end());
        }
    }
    return out;
}

inline Dataset column_artifact(const Dataset& source, const std::vector<std::size_t>& ids, const std::vector<std::string>& names) {
    return rows_by_id(source, ids).select_columns(names).with_active_label(LabelKind::realistic);
}

} // namespace detail

/**
 * Cleans with FiTrMiOv and records what each step removed or changed so a
 * single antipattern can be restored later.
 */
inline Baseline make_clean_baseline(const Dataset& ds, const CleanParams& params, std::uint64_t seed) {
    Baseline b;
    b.params = params;
    const CleaningOrder ftmo = parse_order("FiTrMiOv");
    auto res = clean(ds, ftmo, params, seed);
    b.clean = std::move(res.data);
    b.transform = std::move(res.transform);
    b.log = std::move(res.log);
    const auto& fi = b.log.steps[0];
    const auto& tr = b.log.steps[1];
    const auto& ov = b.log.steps[3];

    const std::vector<std::size_t> clean_ids(b.clean.row_ids().begin(), b.clean.row_ids().end());
    auto to_baseline_space = [&](const std::vector<std::size_t>& ids) {
        return apply_transform_to_test(detail::rows_by_id(ds, ids), b.transform).with_active_label(LabelKind::realistic);
    };
    auto& a = b.artifacts;
    a.schema_rows = to_baseline_space(detail::removed(fi, "schema_violation"));
    a.duplicate_rows = to_baseline_space(detail::removed(fi, "duplicate"));
    a.overlap_rows = to_baseline_space(detail::removed(ov, "class_overlap"));
    a.constant_columns = detail::column_artifact(ds, clean_ids, detail::removed_columns(fi, {"constant"}));
    a.corr_columns = detail::column_artifact(ds, clean_ids, detail::removed_columns(fi, {"correlated", "redundant"}));
    for (const auto& [name, t] : tr.transforms) {
        if (t.has_log()) {
            a.tailed_columns.push_back(name);
        }
        if (t.has_zscore()) {
            a.unnormalized_columns.push_back(name);
        }
    }
    const auto h = b.clean.labels(LabelKind::heuristic);
    const auto r = b.clean.labels(LabelKind::realistic);
    for (std::size_t i = 0; i < b.clean.rows(); ++i) {
        if (h[i] != r[i]) {
            a.mislabel_row_ids.push_back(b.clean.row_id(i));
        }
    }
    const auto real = ds.with_active_label(LabelKind::realistic);
    const std::size_t pos = real.positives();
    a.original_minority_ratio = static_cast<double>(std::min(pos, real.rows() - pos)) / static_cast<double>(real.rows());

    // replay Fi to keep the untransformed filtered table for withheld transforms
    std::vector<std::size_t> fi_rows;
    {
        std::set<std::size_t> gone(detail::removed(fi, "schema_violation").begin(), detail::removed(fi, "schema_violation").end());
        gone.insert(detail::removed(fi, "duplicate").begin(), detail::removed(fi, "duplicate").end());
        for (std::size_t i = 0; i < ds.rows(); ++i) {
            if (!gone.count(ds.row_id(i))) {
                fi_rows.push_back(i);
            }
        }
    }
    a.post_filter = ds.select_rows(fi_rows).select_columns(b.clean.feature_names());
    return b;
}

struct InjectionSpec {
    std::string condition;                  // "Clean" or an injectable antipattern
    std::uint64_t seed = 0;
    std::optional<double> imbalance_ratio;  // ClassImbalance target minority ratio
};

struct Injected {
    Dataset train;           // active label is the one training must use
    TransformParams transform; // to apply to the raw test split
    std::size_t restored = 0;  // artifacts re-introduced
    Warnings warnings;
};

namespace detail {

inline Injected inject_rows(const Baseline& b, const Dataset& rows, std::uint64_t seed) {
    Injected out{b.clean, b.transform, rows.rows(), {}};
    const std::size_t k = rows.rows();
    if (k == 0) {
        return out;
    }
    if (k > b.clean.rows()) {
        throw Error("inject: " + std::to_string(k) + " artifact rows exceed the clean baseline size");
    }
    if (static_cast<double>(k) > 0.3 * static_cast<double>(b.clean.rows())) {
        out.warnings.push_back("re-added rows exceed 30% of the clean baseline");
    }
    std::vector<std::size_t> order(b.clean.rows());
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(seed);
    rng.shuffle(order);
    order.resize(k);
    out.train = b.clean.drop_rows(order).append_rows(rows);
    guard_classes(out.train, "inject");
    return out;
}

inline Injected inject_columns(const Baseline& b, const Dataset& cols) {
    Injected out{b.clean, b.transform, cols.cols(), {}};
    if (cols.cols() == 0) {
        return out;
    }
    if (cols.row_ids().size() != b.clean.rows() ||
        !std::equal(cols.row_ids().begin(), cols.row_ids().end(), b.clean.row_ids().begin())) {
        throw Error("inject: column artifacts are not aligned with the clean baseline");
    }
    std::vector<std::string> kept = b.clean.feature_names();
    for (std::size_t j = 0; j < cols.cols(); ++j) {
        if (out.train.find(cols.name(j))) {
            throw Error("inject: artifact column '" + cols.name(j) + "' collides with a baseline column");
        }
        out.train = out.train.with_appended_column(cols.name(j), std::vector<double>(cols.column(j).begin(), cols.column(j).end()),
                                                   std::vector<std::uint8_t>(cols.missing_column(j).begin(), cols.missing_column(j).end()));
        kept.push_back(cols.name(j));
    }
    out.transform.kept_columns = kept;
    return out;
}

inline Injected inject_withheld_transform(const Baseline& b, bool keep_log, bool keep_zscore, const std::vector<std::string>& affected) {
    Injected out{b.clean, b.transform, affected.size(), {}};
    if (affected.empty()) {
        return out;
    }
    auto topt = b.params.transform;
    topt.apply_log = topt.apply_log && keep_log;
    topt.apply_zscore = topt.apply_zscore && keep_zscore;
    const auto refit = step_transform(b.artifacts.post_filter, topt);
    TransformParams params;
    params.columns = refit.fitted;
    params.kept_columns = b.transform.kept_columns;
    const std::vector<std::size_t> ids(b.clean.row_ids().begin(), b.clean.row_ids().end());
    Dataset rows = rows_by_id(b.artifacts.post_filter, ids);
    out.train = apply_transform_to_test(rows, TransformParams{params.columns, std::nullopt}).with_active_label(LabelKind::realistic);
    out.transform = std::move(params);
    return out;
}

inline Injected inject_imbalance(const Baseline& b, double ratio, std::uint64_t seed) {
    Injected out{b.clean, b.transform, 0, {}};
    const std::size_t n = b.clean.rows();
    const std::size_t pos = b.clean.positives();
    const std::uint8_t minority = pos <= n - pos ? 1 : 0;
    const std::size_t n_min = minority ? pos : n - pos;
    const std::size_t n_maj = n - n_min;
    if (!(ratio > 0.0 && ratio < 0.5)) {
        throw Error("inject: imbalance ratio must lie in (0, 0.5)");
    }
    // keep m minority rows so that m / (m + n_maj) <= ratio
    auto keep = static_cast<std::size_t>(std::floor(ratio * static_cast<double>(n_maj) / (1.0 - ratio) + 1e-9));
    keep = std::max<std::size_t>(keep, 1);
    if (keep >= n_min) {
        out.warnings.push_back("clean baseline is already at or below the target imbalance ratio");
        return out;
    }
    std::vector<std::size_t> members;
    const auto labels = b.clean.labels();
    for (std::size_t i = 0; i < n; ++i) {
        if (labels[i] == minority) {
            members.push_back(i);
        }
    }
    Rng rng(seed);
    rng.shuffle(members);
    members.erase(members.begin(), members.begin() + static_cast<std::ptrdiff_t>(keep));
    out.restored = members.size();
    out.train = b.clean.drop_rows(members);
    return out;
}

} // namespace detail

/**
 * Re-introduces one antipattern into the clean baseline. Row-based
 * injections keep the baseline row count by removing as many random
 * baseline rows as are re-added.
 */
inline Injected inject(const Baseline& b, const InjectionSpec& spec) {
    const auto& a = b.artifacts;
    const auto& c = spec.condition;
    if (c == "Clean") return {b.clean, b.transform, 0, {}};
    if (c == "SchemaViolation") return detail::inject_rows(b, a.schema_rows, spec.seed);
    if (c == "Duplicates") return detail::inject_rows(b, a.duplicate_rows, spec.seed);
    if (c == "ClassOverlap") return detail::inject_rows(b, a.overlap_rows, spec.seed);
    if (c == "Constant") return detail::inject_columns(b, a.constant_columns);
    if (c == "CorrRedundant") return detail::inject_columns(b, a.corr_columns);
    if (c == "Tailed") return detail::inject_withheld_transform(b, false, true, a.tailed_columns);
    if (c == "Unnormalized") return detail::inject_withheld_transform(b, true, false, a.unnormalized_columns);
    if (c == "Mislabel") return {b.clean.with_active_label(LabelKind::heuristic), b.transform, a.mislabel_row_ids.size(), {}};
    if (c == "ClassImbalance") return detail::inject_imbalance(b, spec.imbalance_ratio.value_or(a.original_minority_ratio), spec.seed);
    throw Error("inject: unknown condition '" + c + "'");
}

struct InjectionTask {
    std::string condition;
    std::size_t split = 0;
    std::uint64_t seed = 0;
    Dataset train;
    Dataset test;  // realistic labels, training-fitted transforms applied
    std::size_t restored = 0;
    Warnings warnings;
};

struct GridOptions {
    std::size_t splits = 10;
    double train_fraction = 0.8;
    CleanParams params;
    std::optional<double> imbalance_ratio;
};

/// Condition index used in seed derivation.
inline std::uint64_t condition_code(std::string_view condition) {
    const auto& names = injection_conditions();
    auto it = std::find(names.begin(), names.end(), condition);
    if (it == names.end()) {
        throw Error("unknown condition '" + std::string(condition) + "'");
    }
    return static_cast<std::uint64_t>(it - names.begin());
}

/// Training side of one split, as the pipeline sees it before cleaning.
inline Split experiment_split(const Dataset& ds, double train_fraction, std::uint64_t seed) {
    auto s = split_stratified(ds.with_active_label(LabelKind::realistic), train_fraction, seed);
    s.train = s.train.with_active_label(LabelKind::heuristic);
    return s;
}

/**
 * Tasks of one split: for every condition, the injected training set and
 * the shared test split with that condition's transforms applied.
 */
inline std::vector<InjectionTask> split_tasks(const Dataset& ds, std::size_t split, std::uint64_t master_seed, const GridOptions& opt) {
    const std::uint64_t split_seed = derive_seed(master_seed, split);
    const auto s = experiment_split(ds, opt.train_fraction, split_seed);
    const auto baseline = make_clean_baseline(s.train, opt.params, derive_seed(split_seed, 0x0f));
    std::vector<InjectionTask> out;
    for (const auto& c : injection_conditions()) {
        InjectionSpec spec{c, derive_seed(master_seed, split, condition_code(c)), opt.imbalance_ratio};
        auto inj = inject(baseline, spec);
        InjectionTask t;
        t.condition = c;
        t.split = split;
        t.seed = spec.seed;
        t.train = std::move(inj.train);
        t.test = apply_transform_to_test(s.test, inj.transform);
        t.restored = inj.restored;
        t.warnings = std::move(inj.warnings);
        out.push_back(std::move(t));
    }
    return out;
}

inline std::vector<InjectionTask> injection_grid(const Dataset& ds, std::uint64_t master_seed, const GridOptions& opt = {}) {
    if (opt.splits < 1) {
        throw Error("injection_grid: splits must be at least 1");
    }
    std::vector<InjectionTask> out;
    for (std::size_t s = 0; s < opt.splits; ++s) {
        auto tasks = split_tasks(ds, s, master_seed, opt);
        std::move(tasks.begin(), tasks.end(), std::back_inserter(out));
    }
    return out;
}

} // namespace dqa

#endif
