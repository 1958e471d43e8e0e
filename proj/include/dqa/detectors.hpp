#ifndef DQA_DETECTORS_HPP
#define DQA_DETECTORS_HPP

#include "dataset.hpp"
#include "kmeans.hpp"
#include "schema.hpp"
#include "stats.hpp"

#include <Eigen/Dense>

#include <cstring>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace dqa {

enum class Antipattern {
    SchemaViolation,
    Duplicates,
    Missing,
    Tailed,
    Unnormalized,
    Constant,
    Drift,
    ClassImbalance,
    ClassOverlap,
    Mislabel,
    CorrRedundant,
    RowFeatureImbalance,
    UncommonSign,
    DataMiscoding,
    InconsistentRepresentation,
    UncommonListLength,
    InconsistentLabeling,
};

inline constexpr Antipattern all_antipatterns[] = {
    Antipattern::SchemaViolation, Antipattern::Duplicates,   Antipattern::Missing,
    Antipattern::Tailed,          Antipattern::Unnormalized, Antipattern::Constant,
    Antipattern::Drift,           Antipattern::ClassImbalance, Antipattern::ClassOverlap,
    Antipattern::Mislabel,        Antipattern::CorrRedundant, Antipattern::RowFeatureImbalance,
    Antipattern::UncommonSign,    Antipattern::DataMiscoding, Antipattern::InconsistentRepresentation,
    Antipattern::UncommonListLength, Antipattern::InconsistentLabeling,
};

inline const char* to_string(Antipattern a) {
    switch (a) {
    case Antipattern::SchemaViolation: return "SchemaViolation";
    case Antipattern::Duplicates: return "Duplicates";
    case Antipattern::Missing: return "Missing";
    case Antipattern::Tailed: return "Tailed";
    case Antipattern::Unnormalized: return "Unnormalized";
    case Antipattern::Constant: return "Constant";
    case Antipattern::Drift: return "Drift";
    case Antipattern::ClassImbalance: return "ClassImbalance";
    case Antipattern::ClassOverlap: return "ClassOverlap";
    case Antipattern::Mislabel: return "Mislabel";
    case Antipattern::CorrRedundant: return "CorrRedundant";
    case Antipattern::RowFeatureImbalance: return "RowFeatureImbalance";
    case Antipattern::UncommonSign: return "UncommonSign";
    case Antipattern::DataMiscoding: return "DataMiscoding";
    case Antipattern::InconsistentRepresentation: return "InconsistentRepresentation";
    case Antipattern::UncommonListLength: return "UncommonListLength";
    case Antipattern::InconsistentLabeling: return "InconsistentLabeling";
    }
    return "?";
}

inline Antipattern parse_antipattern(std::string_view s) {
    for (auto a : all_antipatterns) {
        if (s == to_string(a)) {
            return a;
        }
    }
    throw Error("unknown antipattern '" + std::string(s) + "'");
}

enum class Level { row, column, dataset };

inline Level level_of(Antipattern a) {
    switch (a) {
    case Antipattern::SchemaViolation:
    case Antipattern::Duplicates:
    case Antipattern::Missing:
    case Antipattern::ClassOverlap:
    case Antipattern::Mislabel:
    case Antipattern::UncommonSign:
    case Antipattern::InconsistentLabeling:
        return Level::row;
    case Antipattern::ClassImbalance:
    case Antipattern::RowFeatureImbalance:
        return Level::dataset;
    default:
        return Level::column;
    }
}

enum class Status { clean, flagged, not_applicable };

inline const char* to_string(Status s) {
    switch (s) {
    case Status::clean: return "clean";
    case Status::flagged: return "flagged";
    case Status::not_applicable: return "not_applicable";
    }
    return "?";
}

struct AntipatternReport {
    Antipattern antipattern = Antipattern::Missing;
    std::string dataset_id;
    Status status = Status::clean;
    std::vector<std::size_t> flagged_rows;      // sorted row positions
    std::vector<std::string> flagged_columns;   // sorted names
    std::optional<double> scalar;
    std::map<std::string, double> parameters;
    std::map<std::string, double> column_scores;
    std::string reason;                         // set when not applicable
    Warnings warnings;

    bool flagged() const { return status == Status::flagged; }
};

namespace detail {

inline AntipatternReport make_report(Antipattern a, const Dataset& ds) {
    AntipatternReport r;
    r.antipattern = a;
    r.dataset_id = ds.id();
    return r;
}

inline void finish_rows(AntipatternReport& r, std::vector<std::size_t> rows) {
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    r.flagged_rows = std::move(rows);
    r.status = r.flagged_rows.empty() ? Status::clean : Status::flagged;
}

inline void finish_columns(AntipatternReport& r, std::vector<std::string> cols) {
    std::sort(cols.begin(), cols.end());
    cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
    r.flagged_columns = std::move(cols);
    r.status = r.flagged_columns.empty() ? Status::clean : Status::flagged;
}

inline void require_rows(const Dataset& ds, const char* what) {
    if (ds.rows() == 0) {
        throw Error(std::string(what) + ": empty dataset");
    }
}

} // namespace detail

inline AntipatternReport not_applicable(Antipattern a, const Dataset& ds, std::string reason) {
    auto r = detail::make_report(a, ds);
    r.status = Status::not_applicable;
    r.reason = std::move(reason);
    return r;
}

// ------------------------------------------------------------------ row level

inline AntipatternReport detect_schema_violations(const Dataset& ds, const std::vector<SchemaRule>& rules) {
    auto r = detail::make_report(Antipattern::SchemaViolation, ds);
    const auto vr = check_schema(ds, rules);
    for (const auto& [id, rows] : vr.violations) {
        r.column_scores[id] = static_cast<double>(rows.size());
    }
    r.parameters["rules"] = static_cast<double>(rules.size());
    detail::finish_rows(r, vr.violating_rows);
    return r;
}

/// Rows whose feature vector (missing mask included) repeats an earlier row.
inline AntipatternReport detect_duplicates(const Dataset& ds) {
    auto r = detail::make_report(Antipattern::Duplicates, ds);
    std::unordered_set<std::string> seen;
    std::vector<std::size_t> rows;
    std::string key(ds.cols() * 9, '\0');
    for (std::size_t i = 0; i < ds.rows(); ++i) {
        for (std::size_t j = 0; j < ds.cols(); ++j) {
            const bool miss = ds.is_missing(i, j);
            const std::uint64_t bits = miss ? 0 : std::bit_cast<std::uint64_t>(ds.value(i, j));
            key[j * 9] = miss ? '\1' : '\0';
            std::memcpy(key.data() + j * 9 + 1, &bits, sizeof bits);
        }
        if (!seen.insert(key).second) {
            rows.push_back(i);
        }
    }
    detail::finish_rows(r, std::move(rows));
    return r;
}

inline AntipatternReport detect_missing(const Dataset& ds) {
    auto r = detail::make_report(Antipattern::Missing, ds);
    std::vector<std::size_t> rows;
    std::size_t cells = 0;
    for (std::size_t i = 0; i < ds.rows(); ++i) {
        bool any = false;
        for (std::size_t j = 0; j < ds.cols(); ++j) {
            if (ds.is_missing(i, j)) {
                ++cells;
                any = true;
            }
        }
        if (any) {
            rows.push_back(i);
        }
    }
    r.scalar = static_cast<double>(cells);
    detail::finish_rows(r, std::move(rows));
    return r;
}

inline AntipatternReport detect_mislabels(const Dataset& ds) {
    auto r = detail::make_report(Antipattern::Mislabel, ds);
    const auto h = ds.labels(LabelKind::heuristic);
    const auto t = ds.labels(LabelKind::realistic);
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < ds.rows(); ++i) {
        if (h[i] != t[i]) {
            rows.push_back(i);
        }
    }
    r.scalar = ds.rows() ? static_cast<double>(rows.size()) / static_cast<double>(ds.rows()) : 0.0;
    detail::finish_rows(r, std::move(rows));
    return r;
}

/// Rows holding the minority sign of a column whose majority sign covers at
/// least `majority` of its present cells. Zero counts as non-negative.
inline AntipatternReport detect_uncommon_sign(const Dataset& ds, double majority = 0.99) {
    auto r = detail::make_report(Antipattern::UncommonSign, ds);
    r.parameters["majority"] = majority;
    std::vector<std::size_t> rows;
    for (std::size_t j = 0; j < ds.cols(); ++j) {
        std::vector<std::size_t> neg, nonneg;
        for (std::size_t i = 0; i < ds.rows(); ++i) {
            if (!ds.is_missing(i, j)) {
                (ds.value(i, j) < 0.0 ? neg : nonneg).push_back(i);
            }
        }
        const double n = static_cast<double>(neg.size() + nonneg.size());
        if (n == 0 || neg.empty() || nonneg.empty()) {
            continue;
        }
        auto& minority = neg.size() < nonneg.size() ? neg : nonneg;
        if (1.0 - static_cast<double>(minority.size()) / n >= majority) {
            rows.insert(rows.end(), minority.begin(), minority.end());
            r.column_scores[ds.name(j)] = static_cast<double>(minority.size());
        }
    }
    detail::finish_rows(r, std::move(rows));
    return r;
}

// --------------------------------------------------------------- column level

/// |mean - trimmed mean| / max(trimmed sd, 1e-12) above the threshold.
inline AntipatternReport detect_tailed(const Dataset& ds, double deviation_threshold = 0.25, double trim = 0.10) {
    detail::require_rows(ds, "detect_tailed");
    auto r = detail::make_report(Antipattern::Tailed, ds);
    r.parameters["deviation_threshold"] = deviation_threshold;
    r.parameters["trim_fraction"] = trim;
    std::vector<std::string> cols;
    for (std::size_t j = 0; j < ds.cols(); ++j) {
        auto v = ds.present_values(j);
        if (v.size() < 3) {
            r.warnings.push_back("column '" + ds.name(j) + "' has fewer than 3 values; skipped");
            continue;
        }
        const auto s = summarize(std::move(v), trim);
        const double dev = std::fabs(s.mean - s.trimmed_mean) / std::max(s.trimmed_sd, tiny);
        r.column_scores[ds.name(j)] = dev;
        if (dev > deviation_threshold) {
            cols.push_back(ds.name(j));
        }
    }
    detail::finish_columns(r, std::move(cols));
    return r;
}

/**
 * Columns whose mean or sd is a z-score outlier among all columns' means
 * (resp. sds). The reference location is the trimmed mean of the per-column
 * statistics; the spread is their trimmed sd, floored at the typical column
 * sd (trimmed mean of the sds) so that sampling noise between columns on a
 * common scale never registers as a deviation.
 */
inline AntipatternReport detect_unnormalized(const Dataset& ds, double z_threshold = 3.0, double trim = 0.10) {
    detail::require_rows(ds, "detect_unnormalized");
    if (ds.cols() < 2) {
        throw Error("detect_unnormalized: needs at least 2 columns");
    }
    auto r = detail::make_report(Antipattern::Unnormalized, ds);
    r.parameters["z_threshold"] = z_threshold;
    r.parameters["trim_fraction"] = trim;
    std::vector<std::size_t> used;
    std::vector<double> means, sds;
    for (std::size_t j = 0; j < ds.cols(); ++j) {
        auto v = ds.present_values(j);
        if (v.size() < 3) {
            r.warnings.push_back("column '" + ds.name(j) + "' has fewer than 3 values; skipped");
            continue;
        }
        const auto s = summarize(std::move(v), trim);
        used.push_back(j);
        means.push_back(s.mean);
        sds.push_back(s.sd);
    }
    std::vector<std::string> cols;
    if (used.size() >= 2) {
        const auto rm = summarize(means, trim);
        const auto rs = summarize(sds, trim);
        const double scale = std::max(rs.trimmed_mean, tiny);
        for (std::size_t k = 0; k < used.size(); ++k) {
            const double zm = std::fabs(means[k] - rm.trimmed_mean) / std::max(rm.trimmed_sd, scale);
            const double zs = std::fabs(sds[k] - rs.trimmed_mean) / std::max(rs.trimmed_sd, scale);
            const double z = std::max(zm, zs);
            r.column_scores[ds.name(used[k])] = z;
            if (z > z_threshold) {
                cols.push_back(ds.name(used[k]));
            }
        }
    } else {
        r.warnings.push_back("fewer than 2 analyzable columns");
    }
    detail::finish_columns(r, std::move(cols));
    return r;
}

/// Columns whose present values are all equal (columns with no present value
/// are not flagged).
inline AntipatternReport detect_constant(const Dataset& ds) {
    auto r = detail::make_report(Antipattern::Constant, ds);
    std::vector<std::string> cols;
    for (std::size_t j = 0; j < ds.cols(); ++j) {
        auto v = ds.present_values(j);
        if (v.empty()) {
            continue;
        }
        const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
        if (*lo == *hi) {
            cols.push_back(ds.name(j));
        }
    }
    detail::finish_columns(r, std::move(cols));
    return r;
}

/// Base-2 Jensen-Shannon divergence of two equal-width histograms over the
/// joint range.
inline double jensen_shannon(std::span<const double> a, std::span<const double> b, std::size_t bins) {
    if (a.empty() || b.empty()) {
        throw Error("jensen_shannon: empty sample");
    }
    if (bins == 0) {
        throw Error("jensen_shannon: bins must be positive");
    }
    double lo = std::min(*std::min_element(a.begin(), a.end()), *std::min_element(b.begin(), b.end()));
    double hi = std::max(*std::max_element(a.begin(), a.end()), *std::max_element(b.begin(), b.end()));
    if (lo == hi) {
        return 0.0;
    }
    auto hist = [&](std::span<const double> v) {
        std::vector<double> h(bins, 0.0);
        for (double x : v) {
            auto k = static_cast<std::size_t>((x - lo) / (hi - lo) * static_cast<double>(bins));
            h[std::min(k, bins - 1)] += 1.0;
        }
        for (double& c : h) {
            c /= static_cast<double>(v.size());
        }
        return h;
    };
    const auto p = hist(a), q = hist(b);
    auto xlogx = [](double x) { return x > 0.0 ? x * std::log2(x) : 0.0; };
    double hm = 0.0, hp = 0.0, hq = 0.0;
    for (std::size_t k = 0; k < bins; ++k) {
        hm -= xlogx(0.5 * (p[k] + q[k]));
        hp -= xlogx(p[k]);
        hq -= xlogx(q[k]);
    }
    return std::clamp(hm - 0.5 * (hp + hq), 0.0, 1.0);
}

inline AntipatternReport detect_drift(const Dataset& a, const Dataset& b, double js_threshold = 0.10, std::size_t bins = 20) {
    if (a.feature_names() != b.feature_names()) {
        throw Error("detect_drift: feature names differ");
    }
    auto r = detail::make_report(Antipattern::Drift, a);
    r.parameters["js_threshold"] = js_threshold;
    r.parameters["bins"] = static_cast<double>(bins);
    std::vector<std::string> cols;
    for (std::size_t j = 0; j < a.cols(); ++j) {
        const auto va = a.present_values(j), vb = b.present_values(j);
        if (va.empty() || vb.empty()) {
            throw Error("detect_drift: column '" + a.name(j) + "' is empty");
        }
        const double js = jensen_shannon(va, vb, bins);
        r.column_scores[a.name(j)] = js;
        if (js > js_threshold) {
            cols.push_back(a.name(j));
        }
    }
    detail::finish_columns(r, std::move(cols));
    return r;
}

struct CorrelationOptions {
    double rho_threshold = 0.7;
    double r2_threshold = 0.9;
};

struct CorrelationAnalysis {
    std::vector<std::string> correlated;   // flagged by the rank-correlation pass
    std::vector<std::string> redundant;    // flagged by the regression pass
    std::vector<std::string> degenerate;   // constant columns left out
    Warnings warnings;
};

namespace detail {

// Complete-linkage clustering of `members` (indices into rho) merged while
// the closest pair of clusters has distance <= cut.
inline std::vector<std::vector<std::size_t>> complete_linkage(const std::vector<std::vector<double>>& dist, double cut) {
    std::vector<std::vector<std::size_t>> clusters;
    for (std::size_t i = 0; i < dist.size(); ++i) {
        clusters.push_back({i});
    }
    auto linkage = [&](const std::vector<std::size_t>& x, const std::vector<std::size_t>& y) {
        double d = 0.0;
        for (auto i : x) {
            for (auto j : y) {
                d = std::max(d, dist[i][j]);
            }
        }
        return d;
    };
    while (clusters.size() > 1) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t bi = 0, bj = 0;
        for (std::size_t i = 0; i < clusters.size(); ++i) {
            for (std::size_t j = i + 1; j < clusters.size(); ++j) {
                const double d = linkage(clusters[i], clusters[j]);
                if (d < best) {
                    best = d;
                    bi = i;
                    bj = j;
                }
            }
        }
        if (!(best <= cut)) {
            break;
        }
        clusters[bi].insert(clusters[bi].end(), clusters[bj].begin(), clusters[bj].end());
        std::sort(clusters[bi].begin(), clusters[bi].end());
        clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(bj));
    }
    return clusters;
}

inline double ols_r2(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
    const Eigen::Index n = y.size();
    Eigen::MatrixXd design(n, x.cols() + 1);
    design.col(0).setOnes();
    design.rightCols(x.cols()) = x;
    const Eigen::VectorXd beta = design.colPivHouseholderQr().solve(y);
    const double sse = (y - design * beta).squaredNorm();
    const double sst = (y.array() - y.mean()).matrix().squaredNorm();
    if (sst <= 0.0) {
        return 1.0;
    }
    return std::clamp(1.0 - sse / sst, 0.0, 1.0);
}

} // namespace detail

/**
 * Two-pass correlated/redundant feature analysis over complete-case rows.
 *
 * Pass 1 repeats Spearman complete-linkage clustering on the survivors until
 * no pair of survivors reaches rho_threshold, so the result is a fixpoint.
 * Pass 2 removes the feature with the highest OLS R^2 on the other survivors
 * while that R^2 reaches r2_threshold.
 */
inline CorrelationAnalysis analyze_correlation(const Dataset& ds, CorrelationOptions opt = {}) {
    if (ds.cols() < 2) {
        throw Error("detect_correlated_redundant: needs at least 2 columns");
    }
    if (ds.rows() < 3) {
        throw Error("detect_correlated_redundant: needs at least 3 rows");
    }
    CorrelationAnalysis out;
    std::vector<std::size_t> candidates;
    for (std::size_t j = 0; j < ds.cols(); ++j) {
        auto v = ds.present_values(j);
        if (v.empty() || *std::min_element(v.begin(), v.end()) == *std::max_element(v.begin(), v.end())) {
            out.degenerate.push_back(ds.name(j));
            out.warnings.push_back("column '" + ds.name(j) + "' is constant; excluded from correlation analysis");
        } else {
            candidates.push_back(j);
        }
    }
    std::vector<std::size_t> complete;
    for (std::size_t i = 0; i < ds.rows(); ++i) {
        bool ok = true;
        for (auto j : candidates) {
            ok = ok && !ds.is_missing(i, j);
        }
        if (ok) {
            complete.push_back(i);
        }
    }
    if (complete.size() < 3) {
        throw Error("detect_correlated_redundant: fewer than 3 complete rows");
    }
    if (complete.size() < ds.rows()) {
        out.warnings.push_back(std::to_string(ds.rows() - complete.size()) + " rows with missing cells ignored");
    }
    std::vector<std::vector<double>> data;
    for (auto j : candidates) {
        std::vector<double> v;
        v.reserve(complete.size());
        for (auto i : complete) {
            v.push_back(ds.value(i, j));
        }
        data.push_back(std::move(v));
    }
    // a column constant on the complete rows carries no rank information
    std::vector<std::size_t> alive;
    for (std::size_t c = 0; c < data.size(); ++c) {
        const auto [lo, hi] = std::minmax_element(data[c].begin(), data[c].end());
        if (*lo == *hi) {
            out.degenerate.push_back(ds.name(candidates[c]));
            out.warnings.push_back("column '" + ds.name(candidates[c]) + "' is constant on complete rows; excluded");
        } else {
            alive.push_back(c);
        }
    }

    const std::size_t m = data.size();
    std::vector<std::vector<double>> rho(m, std::vector<double>(m, 1.0));
    for (std::size_t a = 0; a < alive.size(); ++a) {
        for (std::size_t b = a + 1; b < alive.size(); ++b) {
            const double r = std::fabs(stats::spearman(data[alive[a]], data[alive[b]]));
            rho[alive[a]][alive[b]] = rho[alive[b]][alive[a]] = r;
        }
    }
    const double cut = 1.0 - opt.rho_threshold;
    for (;;) {
        std::vector<std::vector<double>> dist(alive.size(), std::vector<double>(alive.size(), 0.0));
        for (std::size_t a = 0; a < alive.size(); ++a) {
            for (std::size_t b = 0; b < alive.size(); ++b) {
                dist[a][b] = a == b ? 0.0 : 1.0 - rho[alive[a]][alive[b]];
            }
        }
        const auto clusters = detail::complete_linkage(dist, cut);
        std::set<std::size_t> drop;
        for (const auto& cl : clusters) {
            if (cl.size() < 2) {
                continue;
            }
            std::set<std::size_t> inside(cl.begin(), cl.end());
            std::size_t keep = cl.front();
            double keep_score = std::numeric_limits<double>::infinity();
            for (auto a : cl) {
                double s = 0.0;
                std::size_t cnt = 0;
                for (std::size_t b = 0; b < alive.size(); ++b) {
                    if (!inside.count(b)) {
                        s += rho[alive[a]][alive[b]];
                        ++cnt;
                    }
                }
                const double score = cnt ? s / static_cast<double>(cnt) : 0.0;
                if (score < keep_score) {
                    keep_score = score;
                    keep = a;
                }
            }
            for (auto a : cl) {
                if (a != keep) {
                    drop.insert(a);
                }
            }
        }
        if (drop.empty()) {
            break;
        }
        std::vector<std::size_t> next;
        for (std::size_t a = 0; a < alive.size(); ++a) {
            if (drop.count(a)) {
                out.correlated.push_back(ds.name(candidates[alive[a]]));
            } else {
                next.push_back(alive[a]);
            }
        }
        alive = std::move(next);
    }

    const auto n = static_cast<Eigen::Index>(complete.size());
    while (alive.size() >= 2) {
        double best_r2 = -1.0;
        std::size_t best = 0;
        for (std::size_t a = 0; a < alive.size(); ++a) {
            Eigen::MatrixXd x(n, static_cast<Eigen::Index>(alive.size() - 1));
            Eigen::Index c = 0;
            for (std::size_t b = 0; b < alive.size(); ++b) {
                if (b != a) {
                    x.col(c++) = Eigen::Map<const Eigen::VectorXd>(data[alive[b]].data(), n);
                }
            }
            const double r2 = detail::ols_r2(x, Eigen::Map<const Eigen::VectorXd>(data[alive[a]].data(), n));
            if (r2 > best_r2) {
                best_r2 = r2;
                best = a;
            }
        }
        if (best_r2 < opt.r2_threshold) {
            break;
        }
        out.redundant.push_back(ds.name(candidates[alive[best]]));
        alive.erase(alive.begin() + static_cast<std::ptrdiff_t>(best));
    }
    return out;
}

inline AntipatternReport detect_correlated_redundant(const Dataset& ds, double rho_threshold = 0.7, double r2_threshold = 0.9) {
    auto r = detail::make_report(Antipattern::CorrRedundant, ds);
    r.parameters["rho_threshold"] = rho_threshold;
    r.parameters["r2_threshold"] = r2_threshold;
    auto a = analyze_correlation(ds, {rho_threshold, r2_threshold});
    for (const auto& c : a.correlated) {
        r.column_scores[c] = 1.0;
    }
    for (const auto& c : a.redundant) {
        r.column_scores[c] = 2.0;
    }
    r.warnings = std::move(a.warnings);
    auto cols = a.correlated;
    cols.insert(cols.end(), a.redundant.begin(), a.redundant.end());
    detail::finish_columns(r, std::move(cols));
    return r;
}

// -------------------------------------------------------------- dataset level

inline AntipatternReport detect_class_imbalance(const Dataset& ds, double threshold = 0.10) {
    detail::require_rows(ds, "detect_class_imbalance");
    auto r = detail::make_report(Antipattern::ClassImbalance, ds);
    r.parameters["threshold"] = threshold;
    const std::size_t pos = ds.positives();
    const double ratio = static_cast<double>(std::min(pos, ds.rows() - pos)) / static_cast<double>(ds.rows());
    r.scalar = ratio;
    r.status = ratio < threshold ? Status::flagged : Status::clean;
    return r;
}

inline AntipatternReport detect_row_feature_imbalance(const Dataset& ds, double min_ratio = 10.0) {
    if (ds.cols() == 0) {
        throw Error("detect_row_feature_imbalance: dataset has no columns");
    }
    auto r = detail::make_report(Antipattern::RowFeatureImbalance, ds);
    r.parameters["min_ratio"] = min_ratio;
    const double ratio = static_cast<double>(ds.rows()) / static_cast<double>(ds.cols());
    r.scalar = ratio;
    r.status = ratio < min_ratio ? Status::flagged : Status::clean;
    return r;
}

// --------------------------------------------------------------- class overlap

struct OverlapOptions {
    std::optional<std::size_t> k;   // default max(2, round(sqrt(n / 2)))
    std::optional<double> p;        // default overall defective ratio
    KMeansOptions kmeans;
};

inline std::size_t default_overlap_k(std::size_t n) {
    return std::max<std::size_t>(2, static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n) / 2.0))));
}

/**
 * Improved k-means class-overlap cleaning (IKMCCA) under the active label.
 *
 * Features are z-scored; masked cells sit at the column mean (0 after
 * scaling). In each cluster whose defective fraction is below p the defective
 * rows are flagged, otherwise its non-defective rows are.
 */
inline AntipatternReport detect_class_overlap_ikmcca(const Dataset& ds, std::uint64_t seed, OverlapOptions opt = {}) {
    detail::require_rows(ds, "detect_class_overlap_ikmcca");
    const std::size_t n = ds.rows();
    const std::size_t pos = ds.positives();
    if (pos == 0 || pos == n) {
        throw Error("detect_class_overlap_ikmcca: single-class dataset");
    }
    const std::size_t k = opt.k.value_or(default_overlap_k(n));
    const double p = opt.p.value_or(static_cast<double>(pos) / static_cast<double>(n));
    if (k == 0 || k > n) {
        throw Error("detect_class_overlap_ikmcca: k must lie in [1, row count]");
    }
    if (!(p > 0.0 && p < 1.0)) {
        throw Error("detect_class_overlap_ikmcca: p must lie in (0, 1)");
    }
    auto r = detail::make_report(Antipattern::ClassOverlap, ds);
    r.parameters["k"] = static_cast<double>(k);
    r.parameters["p"] = p;
    r.parameters["seed"] = static_cast<double>(seed);

    std::vector<std::vector<double>> points(n, std::vector<double>(ds.cols(), 0.0));
    bool imputed = false;
    for (std::size_t j = 0; j < ds.cols(); ++j) {
        auto v = ds.present_values(j);
        if (v.empty()) {
            continue;
        }
        const auto [m, var] = mean_variance(v);
        const double sd = std::sqrt(var);
        for (std::size_t i = 0; i < n; ++i) {
            if (ds.is_missing(i, j)) {
                imputed = true;
            } else if (sd > 0.0) {
                points[i][j] = (ds.value(i, j) - m) / sd;
            }
        }
    }
    if (imputed) {
        r.warnings.push_back("masked cells placed at the column mean for clustering");
    }
    const auto km = kmeans(points, k, seed, opt.kmeans);
    if (!km.converged) {
        r.warnings.push_back("k-means did not converge within " + std::to_string(opt.kmeans.max_iterations) + " iterations");
    }
    const auto labels = ds.labels();
    std::vector<std::size_t> size(k, 0), defective(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
        ++size[km.assignment[i]];
        defective[km.assignment[i]] += labels[i];
    }
    std::vector<std::size_t> rows;
    std::size_t flagged_pos = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto c = km.assignment[i];
        const double frac = static_cast<double>(defective[c]) / static_cast<double>(size[c]);
        const std::uint8_t target = frac < p ? 1 : 0;
        if (labels[i] == target) {
            rows.push_back(i);
            flagged_pos += labels[i];
        }
    }
    if (flagged_pos == pos || rows.size() - flagged_pos == n - pos) {
        r.warnings.push_back("overlap removal would eliminate an entire class");
    }
    r.scalar = static_cast<double>(rows.size()) / static_cast<double>(n);
    detail::finish_rows(r, std::move(rows));
    return r;
}

// -------------------------------------------------------------------- overlap

struct OverlapSummary {
    std::map<std::size_t, std::size_t> row_histogram;
    std::map<std::size_t, std::size_t> column_histogram;
    std::map<std::pair<Antipattern, Antipattern>, std::size_t> pair_counts; // first < second
};

/// Co-occurrence of row-level and column-level findings. Rows and columns
/// with no finding are left out; pairs count items flagged by exactly two
/// antipatterns.
inline OverlapSummary overlap_summary(const std::vector<AntipatternReport>& reports, const Dataset& ds) {
    OverlapSummary out;
    std::map<std::size_t, std::vector<Antipattern>> by_row;
    std::map<std::string, std::vector<Antipattern>> by_col;
    for (const auto& r : reports) {
        if (r.dataset_id != ds.id()) {
            throw Error("overlap_summary: report for dataset '" + r.dataset_id + "' does not match '" + ds.id() + "'");
        }
        for (auto i : r.flagged_rows) {
            if (i >= ds.rows()) {
                throw Error("overlap_summary: row index out of range");
            }
            by_row[i].push_back(r.antipattern);
        }
        for (const auto& c : r.flagged_columns) {
            by_col[c].push_back(r.antipattern);
        }
    }
    auto tally = [&](auto& groups, auto& hist) {
        for (auto& [key, list] : groups) {
            std::sort(list.begin(), list.end());
            list.erase(std::unique(list.begin(), list.end()), list.end());
            ++hist[list.size()];
            if (list.size() == 2) {
                ++out.pair_counts[{list[0], list[1]}];
            }
        }
    };
    tally(by_row, out.row_histogram);
    tally(by_col, out.column_histogram);
    return out;
}

// ------------------------------------------------------------------ all at once

struct DetectorOptions {
    std::vector<SchemaRule> rules;
    double tailed_threshold = 0.25;
    double z_threshold = 3.0;
    double trim_fraction = 0.10;
    double js_threshold = 0.10;
    std::size_t drift_bins = 20;
    double imbalance_threshold = 0.10;
    double row_feature_ratio = 10.0;
    CorrelationOptions correlation;
    OverlapOptions overlap;
    double sign_majority = 0.99;
    std::uint64_t seed = 0;
};

/// One report per taxonomy entry, in taxonomy order. Detectors whose
/// preconditions fail are reported as not applicable.
inline std::vector<AntipatternReport> run_all_detectors(const Dataset& ds, const DetectorOptions& opt,
                                                        const Dataset* comparison = nullptr) {
    std::vector<AntipatternReport> out;
    auto guarded = [&](Antipattern a, auto&& fn) {
        try {
            out.push_back(fn());
        } catch (const Error& e) {
            out.push_back(not_applicable(a, ds, e.what()));
        }
    };
    for (auto a : all_antipatterns) {
        switch (a) {
        case Antipattern::SchemaViolation:
            guarded(a, [&] { return detect_schema_violations(ds, opt.rules); });
            break;
        case Antipattern::Duplicates:
            guarded(a, [&] { return detect_duplicates(ds); });
            break;
        case Antipattern::Missing:
            guarded(a, [&] { return detect_missing(ds); });
            break;
        case Antipattern::Tailed:
            guarded(a, [&] { return detect_tailed(ds, opt.tailed_threshold, opt.trim_fraction); });
            break;
        case Antipattern::Unnormalized:
            guarded(a, [&] { return detect_unnormalized(ds, opt.z_threshold, opt.trim_fraction); });
            break;
        case Antipattern::Constant:
            guarded(a, [&] { return detect_constant(ds); });
            break;
        case Antipattern::Drift:
            if (comparison) {
                guarded(a, [&] { return detect_drift(ds, *comparison, opt.js_threshold, opt.drift_bins); });
            } else {
                out.push_back(not_applicable(a, ds, "no comparison dataset supplied"));
            }
            break;
        case Antipattern::ClassImbalance:
            guarded(a, [&] { return detect_class_imbalance(ds, opt.imbalance_threshold); });
            break;
        case Antipattern::ClassOverlap:
            guarded(a, [&] { return detect_class_overlap_ikmcca(ds, opt.seed, opt.overlap); });
            break;
        case Antipattern::Mislabel:
            guarded(a, [&] { return detect_mislabels(ds); });
            break;
        case Antipattern::CorrRedundant:
            guarded(a, [&] {
                return detect_correlated_redundant(ds, opt.correlation.rho_threshold, opt.correlation.r2_threshold);
            });
            break;
        case Antipattern::RowFeatureImbalance:
            guarded(a, [&] { return detect_row_feature_imbalance(ds, opt.row_feature_ratio); });
            break;
        case Antipattern::UncommonSign:
            guarded(a, [&] { return detect_uncommon_sign(ds, opt.sign_majority); });
            break;
        case Antipattern::DataMiscoding:
            out.push_back(not_applicable(a, ds, "requires categorical type metadata absent from numeric tables"));
            break;
        case Antipattern::InconsistentRepresentation:
            out.push_back(not_applicable(a, ds, "requires string-valued cells; all features are numeric"));
            break;
        case Antipattern::UncommonListLength:
            out.push_back(not_applicable(a, ds, "requires list-valued cells; all features are scalar"));
            break;
        case Antipattern::InconsistentLabeling:
            out.push_back(not_applicable(a, ds, "requires categorical label vocabularies; labels are binary"));
            break;
        }
    }
    return out;
}

} // namespace dqa

#endif
