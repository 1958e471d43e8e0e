#ifndef DQA_JSON_IO_HPP
#define DQA_JSON_IO_HPP

#include "cleaners.hpp"
#include "detectors.hpp"
#include "scott_knott.hpp"

#include <json.hpp>

namespace dqa {

using Json = nlohmann::ordered_json;

/// Leading metadata block embedded in every artifact.
inline Json artifact_meta(std::uint64_t seed, std::uint64_t config_hash) {
    Json j;
    j["tool"] = "dqa";
    j["version"] = std::string(version);
    j["seed"] = seed;
    j["config_hash"] = hex64(config_hash);
    return j;
}

inline Json to_json(const AntipatternReport& r) {
    Json j;
    j["antipattern"] = to_string(r.antipattern);
    const Level lv = level_of(r.antipattern);
    j["level"] = lv == Level::row ? "row" : (lv == Level::column ? "column" : "dataset");
    j["status"] = to_string(r.status);
    if (r.status == Status::not_applicable) {
        j["reason"] = r.reason;
    }
    if (lv == Level::row) {
        j["flagged_rows"] = r.flagged_rows;
        j["count"] = r.flagged_rows.size();
    } else if (lv == Level::column) {
        j["flagged_columns"] = r.flagged_columns;
        j["count"] = r.flagged_columns.size();
    }
    j["scalar"] = r.scalar ? Json(*r.scalar) : Json(nullptr);
    j["parameters"] = Json(r.parameters);
    if (!r.column_scores.empty()) {
        j["scores"] = Json(r.column_scores);
    }
    j["warnings"] = r.warnings;
    return j;
}

inline Json to_json(const OverlapSummary& s) {
    Json j;
    Json rows = Json::object(), cols = Json::object();
    for (const auto& [k, v] : s.row_histogram) {
        rows[std::to_string(k)] = v;
    }
    for (const auto& [k, v] : s.column_histogram) {
        cols[std::to_string(k)] = v;
    }
    j["row_histogram"] = rows;
    j["column_histogram"] = cols;
    Json pairs = Json::array();
    for (const auto& [p, v] : s.pair_counts) {
        pairs.push_back({{"first", to_string(p.first)}, {"second", to_string(p.second)}, {"count", v}});
    }
    j["pair_counts"] = pairs;
    return j;
}

inline Json to_json(const ColumnTransform& t) {
    Json j;
    j["kind"] = to_string(t.kind);
    if (t.has_log()) {
        j["shift"] = t.shift;
    }
    if (t.has_zscore()) {
        j["mean"] = t.mean;
        j["sd"] = t.sd;
    }
    return j;
}

inline Json to_json(const TransformParams& p) {
    Json j;
    Json cols = Json::object();
    for (const auto& [name, t] : p.columns) {
        cols[name] = to_json(t);
    }
    j["columns"] = cols;
    j["kept_columns"] = p.kept_columns ? Json(*p.kept_columns) : Json(nullptr);
    return j;
}

inline Json to_json(const StepLog& s) {
    Json j;
    j["step"] = to_string(s.step);
    Json rows = Json::array();
    for (const auto& r : s.rows_removed) {
        rows.push_back({{"reason", r.reason}, {"row_ids", r.row_ids}});
    }
    Json cols = Json::array();
    for (const auto& c : s.columns_removed) {
        cols.push_back({{"reason", c.reason}, {"columns", c.columns}});
    }
    j["rows_removed"] = rows;
    j["columns_removed"] = cols;
    j["label_switched"] = s.label_switched;
    Json tr = Json::object();
    for (const auto& [name, t] : s.transforms) {
        tr[name] = to_json(t);
    }
    j["transforms"] = tr;
    j["warnings"] = s.warnings;
    return j;
}

inline Json to_json(const CleaningLog& log) {
    Json j;
    j["order"] = log.order;
    Json steps = Json::array();
    for (const auto& s : log.steps) {
        steps.push_back(to_json(s));
    }
    j["steps"] = steps;
    return j;
}

inline Json to_json(const stats::RankTable& t) {
    Json j = Json::array();
    for (const auto& name : t.order) {
        j.push_back({{"group", name}, {"rank", t.rank(name)}, {"mean", t.means.at(name)}, {"samples", t.samples.at(name)}});
    }
    return j;
}

} // namespace dqa

#endif
