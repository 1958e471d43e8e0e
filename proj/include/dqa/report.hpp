#ifndef DQA_REPORT_HPP
#define DQA_REPORT_HPP

#include "experiment.hpp"

#include <iomanip>

namespace dqa {

namespace detail {

inline std::string fixed(double v, int digits = 3) {
    if (!std::isfinite(v)) {
        return "nan";
    }
    std::ostringstream s;
    s << std::fixed << std::setprecision(digits) << v;
    return s.str();
}

inline std::string pad(std::string s, std::size_t width) {
    if (s.size() < width) {
        s.append(width - s.size(), ' ');
    }
    return s;
}

} // namespace detail

inline std::string render_lint(const std::vector<AntipatternReport>& reports, const OverlapSummary& overlap, const Dataset& ds) {
    std::ostringstream s;
    s << "dataset " << ds.id() << ": " << ds.rows() << " rows, " << ds.cols() << " features\n";
    for (const auto& r : reports) {
        s << "  " << detail::pad(to_string(r.antipattern), 28) << detail::pad(to_string(r.status), 16);
        if (r.status == Status::not_applicable) {
            s << r.reason;
        } else if (level_of(r.antipattern) == Level::row) {
            s << r.flagged_rows.size() << " rows";
        } else if (level_of(r.antipattern) == Level::column) {
            s << r.flagged_columns.size() << " columns";
        }
        if (r.scalar) {
            s << "  scalar=" << detail::fixed(*r.scalar, 4);
        }
        s << '\n';
    }
    s << "  rows by antipattern count:";
    for (const auto& [k, v] : overlap.row_histogram) {
        s << ' ' << k << ':' << v;
    }
    s << "\n  columns by antipattern count:";
    for (const auto& [k, v] : overlap.column_histogram) {
        s << ' ' << k << ':' << v;
    }
    s << '\n';
    return s.str();
}

inline std::string render_odds(const std::vector<OddsEntry>& entries) {
    std::ostringstream s;
    s << "Odds of reaching the top half, sequence AB versus BA\n";
    s << detail::pad("learner", 9) << detail::pad("metric", 11) << detail::pad("pair", 6) << detail::pad("AB top/not", 12)
      << detail::pad("BA top/not", 12) << detail::pad("OR", 9) << "important\n";
    for (const auto& e : entries) {
        s << detail::pad(e.learner, 9) << detail::pad(e.metric, 11) << detail::pad(e.pair, 6)
          << detail::pad(std::to_string(e.ab_top) + "/" + std::to_string(e.ab_not), 12)
          << detail::pad(std::to_string(e.ba_top) + "/" + std::to_string(e.ba_not), 12) << detail::pad(detail::fixed(e.odds.or_value), 9)
          << (e.odds.important ? "yes" : "no") << (e.odds.corrected ? " (corrected)" : "") << '\n';
    }
    return s.str();
}

inline std::string render_rankings(const std::vector<MetricRanking>& rankings) {
    std::ostringstream s;
    for (const auto& mr : rankings) {
        s << mr.learner << ' ' << mr.metric << ": ";
        if (!mr.table) {
            s << "not ranked (" << mr.note << ")\n";
            continue;
        }
        int current = 0;
        for (const auto& name : mr.table->order) {
            const int r = mr.table->rank(name);
            if (r != current) {
                s << (current ? " | " : "") << r << ": ";
                current = r;
            } else {
                s << ", ";
            }
            s << name << " (" << detail::fixed(mr.table->means.at(name)) << ")";
        }
        s << '\n';
    }
    return s.str();
}

/// Condition-by-metric table of rank difference and Cliff's magnitude code
/// against the clean control; blank cells share the control's rank.
inline std::string render_effects(const std::vector<MetricRanking>& rankings, const std::vector<EffectEntry>& effects) {
    std::set<std::string> learners, conditions;
    for (const auto& mr : rankings) {
        learners.insert(mr.learner);
        if (mr.table) {
            for (const auto& [c, r] : mr.table->ranks) {
                if (c != "Clean") {
                    conditions.insert(c);
                }
            }
        }
    }
    std::map<std::tuple<std::string, std::string, std::string>, const EffectEntry*> cell;
    for (const auto& e : effects) {
        cell[{e.learner, e.metric, e.condition}] = &e;
    }
    std::ostringstream s;
    s << "Rank difference versus Clean (negative is better) and Cliff's delta magnitude\n";
    for (const auto& learner : learners) {
        s << learner << '\n' << detail::pad("condition", 18);
        for (auto m : metric_names()) {
            s << detail::pad(std::string(m), 18);
        }
        s << '\n';
        for (const auto& c : conditions) {
            s << detail::pad(c, 18);
            for (auto m : metric_names()) {
                auto it = cell.find({learner, std::string(m), c});
                std::string text;
                if (it != cell.end()) {
                    const auto* e = it->second;
                    text = (e->rank_diff > 0 ? "+" : "") + std::to_string(e->rank_diff) + " " + stats::code(e->delta.magnitude) + " (" +
                           detail::fixed(e->delta.delta, 2) + ")";
                }
                s << detail::pad(text, 18);
            }
            s << '\n';
        }
    }
    return s.str();
}

inline std::string render_concordance(const std::vector<InterpretEntry>& entries, double auroc_floor) {
    std::ostringstream s;
    std::map<std::string, std::vector<double>> w_by_learner;
    for (const auto& e : entries) {
        s << e.dataset << ' ' << e.learner << ": ";
        if (e.concordance) {
            const double w = *e.concordance->w;
            w_by_learner[e.learner].push_back(w);
            s << "W=" << detail::fixed(w) << " (" << to_string(stats::concordance_level(w)) << ") over "
              << e.concordance->conditions.size() << " conditions, " << e.concordance->shared_features.size() << " features\n";
            for (const auto& [c, why] : e.concordance->excluded) {
                s << "    excluded " << c << ": " << why << '\n';
            }
        } else {
            s << "W skipped: " << e.concordance_note << '\n';
        }
        for (const auto& [c, why] : e.skipped) {
            s << "    not ranked " << c << ": " << why << '\n';
        }
        for (const auto& [c, tau] : e.tau_vs_clean) {
            s << "    tau(" << c << ", Clean) = " << detail::fixed(tau) << '\n';
        }
        for (const auto& [c, why] : e.tau_notes) {
            s << "    tau(" << c << ", Clean) skipped: " << why << '\n';
        }
    }
    s << "W distribution per learner (AU-ROC floor " << detail::fixed(auroc_floor, 2) << ")\n";
    for (auto& [learner, ws] : w_by_learner) {
        std::sort(ws.begin(), ws.end());
        auto q = [&](double f) {
            const double pos = f * static_cast<double>(ws.size() - 1);
            const auto lo = static_cast<std::size_t>(std::floor(pos));
            const auto hi = std::min(lo + 1, ws.size() - 1);
            return ws[lo] + (pos - static_cast<double>(lo)) * (ws[hi] - ws[lo]);
        };
        s << "  " << learner << ": n=" << ws.size() << " min=" << detail::fixed(ws.front()) << " q1=" << detail::fixed(q(0.25))
          << " median=" << detail::fixed(q(0.5)) << " q3=" << detail::fixed(q(0.75)) << " max=" << detail::fixed(ws.back()) << '\n';
    }
    if (w_by_learner.empty()) {
        s << "  no dataset had enough conditions at or above the floor\n";
    }
    return s.str();
}

// --------------------------------------------------------------- JSON reports

inline Json to_json(const OddsEntry& e) {
    return {{"learner", e.learner}, {"metric", e.metric}, {"pair", e.pair}, {"ab_top", e.ab_top}, {"ab_not", e.ab_not},
            {"ba_top", e.ba_top}, {"ba_not", e.ba_not}, {"odds_ratio", e.odds.or_value}, {"important", e.odds.important},
            {"corrected", e.odds.corrected}};
}

inline Json to_json(const MetricRanking& m) {
    Json j{{"learner", m.learner}, {"metric", m.metric}};
    j["ranks"] = m.table ? to_json(*m.table) : Json(nullptr);
    if (!m.table) {
        j["note"] = m.note;
    }
    return j;
}

inline Json to_json(const EffectEntry& e) {
    return {{"learner", e.learner}, {"metric", e.metric}, {"condition", e.condition}, {"rank", e.rank}, {"clean_rank", e.clean_rank},
            {"rank_diff", e.rank_diff}, {"cliffs_delta", e.delta.delta}, {"magnitude", stats::to_string(e.delta.magnitude)},
            {"code", std::string(1, stats::code(e.delta.magnitude))}};
}

inline Json to_json(const InterpretEntry& e) {
    Json j{{"dataset", e.dataset}, {"learner", e.learner}};
    Json conds = Json::array();
    for (const auto& c : e.conditions) {
        conds.push_back({{"condition", c.condition}, {"mean_auroc", c.auroc}, {"feature_ranks", to_json(c.ranks)}});
    }
    j["conditions"] = conds;
    j["skipped"] = Json(e.skipped);
    if (e.concordance) {
        j["kendalls_w"] = *e.concordance->w;
        j["w_conditions"] = e.concordance->conditions;
        j["w_excluded"] = Json(e.concordance->excluded);
        j["shared_features"] = e.concordance->shared_features;
    } else {
        j["kendalls_w"] = nullptr;
        j["w_note"] = e.concordance_note;
    }
    j["tau_vs_clean"] = Json(e.tau_vs_clean);
    j["tau_notes"] = Json(e.tau_notes);
    return j;
}

template <typename T>
Json json_array(const std::vector<T>& items) {
    Json j = Json::array();
    for (const auto& it : items) {
        j.push_back(to_json(it));
    }
    return j;
}

} // namespace dqa

#endif
