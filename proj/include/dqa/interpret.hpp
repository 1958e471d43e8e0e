#ifndef DQA_INTERPRET_HPP
#define DQA_INTERPRET_HPP

#include "learners.hpp"
#include "scott_knott.hpp"

#include <map>
#include <set>

namespace dqa {

struct ImportanceVector {
    std::vector<std::string> features;  // model feature order
    std::vector<double> scores;         // baseline - mean permuted metric
    double baseline = 0.0;
    std::size_t repeats = 0;
    std::string metric;

    std::map<std::string, double> as_map() const {
        std::map<std::string, double> out;
        for (std::size_t i = 0; i < features.size(); ++i) {
            out[features[i]] = scores[i];
        }
        return out;
    }
};

/**
 * Permutation importance on a test set: each feature column is shuffled
 * `repeats` times (seed per feature and repeat) while the others stay fixed.
 */
inline ImportanceVector permutation_importance(const Model& model, const Dataset& test, std::string_view metric, std::size_t repeats,
                                               std::uint64_t seed) {
    if (repeats < 1) {
        throw Error("permutation_importance: repeats must be at least 1");
    }
    const auto labels = test.labels();
    auto score = [&](const Matrix& x) { return metric_value(evaluate_scores(model.predict_matrix(x), labels), metric); };
    Matrix x = to_matrix(test, model.features());
    ImportanceVector out;
    out.features = model.features();
    out.repeats = repeats;
    out.metric = std::string(metric);
    out.baseline = score(x);
    for (std::size_t j = 0; j < x.cols; ++j) {
        std::vector<double> original(x.rows);
        for (std::size_t i = 0; i < x.rows; ++i) {
            original[i] = x(i, j);
        }
        double total = 0.0;
        for (std::size_t r = 0; r < repeats; ++r) {
            Rng rng(derive_seed(seed, j, r));
            auto shuffled = original;
            rng.shuffle(shuffled);
            for (std::size_t i = 0; i < x.rows; ++i) {
                x(i, j) = shuffled[i];
            }
            total += score(x);
        }
        for (std::size_t i = 0; i < x.rows; ++i) {
            x(i, j) = original[i];
        }
        out.scores.push_back(out.baseline - total / static_cast<double>(repeats));
    }
    return out;
}

/// SK-ESD ranks of features from their importance scores across runs;
/// only features present in every run are ranked.
inline stats::RankTable importance_ranks(const std::vector<ImportanceVector>& runs, stats::ScottKnottOptions opt = {}) {
    if (runs.size() < 2) {
        throw Error("importance_ranks: need at least 2 runs");
    }
    std::map<std::string, std::vector<double>> groups;
    std::map<std::string, std::size_t> seen;
    for (const auto& run : runs) {
        for (std::size_t i = 0; i < run.features.size(); ++i) {
            groups[run.features[i]].push_back(run.scores[i]);
            ++seen[run.features[i]];
        }
    }
    for (const auto& [f, c] : seen) {
        if (c != runs.size()) {
            groups.erase(f);
        }
    }
    if (groups.empty()) {
        throw Error("importance_ranks: no feature is shared by all runs");
    }
    return stats::scott_knott_esd(groups, opt);
}

struct ConditionRanking {
    std::string condition;
    stats::RankTable ranks;
    double auroc = 0.0;   // mean AU-ROC of the condition's models
};

struct ConcordanceResult {
    std::optional<double> w;
    std::vector<std::string> conditions;                 // used in W
    std::map<std::string, std::string> excluded;          // condition -> reason
    std::vector<std::string> shared_features;
    std::string note;                                     // set when W is skipped
};

/**
 * Kendall's W across conditions whose AU-ROC reaches the floor, over the
 * features every surviving condition ranked. CorrRedundant is never used.
 */
inline ConcordanceResult concordance_across_conditions(const std::vector<ConditionRanking>& rankings, double auroc_floor = 0.75) {
    ConcordanceResult out;
    std::vector<const ConditionRanking*> used;
    for (const auto& r : rankings) {
        if (r.condition == "CorrRedundant") {
            out.excluded[r.condition] = "correlated and redundant features make importance unreliable";
        } else if (!(r.auroc >= auroc_floor)) {
            out.excluded[r.condition] = "AU-ROC " + format_double(r.auroc) + " below floor " + format_double(auroc_floor);
        } else {
            used.push_back(&r);
            out.conditions.push_back(r.condition);
        }
    }
    if (used.size() < 2) {
        throw Error("concordance: insufficient conditions (" + std::to_string(used.size()) + " at or above the AU-ROC floor)");
    }
    std::set<std::string> shared;
    for (const auto& [f, rank] : used.front()->ranks.ranks) {
        shared.insert(f);
    }
    for (const auto* r : used) {
        std::set<std::string> next;
        for (const auto& f : shared) {
            if (r->ranks.ranks.count(f)) {
                next.insert(f);
            }
        }
        shared = std::move(next);
    }
    out.shared_features.assign(shared.begin(), shared.end());
    if (out.shared_features.size() < 2) {
        throw Error("concordance: fewer than 2 features shared by the surviving conditions");
    }
    std::vector<std::map<std::string, double>> maps;
    for (const auto* r : used) {
        maps.push_back(r->ranks.rank_map(out.shared_features));
    }
    out.w = stats::kendalls_w(maps);
    return out;
}

/// Kendall's tau-b between a condition's and the clean model's feature
/// ranks over their shared features.
inline double pairwise_vs_clean(const stats::RankTable& condition, const stats::RankTable& clean) {
    std::vector<std::string> shared;
    for (const auto& [f, r] : condition.ranks) {
        if (clean.ranks.count(f)) {
            shared.push_back(f);
        }
    }
    if (shared.size() < 2) {
        throw Error("pairwise_vs_clean: fewer than 2 shared features");
    }
    return stats::kendalls_tau(condition.rank_map(shared), clean.rank_map(shared));
}

} // namespace dqa

#endif
