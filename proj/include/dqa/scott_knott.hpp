#ifndef DQA_SCOTT_KNOTT_HPP
#define DQA_SCOTT_KNOTT_HPP

#include "stats.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include <limits>
#include <map>
#include <numbers>
#include <string>
#include <vector>

namespace dqa::stats {

struct RankTable {
    std::map<std::string, int> ranks;                  // 1 = highest mean
    std::map<std::string, std::vector<double>> samples;
    std::map<std::string, double> means;
    std::vector<std::string> order;                    // by descending mean
    int rank_count = 0;

    int rank(const std::string& name) const {
        auto it = ranks.find(name);
        if (it == ranks.end()) {
            throw Error("rank table has no group '" + name + "'");
        }
        return it->second;
    }

    /// Ranks as doubles, restricted to `names` (for Kendall's W / tau).
    std::map<std::string, double> rank_map(const std::vector<std::string>& names) const {
        std::map<std::string, double> out;
        for (const auto& n : names) {
            out[n] = static_cast<double>(rank(n));
        }
        return out;
    }
};

struct ScottKnottOptions {
    double alpha = 0.05;
    double d_merge = 0.147; // splits with |Cohen's d| below this are merged back
};

/// Cohen's d with pooled standard deviation.
inline double cohens_d(std::span<const double> a, std::span<const double> b) {
    const double ma = mean(a), mb = mean(b);
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    const double dof = na + nb - 2.0;
    double pooled = 0.0;
    if (dof > 0.0) {
        pooled = ((na - 1.0) * variance(a) + (nb - 1.0) * variance(b)) / dof;
    }
    if (pooled <= 0.0) {
        if (ma == mb) {
            return 0.0;
        }
        return ma > mb ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
    }
    return (ma - mb) / std::sqrt(pooled);
}

namespace detail {

struct SkState {
    std::vector<std::string> names;          // sorted by descending mean
    std::vector<const std::vector<double>*> data;
    std::vector<double> means;
    double error_term = 0.0;                 // dfr * MSE / r
    double dfr = 0.0;
    ScottKnottOptions opt;
    std::vector<std::pair<std::size_t, std::size_t>> clusters;
};

inline void sk_partition(SkState& st, std::size_t lo, std::size_t hi) {
    const std::size_t k = hi - lo;
    if (k < 2) {
        st.clusters.emplace_back(lo, hi);
        return;
    }
    double grand = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
        grand += st.means[i];
    }
    grand /= static_cast<double>(k);

    // best contiguous bipartition of the sorted means
    double best_b = -1.0;
    std::size_t best_cut = lo + 1;
    for (std::size_t cut = lo + 1; cut < hi; ++cut) {
        double m1 = 0.0, m2 = 0.0;
        for (std::size_t i = lo; i < cut; ++i) {
            m1 += st.means[i];
        }
        for (std::size_t i = cut; i < hi; ++i) {
            m2 += st.means[i];
        }
        const double n1 = static_cast<double>(cut - lo), n2 = static_cast<double>(hi - cut);
        m1 /= n1;
        m2 /= n2;
        const double b = n1 * (m1 - grand) * (m1 - grand) + n2 * (m2 - grand) * (m2 - grand);
        if (b > best_b) {
            best_b = b;
            best_cut = cut;
        }
    }

    double between = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
        between += (st.means[i] - grand) * (st.means[i] - grand);
    }
    const double sigma2 = (between + st.error_term) / (static_cast<double>(k) + st.dfr);
    bool split = false;
    if (best_b > 0.0 && sigma2 > 0.0) {
        const double pi = std::numbers::pi;
        const double lambda = pi / (2.0 * (pi - 2.0)) * best_b / sigma2;
        const double df = static_cast<double>(k) / (pi - 2.0);
        const double p = boost::math::cdf(boost::math::complement(boost::math::chi_squared_distribution<double>(df), lambda));
        if (p < st.opt.alpha) {
            std::vector<double> left, right;
            for (std::size_t i = lo; i < best_cut; ++i) {
                left.insert(left.end(), st.data[i]->begin(), st.data[i]->end());
            }
            for (std::size_t i = best_cut; i < hi; ++i) {
                right.insert(right.end(), st.data[i]->begin(), st.data[i]->end());
            }
            split = std::fabs(cohens_d(left, right)) >= st.opt.d_merge;
        }
    }
    if (!split) {
        st.clusters.emplace_back(lo, hi);
        return;
    }
    sk_partition(st, lo, best_cut);
    sk_partition(st, best_cut, hi);
}

} // namespace detail

/**
 * Scott-Knott effect-size-aware ranking.
 *
 * Groups are sorted by mean and recursively bipartitioned at the split that
 * maximizes the between-group sum of squares of the means. A split is kept
 * when the Scott-Knott lambda statistic is significant at `alpha` under its
 * chi-square approximation with k / (pi - 2) degrees of freedom and the two
 * sides differ by at least `d_merge` in Cohen's d. The error variance is the
 * pooled within-group variance of all groups.
 */
inline RankTable scott_knott_esd(const std::map<std::string, std::vector<double>>& groups, ScottKnottOptions opt = {}) {
    if (groups.empty()) {
        throw Error("scott_knott_esd: no groups");
    }
    detail::SkState st;
    st.opt = opt;
    double pooled_ss = 0.0, total_n = 0.0, inv_sizes = 0.0;
    for (const auto& [name, values] : groups) {
        if (values.size() < 2) {
            throw Error("scott_knott_esd: group '" + name + "' has fewer than 2 samples");
        }
        const double m = mean(values);
        for (double x : values) {
            pooled_ss += (x - m) * (x - m);
        }
        total_n += static_cast<double>(values.size());
        inv_sizes += 1.0 / static_cast<double>(values.size());
    }
    const double k_total = static_cast<double>(groups.size());
    st.dfr = total_n - k_total;
    const double mse = pooled_ss / st.dfr;
    const double harmonic_n = k_total / inv_sizes;
    st.error_term = st.dfr * mse / harmonic_n;

    std::vector<std::pair<std::string, double>> sorted;
    for (const auto& [name, values] : groups) {
        sorted.emplace_back(name, mean(values));
    }
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    for (const auto& [name, m] : sorted) {
        st.names.push_back(name);
        st.means.push_back(m);
        st.data.push_back(&groups.at(name));
    }
    detail::sk_partition(st, 0, st.names.size());

    RankTable table;
    int rank = 0;
    for (auto [lo, hi] : st.clusters) {
        ++rank;
        for (std::size_t i = lo; i < hi; ++i) {
            table.ranks[st.names[i]] = rank;
        }
    }
    table.rank_count = rank;
    table.order = st.names;
    for (std::size_t i = 0; i < st.names.size(); ++i) {
        table.means[st.names[i]] = st.means[i];
        table.samples[st.names[i]] = *st.data[i];
    }
    return table;
}

} // namespace dqa::stats

#endif
