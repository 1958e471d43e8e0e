#ifndef DQA_STATS_HPP
#define DQA_STATS_HPP

#include "core.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <vector>

namespace dqa::stats {

/// 1-based ranks with ties replaced by their average rank.
inline std::vector<double> average_ranks(std::span<const double> values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) {
            ++j;
        }
        const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) {
            ranks[order[k]] = avg;
        }
        i = j + 1;
    }
    return ranks;
}

/// Sizes of the tie groups in `values` (groups of size 1 omitted).
inline std::vector<std::size_t> tie_groups(std::span<const double> values) {
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::size_t> out;
    std::size_t i = 0;
    while (i < sorted.size()) {
        std::size_t j = i;
        while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) {
            ++j;
        }
        if (j > i) {
            out.push_back(j - i + 1);
        }
        i = j + 1;
    }
    return out;
}

inline double mean(std::span<const double> v) {
    if (v.empty()) {
        return 0.0;
    }
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

inline double variance(std::span<const double> v) {
    if (v.size() < 2) {
        return 0.0;
    }
    const double m = mean(v);
    double ss = 0.0;
    for (double x : v) {
        ss += (x - m) * (x - m);
    }
    return ss / static_cast<double>(v.size() - 1);
}

inline double median(std::vector<double> v) {
    if (v.empty()) {
        throw Error("median of empty sample");
    }
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

/// Pearson correlation; 0 when either side has zero variance.
inline double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw Error("pearson: need two equal-length samples of size >= 2");
    }
    const double mx = mean(x), my = mean(y);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx <= 0.0 || syy <= 0.0) {
        return 0.0;
    }
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

/// Spearman's rho: Pearson correlation of average ranks.
inline double spearman(std::span<const double> x, std::span<const double> y) {
    auto rx = average_ranks(x);
    auto ry = average_ranks(y);
    return pearson(rx, ry);
}

// ---------------------------------------------------------------- Cliff's delta

enum class Magnitude { negligible, small, medium, large };

inline const char* to_string(Magnitude m) {
    switch (m) {
    case Magnitude::negligible:
        return "negligible";
    case Magnitude::small:
        return "small";
    case Magnitude::medium:
        return "medium";
    case Magnitude::large:
        return "large";
    }
    return "?";
}

inline char code(Magnitude m) {
    return "NSML"[static_cast<int>(m)];
}

struct CliffsResult {
    double delta = 0.0;
    Magnitude magnitude = Magnitude::negligible;
};

inline Magnitude cliffs_magnitude(double delta) {
    const double d = std::fabs(delta);
    if (d <= 0.147) {
        return Magnitude::negligible;
    }
    if (d <= 0.33) {
        return Magnitude::small;
    }
    if (d <= 0.474) {
        return Magnitude::medium;
    }
    return Magnitude::large;
}

/**
 * Cliff's delta, (#{a > b} - #{a < b}) / (|a| |b|).
 *
 * Counts pairs by binary search over the sorted second sample, O((n+m) log m).
 */
inline CliffsResult cliffs_delta(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) {
        throw Error("cliffs_delta: empty sample");
    }
    std::vector<double> sb(b.begin(), b.end());
    std::sort(sb.begin(), sb.end());
    long long greater = 0, less = 0;
    for (double x : a) {
        const auto lo = std::lower_bound(sb.begin(), sb.end(), x) - sb.begin();
        const auto hi = std::upper_bound(sb.begin(), sb.end(), x) - sb.begin();
        greater += lo;                                     // b values strictly below x
        less += static_cast<long long>(sb.size()) - hi;    // b values strictly above x
    }
    const double delta = static_cast<double>(greater - less) / (static_cast<double>(a.size()) * static_cast<double>(b.size()));
    return {delta, cliffs_magnitude(delta)};
}

// --------------------------------------------------------------------- Kendall

/**
 * Kendall's coefficient of concordance.
 *
 * `scores[r][i]` is rater r's score (or rank) for item i; each rater's
 * scores are converted to average ranks. Uses the tie-corrected form
 * W = 12 S / (m^2 (n^3 - n) - m T).
 */
inline double kendalls_w(const std::vector<std::vector<double>>& scores) {
    const std::size_t m = scores.size();
    if (m < 2) {
        throw Error("kendalls_w: need at least two rankings");
    }
    const std::size_t n = scores.front().size();
    if (n < 2) {
        throw Error("kendalls_w: need at least two items");
    }
    std::vector<double> rank_sums(n, 0.0);
    double ties = 0.0;
    for (const auto& s : scores) {
        if (s.size() != n) {
            throw Error("kendalls_w: rankings cover different item sets");
        }
        auto r = average_ranks(s);
        for (std::size_t i = 0; i < n; ++i) {
            rank_sums[i] += r[i];
        }
        for (auto t : tie_groups(s)) {
            const double td = static_cast<double>(t);
            ties += td * td * td - td;
        }
    }
    const double md = static_cast<double>(m), nd = static_cast<double>(n);
    const double mean_sum = md * (nd + 1.0) / 2.0;
    double S = 0.0;
    for (double rs : rank_sums) {
        S += (rs - mean_sum) * (rs - mean_sum);
    }
    const double denom = md * md * (nd * nd * nd - nd) - md * ties;
    if (denom <= 0.0) {
        // every rater tied every item: no information either way
        return 1.0;
    }
    return 12.0 * S / denom;
}

/// Map-keyed variant: every ranking must cover the same item names.
inline double kendalls_w(const std::vector<std::map<std::string, double>>& rankings) {
    if (rankings.empty()) {
        throw Error("kendalls_w: need at least two rankings");
    }
    std::vector<std::vector<double>> scores;
    for (const auto& r : rankings) {
        if (r.size() != rankings.front().size()) {
            throw Error("kendalls_w: item-set mismatch");
        }
        std::vector<double> s;
        for (const auto& [item, v] : rankings.front()) {
            auto it = r.find(item);
            if (it == r.end()) {
                throw Error("kendalls_w: item-set mismatch ('" + item + "')");
            }
            s.push_back(it->second);
        }
        scores.push_back(std::move(s));
    }
    return kendalls_w(scores);
}

/// Kendall's tau-b.
inline double kendalls_tau(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw Error("kendalls_tau: item mismatch");
    }
    const std::size_t n = x.size();
    if (n < 2) {
        throw Error("kendalls_tau: need at least two items");
    }
    long long concordant = 0, discordant = 0, tie_x = 0, tie_y = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dx = x[i] - x[j];
            const double dy = y[i] - y[j];
            if (dx == 0.0 && dy == 0.0) {
                continue;
            }
            if (dx == 0.0) {
                ++tie_x;
            } else if (dy == 0.0) {
                ++tie_y;
            } else if ((dx > 0) == (dy > 0)) {
                ++concordant;
            } else {
                ++discordant;
            }
        }
    }
    const double n1 = static_cast<double>(concordant + discordant + tie_x);
    const double n2 = static_cast<double>(concordant + discordant + tie_y);
    if (n1 == 0.0 || n2 == 0.0) {
        return 0.0;
    }
    return static_cast<double>(concordant - discordant) / std::sqrt(n1 * n2);
}

inline double kendalls_tau(const std::map<std::string, double>& a, const std::map<std::string, double>& b) {
    if (a.size() != b.size()) {
        throw Error("kendalls_tau: item mismatch");
    }
    std::vector<double> x, y;
    for (const auto& [item, v] : a) {
        auto it = b.find(item);
        if (it == b.end()) {
            throw Error("kendalls_tau: item mismatch ('" + item + "')");
        }
        x.push_back(v);
        y.push_back(it->second);
    }
    return kendalls_tau(x, y);
}

enum class Concordance { weak, moderate, strong };

inline Concordance concordance_level(double w) {
    const double a = std::fabs(w);
    return a <= 0.3 ? Concordance::weak : (a <= 0.6 ? Concordance::moderate : Concordance::strong);
}

inline const char* to_string(Concordance c) {
    return c == Concordance::weak ? "weak" : (c == Concordance::moderate ? "moderate" : "strong");
}

// ------------------------------------------------------------------ odds ratio

struct OddsResult {
    double or_value = 1.0;
    bool important = false;
    bool corrected = false;
};

/**
 * Odds of sequence AB reaching the top half over the odds of BA.
 *
 * Applies the Haldane-Anscombe +0.5 correction to all four cells when any
 * cell is zero. Values outside [0.64, 1.5] are important.
 */
inline OddsResult odds_ratio(double ab_top, double ab_not, double ba_top, double ba_not) {
    if (ab_top < 0 || ab_not < 0 || ba_top < 0 || ba_not < 0) {
        throw Error("odds_ratio: negative count");
    }
    if (ab_top + ab_not == 0 || ba_top + ba_not == 0) {
        throw Error("odds_ratio: all-zero counts for a sequence");
    }
    OddsResult r;
    if (ab_top == 0 || ab_not == 0 || ba_top == 0 || ba_not == 0) {
        ab_top += 0.5;
        ab_not += 0.5;
        ba_top += 0.5;
        ba_not += 0.5;
        r.corrected = true;
    }
    r.or_value = (ab_top / ab_not) / (ba_top / ba_not);
    r.important = r.or_value < 0.64 || r.or_value > 1.5;
    return r;
}

/// Indices whose value is >= the median of all values.
inline std::vector<std::size_t> top_half_membership(std::span<const double> values) {
    if (values.size() < 2) {
        throw Error("top_half_membership: need at least two values");
    }
    const double med = median(std::vector<double>(values.begin(), values.end()));
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] >= med) {
            out.push_back(i);
        }
    }
    return out;
}

// -------------------------------------------------------------- rank-sum test

struct RankSumResult {
    double u = 0.0;       // Mann-Whitney U of the first sample
    double z = 0.0;       // normal-approximation statistic (0 on the exact path)
    double p_value = 1.0; // two-sided
    bool exact = false;
};

namespace detail {

// Exact two-sided p-value by dynamic programming over the pooled (doubled)
// midranks: counts subsets of size n_a by rank sum.
inline double exact_rank_sum_p(std::span<const double> doubled_ranks, std::size_t n_a, long long observed_doubled_sum) {
    const std::size_t N = doubled_ranks.size();
    long long total = 0;
    for (double r : doubled_ranks) {
        total += std::llround(r);
    }
    // table[k][s] = number of size-k subsets with doubled rank sum s
    std::vector<std::vector<double>> table(n_a + 1, std::vector<double>(static_cast<std::size_t>(total) + 1, 0.0));
    table[0][0] = 1.0;
    for (std::size_t i = 0; i < N; ++i) {
        const auto r = static_cast<std::size_t>(std::llround(doubled_ranks[i]));
        for (std::size_t k = std::min(n_a, i + 1); k >= 1; --k) {
            for (std::size_t s = static_cast<std::size_t>(total); s + 1 > r; --s) {
                table[k][s] += table[k - 1][s - r];
                if (s == r) {
                    break;
                }
            }
        }
    }
    // E[2 * rank sum] = n_a (N + 1); compare distances in doubled units
    const long long expect2 = static_cast<long long>(n_a) * static_cast<long long>(N + 1);
    const long long dev_obs = std::llabs(observed_doubled_sum - expect2);
    double hit = 0.0, all = 0.0;
    for (std::size_t s = 0; s < table[n_a].size(); ++s) {
        const double c = table[n_a][s];
        if (c == 0.0) {
            continue;
        }
        all += c;
        if (std::llabs(static_cast<long long>(s) - expect2) >= dev_obs) {
            hit += c;
        }
    }
    return std::min(1.0, hit / all);
}

} // namespace detail

/**
 * Two-sided Wilcoxon rank-sum / Mann-Whitney U test.
 *
 * Exact permutation distribution (over midranks, so ties are handled) when
 * the pooled size is at most 12, otherwise the normal approximation with
 * tie-corrected variance and a 0.5 continuity correction.
 */
inline RankSumResult wilcoxon_rank_sum(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) {
        throw Error("wilcoxon_rank_sum: empty sample");
    }
    std::vector<double> pooled(a.begin(), a.end());
    pooled.insert(pooled.end(), b.begin(), b.end());
    auto ranks = average_ranks(pooled);
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    double rank_sum_a = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        rank_sum_a += ranks[i];
    }
    RankSumResult res;
    res.u = rank_sum_a - na * (na + 1.0) / 2.0;
    if (pooled.size() <= 12) {
        std::vector<double> doubled(ranks.size());
        for (std::size_t i = 0; i < ranks.size(); ++i) {
            doubled[i] = 2.0 * ranks[i];
        }
        res.exact = true;
        res.p_value = detail::exact_rank_sum_p(doubled, a.size(), std::llround(2.0 * rank_sum_a));
        return res;
    }
    const double N = na + nb;
    double tie_term = 0.0;
    for (auto t : tie_groups(pooled)) {
        const double td = static_cast<double>(t);
        tie_term += td * td * td - td;
    }
    const double var = na * nb / 12.0 * ((N + 1.0) - tie_term / (N * (N - 1.0)));
    if (var <= 0.0) {
        res.p_value = 1.0;
        return res;
    }
    const double diff = res.u - na * nb / 2.0;
    const double corrected = std::max(0.0, std::fabs(diff) - 0.5);
    res.z = (diff >= 0 ? 1.0 : -1.0) * corrected / std::sqrt(var);
    res.p_value = std::min(1.0, std::erfc(std::fabs(res.z) / std::sqrt(2.0)));
    return res;
}

} // namespace dqa::stats

#endif
