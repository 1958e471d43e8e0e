#ifndef DQA_KMEANS_HPP
#define DQA_KMEANS_HPP

#include "core.hpp"

#include <limits>
#include <vector>

namespace dqa {

struct KMeansResult {
    std::vector<std::size_t> assignment;
    std::vector<std::vector<double>> centers;
    double inertia = 0.0;
    bool converged = false;
    std::size_t iterations = 0;
};

struct KMeansOptions {
    std::size_t max_iterations = 300;
    std::size_t restarts = 4;
};

namespace detail {

inline double squared_distance(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double t = a[i] - b[i];
        d += t * t;
    }
    return d;
}

inline KMeansResult lloyd_once(const std::vector<std::vector<double>>& points, std::size_t k, std::size_t max_iterations, Rng& rng) {
    const std::size_t n = points.size();
    const std::size_t dim = points.front().size();
    KMeansResult res;

    // k-means++ seeding
    res.centers.push_back(points[rng.index(n)]);
    std::vector<double> d2(n);
    for (std::size_t i = 0; i < n; ++i) {
        d2[i] = squared_distance(points[i], res.centers[0]);
    }
    while (res.centers.size() < k) {
        double total = 0.0;
        for (double d : d2) {
            total += d;
        }
        std::size_t pick = 0;
        if (total <= 0.0) {
            pick = rng.index(n);
        } else {
            double target = rng.uniform() * total;
            for (pick = 0; pick + 1 < n; ++pick) {
                target -= d2[pick];
                if (target < 0.0) {
                    break;
                }
            }
        }
        res.centers.push_back(points[pick]);
        for (std::size_t i = 0; i < n; ++i) {
            d2[i] = std::min(d2[i], squared_distance(points[i], res.centers.back()));
        }
    }

    res.assignment.assign(n, k);
    for (res.iterations = 0; res.iterations < max_iterations; ++res.iterations) {
        bool changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t best = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (std::size_t c = 0; c < k; ++c) {
                const double d = squared_distance(points[i], res.centers[c]);
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            if (res.assignment[i] != best) {
                res.assignment[i] = best;
                changed = true;
            }
        }
        if (!changed) {
            res.converged = true;
            break;
        }
        std::vector<std::vector<double>> sums(k, std::vector<double>(dim, 0.0));
        std::vector<std::size_t> counts(k, 0);
        for (std::size_t i = 0; i < n; ++i) {
            ++counts[res.assignment[i]];
            for (std::size_t d = 0; d < dim; ++d) {
                sums[res.assignment[i]][d] += points[i][d];
            }
        }
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] == 0) {
                // re-seed an empty cluster at the point farthest from its center
                std::size_t far = 0;
                double far_d = -1.0;
                for (std::size_t i = 0; i < n; ++i) {
                    const double d = squared_distance(points[i], res.centers[res.assignment[i]]);
                    if (d > far_d) {
                        far_d = d;
                        far = i;
                    }
                }
                res.centers[c] = points[far];
                continue;
            }
            for (std::size_t d = 0; d < dim; ++d) {
                res.centers[c][d] = sums[c][d] / static_cast<double>(counts[c]);
            }
        }
    }
    res.inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        res.inertia += squared_distance(points[i], res.centers[res.assignment[i]]);
    }
    return res;
}

} // namespace detail

/// Lloyd's algorithm with k-means++ seeding; keeps the lowest-inertia restart.
inline KMeansResult kmeans(const std::vector<std::vector<double>>& points, std::size_t k, std::uint64_t seed, KMeansOptions opt = {}) {
    if (points.empty()) {
        throw Error("kmeans: no points");
    }
    if (k == 0 || k > points.size()) {
        throw Error("kmeans: k must lie in [1, number of rows]");
    }
    Rng rng(seed);
    KMeansResult best;
    bool have = false;
    for (std::size_t r = 0; r < std::max<std::size_t>(1, opt.restarts); ++r) {
        auto res = detail::lloyd_once(points, k, opt.max_iterations, rng);
        if (!have || res.inertia < best.inertia) {
            best = std::move(res);
            have = true;
        }
    }
    return best;
}

} // namespace dqa

#endif
