#include "test_util.hpp"

#include <gtest/gtest.h>

using namespace dqa;
using dqa::testing::make_dataset;

namespace {

std::vector<double> normal_column(Rng& rng, std::size_t n, double mean, double sd) {
    std::vector<double> v(n);
    for (auto& x : v) {
        x = rng.normal(mean, sd);
    }
    return v;
}

Dataset numbered(std::vector<std::vector<double>> cols, std::vector<std::uint8_t> y = {}) {
    std::vector<std::string> names;
    for (std::size_t j = 0; j < cols.size(); ++j) {
        names.push_back("c" + std::to_string(j));
    }
    if (y.empty()) {
        y.resize(cols.front().size());
        for (std::size_t i = 0; i < y.size(); ++i) {
            y[i] = i % 2;
        }
    }
    return make_dataset(names, std::move(cols), y);
}

// Independent JSD: plain loops, natural log converted to bits.
double jsd_oracle(const std::vector<double>& a, const std::vector<double>& b, int bins) {
    double lo = a[0], hi = a[0];
    for (double x : a) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    for (double x : b) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    std::vector<double> p(bins, 0), q(bins, 0);
    auto bin = [&](double x) { return std::min(bins - 1, static_cast<int>((x - lo) / (hi - lo) * bins)); };
    for (double x : a) {
        p[bin(x)] += 1.0 / static_cast<double>(a.size());
    }
    for (double x : b) {
        q[bin(x)] += 1.0 / static_cast<double>(b.size());
    }
    double js = 0;
    for (int k = 0; k < bins; ++k) {
        const double m = 0.5 * (p[k] + q[k]);
        if (p[k] > 0) {
            js += 0.5 * p[k] * std::log(p[k] / m);
        }
        if (q[k] > 0) {
            js += 0.5 * q[k] * std::log(q[k] / m);
        }
    }
    return js / std::log(2.0);
}

} // namespace

TEST(Tailed, HeavyTailFlagged) {
    std::vector<double> v(9, 1.0);
    v.push_back(1000.0);
    auto ds = numbered({v, v});
    auto r = detect_tailed(ds, 1.0);
    // oracle: mean 100.9 vs trimmed mean 1 with trimmed sd 0 -> guarded deviation far above 1
    const double mean = (9.0 + 1000.0) / 10.0;
    const double dev = std::fabs(mean - 1.0) / 1e-12;
    EXPECT_GT(dev, 1.0);
    EXPECT_EQ(r.flagged_columns, (std::vector<std::string>{"c0", "c1"}));
    EXPECT_EQ(r.status, Status::flagged);
    EXPECT_TRUE(r.flagged_rows.empty());
}

TEST(Tailed, ModerateTailDeviationMatchesHandComputation) {
    std::vector<double> v = {1, 2, 3, 4, 5, 6, 7, 8, 9, 40};
    auto ds = numbered({v, v});
    auto r = detect_tailed(ds, 0.25);
    // trimmed values 2..9: mean 5.5, sd sqrt(6); full mean 8.5
    const double dev = 3.0 / std::sqrt(6.0);
    EXPECT_NEAR(r.column_scores.at("c0"), dev, 1e-12);
    EXPECT_EQ(r.flagged_columns.size(), 2u);
    EXPECT_TRUE(detect_tailed(ds, dev + 1e-9).flagged_columns.empty());
}

TEST(Tailed, SymmetricAndConstantNotFlagged) {
    auto ds = numbered({{-2, -1, 0, 1, 2}, {3, 3, 3, 3, 3}});
    for (double thr : {1e-9, 0.01, 0.25, 5.0}) {
        EXPECT_TRUE(detect_tailed(ds, thr).flagged_columns.empty());
    }
    EXPECT_EQ(detect_tailed(ds, 0.25).status, Status::clean);
}

TEST(Tailed, EmptyDatasetIsError) {
    Dataset empty("e", {"a"}, {{}}, {}, {});
    EXPECT_THROW(detect_tailed(empty, 0.25), Error);
}

TEST(Unnormalized, LargeScaleColumnFlagged) {
    Rng rng(3);
    std::vector<std::vector<double>> cols;
    for (int j = 0; j < 10; ++j) {
        cols.push_back(normal_column(rng, 300, 0, 1));
    }
    cols.push_back(normal_column(rng, 300, 0, 1000));
    auto ds = numbered(cols);
    auto r = detect_unnormalized(ds, 3.0);
    EXPECT_EQ(r.flagged_columns, std::vector<std::string>{"c10"});

    // oracle: cross-column z of sds with one value trimmed from each tail
    std::vector<double> sds;
    for (const auto& c : cols) {
        double m = 0;
        for (double x : c) {
            m += x;
        }
        m /= static_cast<double>(c.size());
        double ss = 0;
        for (double x : c) {
            ss += (x - m) * (x - m);
        }
        sds.push_back(std::sqrt(ss / static_cast<double>(c.size() - 1)));
    }
    auto sorted = sds;
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> core(sorted.begin() + 1, sorted.end() - 1);
    double cm = 0;
    for (double x : core) {
        cm += x;
    }
    cm /= static_cast<double>(core.size());
    double cs = 0;
    for (double x : core) {
        cs += (x - cm) * (x - cm);
    }
    cs = std::sqrt(cs / static_cast<double>(core.size() - 1));
    const double z = std::fabs(sds[10] - cm) / std::max(cs, cm);
    EXPECT_GT(z, 3.0);
    EXPECT_GE(r.column_scores.at("c10"), z - 1e-9);
}

TEST(Unnormalized, IdenticalColumnsNotFlaggedAndSingleColumnError) {
    Rng rng(4);
    auto c = normal_column(rng, 50, 2, 3);
    auto ds = numbered({c, c, c, c, c});
    auto r = detect_unnormalized(ds, 3.0);
    EXPECT_TRUE(r.flagged_columns.empty());
    for (const auto& [name, z] : r.column_scores) {
        EXPECT_EQ(z, 0.0) << name;
    }
    EXPECT_THROW(detect_unnormalized(numbered({c}), 3.0), Error);
}

TEST(Unnormalized, SameScaleColumnsNeverFlaggedProperty) {
    for (int t = 0; t < 100; ++t) {
        Rng rng(derive_seed(900, t));
        const std::size_t p = 2 + rng.index(30), n = 30 + rng.index(300);
        std::vector<std::vector<double>> cols;
        for (std::size_t j = 0; j < p; ++j) {
            cols.push_back(normal_column(rng, n, 0, 1));
        }
        EXPECT_TRUE(detect_unnormalized(numbered(cols), 3.0).flagged_columns.empty()) << "trial " << t;
    }
}

TEST(Unnormalized, OutlierAmongIdenticalColumnsStillFlagged) {
    Rng rng(8);
    auto c = normal_column(rng, 40, 0, 1);
    std::vector<std::vector<double>> cols(10, c);
    cols.push_back(normal_column(rng, 40, 500, 1));
    auto r = detect_unnormalized(numbered(cols), 3.0);
    EXPECT_EQ(r.flagged_columns, std::vector<std::string>{"c10"});
}

TEST(Constant, ZeroVarianceOnly) {
    auto ds = make_dataset({"a", "b", "MINOR_COMMIT"}, {{7, 7, 7}, {7, 7, 7.0000001}, {0, 0, 0}}, {0, 1, 0});
    auto r = detect_constant(ds);
    EXPECT_EQ(r.flagged_columns, (std::vector<std::string>{"MINOR_COMMIT", "a"}));
}

TEST(Constant, NeverFlagsNonConstantProperty) {
    Rng rng(12);
    for (int t = 0; t < 50; ++t) {
        std::vector<std::vector<double>> cols(4, std::vector<double>(6));
        for (auto& c : cols) {
            for (auto& x : c) {
                x = static_cast<double>(rng.index(2));
            }
        }
        auto ds = numbered(cols);
        auto r = detect_constant(ds);
        for (const auto& name : r.flagged_columns) {
            auto s = column_stats(ds, name, 0.0);
            EXPECT_EQ(s.min, s.max);
        }
    }
}

TEST(Duplicates, KeepFirstFeaturesOnly) {
    auto ds = make_dataset({"a", "b"}, {{1, 1, 3}, {2, 2, 4}}, {0, 1, 0});
    EXPECT_EQ(detect_duplicates(ds).flagged_rows, std::vector<std::size_t>{1});
    auto distinct = make_dataset({"a", "b"}, {{1, 2, 3}, {2, 2, 4}}, {0, 1, 0});
    EXPECT_TRUE(detect_duplicates(distinct).flagged_rows.empty());
    // identical features under both labelings of the duplicate
    for (std::uint8_t label : {0, 1}) {
        auto d = make_dataset({"a", "b"}, {{5, 5}, {6, 6}}, {1, label}, {0, label});
        EXPECT_EQ(detect_duplicates(d).flagged_rows, std::vector<std::size_t>{1});
    }
}

TEST(Duplicates, RemovalIsFixpointProperty) {
    Rng rng(21);
    for (int t = 0; t < 30; ++t) {
        const std::size_t n = 5 + rng.index(40);
        std::vector<std::vector<double>> cols(2, std::vector<double>(n));
        for (auto& c : cols) {
            for (auto& x : c) {
                x = static_cast<double>(rng.index(3));
            }
        }
        auto ds = numbered(cols);
        auto r = detect_duplicates(ds);
        auto cleaned = ds.drop_rows(r.flagged_rows);
        EXPECT_TRUE(detect_duplicates(cleaned).flagged_rows.empty());
    }
}

TEST(Missing, CountsCellsAndRows) {
    auto clean = make_dataset({"a"}, {{1, 2}}, {0, 1});
    auto r0 = detect_missing(clean);
    EXPECT_TRUE(r0.flagged_rows.empty());
    EXPECT_EQ(r0.status, Status::clean);
    std::istringstream in("a,b,HeuBug,RealBug\n1,1,0,1\n1,1,0,1\n1,1,0,1\n1,1,0,1\n,1,0,0\n,,1,0\n");
    auto ds = parse_csv(in, "m", "HeuBug", "RealBug");
    auto r = detect_missing(ds);
    EXPECT_EQ(r.flagged_rows, (std::vector<std::size_t>{4, 5}));
    EXPECT_EQ(*r.scalar, 3.0);
}

TEST(Missing, SingleMaskedCell) {
    std::istringstream in("a,HeuBug,RealBug\n1,0,1\n1,0,1\n1,0,1\n1,0,1\nx,0,0\n");
    auto r = detect_missing(parse_csv(in, "m", "HeuBug", "RealBug"));
    EXPECT_EQ(r.flagged_rows, std::vector<std::size_t>{4});
    EXPECT_EQ(*r.scalar, 1.0);
}

TEST(Drift, IdenticalDisjointAndSmallShift) {
    Rng rng(31);
    auto a = numbered({normal_column(rng, 1000, 0, 1)});
    auto same = detect_drift(a, a, 0.10, 20);
    EXPECT_TRUE(same.flagged_columns.empty());
    EXPECT_NEAR(same.column_scores.at("c0"), 0.0, 1e-15);

    auto u0 = numbered({{0, 0.5, 1, 0.25, 0.75}});
    auto u1 = numbered({{10, 10.5, 11, 10.25, 10.75}});
    auto disjoint = detect_drift(u0, u1, 0.999, 20);
    EXPECT_NEAR(disjoint.column_scores.at("c0"), 1.0, 1e-12);
    EXPECT_EQ(disjoint.flagged_columns.size(), 1u);

    auto va = normal_column(rng, 1000, 0, 1);
    auto vb = normal_column(rng, 1000, 0.05, 1);
    auto shifted = detect_drift(numbered({va}), numbered({vb}), 0.10, 20);
    const double js = jsd_oracle(va, vb, 20);
    EXPECT_NEAR(shifted.column_scores.at("c0"), js, 1e-12);
    EXPECT_LT(js, 0.1);
    EXPECT_TRUE(shifted.flagged_columns.empty());
}

TEST(Drift, SymmetricAndMismatchError) {
    Rng rng(32);
    for (int t = 0; t < 20; ++t) {
        auto a = numbered({normal_column(rng, 100, 0, 1), normal_column(rng, 100, 0, 1)});
        auto b = numbered({normal_column(rng, 80, 0.5, 1), normal_column(rng, 80, 0, 2)});
        const double thr = rng.uniform(0.0, 0.3);
        auto ab = detect_drift(a, b, thr, 20), ba = detect_drift(b, a, thr, 20);
        EXPECT_EQ(ab.flagged_columns, ba.flagged_columns);
        for (const auto& [c, v] : ab.column_scores) {
            EXPECT_NEAR(v, ba.column_scores.at(c), 1e-12);
        }
    }
    auto x = make_dataset({"a"}, {{1, 2}}, {0, 1});
    auto y = make_dataset({"b"}, {{1, 2}}, {0, 1});
    EXPECT_THROW(detect_drift(x, y), Error);
}

TEST(ClassImbalance, StrictThreshold) {
    auto ratio_of = [](std::size_t neg, std::size_t pos) {
        std::vector<std::uint8_t> y(neg, 0);
        y.insert(y.end(), pos, 1);
        std::vector<double> x(y.size(), 1.0);
        return detect_class_imbalance(make_dataset({"x"}, {x}, y), 0.10);
    };
    auto r90 = ratio_of(90, 10);
    EXPECT_DOUBLE_EQ(*r90.scalar, 0.10);
    EXPECT_EQ(r90.status, Status::clean);
    auto r95 = ratio_of(95, 5);
    EXPECT_DOUBLE_EQ(*r95.scalar, 0.05);
    EXPECT_EQ(r95.status, Status::flagged);
    EXPECT_TRUE(r95.flagged_rows.empty());
    auto r50 = ratio_of(50, 50);
    EXPECT_DOUBLE_EQ(*r50.scalar, 0.5);
    EXPECT_EQ(r50.status, Status::clean);
}

TEST(Mislabel, ConflictingLabels) {
    auto ds = make_dataset({"x"}, {{1, 2, 3}}, {1, 1, 1}, {1, 0, 1});
    EXPECT_EQ(detect_mislabels(ds).flagged_rows, std::vector<std::size_t>{1});
    auto same = make_dataset({"x"}, {{1, 2, 3}}, {1, 0, 1});
    EXPECT_TRUE(detect_mislabels(same).flagged_rows.empty());
    auto all = make_dataset({"x"}, {{1, 2, 3}}, {1, 0, 1}, {0, 1, 0});
    EXPECT_EQ(detect_mislabels(all).flagged_rows.size(), 3u);
}

TEST(RowFeatureImbalance, Boundaries) {
    auto ratio = [](std::size_t rows, std::size_t cols) {
        std::vector<std::vector<double>> c(cols, std::vector<double>(rows, 1.0));
        std::vector<std::uint8_t> y(rows, 0);
        y[0] = 1;
        return detect_row_feature_imbalance(numbered(c, y), 10.0);
    };
    auto a = ratio(650, 65);
    EXPECT_DOUBLE_EQ(*a.scalar, 10.0);
    EXPECT_EQ(a.status, Status::clean);
    EXPECT_EQ(ratio(65, 65).status, Status::flagged);
    auto b = ratio(7120, 65);
    EXPECT_NEAR(*b.scalar, 109.538, 1e-3);
    EXPECT_EQ(b.status, Status::clean);
}

TEST(UncommonSign, MinorityNegativeFlagged) {
    std::vector<double> v(200, 1.0);
    v[17] = -4.0;
    auto r = detect_uncommon_sign(numbered({v}));
    EXPECT_EQ(r.flagged_rows, std::vector<std::size_t>{17});
    std::vector<double> w(200, 1.0);
    for (int i = 0; i < 10; ++i) {
        w[i] = -1.0; // 5% minority is below the 99% majority requirement
    }
    EXPECT_TRUE(detect_uncommon_sign(numbered({w})).flagged_rows.empty());
}

TEST(Correlation, NearPerfectPairCollapses) {
    Rng rng(41);
    auto x = normal_column(rng, 200, 0, 1);
    auto y = x;
    for (auto& v : y) {
        v = 2 * v + rng.normal(0, 1e-9);
    }
    auto r = detect_correlated_redundant(numbered({x, y}));
    EXPECT_EQ(r.flagged_columns.size(), 1u);
}

TEST(Correlation, IndependentColumnsNotFlagged) {
    Rng rng(42);
    std::vector<std::vector<double>> cols;
    for (int j = 0; j < 6; ++j) {
        cols.push_back(normal_column(rng, 500, 0, 1));
    }
    // oracle: all pairwise |rho| and each R^2 below the thresholds
    for (std::size_t a = 0; a < cols.size(); ++a) {
        for (std::size_t b = a + 1; b < cols.size(); ++b) {
            ASSERT_LT(std::fabs(stats::spearman(cols[a], cols[b])), 0.7);
        }
    }
    EXPECT_TRUE(detect_correlated_redundant(numbered(cols)).flagged_columns.empty());
}

TEST(Correlation, SumColumnFlaggedByRegressionPass) {
    Rng rng(43);
    auto x = normal_column(rng, 400, 0, 1);
    auto y = normal_column(rng, 400, 0, 1);
    auto v = normal_column(rng, 400, 0, 1);
    std::vector<double> z(400);
    for (std::size_t i = 0; i < 400; ++i) {
        z[i] = x[i] + y[i] + v[i] + rng.normal(0, 0.01);
    }
    for (const auto* c : {&x, &y, &v}) {
        ASSERT_LT(std::fabs(stats::spearman(*c, z)), 0.7);
    }
    auto ds = make_dataset({"x", "y", "v", "z"}, {x, y, v, z}, std::vector<std::uint8_t>(400, 0));
    auto a = analyze_correlation(ds);
    EXPECT_TRUE(a.correlated.empty());
    ASSERT_EQ(a.redundant.size(), 1u);
    auto r = detect_correlated_redundant(ds);
    ASSERT_EQ(r.flagged_columns.size(), 1u);
    // any of the four is a valid pick since each is an exact linear function of the others
    EXPECT_GE(r.column_scores.at(r.flagged_columns[0]), 2.0);
}

TEST(Correlation, ConstantColumnExcludedWithWarning) {
    Rng rng(44);
    auto ds = numbered({normal_column(rng, 50, 0, 1), std::vector<double>(50, 3.0), normal_column(rng, 50, 0, 1)});
    auto a = analyze_correlation(ds);
    EXPECT_EQ(a.degenerate, std::vector<std::string>{"c1"});
    EXPECT_FALSE(a.warnings.empty());
}

TEST(Correlation, SurvivorsAreFixpointProperty) {
    Rng rng(45);
    for (int t = 0; t < 15; ++t) {
        const std::size_t n = 60, p = 3 + rng.index(6);
        std::vector<std::vector<double>> cols;
        auto base = normal_column(rng, n, 0, 1);
        for (std::size_t j = 0; j < p; ++j) {
            const double w = rng.uniform();
            std::vector<double> c(n);
            for (std::size_t i = 0; i < n; ++i) {
                c[i] = w * base[i] + (1 - w) * rng.normal(0, 1);
            }
            cols.push_back(c);
        }
        auto ds = numbered(cols);
        auto r = detect_correlated_redundant(ds);
        auto survivors = ds.drop_columns(r.flagged_columns);
        if (survivors.cols() >= 2) {
            EXPECT_TRUE(detect_correlated_redundant(survivors).flagged_columns.empty()) << "trial " << t;
        }
    }
}

TEST(Overlap, PureClustersFlagNothing) {
    Rng rng(51);
    std::vector<double> a, b;
    std::vector<std::uint8_t> y;
    for (int i = 0; i < 40; ++i) {
        const bool pos = i < 20;
        a.push_back(rng.normal(pos ? 10 : -10, 0.5));
        b.push_back(rng.normal(pos ? 10 : -10, 0.5));
        y.push_back(pos);
    }
    OverlapOptions opt;
    opt.k = 2;
    opt.p = 0.5;
    auto r = detect_class_overlap_ikmcca(numbered({a, b}, y), 9, opt);
    EXPECT_TRUE(r.flagged_rows.empty());
    opt.k = 1;
    std::vector<std::uint8_t> mostly(40, 1);
    mostly[0] = 0;
    auto one = detect_class_overlap_ikmcca(numbered({a, b}, mostly), 9, opt);
    EXPECT_EQ(one.flagged_rows, std::vector<std::size_t>{0});
}

TEST(Overlap, PlantedIntrudersExactlyFlagged) {
    Rng rng(52);
    std::vector<double> a, b;
    std::vector<std::uint8_t> y;
    std::vector<int> truth_cluster;
    for (int i = 0; i < 200; ++i) {
        const int cluster = i < 100 ? 0 : 1;
        const double centre = cluster ? 8.0 : -8.0;
        a.push_back(rng.normal(centre, 1.0));
        b.push_back(rng.normal(centre, 1.0));
        const bool intruder = (i % 100) < 10;
        y.push_back(static_cast<std::uint8_t>(cluster == 1 ? !intruder : intruder));
        truth_cluster.push_back(cluster);
    }
    OverlapOptions opt;
    opt.k = 2;
    opt.p = 0.5;
    auto r = detect_class_overlap_ikmcca(numbered({a, b}, y), 77, opt);
    // oracle: nearest planted centre decides the cluster; minority label within it is the intruder
    std::vector<std::size_t> expected;
    for (std::size_t i = 0; i < 200; ++i) {
        const double d0 = std::hypot(a[i] + 8, b[i] + 8), d1 = std::hypot(a[i] - 8, b[i] - 8);
        const int c = d1 < d0 ? 1 : 0;
        ASSERT_EQ(c, truth_cluster[i]);
        if (y[i] != static_cast<std::uint8_t>(c)) {
            expected.push_back(i);
        }
    }
    EXPECT_EQ(expected.size(), 20u);
    EXPECT_EQ(r.flagged_rows, expected);
}

TEST(Overlap, DeterministicAndErrors) {
    auto ds = make_synthetic_sdp(5);
    auto r1 = detect_class_overlap_ikmcca(ds, 3), r2 = detect_class_overlap_ikmcca(ds, 3);
    EXPECT_EQ(r1.flagged_rows, r2.flagged_rows);
    EXPECT_EQ(r1.parameters.at("k"), static_cast<double>(default_overlap_k(ds.rows())));
    OverlapOptions big;
    big.k = ds.rows() + 1;
    EXPECT_THROW(detect_class_overlap_ikmcca(ds, 3, big), Error);
    auto single = make_dataset({"x"}, {{1, 2, 3}}, {1, 1, 1});
    EXPECT_THROW(detect_class_overlap_ikmcca(single, 3), Error);
    EXPECT_EQ(default_overlap_k(2), 2u);
    EXPECT_EQ(default_overlap_k(200), 10u);
}

TEST(Overlap, WholeClassFlaggedWarns) {
    std::vector<double> a = {0, 0.1, 0.2, 0.3, 0.4, 0.5};
    std::vector<std::uint8_t> y = {1, 0, 0, 0, 0, 0};
    OverlapOptions opt;
    opt.k = 1;
    opt.p = 0.5;
    auto r = detect_class_overlap_ikmcca(numbered({a}, y), 1, opt);
    EXPECT_EQ(r.flagged_rows, std::vector<std::size_t>{0});
    EXPECT_FALSE(r.warnings.empty());
}

TEST(KMeans, SeparatedBlobsRecovered) {
    Rng rng(61);
    std::vector<std::vector<double>> pts;
    for (int i = 0; i < 90; ++i) {
        const double c = (i % 3) * 20.0;
        pts.push_back({rng.normal(c, 1), rng.normal(-c, 1)});
    }
    auto km = kmeans(pts, 3, 5);
    EXPECT_TRUE(km.converged);
    for (int i = 3; i < 90; ++i) {
        EXPECT_EQ(km.assignment[i], km.assignment[i % 3]);
    }
    EXPECT_THROW(kmeans(pts, 0, 1), Error);
    EXPECT_THROW(kmeans(pts, 91, 1), Error);
}

TEST(OverlapSummary, HistogramsAndPairs) {
    auto ds = make_dataset({"x"}, {{1, 2, 3}}, {0, 1, 0});
    AntipatternReport mis, ov, dup;
    mis.antipattern = Antipattern::Mislabel;
    ov.antipattern = Antipattern::ClassOverlap;
    dup.antipattern = Antipattern::Duplicates;
    mis.dataset_id = ov.dataset_id = dup.dataset_id = ds.id();
    mis.flagged_rows = {1};
    ov.flagged_rows = {1};
    auto s = overlap_summary({mis, ov}, ds);
    EXPECT_EQ(s.row_histogram, (std::map<std::size_t, std::size_t>{{2, 1}}));
    ASSERT_EQ(s.pair_counts.size(), 1u);
    const Antipattern lo = std::min(Antipattern::Mislabel, Antipattern::ClassOverlap);
    const Antipattern hi = std::max(Antipattern::Mislabel, Antipattern::ClassOverlap);
    EXPECT_EQ(s.pair_counts.at({lo, hi}), 1u);

    ov.flagged_rows = {0};
    dup.flagged_rows = {2};
    auto d = overlap_summary({mis, ov, dup}, ds);
    EXPECT_EQ(d.row_histogram, (std::map<std::size_t, std::size_t>{{1, 3}}));
    EXPECT_TRUE(d.pair_counts.empty());

    auto e = overlap_summary({}, ds);
    EXPECT_TRUE(e.row_histogram.empty());
    EXPECT_TRUE(e.column_histogram.empty());

    mis.dataset_id = "other";
    EXPECT_THROW(overlap_summary({mis}, ds), Error);
}

TEST(RunAll, TaxonomyCompleteAndShapeInvariants) {
    auto ds = make_synthetic_sdp(7);
    DetectorOptions opt;
    opt.rules = applicable_rules(builtin_sdp_rules(), ds);
    auto reports = run_all_detectors(ds, opt);
    EXPECT_EQ(reports.size(), std::size(all_antipatterns));
    std::size_t flagged_rows_total = 0;
    for (const auto& r : reports) {
        EXPECT_EQ(r.dataset_id, ds.id());
        const auto lv = level_of(r.antipattern);
        if (lv != Level::row) {
            EXPECT_TRUE(r.flagged_rows.empty()) << to_string(r.antipattern);
        }
        if (lv != Level::column) {
            EXPECT_TRUE(r.flagged_columns.empty()) << to_string(r.antipattern);
        }
        EXPECT_TRUE(std::is_sorted(r.flagged_rows.begin(), r.flagged_rows.end()));
        EXPECT_TRUE(std::is_sorted(r.flagged_columns.begin(), r.flagged_columns.end()));
        for (auto i : r.flagged_rows) {
            EXPECT_LT(i, ds.rows());
        }
        for (const auto& c : r.flagged_columns) {
            EXPECT_TRUE(ds.find(c).has_value());
        }
        if (r.status == Status::not_applicable) {
            EXPECT_FALSE(r.reason.empty());
        }
        flagged_rows_total += r.flagged_rows.size();
    }
    auto drift = std::find_if(reports.begin(), reports.end(), [](const auto& r) { return r.antipattern == Antipattern::Drift; });
    EXPECT_EQ(drift->status, Status::not_applicable);
    std::vector<AntipatternReport> applicable;
    for (const auto& r : reports) {
        if (r.status != Status::not_applicable) {
            applicable.push_back(r);
        }
    }
    auto s = overlap_summary(applicable, ds);
    std::size_t rows = 0, cols = 0;
    for (auto [k, v] : s.row_histogram) {
        rows += v;
    }
    for (auto [k, v] : s.column_histogram) {
        cols += v;
    }
    EXPECT_LE(rows, ds.rows());
    EXPECT_LE(cols, ds.cols());
    auto again = run_all_detectors(ds, opt);
    for (std::size_t k = 0; k < reports.size(); ++k) {
        EXPECT_EQ(reports[k].flagged_rows, again[k].flagged_rows);
        EXPECT_EQ(reports[k].flagged_columns, again[k].flagged_columns);
    }
}

TEST(Synthetic, PlantedArtifactsDetected) {
    SyntheticOptions opt;
    auto ds = make_synthetic_sdp(11, opt);
    EXPECT_EQ(ds.rows(), opt.rows + opt.duplicates);
    EXPECT_EQ(detect_schema_violations(ds, applicable_rules(builtin_sdp_rules(), ds)).flagged_rows.size(), opt.schema_violations);
    EXPECT_EQ(detect_constant(ds).flagged_columns, std::vector<std::string>{"MINOR_COMMIT"});
    EXPECT_GE(detect_duplicates(ds).flagged_rows.size(), opt.duplicates);
    const auto flips = static_cast<std::size_t>(std::floor(opt.mislabel_rate * static_cast<double>(opt.rows)));
    EXPECT_GE(detect_mislabels(ds).flagged_rows.size(), flips);
}
