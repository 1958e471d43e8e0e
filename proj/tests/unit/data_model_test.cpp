#include "test_util.hpp"

#include <gtest/gtest.h>

using namespace dqa;
using dqa::testing::from_csv_text;
using dqa::testing::make_dataset;

TEST(LoadCsv, ParsesFeaturesAndDualLabels) {
    auto ds = from_csv_text("a,b,HeuBug,RealBug\n1,2,0,1\n3,4,1,1\n5,6,0,0\n");
    EXPECT_EQ(ds.cols(), 2u);
    EXPECT_EQ(ds.rows(), 3u);
    EXPECT_EQ(ds.active_label(), LabelKind::realistic);
    EXPECT_EQ(ds.positives(LabelKind::realistic), 2u);
    EXPECT_EQ(ds.positives(LabelKind::heuristic), 1u);
    EXPECT_DOUBLE_EQ(ds.value(2, 1), 6.0);
}

TEST(LoadCsv, AcceptsBooleanLabels) {
    auto ds = from_csv_text("a,HeuBug,RealBug\n1,true,FALSE\n2,False,1\n");
    EXPECT_EQ(ds.positives(LabelKind::heuristic), 1u);
    EXPECT_EQ(ds.positives(LabelKind::realistic), 1u);
}

TEST(LoadCsv, RejectsNonBinaryLabel) {
    try {
        from_csv_text("a,HeuBug,RealBug\n1,2,0\n");
        FAIL() << "expected an error";
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("non-binary label"), std::string::npos);
    }
}

TEST(LoadCsv, UnparseableCellIsMaskedAndLinted) {
    auto ds = from_csv_text("a,b,HeuBug,RealBug\n1,abc,0,1\n3,4,1,0\n");
    EXPECT_TRUE(ds.is_missing(0, 1));
    EXPECT_FALSE(ds.is_missing(1, 1));
    EXPECT_TRUE(std::isnan(ds.value(0, 1)));
    auto rep = detect_missing(ds);
    EXPECT_EQ(rep.status, Status::flagged);
    EXPECT_EQ(rep.flagged_rows, std::vector<std::size_t>{0});
}

TEST(LoadCsv, Errors) {
    EXPECT_THROW(from_csv_text("a,HeuBug\n1,0\n"), Error);                // missing realistic column
    EXPECT_THROW(from_csv_text("a,HeuBug,RealBug\n"), Error);             // zero rows
    EXPECT_THROW(from_csv_text("a,a,HeuBug,RealBug\n1,2,0,1\n"), Error);  // duplicate header
    EXPECT_THROW(load_csv("/nonexistent/file.csv"), Error);
}

TEST(LoadCsv, WriteReloadRoundTripsBitExactly) {
    Rng rng(99);
    std::vector<std::vector<double>> cols(3, std::vector<double>(50));
    std::vector<std::uint8_t> y(50);
    for (std::size_t i = 0; i < 50; ++i) {
        cols[0][i] = rng.normal(0, 1e6);
        cols[1][i] = rng.uniform() * 1e-300;
        cols[2][i] = std::nextafter(1.0 / 3.0, 1.0) * static_cast<double>(i);
        y[i] = i % 3 == 0;
    }
    auto ds = make_dataset({"x", "y", "z"}, cols, y);
    std::ostringstream out;
    write_csv(out, ds);
    auto back = from_csv_text(out.str());
    ASSERT_EQ(back.rows(), ds.rows());
    for (std::size_t j = 0; j < 3; ++j) {
        for (std::size_t i = 0; i < 50; ++i) {
            EXPECT_EQ(std::bit_cast<std::uint64_t>(back.value(i, j)), std::bit_cast<std::uint64_t>(ds.value(i, j)));
        }
    }
}

TEST(DatasetInvariants, ConstructorRejectsMalformedInput) {
    EXPECT_THROW(make_dataset({"a"}, {{1, 2}}, {0, 1}, {0}), Error);          // label length
    EXPECT_THROW(make_dataset({"a", "a"}, {{1, 2}, {3, 4}}, {0, 1}), Error);  // duplicate name
    EXPECT_THROW(make_dataset({"a"}, {{1, 2}}, {0, 2}), Error);               // non-binary
    EXPECT_THROW(make_dataset({"a"}, {{1, 2, 3}}, {0, 1}), Error);            // column length
}

TEST(DatasetInvariants, CopiesKeepRowIdentity) {
    auto ds = make_dataset({"a", "b"}, {{10, 11, 12, 13}, {0, 1, 2, 3}}, {0, 1, 0, 1});
    const std::vector<std::size_t> drop = {1};
    auto d = ds.drop_rows(drop);
    ASSERT_EQ(d.rows(), 3u);
    EXPECT_EQ(d.row_id(1), 2u);
    EXPECT_DOUBLE_EQ(d.value(1, 0), 12.0);
    const std::vector<std::string> cols = {"b"};
    auto c = d.select_columns(cols);
    EXPECT_EQ(c.cols(), 1u);
    EXPECT_EQ(c.row_id(2), 3u);
}

TEST(ColumnStats, ConstantColumn) {
    auto s = summarize({5, 5, 5, 5});
    EXPECT_EQ(s.variance, 0.0);
    EXPECT_EQ(s.trimmed_mean, 5.0);
}

TEST(ColumnStats, TrimmedMeanOfOneToTen) {
    std::vector<double> v(10);
    std::iota(v.begin(), v.end(), 1.0);
    auto s = summarize(v, 0.10);
    // oracle: mean of 2..9
    double m = 0;
    for (int k = 2; k <= 9; ++k) {
        m += k;
    }
    m /= 8.0;
    EXPECT_DOUBLE_EQ(s.trimmed_mean, m);
    EXPECT_DOUBLE_EQ(s.trimmed_mean, 5.5);
}

TEST(ColumnStats, Errors) {
    EXPECT_THROW(summarize({1, 2, 3}, 0.5), Error);
    EXPECT_THROW(summarize({}, 0.1), Error);
    auto ds = make_dataset({"a"}, {{1, 2}}, {0, 1});
    EXPECT_THROW(column_stats(ds, "nope"), Error);
    auto miss = from_csv_text("a,b,HeuBug,RealBug\nx,1,0,1\ny,2,1,0\n");
    EXPECT_THROW(column_stats(miss, "a"), Error);
}

TEST(ColumnStats, ZeroTrimMatchesPlainMomentsProperty) {
    Rng rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> v(3 + rng.index(40));
        for (auto& x : v) {
            x = rng.normal(3, 2);
        }
        auto s = summarize(v, 0.0);
        double m = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
        double ss = 0;
        for (double x : v) {
            ss += (x - m) * (x - m);
        }
        const double sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
        EXPECT_NEAR(s.trimmed_mean, m, 1e-12);
        EXPECT_NEAR(s.trimmed_sd, sd, 1e-12);
        EXPECT_NEAR(s.mean, m, 1e-12);
        EXPECT_NEAR(s.sd, sd, 1e-12);
        EXPECT_LE(s.min, s.trimmed_mean);
        EXPECT_LE(s.trimmed_mean, s.max);
        EXPECT_NEAR(s.sd * s.sd, s.variance, 1e-12 * std::max(1.0, s.variance));
    }
}

TEST(SplitStratified, ExactStratificationArithmetic) {
    std::vector<std::uint8_t> y(100, 0);
    std::fill(y.begin(), y.begin() + 20, 1);
    std::vector<double> x(100);
    std::iota(x.begin(), x.end(), 0.0);
    auto ds = make_dataset({"x"}, {x}, y);
    auto sp = split_stratified(ds, 0.8, 7);
    EXPECT_EQ(sp.train.positives(), 16u);
    EXPECT_EQ(sp.test.positives(), 4u);
    EXPECT_EQ(sp.train.rows(), 80u);
    EXPECT_EQ(sp.test.rows(), 20u);
}

TEST(SplitStratified, DeterministicDisjointCoveringProperty) {
    Rng rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 10 + rng.index(200);
        std::vector<std::uint8_t> y(n);
        std::vector<double> x(n);
        for (std::size_t i = 0; i < n; ++i) {
            y[i] = rng.uniform() < 0.3;
            x[i] = static_cast<double>(i);
        }
        y[0] = 1;
        y[1] = 1;
        y[2] = 1;
        y[3] = y[4] = y[5] = y[6] = y[7] = 0;
        auto ds = make_dataset({"x"}, {x}, y);
        const std::uint64_t seed = rng.next();
        Split a, b;
        try {
            a = split_stratified(ds, 0.8, seed);
        } catch (const Error&) {
            continue;
        }
        b = split_stratified(ds, 0.8, seed);
        ASSERT_EQ(a.train.row_ids().size(), b.train.row_ids().size());
        EXPECT_TRUE(std::equal(a.train.row_ids().begin(), a.train.row_ids().end(), b.train.row_ids().begin()));
        std::set<std::size_t> ids(a.train.row_ids().begin(), a.train.row_ids().end());
        for (auto id : a.test.row_ids()) {
            EXPECT_TRUE(ids.insert(id).second) << "row in both splits";
        }
        EXPECT_EQ(ids.size(), n);
        EXPECT_EQ(a.train.rows() + a.test.rows(), n);
        // class ratio within one row of the overall ratio on each side
        const double overall = static_cast<double>(ds.positives()) / static_cast<double>(n);
        EXPECT_LE(std::abs(static_cast<double>(a.train.positives()) - overall * static_cast<double>(a.train.rows())), 1.0 + 1e-9);
        EXPECT_LE(std::abs(static_cast<double>(a.test.positives()) - overall * static_cast<double>(a.test.rows())), 1.0 + 1e-9);
    }
}

TEST(SplitStratified, Errors) {
    auto all_pos = make_dataset({"x"}, {{1, 2, 3, 4, 5, 6}}, {1, 1, 1, 1, 1, 1});
    EXPECT_THROW(split_stratified(all_pos, 0.8, 1), Error);
    auto tiny_ds = make_dataset({"x"}, {{1, 2, 3, 4}}, {1, 0, 1, 0});
    EXPECT_THROW(split_stratified(tiny_ds, 0.8, 1), Error);
    auto one_pos = make_dataset({"x"}, {{1, 2, 3, 4, 5, 6}}, {1, 0, 0, 0, 0, 0});
    EXPECT_THROW(split_stratified(one_pos, 0.8, 1), Error);
}

TEST(StratifiedFolds, BalancedAcrossFolds) {
    std::vector<std::uint8_t> y(30, 0);
    std::fill(y.begin(), y.begin() + 9, 1);
    auto f = stratified_folds(y, 3, 4);
    std::array<int, 3> pos{}, all{};
    for (std::size_t i = 0; i < y.size(); ++i) {
        ++all[f[i]];
        pos[f[i]] += y[i];
    }
    for (int k = 0; k < 3; ++k) {
        EXPECT_EQ(all[k], 10);
        EXPECT_EQ(pos[k], 3);
    }
    std::vector<std::uint8_t> few = {1, 1, 0, 0, 0, 0};
    EXPECT_THROW(stratified_folds(few, 3, 1), Error);
}

TEST(Core, RngIsDeterministicAndInRange) {
    Rng a(123), b(123);
    for (int i = 0; i < 1000; ++i) {
        EXPECT_EQ(a.next(), b.next());
    }
    Rng r(1);
    for (int i = 0; i < 1000; ++i) {
        auto v = r.integer(1, 499);
        EXPECT_GE(v, 1);
        EXPECT_LE(v, 499);
        auto u = r.uniform();
        EXPECT_GE(u, 0.0);
        EXPECT_LT(u, 1.0);
    }
    EXPECT_NE(derive_seed(1, 2), derive_seed(1, 3));
    EXPECT_NE(derive_seed(1, 2, 0), derive_seed(2, 1, 0));
}

TEST(Core, FormatDoubleRoundTrips) {
    for (double v : {0.1, 1.0 / 3.0, 1e-310, 123456789.123, -0.0, 2.5}) {
        double back = 0;
        ASSERT_TRUE(parse_double(format_double(v), back));
        EXPECT_EQ(std::bit_cast<std::uint64_t>(back), std::bit_cast<std::uint64_t>(v));
    }
}
