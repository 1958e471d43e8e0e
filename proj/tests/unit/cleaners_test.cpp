#include "test_util.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <set>

using namespace dqa;
using dqa::testing::from_csv_text;
using dqa::testing::make_dataset;

namespace {

std::set<std::string> names_of(const std::vector<CleaningOrder>& orders) {
    std::set<std::string> out;
    for (const auto& o : orders) {
        out.insert(to_string(o));
    }
    return out;
}

std::string csv_bytes(const Dataset& ds) {
    std::ostringstream out;
    write_csv(out, ds);
    return out.str();
}

CleanParams params_for(const Dataset& ds) {
    CleanParams p;
    p.filter.rules = applicable_rules(builtin_sdp_rules(), ds);
    return p;
}

// One informative feature far apart per class, two independent noise features.
Dataset clean_separated(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::vector<double>> cols(3, std::vector<double>(n));
    std::vector<std::uint8_t> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = i % 3 == 0 ? 1 : 0;
        cols[0][i] = rng.normal(y[i] ? 50.0 : 0.0, 1.0);
        cols[1][i] = rng.normal(0.0, 1.0);
        cols[2][i] = rng.normal(0.0, 1.0);
    }
    return make_dataset({"a", "b", "c"}, cols, y);
}

} // namespace

TEST(Orders, ParseAndValidate) {
    EXPECT_EQ(to_string(parse_order("FiTrMiOv")), "FiTrMiOv");
    EXPECT_THROW(parse_order("FiFi"), Error);
    EXPECT_THROW(parse_order("FiFiTrOv"), Error);
    EXPECT_THROW(parse_order("FiTrMiXx"), Error);
    EXPECT_EQ(all_orders().size(), 24u);
}

TEST(Orders, CanonicalListMatchesTheTwelve) {
    const auto orders = canonical_orders();
    ASSERT_EQ(orders.size(), 12u);
    const std::set<std::string> expected = {"FiMiOvTr", "FiOvMiTr", "FiTrMiOv", "FiTrOvMi", "MiOvFiTr", "OvMiFiTr",
                                            "MiOvTrFi", "OvMiTrFi", "TrFiMiOv", "TrFiOvMi", "TrMiOvFi", "TrOvMiFi"};
    EXPECT_EQ(names_of(orders), expected);
}

TEST(Orders, EquivalenceClassesCollapse) {
    EXPECT_EQ(canonicalize(parse_order("FiMiTrOv")), canonicalize(parse_order("FiTrMiOv")));
    EXPECT_EQ(canonicalize(parse_order("MiFiTrOv")), canonicalize(parse_order("FiTrMiOv")));
    const auto a = canonicalize(parse_order("OvFiTrMi"));
    EXPECT_EQ(canonicalize(parse_order("OvFiMiTr")), a);
    EXPECT_EQ(canonicalize(parse_order("OvMiFiTr")), a);
    EXPECT_NE(canonicalize(parse_order("FiTrMiOv")), canonicalize(parse_order("FiTrOvMi")));

    std::size_t total = 0;
    for (const auto& [rep, members] : equivalence_classes()) {
        total += members.size();
        for (const auto& m : members) {
            EXPECT_EQ(to_string(canonicalize(m)), rep);
        }
    }
    EXPECT_EQ(total, 24u);
    EXPECT_EQ(equivalence_classes().size(), 12u);
}

TEST(Orders, SubsequencePartition) {
    const auto orders = canonical_orders();
    for (auto [a, b] : odds_pairs()) {
        auto [ab, ba] = subsequence_partition(orders, a, b);
        EXPECT_EQ(ab.size() + ba.size(), 12u);
        auto sa = names_of(ab), sb = names_of(ba);
        for (const auto& n : sa) {
            EXPECT_EQ(sb.count(n), 0u);
        }
    }
    auto [fi_tr, tr_fi] = subsequence_partition(orders, Step::Fi, Step::Tr);
    EXPECT_EQ(fi_tr.size(), 6u);
    EXPECT_EQ(tr_fi.size(), 6u);
    EXPECT_THROW(subsequence_partition(orders, Step::Mi, Step::Mi), Error);
}

TEST(StepTransform, Log1pArithmetic) {
    ColumnTransform t;
    t.kind = TransformKind::log;
    EXPECT_DOUBLE_EQ(t.apply(0.0), 0.0);
    EXPECT_DOUBLE_EQ(t.apply(std::numbers::e - 1.0), 1.0);
    t.shift = 2.0;
    EXPECT_DOUBLE_EQ(t.apply(-2.0), 0.0);
    EXPECT_DOUBLE_EQ(t.apply(-5.0), 0.0); // below the fitted minimum clamps at the shift
}

TEST(StepTransform, TailedColumnLoggedUnnormalizedZScored) {
    Rng rng(5);
    const std::size_t n = 400;
    // ten ordinary columns so the cross-column trim drops the outlier column
    std::vector<std::string> names = {"a", "b", "c", "d", "e", "f", "g", "h", "i", "j", "tail", "big"};
    std::vector<std::vector<double>> cols(names.size(), std::vector<double>(n));
    std::vector<std::uint8_t> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = i % 2;
        for (auto& c : cols) {
            c[i] = rng.normal(0.0, 1.0);
        }
    }
    for (std::size_t i = 0; i < 8; ++i) {
        cols[10][i] = 60.0 + static_cast<double>(i); // long right tail
    }
    for (auto& v : cols[11]) {
        v = v * 500.0 + 10000.0;
    }
    auto ds = make_dataset(names, cols, y);
    auto res = step_transform(ds, TransformOptions{});
    ASSERT_TRUE(res.fitted.count("tail"));
    EXPECT_TRUE(res.fitted.at("tail").has_log());
    ASSERT_TRUE(res.fitted.count("big"));
    EXPECT_TRUE(res.fitted.at("big").has_zscore());
    EXPECT_FALSE(res.fitted.count("a"));

    const auto big = res.data.present_values(res.data.index_of("big"));
    const auto [m, var] = mean_variance(big);
    EXPECT_NEAR(m, 0.0, 1e-9);
    EXPECT_NEAR(std::sqrt(var), 1.0, 1e-9);
    EXPECT_GT(res.fitted.at("big").sd, 0.0);

    // the log branch shifts by -min so every logged value is finite
    const auto tail = res.data.present_values(res.data.index_of("tail"));
    for (double v : tail) {
        EXPECT_TRUE(std::isfinite(v));
    }
}

TEST(StepTransform, NothingFlaggedIsIdentity) {
    Rng rng(8);
    std::vector<std::vector<double>> cols(3, std::vector<double>(200));
    std::vector<std::uint8_t> y(200);
    for (std::size_t i = 0; i < 200; ++i) {
        y[i] = i % 2;
        for (auto& c : cols) {
            c[i] = rng.normal(0.0, 1.0);
        }
    }
    auto ds = make_dataset({"a", "b", "c"}, cols, y);
    auto res = step_transform(ds, TransformOptions{});
    EXPECT_TRUE(res.fitted.empty());
    EXPECT_EQ(res.data, ds);
}

TEST(StepFilter, OneDuplicateAndOneConstant) {
    auto ds = from_csv_text("a,b,k,HeuBug,RealBug\n"
                            "1,5,7,0,0\n"
                            "2,3,7,1,1\n"
                            "3,9,7,0,0\n"
                            "4,1,7,1,1\n"
                            "2,3,7,1,1\n"
                            "5,4,7,0,0\n"
                            "6,8,7,1,0\n");
    auto res = step_filter(ds, FilterOptions{});
    std::size_t rows_removed = 0, cols_removed = 0;
    for (const auto& r : res.log.rows_removed) {
        rows_removed += r.row_ids.size();
    }
    for (const auto& c : res.log.columns_removed) {
        cols_removed += c.columns.size();
    }
    EXPECT_EQ(rows_removed, 1u);
    EXPECT_EQ(cols_removed, 1u);
    EXPECT_EQ(res.data.rows(), 6u);
    EXPECT_FALSE(res.data.find("k"));
    EXPECT_EQ(detail::removed(res.log, "duplicate"), std::vector<std::size_t>{4});
}

TEST(StepFilter, AlreadyCleanIsIdentity) {
    auto ds = clean_separated(90, 3);
    auto res = step_filter(ds, FilterOptions{});
    EXPECT_EQ(res.data, ds);
    EXPECT_TRUE(res.log.empty());
}

TEST(StepFilter, ClassEliminatedGuard) {
    auto ds = from_csv_text("CountLine,CountLineComment,HeuBug,RealBug\n"
                            "10,2,0,0\n"
                            "12,3,0,0\n"
                            "1,5,1,1\n"
                            "2,7,1,1\n");
    FilterOptions opt;
    opt.rules = parse_rules("R2: CountLine >= CountLineComment");
    try {
        step_filter(ds, opt);
        FAIL();
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("class eliminated"), std::string::npos) << e.what();
    }
}

TEST(StepMislabel, SwitchesAndIsIdempotent) {
    auto ds = make_dataset({"a"}, {{1, 2, 3, 4}}, {0, 1, 0, 1}, {1, 1, 0, 0}).with_active_label(LabelKind::heuristic);
    auto once = step_mislabel(ds);
    EXPECT_EQ(once.data.active_label(), LabelKind::realistic);
    EXPECT_TRUE(once.log.label_switched);
    EXPECT_EQ(once.data.rows(), ds.rows());
    EXPECT_EQ(once.data.column(0)[2], 3.0);
    auto twice = step_mislabel(once.data);
    EXPECT_EQ(twice.data, once.data);
    EXPECT_FALSE(twice.log.label_switched);
}

TEST(StepOverlap, PlantedIntrudersRemovedDeterministically) {
    Rng rng(21);
    const std::size_t n = 300;
    std::vector<std::vector<double>> cols(2, std::vector<double>(n));
    std::vector<std::uint8_t> y(n);
    std::set<std::size_t> intruders;
    for (std::size_t i = 0; i < n; ++i) {
        const bool left = i < n / 2;
        cols[0][i] = rng.normal(left ? -10.0 : 10.0, 1.0);
        cols[1][i] = rng.normal(0.0, 1.0);
        y[i] = left ? 0 : 1;
        if (i % 20 == 0) {
            y[i] ^= 1;
            intruders.insert(i);
        }
    }
    auto ds = make_dataset({"x", "z"}, cols, y);
    OverlapOptions opt;
    opt.k = 2;
    opt.p = 0.5;
    auto a = step_overlap(ds, opt, 4);
    auto b = step_overlap(ds, opt, 4);
    EXPECT_EQ(a.data, b.data);
    ASSERT_EQ(a.log.rows_removed.size(), 1u);
    const auto& gone = a.log.rows_removed[0].row_ids;
    EXPECT_EQ(std::set<std::size_t>(gone.begin(), gone.end()), intruders);
    EXPECT_LE(a.data.rows(), ds.rows());

    auto pure = clean_separated(150, 9);
    OverlapOptions popt;
    popt.k = 2;
    EXPECT_EQ(step_overlap(pure, popt, 1).data, pure);
}

TEST(Clean, FtmoOnCleanDataIsIdentityWithEmptyLog) {
    auto ds = clean_separated(120, 11);
    CleanParams p;
    p.overlap.k = 2;
    auto res = clean(ds, parse_order("FiTrMiOv"), p, 1);
    EXPECT_EQ(res.data, ds);
    EXPECT_TRUE(res.log.empty());
    EXPECT_TRUE(res.transform.columns.empty());
    EXPECT_FALSE(res.transform.kept_columns.has_value());
}

TEST(Clean, RowCountsMonotoneAcrossSteps) {
    auto ds = make_synthetic_sdp(3).with_active_label(LabelKind::heuristic);
    const auto p = params_for(ds);
    for (const auto& order : canonical_orders()) {
        std::size_t rows = ds.rows();
        Dataset cur = ds;
        TransformParams tp;
        for (auto st : order.steps) {
            switch (st) {
            case Step::Fi: cur = step_filter(cur, p.filter, tp.columns.empty() ? nullptr : &ds).data; EXPECT_LE(cur.rows(), rows); break;
            case Step::Ov: cur = step_overlap(cur, p.overlap, 7).data; EXPECT_LE(cur.rows(), rows); break;
            case Step::Tr: {
                auto r = step_transform(cur, p.transform);
                cur = r.data;
                tp.columns.insert(r.fitted.begin(), r.fitted.end());
                EXPECT_EQ(cur.rows(), rows);
                break;
            }
            case Step::Mi: cur = step_mislabel(cur).data; EXPECT_EQ(cur.rows(), rows); break;
            }
            rows = cur.rows();
        }
    }
}

TEST(Clean, EquivalentOrdersAreByteIdentical) {
    for (std::uint64_t seed : {1u, 2u}) {
        auto ds = make_synthetic_sdp(seed).with_active_label(LabelKind::heuristic);
        const auto p = params_for(ds);
        for (const auto& [rep, members] : equivalence_classes()) {
            const auto ref = clean(ds, members.front(), p, 99);
            const auto ref_bytes = csv_bytes(ref.data);
            for (const auto& m : members) {
                const auto other = clean(ds, m, p, 99);
                EXPECT_EQ(csv_bytes(other.data), ref_bytes) << rep << " vs " << to_string(m);
                EXPECT_EQ(other.data.active_label(), ref.data.active_label());
            }
        }
    }
}

TEST(Clean, DeterministicUnderFixedSeed) {
    auto ds = make_synthetic_sdp(4).with_active_label(LabelKind::heuristic);
    const auto p = params_for(ds);
    const auto order = parse_order("TrOvMiFi");
    EXPECT_EQ(csv_bytes(clean(ds, order, p, 5).data), csv_bytes(clean(ds, order, p, 5).data));
}

TEST(Clean, TransformBeforeFilterChangesSurvivingColumns) {
    // z = x + u + v exactly in raw units; once the tailed x is logged the
    // regression pass removes z instead of x
    Rng rng(13);
    const std::size_t n = 400;
    std::vector<std::vector<double>> cols(4, std::vector<double>(n));
    std::vector<std::uint8_t> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = i % 2;
        cols[0][i] = std::exp(rng.normal(0.0, 1.2));
        cols[1][i] = rng.normal(0.0, 3.0);
        cols[2][i] = rng.normal(0.0, 3.0);
        cols[3][i] = cols[0][i] + cols[1][i] + cols[2][i];
    }
    auto ds = make_dataset({"x", "u", "v", "z"}, cols, y);
    CleanParams p;
    auto fi_tr = clean(ds, parse_order("FiTrMiOv"), p, 1);
    auto tr_fi = clean(ds, parse_order("TrFiMiOv"), p, 1);
    EXPECT_NE(fi_tr.data.feature_names(), tr_fi.data.feature_names());
    EXPECT_TRUE(tr_fi.log.steps[0].transforms.count("x"));
    EXPECT_FALSE(fi_tr.data.find("x"));
    EXPECT_FALSE(tr_fi.data.find("z"));
}

TEST(ApplyTransformToTest, Arithmetic) {
    auto test = make_dataset({"a", "b"}, {{9, 5}, {1, 2}}, {0, 1});
    EXPECT_EQ(apply_transform_to_test(test, TransformParams{}), test);

    TransformParams tp;
    ColumnTransform z;
    z.kind = TransformKind::zscore;
    z.mean = 5.0;
    z.sd = 2.0;
    tp.columns["a"] = z;
    auto out = apply_transform_to_test(test, tp);
    EXPECT_DOUBLE_EQ(out.column(0)[0], 2.0);
    EXPECT_DOUBLE_EQ(out.column(0)[1], 0.0);
    EXPECT_EQ(out.column(1)[1], 2.0);

    tp.kept_columns = std::vector<std::string>{"a"};
    auto kept = apply_transform_to_test(test, tp);
    EXPECT_EQ(kept.feature_names(), std::vector<std::string>{"a"});

    tp.kept_columns = std::vector<std::string>{"a", "zz"};
    EXPECT_THROW(apply_transform_to_test(test, tp), Error);
}

TEST(ApplyTransformToTest, TestKeepsTrainingSurvivors) {
    auto ds = make_synthetic_sdp(6).with_active_label(LabelKind::heuristic);
    auto s = split_stratified(ds, 0.8, 2);
    const auto p = params_for(s.train);
    auto res = clean(s.train, parse_order("FiTrMiOv"), p, 3);
    auto test = apply_transform_to_test(s.test, res.transform);
    EXPECT_EQ(test.feature_names(), res.data.feature_names());
    EXPECT_EQ(test.rows(), s.test.rows());
    for (const auto& [name, t] : res.transform.columns) {
        const auto j = s.test.index_of(name);
        const auto k = test.index_of(name);
        for (std::size_t i = 0; i < test.rows(); ++i) {
            if (!test.is_missing(i, k)) {
                EXPECT_DOUBLE_EQ(test.column(k)[i], t.apply(s.test.column(j)[i]));
            }
        }
    }
}
