#ifndef DQA_SYNTHETIC_HPP
#define DQA_SYNTHETIC_HPP

#include "dataset.hpp"

namespace dqa {

struct SyntheticOptions {
    std::size_t rows = 250;              // before appended duplicates
    double positive_rate = 0.25;
    double mislabel_rate = 0.15;         // heuristic labels flipped
    std::size_t schema_violations = 6;
    std::size_t duplicates = 6;
    bool constant_column = true;
};

/**
 * Software-metric table with code-size, comment, cyclomatic and process
 * metrics under their conventional names, so the built-in rules apply.
 * Realistic labels come from a logistic-style risk score cut at the
 * requested positive rate.
 */
inline Dataset make_synthetic_sdp(std::uint64_t seed, const SyntheticOptions& opt = {}, std::string id = "synthetic") {
    if (opt.rows < 20) {
        throw Error("make_synthetic_sdp: need at least 20 rows");
    }
    Rng rng(seed);
    const std::vector<std::string> names = {
        "CountLine", "CountLineCode", "CountLineComment", "CountLineBlank", "CountLineCodeDecl", "CountLineCodeExe",
        "CountStmt", "RatioCommentToCode", "AvgLine", "AvgLineCode", "AvgLineComment", "AvgLineBlank",
        "SumCyclomatic", "MaxCyclomatic", "AvgCyclomatic", "SumCyclomaticStrict", "MaxCyclomaticStrict",
        "AvgCyclomaticStrict", "COMM", "ADEV", "ADDED_LINES", "DEL_LINES", "OWN_LINE", "MINOR_COMMIT",
    };
    const std::size_t n = opt.rows;
    std::vector<std::vector<double>> c(names.size(), std::vector<double>(n));
    std::vector<double> risk(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double loc = std::round(std::exp(rng.normal(4.5, 1.0))) + 1.0;
        const double comment = std::round(loc * rng.uniform(0.05, 0.4));
        const double blank = std::round(loc * rng.uniform(0.05, 0.2));
        const double decl = std::round(loc * rng.uniform(0.15, 0.4));
        const double exe = std::min(std::round(loc * rng.uniform(0.3, 0.55)), loc - decl);
        const double nfunc = 1.0 + std::round(loc / rng.uniform(15.0, 40.0));
        const double avg_code = loc / nfunc, avg_comment = comment / nfunc, avg_blank = blank / nfunc;
        const double max_cyc = 1.0 + std::round(std::exp(rng.normal(1.0, 0.6)));
        const double avg_cyc = std::round(rng.uniform(1.0, max_cyc) * 100.0) / 100.0;
        const double max_strict = max_cyc + std::round(rng.uniform(0.0, 2.0));
        const double avg_strict = std::min(max_strict, avg_cyc + std::round(rng.uniform(0.0, 1.0) * 100.0) / 100.0);
        const double comm = std::round(std::exp(rng.normal(1.5, 0.8)));
        const double adev = 1.0 + std::round(comm * rng.uniform(0.0, 0.5));
        const double added = std::round(std::exp(rng.normal(3.0, 1.5)));
        const double own = std::round(rng.uniform(0.3, 1.0) * 1000.0) / 1000.0;
        const double row[] = {
            loc + comment + blank, loc, comment, blank, decl, exe, decl + exe, comment / loc,
            avg_code + avg_comment + avg_blank + (nfunc > 1.0 ? std::round(rng.uniform(0.0, 1.0) * 100.0) / 100.0 : 0.0), avg_code, avg_comment, avg_blank,
            max_cyc + std::round(avg_cyc * (nfunc - 1.0)), max_cyc, avg_cyc, max_strict + std::round(avg_strict * (nfunc - 1.0)),
            max_strict, avg_strict, comm, adev, added, std::round(added * rng.uniform(0.0, 0.8)), own, 0.0,
        };
        for (std::size_t j = 0; j < names.size(); ++j) {
            c[j][i] = row[j];
        }
        risk[i] = 0.9 * (std::log(loc) - 4.5) + 0.7 * (std::log1p(comm) - 1.5) + 1.2 * (0.65 - own) + 0.3 * (max_cyc - 4.0) / 3.0 +
                  rng.normal(0.0, 0.8);
    }
    std::vector<double> sorted = risk;
    std::sort(sorted.begin(), sorted.end());
    const auto n_pos = std::max<std::size_t>(2, static_cast<std::size_t>(std::floor(opt.positive_rate * static_cast<double>(n))));
    const double cut = sorted[n - n_pos];
    std::vector<std::uint8_t> real(n), heu(n);
    for (std::size_t i = 0; i < n; ++i) {
        real[i] = risk[i] >= cut ? 1 : 0;
    }
    heu = real;
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    rng.shuffle(idx);
    const auto flips = static_cast<std::size_t>(std::floor(opt.mislabel_rate * static_cast<double>(n)));
    for (std::size_t k = 0; k < flips; ++k) {
        heu[idx[k]] ^= 1;
    }

    // schema violations on distinct rows
    rng.shuffle(idx);
    auto col = [&](std::string_view name) -> std::vector<double>& {
        return c[static_cast<std::size_t>(std::find(names.begin(), names.end(), name) - names.begin())];
    };
    for (std::size_t k = 0; k < std::min(opt.schema_violations, n); ++k) {
        const auto i = idx[k];
        switch (k % 3) {
        case 0: col("CountStmt")[i] += 3.0; break;
        case 1: col("RatioCommentToCode")[i] = col("RatioCommentToCode")[i] * 2.0 + 0.5; break;
        default: col("AvgCyclomatic")[i] = col("MaxCyclomatic")[i] + 1.0; break;
        }
    }
    if (!opt.constant_column) {
        for (std::size_t i = 0; i < n; ++i) {
            col("MINOR_COMMIT")[i] = static_cast<double>(rng.index(3));
        }
    }

    // duplicated feature vectors appended, then all rows shuffled
    for (std::size_t k = 0; k < opt.duplicates; ++k) {
        const auto src = rng.index(n);
        for (auto& column : c) {
            column.push_back(column[src]);
        }
        real.push_back(real[src]);
        heu.push_back(heu[src]);
    }
    const std::size_t total = real.size();
    std::vector<std::size_t> perm(total);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    rng.shuffle(perm);
    std::vector<std::vector<double>> pc(names.size(), std::vector<double>(total));
    std::vector<std::uint8_t> pr(total), ph(total);
    for (std::size_t i = 0; i < total; ++i) {
        for (std::size_t j = 0; j < names.size(); ++j) {
            pc[j][i] = c[j][perm[i]];
        }
        pr[i] = real[perm[i]];
        ph[i] = heu[perm[i]];
    }
    return Dataset(std::move(id), names, std::move(pc), std::move(ph), std::move(pr), LabelKind::realistic);
}

} // namespace dqa

#endif
