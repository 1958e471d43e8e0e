#include <dqa/dqa.hpp>

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;

namespace {

struct Common {
    std::vector<std::string> data;
    std::string heuristic_col = "HeuBug";
    std::string realistic_col = "RealBug";
    std::uint64_t seed = 1;
    std::string rules;
    std::string out;
    double tailed_threshold = 0.25;
    double z_threshold = 3.0;
    double trim = 0.10;
    double rho_threshold = 0.7;
    double r2_threshold = 0.9;
    std::size_t overlap_k = 0;   // 0: automatic
    double overlap_p = 0.0;      // 0: overall defective ratio
};

void add_data_options(CLI::App* cmd, Common& c, bool many) {
    if (many) {
        cmd->add_option("--data", c.data, "Dataset CSV file(s)")->required()->check(CLI::ExistingFile);
    } else {
        cmd->add_option("--data", c.data, "Dataset CSV file")->required()->check(CLI::ExistingFile)->expected(1);
    }
    cmd->add_option("--heuristic-col", c.heuristic_col, "Heuristic label column")->capture_default_str();
    cmd->add_option("--realistic-col", c.realistic_col, "Realistic label column")->capture_default_str();
    cmd->add_option("--seed", c.seed, "Master seed")->capture_default_str();
    cmd->add_option("--rules", c.rules, "Schema rule file (default: built-in software-metric rules)")->check(CLI::ExistingFile);
}

void add_threshold_options(CLI::App* cmd, Common& c) {
    cmd->add_option("--tailed-threshold", c.tailed_threshold, "Tailed deviation threshold")->capture_default_str();
    cmd->add_option("--z-threshold", c.z_threshold, "Unnormalized z threshold")->capture_default_str();
    cmd->add_option("--trim", c.trim, "Trim fraction per tail")->capture_default_str();
    cmd->add_option("--rho-threshold", c.rho_threshold, "Spearman |rho| threshold")->capture_default_str();
    cmd->add_option("--r2-threshold", c.r2_threshold, "Redundancy R^2 threshold")->capture_default_str();
    cmd->add_option("--overlap-k", c.overlap_k, "IKMCCA cluster count (0: max(2, round(sqrt(n/2))))")->capture_default_str();
    cmd->add_option("--overlap-p", c.overlap_p, "IKMCCA defective-fraction threshold (0: overall ratio)")->capture_default_str();
}

std::vector<dqa::Dataset> load_all(const Common& c) {
    std::vector<dqa::Dataset> out;
    for (const auto& p : c.data) {
        out.push_back(dqa::load_csv(p, c.heuristic_col, c.realistic_col));
    }
    return out;
}

std::vector<dqa::SchemaRule> rules_for(const Common& c, const dqa::Dataset& ds, dqa::Warnings& warnings) {
    if (!c.rules.empty()) {
        std::ifstream in(c.rules);
        std::stringstream text;
        text << in.rdbuf();
        return dqa::parse_rules(text.str());
    }
    std::vector<std::string> skipped;
    auto rules = dqa::applicable_rules(dqa::builtin_sdp_rules(), ds, &skipped);
    if (!skipped.empty()) {
        std::string list;
        for (const auto& s : skipped) {
            list += (list.empty() ? "" : ", ") + s;
        }
        warnings.push_back("built-in rules skipped for absent columns: " + list);
    }
    return rules;
}

dqa::CleanParams clean_params(const Common& c, std::vector<dqa::SchemaRule> rules) {
    dqa::CleanParams p;
    p.filter.rules = std::move(rules);
    p.filter.correlation = {c.rho_threshold, c.r2_threshold};
    p.transform.tailed_threshold = c.tailed_threshold;
    p.transform.z_threshold = c.z_threshold;
    p.transform.trim_fraction = c.trim;
    if (c.overlap_k) {
        p.overlap.k = c.overlap_k;
    }
    if (c.overlap_p > 0.0) {
        p.overlap.p = c.overlap_p;
    }
    return p;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw dqa::Error("cannot write '" + path.string() + "'");
    }
    out << text;
}

void write_json(const fs::path& path, const dqa::Json& j) {
    write_text(path, j.dump(2) + "\n");
}

void print_warnings(const dqa::Warnings& w) {
    for (const auto& s : w) {
        std::cerr << "warning: " << s << '\n';
    }
}

// ------------------------------------------------------------------- commands

int cmd_lint(const Common& c, const std::string& compare, double js_threshold, std::size_t bins, double imbalance, double row_ratio) {
    const auto ds = dqa::load_csv(c.data.front(), c.heuristic_col, c.realistic_col);
    dqa::Warnings warnings;
    dqa::DetectorOptions opt;
    opt.rules = rules_for(c, ds, warnings);
    opt.tailed_threshold = c.tailed_threshold;
    opt.z_threshold = c.z_threshold;
    opt.trim_fraction = c.trim;
    opt.correlation = {c.rho_threshold, c.r2_threshold};
    if (c.overlap_k) {
        opt.overlap.k = c.overlap_k;
    }
    if (c.overlap_p > 0.0) {
        opt.overlap.p = c.overlap_p;
    }
    opt.js_threshold = js_threshold;
    opt.drift_bins = bins;
    opt.imbalance_threshold = imbalance;
    opt.row_feature_ratio = row_ratio;
    opt.seed = c.seed;
    std::optional<dqa::Dataset> other;
    if (!compare.empty()) {
        other = dqa::load_csv(compare, c.heuristic_col, c.realistic_col);
    }
    const auto reports = dqa::run_all_detectors(ds, opt, other ? &*other : nullptr);
    std::vector<dqa::AntipatternReport> applicable;
    bool any = false;
    for (const auto& r : reports) {
        any = any || r.flagged();
        if (r.status != dqa::Status::not_applicable) {
            applicable.push_back(r);
        }
    }
    const auto overlap = dqa::overlap_summary(applicable, ds);
    std::ostringstream cfg;
    cfg << "lint;" << c.tailed_threshold << ';' << c.z_threshold << ';' << c.trim << ';' << c.rho_threshold << ';' << c.r2_threshold << ';'
        << c.overlap_k << ';' << c.overlap_p << ';' << js_threshold << ';' << bins << ';' << imbalance << ';' << row_ratio << ';'
        << compare << ';';
    for (const auto& r : opt.rules) {
        cfg << dqa::to_string(r) << ',';
    }
    dqa::Json j = dqa::artifact_meta(c.seed, dqa::fnv1a(cfg.str()));
    j["dataset"] = {{"id", ds.id()}, {"rows", ds.rows()}, {"columns", ds.cols()}};
    j["row_indexing"] = "0-based data rows";
    j["antipatterns"] = dqa::json_array(reports);
    j["overlap"] = dqa::to_json(overlap);
    j["warnings"] = warnings;
    j["flagged"] = any;
    if (c.out.empty()) {
        std::cout << j.dump(2) << '\n';
    } else {
        write_json(c.out, j);
        std::cout << dqa::render_lint(reports, overlap, ds);
    }
    print_warnings(warnings);
    return any ? 1 : 0;
}

int cmd_clean(const Common& c, const std::string& order_text, const std::string& log_path, const std::string& label) {
    const auto order = dqa::parse_order(order_text);
    auto ds = dqa::load_csv(c.data.front(), c.heuristic_col, c.realistic_col);
    if (label == "heuristic") {
        ds = ds.with_active_label(dqa::LabelKind::heuristic);
    } else if (label != "realistic") {
        throw dqa::Error("--label must be heuristic or realistic");
    }
    dqa::Warnings warnings;
    const auto params = clean_params(c, rules_for(c, ds, warnings));
    const auto res = dqa::clean(ds, order, params, c.seed);
    if (c.out.empty()) {
        dqa::write_csv(std::cout, res.data);
    } else {
        dqa::save_csv(c.out, res.data);
    }
    const std::string log_file = !log_path.empty() ? log_path : (c.out.empty() ? std::string() : c.out + ".log.json");
    if (!log_file.empty()) {
        dqa::Json j = dqa::artifact_meta(c.seed, dqa::fnv1a("clean;" + order_text + ";" + label));
        j["dataset"] = ds.id();
        j["log"] = dqa::to_json(res.log);
        j["transform"] = dqa::to_json(res.transform);
        j["rows_before"] = ds.rows();
        j["rows_after"] = res.data.rows();
        j["columns_before"] = ds.cols();
        j["columns_after"] = res.data.cols();
        write_json(log_file, j);
    }
    for (const auto& s : res.log.steps) {
        print_warnings(s.warnings);
    }
    print_warnings(warnings);
    return 0;
}

int cmd_inject(const Common& c, std::size_t splits, const std::string& condition) {
    if (c.out.empty()) {
        throw dqa::Error("inject requires --out DIR");
    }
    const auto ds = dqa::load_csv(c.data.front(), c.heuristic_col, c.realistic_col);
    dqa::Warnings warnings;
    dqa::GridOptions grid;
    grid.splits = splits;
    grid.params = clean_params(c, rules_for(c, ds, warnings));
    fs::create_directories(c.out);
    dqa::Json tasks = dqa::Json::array();
    for (std::size_t s = 0; s < splits; ++s) {
        for (auto& t : dqa::split_tasks(ds, s, c.seed, grid)) {
            if (condition != "all" && t.condition != condition) {
                continue;
            }
            const std::string stem = "split" + std::to_string(s) + "_" + t.condition;
            dqa::save_csv(fs::path(c.out) / (stem + "_train.csv"), t.train);
            dqa::save_csv(fs::path(c.out) / (stem + "_test.csv"), t.test);
            tasks.push_back({{"condition", t.condition}, {"split", s}, {"seed", t.seed}, {"train_rows", t.train.rows()},
                             {"train_columns", t.train.cols()}, {"test_rows", t.test.rows()}, {"restored", t.restored},
                             {"train_label", dqa::to_string(t.train.active_label())}, {"warnings", t.warnings}});
        }
    }
    dqa::Json j = dqa::artifact_meta(c.seed, dqa::fnv1a("inject;" + std::to_string(splits) + ";" + condition));
    j["dataset"] = ds.id();
    j["tasks"] = tasks;
    write_json(fs::path(c.out) / "manifest.json", j);
    print_warnings(warnings);
    return 0;
}

struct RunOptions {
    std::size_t splits = 10;
    std::vector<std::string> learners = {"LR", "RF"};
    std::vector<std::string> orders = {"all"};
    std::size_t jobs = 1;
    std::size_t n_iter = 10;
    std::size_t folds = 3;
    std::size_t repeats = 10;
    double auroc_floor = 0.75;
    double imbalance_ratio = 0.0;
};

dqa::ExperimentConfig experiment_config(const Common& c, const RunOptions& r, const std::vector<dqa::Dataset>& data,
                                        dqa::Warnings& warnings) {
    dqa::ExperimentConfig cfg;
    cfg.seed = c.seed;
    cfg.splits = r.splits;
    cfg.learners.clear();
    for (const auto& l : r.learners) {
        cfg.learners.push_back(dqa::parse_learner(l));
    }
    if (!(r.orders.size() == 1 && r.orders.front() == "all")) {
        cfg.orders.clear();
        for (const auto& o : r.orders) {
            cfg.orders.push_back(dqa::parse_order(o));
        }
    }
    cfg.params = clean_params(c, rules_for(c, data.front(), warnings));
    cfg.n_iter = r.n_iter;
    cfg.folds = r.folds;
    cfg.jobs = r.jobs;
    cfg.importance_repeats = r.repeats;
    cfg.auroc_floor = r.auroc_floor;
    if (r.imbalance_ratio > 0.0) {
        cfg.imbalance_ratio = r.imbalance_ratio;
    }
    return cfg;
}

std::vector<std::string> dataset_ids(const std::vector<dqa::Dataset>& data) {
    std::vector<std::string> ids;
    for (const auto& d : data) {
        ids.push_back(d.id());
    }
    return ids;
}

void write_manifest(const fs::path& dir, const dqa::ExperimentConfig& cfg, const std::vector<dqa::Dataset>& data,
                    const std::vector<std::string>& conditions, const std::string& kind) {
    dqa::Json j = dqa::artifact_meta(cfg.seed, cfg.hash(dataset_ids(data)));
    j["kind"] = kind;
    j["config"] = cfg.describe();
    dqa::Json tasks = dqa::Json::array();
    for (const auto& d : data) {
        for (std::size_t s = 0; s < cfg.splits; ++s) {
            for (const auto& cond : conditions) {
                for (auto l : cfg.learners) {
                    tasks.push_back({{"dataset", d.id()}, {"split", s}, {"condition", cond}, {"learner", dqa::to_string(l)},
                                     {"seed", dqa::task_seed(cfg.seed, s, cond, l)}});
                }
            }
        }
    }
    j["tasks"] = tasks;
    write_json(dir / "manifest.json", j);
}

std::size_t failures(const std::vector<dqa::ResultRow>& rows) {
    return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const auto& r) { return !r.ok(); }));
}

void finish_results(const fs::path& dir, const std::vector<dqa::ResultRow>& rows, const dqa::ExperimentConfig& cfg,
                    const std::vector<dqa::Dataset>& data) {
    dqa::write_results(dir / "results.csv", rows, cfg.seed, cfg.hash(dataset_ids(data)));
    fs::remove(dir / "results.partial.csv");
    if (auto f = failures(rows)) {
        std::cerr << "warning: " << f << " tasks failed; see the status column of results.csv\n";
    }
}

int cmd_run_orders(const Common& c, const RunOptions& r) {
    if (c.out.empty()) {
        throw dqa::Error("run-orders requires --out DIR");
    }
    const auto data = load_all(c);
    dqa::Warnings warnings;
    const auto cfg = experiment_config(c, r, data, warnings);
    fs::create_directories(c.out);
    std::vector<std::string> conds;
    for (const auto& o : cfg.orders) {
        conds.push_back(dqa::to_string(o));
    }
    write_manifest(c.out, cfg, data, conds, "run-orders");
    const auto rows = dqa::run_orders(data, cfg, {fs::path(c.out) / "results.partial.csv"});
    finish_results(c.out, rows, cfg, data);
    std::vector<std::string> metrics(dqa::metric_names().begin(), dqa::metric_names().end());
    const auto odds = dqa::odds_report(rows, metrics);
    const auto ranks = dqa::condition_rankings(rows);
    dqa::Json meta = dqa::artifact_meta(cfg.seed, cfg.hash(dataset_ids(data)));
    dqa::Json oj = meta, rj = meta;
    oj["odds"] = dqa::json_array(odds);
    rj["rankings"] = dqa::json_array(ranks);
    write_json(fs::path(c.out) / "odds.json", oj);
    write_json(fs::path(c.out) / "ranks.json", rj);
    std::vector<dqa::OddsEntry> primary;
    for (const auto& e : odds) {
        if (e.metric == "auroc") {
            primary.push_back(e);
        }
    }
    const std::string text = dqa::render_odds(primary) + "\n" + dqa::render_rankings(ranks);
    write_text(fs::path(c.out) / "report.txt", text);
    std::cout << text;
    print_warnings(warnings);
    return 0;
}

int cmd_run_antipatterns(const Common& c, const RunOptions& r) {
    if (c.out.empty()) {
        throw dqa::Error("run-antipatterns requires --out DIR");
    }
    const auto data = load_all(c);
    dqa::Warnings warnings;
    const auto cfg = experiment_config(c, r, data, warnings);
    fs::create_directories(c.out);
    write_manifest(c.out, cfg, data, dqa::injection_conditions(), "run-antipatterns");
    const auto rows = dqa::run_antipatterns(data, cfg, {fs::path(c.out) / "results.partial.csv"});
    finish_results(c.out, rows, cfg, data);
    const auto ranks = dqa::condition_rankings(rows);
    const auto effects = dqa::antipattern_effects(ranks);
    dqa::Json meta = dqa::artifact_meta(cfg.seed, cfg.hash(dataset_ids(data)));
    dqa::Json rj = meta, ej = meta;
    rj["rankings"] = dqa::json_array(ranks);
    ej["effects"] = dqa::json_array(effects);
    write_json(fs::path(c.out) / "ranks.json", rj);
    write_json(fs::path(c.out) / "effects.json", ej);
    const std::string text = dqa::render_effects(ranks, effects) + "\n" + dqa::render_rankings(ranks);
    write_text(fs::path(c.out) / "report.txt", text);
    std::cout << text;
    print_warnings(warnings);
    return 0;
}

int cmd_run_interpret(const Common& c, const RunOptions& r) {
    if (c.out.empty()) {
        throw dqa::Error("run-interpret requires --out DIR");
    }
    const auto data = load_all(c);
    dqa::Warnings warnings;
    const auto cfg = experiment_config(c, r, data, warnings);
    fs::create_directories(c.out);
    std::vector<dqa::ConditionModel> models;
    const auto rows = dqa::run_antipatterns(data, cfg, {}, &models);
    dqa::write_results(fs::path(c.out) / "results.csv", rows, cfg.seed, cfg.hash(dataset_ids(data)));
    const auto entries = dqa::interpret_results(models, cfg.auroc_floor);
    dqa::Json j = dqa::artifact_meta(cfg.seed, cfg.hash(dataset_ids(data)));
    j["auroc_floor"] = cfg.auroc_floor;
    j["importance_metric"] = "auroc";
    j["importance_repeats"] = cfg.importance_repeats;
    j["entries"] = dqa::json_array(entries);
    write_json(fs::path(c.out) / "concordance.json", j);
    const std::string text = dqa::render_concordance(entries, cfg.auroc_floor);
    write_text(fs::path(c.out) / "report.txt", text);
    std::cout << text;
    print_warnings(warnings);
    return 0;
}

int cmd_report(const std::string& results, const std::string& kind) {
    const auto file = dqa::read_results(results);
    const auto ranks = dqa::condition_rankings(file.rows);
    std::cout << file.meta << '\n';
    if (kind == "orders") {
        std::cout << dqa::render_odds(dqa::odds_report(file.rows)) << '\n';
    } else if (kind == "antipatterns") {
        std::cout << dqa::render_effects(ranks, dqa::antipattern_effects(ranks)) << '\n';
    } else {
        throw dqa::Error("--kind must be orders or antipatterns");
    }
    std::cout << dqa::render_rankings(ranks);
    return 0;
}

int cmd_synth(const std::string& out, std::uint64_t seed, const dqa::SyntheticOptions& opt) {
    const auto ds = dqa::make_synthetic_sdp(seed, opt, fs::path(out).stem().string());
    if (out.empty() || out == "-") {
        dqa::write_csv(std::cout, ds);
    } else {
        dqa::save_csv(out, ds);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Data quality antipattern analysis for defect-prediction datasets"};
    app.set_version_flag("--version", std::string(dqa::version));
    app.set_config("--config", "", "Key/value configuration file; command-line flags take precedence");
    app.require_subcommand(1);

    Common common;
    RunOptions run;

    auto* lint = app.add_subcommand("lint", "Run every antipattern detector and write a JSON report");
    add_data_options(lint, common, false);
    add_threshold_options(lint, common);
    lint->add_option("--out", common.out, "JSON report path (default: stdout)");
    std::string compare;
    double js_threshold = 0.10, imbalance = 0.10, row_ratio = 10.0;
    std::size_t bins = 20;
    lint->add_option("--compare", compare, "Second dataset for drift detection")->check(CLI::ExistingFile);
    lint->add_option("--js-threshold", js_threshold, "Drift Jensen-Shannon threshold")->capture_default_str();
    lint->add_option("--drift-bins", bins, "Drift histogram bins")->capture_default_str();
    lint->add_option("--imbalance-threshold", imbalance, "Minority ratio threshold")->capture_default_str();
    lint->add_option("--row-feature-ratio", row_ratio, "Minimum rows per feature")->capture_default_str();

    auto* clean = app.add_subcommand("clean", "Apply a cleaning order and write the cleaned CSV and its log");
    add_data_options(clean, common, false);
    add_threshold_options(clean, common);
    std::string order = "FiTrMiOv", log_path, label = "heuristic";
    clean->add_option("--order", order, "Cleaning order, e.g. FiTrMiOv")->capture_default_str();
    clean->add_option("--out", common.out, "Cleaned CSV path (default: stdout)");
    clean->add_option("--log", log_path, "Cleaning log JSON path (default: <out>.log.json)");
    clean->add_option("--label", label, "Label column training starts from (heuristic|realistic)")->capture_default_str();

    auto* inject = app.add_subcommand("inject", "Build the clean baseline and write antipattern-injected train/test splits");
    add_data_options(inject, common, false);
    add_threshold_options(inject, common);
    std::size_t inject_splits = 1;
    std::string condition = "all";
    inject->add_option("--splits", inject_splits, "Number of stratified splits")->capture_default_str();
    inject->add_option("--condition", condition, "Condition to write, or all")->capture_default_str();
    inject->add_option("--out", common.out, "Output directory")->required();

    auto add_run = [&](const char* name, const char* help) {
        auto* cmd = app.add_subcommand(name, help);
        add_data_options(cmd, common, true);
        add_threshold_options(cmd, common);
        cmd->add_option("--splits", run.splits, "Number of stratified 80/20 splits")->capture_default_str();
        cmd->add_option("--learners", run.learners, "Learners (LR, RF)")->capture_default_str()->delimiter(',');
        cmd->add_option("--jobs", run.jobs, "Worker threads")->capture_default_str();
        cmd->add_option("--n-iter", run.n_iter, "Random-search draws")->capture_default_str();
        cmd->add_option("--folds", run.folds, "Cross-validation folds for tuning")->capture_default_str();
        cmd->add_option("--out", common.out, "Output directory")->required();
        return cmd;
    };
    auto* orders = add_run("run-orders", "Compare the canonical cleaning orders");
    orders->add_option("--order", run.orders, "Orders to run (default all)")->delimiter(',');
    auto* anti = add_run("run-antipatterns", "Measure the impact of each injected antipattern");
    anti->add_option("--imbalance-ratio", run.imbalance_ratio, "Target minority ratio for ClassImbalance (0: original ratio)");
    auto* interp = add_run("run-interpret", "Check interpretation consistency across antipattern-specific models");
    interp->add_option("--repeats", run.repeats, "Permutation repeats")->capture_default_str();
    interp->add_option("--auroc-floor", run.auroc_floor, "Minimum AU-ROC of interpreted models")->capture_default_str();
    interp->add_option("--imbalance-ratio", run.imbalance_ratio, "Target minority ratio for ClassImbalance (0: original ratio)");

    auto* report = app.add_subcommand("report", "Render rank and effect tables from a results CSV");
    std::string results, kind = "antipatterns";
    report->add_option("--results", results, "results.csv from a run")->required()->check(CLI::ExistingFile);
    report->add_option("--kind", kind, "orders or antipatterns")->capture_default_str();

    auto* synth = app.add_subcommand("synth", "Write a synthetic software-metric dataset");
    std::string synth_out = "-";
    dqa::SyntheticOptions synth_opt;
    std::uint64_t synth_seed = 1;
    synth->add_option("--out", synth_out, "CSV path (default: stdout)");
    synth->add_option("--seed", synth_seed, "Generator seed")->capture_default_str();
    synth->add_option("--rows", synth_opt.rows, "Rows before duplicates")->capture_default_str();
    synth->add_option("--duplicates", synth_opt.duplicates, "Appended duplicate rows")->capture_default_str();
    synth->add_option("--schema-violations", synth_opt.schema_violations, "Rows violating a rule")->capture_default_str();
    synth->add_option("--mislabel-rate", synth_opt.mislabel_rate, "Fraction of flipped heuristic labels")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (lint->parsed()) return cmd_lint(common, compare, js_threshold, bins, imbalance, row_ratio);
        if (clean->parsed()) return cmd_clean(common, order, log_path, label);
        if (inject->parsed()) return cmd_inject(common, inject_splits, condition);
        if (orders->parsed()) return cmd_run_orders(common, run);
        if (anti->parsed()) return cmd_run_antipatterns(common, run);
        if (interp->parsed()) return cmd_run_interpret(common, run);
        if (report->parsed()) return cmd_report(results, kind);
        if (synth->parsed()) return cmd_synth(synth_out, synth_seed, synth_opt);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
