#ifndef DQA_EXPERIMENT_HPP
#define DQA_EXPERIMENT_HPP

#include "csv.hpp"
#include "injector.hpp"
#include "interpret.hpp"
#include "json_io.hpp"
#include "learners.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>
#include <thread>

namespace dqa {

struct ExperimentConfig {
    std::uint64_t seed = 1;
    std::size_t splits = 10;
    double train_fraction = 0.8;
    std::vector<LearnerKind> learners = {LearnerKind::lr, LearnerKind::rf};
    std::vector<CleaningOrder> orders = canonical_orders();
    CleanParams params;
    std::size_t n_iter = 10;
    std::size_t folds = 3;
    std::optional<double> imbalance_ratio;
    std::size_t importance_repeats = 10;
    double auroc_floor = 0.75;
    std::size_t jobs = 1;

    /// Canonical text of every setting that affects results (not jobs).
    std::string describe() const {
        std::ostringstream s;
        s << "seed=" << seed << ";splits=" << splits << ";train_fraction=" << format_double(train_fraction) << ";learners=";
        for (auto l : learners) {
            s << to_string(l) << ',';
        }
        s << ";orders=";
        for (const auto& o : orders) {
            s << to_string(o) << ',';
        }
        s << ";rules=";
        for (const auto& r : params.filter.rules) {
            s << to_string(r) << ',';
        }
        s << ";rho=" << format_double(params.filter.correlation.rho_threshold)
          << ";r2=" << format_double(params.filter.correlation.r2_threshold)
          << ";tailed=" << format_double(params.transform.tailed_threshold)
          << ";z=" << format_double(params.transform.z_threshold)
          << ";trim=" << format_double(params.transform.trim_fraction)
          << ";k=" << (params.overlap.k ? std::to_string(*params.overlap.k) : "auto")
          << ";p=" << (params.overlap.p ? format_double(*params.overlap.p) : "auto")
          << ";n_iter=" << n_iter << ";folds=" << folds
          << ";imbalance=" << (imbalance_ratio ? format_double(*imbalance_ratio) : "auto")
          << ";repeats=" << importance_repeats << ";floor=" << format_double(auroc_floor);
        return s.str();
    }

    std::uint64_t hash(const std::vector<std::string>& dataset_ids) const {
        std::string text = describe() + ";datasets=";
        for (const auto& d : dataset_ids) {
            text += d + ",";
        }
        return fnv1a(text);
    }
};

struct ResultRow {
    std::string dataset;
    std::size_t split = 0;
    std::string condition;  // cleaning order or injected antipattern
    std::string learner;
    EvalResult eval;
    std::size_t train_rows = 0;
    std::size_t train_cols = 0;
    std::uint64_t seed = 0;
    std::string hyperparams;
    std::string status = "ok";

    bool ok() const { return status == "ok"; }
    std::string key() const { return dataset + '\x1f' + std::to_string(split) + '\x1f' + condition + '\x1f' + learner; }
};

inline bool result_order(const ResultRow& a, const ResultRow& b) {
    return std::tie(a.dataset, a.split, a.condition, a.learner) < std::tie(b.dataset, b.split, b.condition, b.learner);
}

// ---------------------------------------------------------------- results CSV

inline const char* results_header() {
    return "dataset,split,condition,learner,precision,recall,f1,mcc,auroc,auprc,train_rows,train_cols,seed,hyperparams,status";
}

inline std::string meta_line(std::uint64_t seed, std::uint64_t config_hash) {
    return "# dqa version=" + std::string(version) + " seed=" + std::to_string(seed) + " config=" + hex64(config_hash);
}

namespace detail {

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string q = "\"";
    for (char c : s) {
        q += c == '"' ? std::string("\"\"") : std::string(1, c == '\n' ? ' ' : c);
    }
    return q + "\"";
}

} // namespace detail

inline std::string format_result(const ResultRow& r) {
    std::ostringstream s;
    s << detail::csv_field(r.dataset) << ',' << r.split << ',' << r.condition << ',' << r.learner;
    for (double v : {r.eval.precision, r.eval.recall, r.eval.f1, r.eval.mcc, r.eval.auroc, r.eval.auprc}) {
        s << ',' << (r.ok() ? format_double(v) : std::string("nan"));
    }
    s << ',' << r.train_rows << ',' << r.train_cols << ',' << r.seed << ',' << detail::csv_field(r.hyperparams) << ','
      << detail::csv_field(r.status);
    return s.str();
}

inline ResultRow parse_result(const std::string& line) {
    const auto f = detail::split_csv_line(line);
    if (f.size() != 15) {
        throw Error("results file: expected 15 fields, found " + std::to_string(f.size()));
    }
    ResultRow r;
    r.dataset = f[0];
    r.split = std::stoul(f[1]);
    r.condition = f[2];
    r.learner = f[3];
    double* dst[] = {&r.eval.precision, &r.eval.recall, &r.eval.f1, &r.eval.mcc, &r.eval.auroc, &r.eval.auprc};
    for (std::size_t k = 0; k < 6; ++k) {
        if (!parse_double(f[4 + k], *dst[k])) {
            *dst[k] = std::numeric_limits<double>::quiet_NaN();
        }
    }
    r.train_rows = std::stoul(f[10]);
    r.train_cols = std::stoul(f[11]);
    r.seed = std::stoull(f[12]);
    r.hyperparams = f[13];
    r.status = f[14];
    return r;
}

struct ResultsFile {
    std::string meta;
    std::vector<ResultRow> rows;
};

inline ResultsFile read_results(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open results file '" + path.string() + "'");
    }
    ResultsFile out;
    std::string line;
    bool header = false;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        if (line[0] == '#') {
            if (out.meta.empty()) {
                out.meta = line;
            }
            continue;
        }
        if (!header) {
            if (line != results_header()) {
                throw Error("results file '" + path.string() + "' has an unexpected header");
            }
            header = true;
            continue;
        }
        out.rows.push_back(parse_result(line));
    }
    return out;
}

inline void write_results(const std::filesystem::path& path, std::vector<ResultRow> rows, std::uint64_t seed, std::uint64_t config_hash) {
    std::sort(rows.begin(), rows.end(), result_order);
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write '" + path.string() + "'");
    }
    out << meta_line(seed, config_hash) << '\n' << results_header() << '\n';
    for (const auto& r : rows) {
        out << format_result(r) << '\n';
    }
}

// ------------------------------------------------------------------ execution

/// Runs fn(i) for i in [0, n) on `jobs` threads; the first exception is rethrown.
inline void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& fn) {
    jobs = std::max<std::size_t>(1, std::min(jobs, n));
    if (jobs == 1) {
        for (std::size_t i = 0; i < n; ++i) {
            fn(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < jobs; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) {
                        error = std::current_exception();
                    }
                }
            }
        });
    }
    for (auto& th : pool) {
        th.join();
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

/// Appends rows to the partial results file and keeps them in memory.
class ResultSink {
public:
    ResultSink(std::filesystem::path partial, std::uint64_t seed, std::uint64_t hash) : path_(std::move(partial)) {
        if (path_.empty()) {
            return;
        }
        const std::string meta = meta_line(seed, hash);
        if (std::filesystem::exists(path_)) {
            auto existing = read_results(path_);
            if (existing.meta != meta) {
                throw Error("partial results '" + path_.string() + "' were produced by a different configuration; remove it to start over");
            }
            for (auto& r : existing.rows) {
                done_.emplace(r.key(), r);
            }
            out_.open(path_, std::ios::app | std::ios::binary);
        } else {
            out_.open(path_, std::ios::binary);
            out_ << meta << '\n' << results_header() << '\n';
        }
        if (!out_) {
            throw Error("cannot write '" + path_.string() + "'");
        }
    }

    std::optional<ResultRow> completed(const std::string& key) const {
        std::lock_guard lock(mutex_);
        auto it = done_.find(key);
        if (it == done_.end()) {
            return std::nullopt;
        }
        return it->second;
    }

    void add(const ResultRow& r) {
        std::lock_guard lock(mutex_);
        done_[r.key()] = r;
        if (out_.is_open()) {
            out_ << format_result(r) << '\n';
            out_.flush();
        }
    }

    std::vector<ResultRow> rows() const {
        std::lock_guard lock(mutex_);
        std::vector<ResultRow> out;
        for (const auto& [k, r] : done_) {
            out.push_back(r);
        }
        std::sort(out.begin(), out.end(), result_order);
        return out;
    }

    std::size_t resumed() const { return resumed_; }
    void count_resumed() {
        std::lock_guard lock(mutex_);
        ++resumed_;
    }

private:
    std::filesystem::path path_;
    std::ofstream out_;
    mutable std::mutex mutex_;
    std::map<std::string, ResultRow> done_;
    std::size_t resumed_ = 0;
};

inline std::uint64_t task_seed(std::uint64_t master, std::size_t split, std::string_view condition, LearnerKind learner) {
    return derive_seed(master, split, fnv1a(condition), static_cast<std::uint64_t>(learner));
}

struct TrainedTask {
    ResultRow row;
    std::unique_ptr<Model> model;
};

/// Tunes, trains and evaluates one learner on one prepared train/test pair.
inline TrainedTask train_and_evaluate(const Dataset& train, const Dataset& test, LearnerKind learner, std::uint64_t seed,
                                      const ExperimentConfig& cfg) {
    TrainedTask t;
    t.row.learner = to_string(learner);
    t.row.seed = seed;
    t.row.train_rows = train.rows();
    t.row.train_cols = train.cols();
    const auto search = random_search(train, learner, derive_seed(seed, 1), cfg.n_iter, cfg.folds);
    t.row.hyperparams = to_string(search.best);
    t.model = train_model(train, search.best, derive_seed(seed, 2));
    t.row.eval = evaluate(*t.model, test);
    return t;
}

inline ResultRow failed_row(std::string dataset, std::size_t split, std::string condition, LearnerKind learner, std::uint64_t seed,
                            const std::string& what) {
    ResultRow r;
    r.dataset = std::move(dataset);
    r.split = split;
    r.condition = std::move(condition);
    r.learner = to_string(learner);
    r.seed = seed;
    r.status = "error: " + what;
    return r;
}

struct RunPaths {
    std::filesystem::path partial; // empty: no incremental file
};

// ---------------------------------------------------------------- run orders

/**
 * Cleaning-order experiment: per dataset, split, order and learner, clean
 * the training side, tune, train and score on the test side carrying the
 * training-fitted transforms. Completed rows found in the partial file are
 * reused.
 */
inline std::vector<ResultRow> run_orders(const std::vector<Dataset>& datasets, const ExperimentConfig& cfg, const RunPaths& paths = {}) {
    std::vector<std::string> ids;
    for (const auto& d : datasets) {
        ids.push_back(d.id());
    }
    ResultSink sink(paths.partial, cfg.seed, cfg.hash(ids));
    struct Unit {
        std::size_t dataset, split, order;
    };
    std::vector<Unit> units;
    for (std::size_t d = 0; d < datasets.size(); ++d) {
        for (std::size_t s = 0; s < cfg.splits; ++s) {
            for (std::size_t o = 0; o < cfg.orders.size(); ++o) {
                units.push_back({d, s, o});
            }
        }
    }
    parallel_for(units.size(), cfg.jobs, [&](std::size_t u) {
        const auto& unit = units[u];
        const Dataset& ds = datasets[unit.dataset];
        const std::string order = to_string(cfg.orders[unit.order]);
        std::vector<LearnerKind> todo;
        for (auto l : cfg.learners) {
            ResultRow probe;
            probe.dataset = ds.id();
            probe.split = unit.split;
            probe.condition = order;
            probe.learner = to_string(l);
            if (sink.completed(probe.key())) {
                sink.count_resumed();
            } else {
                todo.push_back(l);
            }
        }
        if (todo.empty()) {
            return;
        }
        const std::uint64_t split_seed = derive_seed(cfg.seed, unit.split);
        std::optional<Dataset> train, test;
        std::string failure;
        try {
            const auto sp = experiment_split(ds, cfg.train_fraction, split_seed);
            auto cleaned = clean(sp.train, cfg.orders[unit.order], cfg.params, derive_seed(split_seed, 0x0f));
            test = apply_transform_to_test(sp.test, cleaned.transform);
            train = std::move(cleaned.data);
        } catch (const Error& e) {
            failure = e.what();
        }
        for (auto l : todo) {
            const auto seed = task_seed(cfg.seed, unit.split, order, l);
            if (!train) {
                sink.add(failed_row(ds.id(), unit.split, order, l, seed, failure));
                continue;
            }
            try {
                auto t = train_and_evaluate(*train, *test, l, seed, cfg);
                t.row.dataset = ds.id();
                t.row.split = unit.split;
                t.row.condition = order;
                sink.add(t.row);
            } catch (const Error& e) {
                sink.add(failed_row(ds.id(), unit.split, order, l, seed, e.what()));
            }
        }
    });
    return sink.rows();
}

// ----------------------------------------------------------- run antipatterns

struct ConditionModel {
    ResultRow row;
    std::optional<ImportanceVector> importance;
};

/**
 * Antipattern experiment: per dataset and split, build the clean FTMO
 * baseline from the training side, inject each antipattern in turn and
 * score every learner on the shared test split.
 */
inline std::vector<ResultRow> run_antipatterns(const std::vector<Dataset>& datasets, const ExperimentConfig& cfg,
                                               const RunPaths& paths = {},
                                               std::vector<ConditionModel>* importances = nullptr) {
    std::vector<std::string> ids;
    for (const auto& d : datasets) {
        ids.push_back(d.id());
    }
    ResultSink sink(importances ? std::filesystem::path{} : paths.partial, cfg.seed, cfg.hash(ids));
    GridOptions grid;
    grid.splits = cfg.splits;
    grid.train_fraction = cfg.train_fraction;
    grid.params = cfg.params;
    grid.imbalance_ratio = cfg.imbalance_ratio;
    struct Unit {
        std::size_t dataset, split;
    };
    std::vector<Unit> units;
    for (std::size_t d = 0; d < datasets.size(); ++d) {
        for (std::size_t s = 0; s < cfg.splits; ++s) {
            units.push_back({d, s});
        }
    }
    std::mutex imp_mutex;
    parallel_for(units.size(), cfg.jobs, [&](std::size_t u) {
        const auto& unit = units[u];
        const Dataset& ds = datasets[unit.dataset];
        auto already = [&](const std::string& c, LearnerKind l) {
            ResultRow probe;
            probe.dataset = ds.id();
            probe.split = unit.split;
            probe.condition = c;
            probe.learner = to_string(l);
            return sink.completed(probe.key()).has_value();
        };
        bool all_done = true;
        for (const auto& c : injection_conditions()) {
            for (auto l : cfg.learners) {
                all_done = all_done && already(c, l);
            }
        }
        if (all_done) {
            sink.count_resumed();
            return;
        }
        std::vector<InjectionTask> tasks;
        std::string failure;
        try {
            tasks = split_tasks(ds, unit.split, cfg.seed, grid);
        } catch (const Error& e) {
            failure = e.what();
        }
        if (tasks.empty()) {
            for (const auto& c : injection_conditions()) {
                for (auto l : cfg.learners) {
                    if (!already(c, l)) {
                        sink.add(failed_row(ds.id(), unit.split, c, l, task_seed(cfg.seed, unit.split, c, l), failure));
                    }
                }
            }
            return;
        }
        for (const auto& task : tasks) {
            for (auto l : cfg.learners) {
                if (already(task.condition, l)) {
                    continue;
                }
                const auto seed = task_seed(cfg.seed, unit.split, task.condition, l);
                try {
                    auto t = train_and_evaluate(task.train, task.test, l, seed, cfg);
                    t.row.dataset = ds.id();
                    t.row.split = unit.split;
                    t.row.condition = task.condition;
                    sink.add(t.row);
                    if (importances) {
                        ConditionModel cm{t.row, std::nullopt};
                        cm.importance = permutation_importance(*t.model, task.test, "auroc", cfg.importance_repeats, derive_seed(seed, 3));
                        std::lock_guard lock(imp_mutex);
                        importances->push_back(std::move(cm));
                    }
                } catch (const Error& e) {
                    auto row = failed_row(ds.id(), unit.split, task.condition, l, seed, e.what());
                    sink.add(row);
                    if (importances) {
                        std::lock_guard lock(imp_mutex);
                        importances->push_back({row, std::nullopt});
                    }
                }
            }
        }
    });
    if (importances) {
        std::sort(importances->begin(), importances->end(), [](const auto& a, const auto& b) { return result_order(a.row, b.row); });
    }
    return sink.rows();
}

// ------------------------------------------------------------------- analysis

struct OddsEntry {
    std::string learner;
    std::string metric;
    std::string pair;       // e.g. "MiOv": ab = Mi before Ov
    std::size_t ab_top = 0, ab_not = 0, ba_top = 0, ba_not = 0;
    stats::OddsResult odds;
};

/**
 * Odds that orders with A before B reach the top half (>= median) of their
 * (dataset, split, learner) cohort, relative to orders with B before A.
 * Cohorts with a failed or missing order are skipped.
 */
inline std::vector<OddsEntry> odds_report(const std::vector<ResultRow>& rows, const std::vector<std::string>& metrics = {"auroc"}) {
    std::map<std::tuple<std::string, std::size_t, std::string>, std::vector<const ResultRow*>> cohorts;
    std::set<std::string> learners;
    for (const auto& r : rows) {
        cohorts[{r.dataset, r.split, r.learner}].push_back(&r);
        learners.insert(r.learner);
    }
    std::vector<OddsEntry> out;
    for (const auto& learner : learners) {
        for (const auto& metric : metrics) {
            for (const auto& [a, b] : odds_pairs()) {
                OddsEntry e;
                e.learner = learner;
                e.metric = metric;
                e.pair = std::string(to_string(a)) + to_string(b);
                for (const auto& [key, members] : cohorts) {
                    if (std::get<2>(key) != learner || members.size() < 2) {
                        continue;
                    }
                    bool usable = true;
                    std::vector<double> values;
                    for (const auto* r : members) {
                        usable = usable && r->ok();
                        values.push_back(metric_value(r->eval, metric));
                    }
                    if (!usable) {
                        continue;
                    }
                    const auto top = stats::top_half_membership(values);
                    std::vector<std::uint8_t> is_top(values.size(), 0);
                    for (auto i : top) {
                        is_top[i] = 1;
                    }
                    for (std::size_t i = 0; i < members.size(); ++i) {
                        const auto o = parse_order(members[i]->condition);
                        if (o.before(a, b)) {
                            (is_top[i] ? e.ab_top : e.ab_not)++;
                        } else {
                            (is_top[i] ? e.ba_top : e.ba_not)++;
                        }
                    }
                }
                if (e.ab_top + e.ab_not > 0 && e.ba_top + e.ba_not > 0) {
                    e.odds = stats::odds_ratio(static_cast<double>(e.ab_top), static_cast<double>(e.ab_not),
                                               static_cast<double>(e.ba_top), static_cast<double>(e.ba_not));
                    out.push_back(e);
                }
            }
        }
    }
    return out;
}

struct MetricRanking {
    std::string learner;
    std::string metric;
    std::optional<stats::RankTable> table;
    std::string note;   // why the table is absent
};

/// SK-ESD over conditions per learner and metric, samples pooled over
/// datasets and splits of successful rows.
inline std::vector<MetricRanking> condition_rankings(const std::vector<ResultRow>& rows) {
    std::map<std::string, std::map<std::string, std::map<std::string, std::vector<double>>>> groups; // learner -> metric -> cond
    for (const auto& r : rows) {
        if (!r.ok()) {
            continue;
        }
        for (auto m : metric_names()) {
            groups[r.learner][std::string(m)][r.condition].push_back(metric_value(r.eval, m));
        }
    }
    std::vector<MetricRanking> out;
    for (const auto& [learner, by_metric] : groups) {
        for (auto m : metric_names()) {
            MetricRanking mr{learner, std::string(m), std::nullopt, {}};
            auto it = by_metric.find(std::string(m));
            try {
                mr.table = stats::scott_knott_esd(it->second);
            } catch (const Error& e) {
                mr.note = e.what();
            }
            out.push_back(std::move(mr));
        }
    }
    return out;
}

struct EffectEntry {
    std::string learner;
    std::string metric;
    std::string condition;
    int rank = 0;
    int clean_rank = 0;
    int rank_diff = 0;           // rank(condition) - rank(clean); negative is better
    stats::CliffsResult delta;   // delta(clean, condition); negative is improvement
};

/// Cliff's delta versus the clean control for every condition whose SK-ESD
/// rank differs from the control's.
inline std::vector<EffectEntry> antipattern_effects(const std::vector<MetricRanking>& rankings, const std::string& control = "Clean") {
    std::vector<EffectEntry> out;
    for (const auto& mr : rankings) {
        if (!mr.table || !mr.table->ranks.count(control)) {
            continue;
        }
        const auto& t = *mr.table;
        const int cr = t.rank(control);
        for (const auto& name : t.order) {
            if (name == control || t.rank(name) == cr) {
                continue;
            }
            EffectEntry e{mr.learner, mr.metric, name, t.rank(name), cr, t.rank(name) - cr,
                          stats::cliffs_delta(t.samples.at(control), t.samples.at(name))};
            out.push_back(e);
        }
    }
    return out;
}

// ----------------------------------------------------------------- interpret

struct InterpretEntry {
    std::string dataset;
    std::string learner;
    std::vector<ConditionRanking> conditions;
    std::map<std::string, std::string> skipped;     // condition -> reason (ranking impossible)
    std::optional<ConcordanceResult> concordance;
    std::string concordance_note;
    std::map<std::string, double> tau_vs_clean;
    std::map<std::string, std::string> tau_notes;
};

/// Feature ranks per condition, Kendall's W across conditions and tau of
/// each condition against the clean control.
inline std::vector<InterpretEntry> interpret_results(const std::vector<ConditionModel>& models, double auroc_floor) {
    std::map<std::pair<std::string, std::string>, std::map<std::string, std::vector<const ConditionModel*>>> groups;
    for (const auto& m : models) {
        groups[{m.row.dataset, m.row.learner}][m.row.condition].push_back(&m);
    }
    std::vector<InterpretEntry> out;
    for (const auto& [key, by_cond] : groups) {
        InterpretEntry e;
        e.dataset = key.first;
        e.learner = key.second;
        for (const auto& [cond, list] : by_cond) {
            std::vector<ImportanceVector> runs;
            double auroc = 0.0;
            for (const auto* m : list) {
                if (m->importance) {
                    runs.push_back(*m->importance);
                    auroc += m->row.eval.auroc;
                }
            }
            if (runs.size() < 2) {
                e.skipped[cond] = "fewer than 2 successful runs";
                continue;
            }
            try {
                e.conditions.push_back({cond, importance_ranks(runs), auroc / static_cast<double>(runs.size())});
            } catch (const Error& err) {
                e.skipped[cond] = err.what();
            }
        }
        try {
            e.concordance = concordance_across_conditions(e.conditions, auroc_floor);
        } catch (const Error& err) {
            e.concordance_note = err.what();
        }
        const ConditionRanking* clean = nullptr;
        for (const auto& c : e.conditions) {
            if (c.condition == "Clean") {
                clean = &c;
            }
        }
        for (const auto& c : e.conditions) {
            if (!clean || c.condition == "Clean") {
                continue;
            }
            if (!(c.auroc >= auroc_floor && clean->auroc >= auroc_floor)) {
                e.tau_notes[c.condition] = "below AU-ROC floor";
                continue;
            }
            try {
                e.tau_vs_clean[c.condition] = pairwise_vs_clean(c.ranks, clean->ranks);
            } catch (const Error& err) {
                e.tau_notes[c.condition] = err.what();
            }
        }
        out.push_back(std::move(e));
    }
    return out;
}

} // namespace dqa

#endif
