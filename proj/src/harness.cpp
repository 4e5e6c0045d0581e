#include "lla/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <exception>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "lla/errors.hpp"
#include "lla/textio.hpp"

namespace lla {

namespace fs = std::filesystem;

namespace {

std::string trim(const std::string &s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string &s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream ss(s);
    while (std::getline(ss, item, sep)) out.push_back(trim(item));
    return out;
}

double to_real(const std::string &key, const std::string &value) {
    try {
        return parse_double(value);
    } catch (const IoError &) {
        throw ConfigError(key + ": expected a number, got '" + value + "'");
    }
}

std::size_t to_count(const std::string &key, const std::string &value) {
    if (value.empty() || value.find_first_not_of("0123456789") != std::string::npos) {
        throw ConfigError(key + ": expected a nonnegative integer, got '" + value + "'");
    }
    return static_cast<std::size_t>(std::stoull(value));
}

bool to_bool(const std::string &key, const std::string &value) {
    if (value == "true" || value == "1" || value == "on" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "off" || value == "no") return false;
    throw ConfigError(key + ": expected true/false, got '" + value + "'");
}

std::vector<double> to_reals(const std::string &key, const std::string &value) {
    std::vector<double> out;
    for (const auto &item : split(value, ',')) out.push_back(to_real(key, item));
    if (out.empty()) throw ConfigError(key + ": expected a comma-separated list");
    return out;
}

std::string join_reals(const std::vector<double> &values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ',';
        out += format_double(values[i]);
    }
    return out;
}

std::string gamma_tag(double gamma) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", gamma);
    return buf;
}

std::string run_tag(const std::string &problem, double gamma, std::uint64_t seed) {
    return problem + "_g" + gamma_tag(gamma) + "_s" + std::to_string(seed);
}

std::ofstream open_output(const fs::path &path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    return out;
}

std::ifstream open_input(const fs::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    return in;
}

void ensure_directory(const fs::path &dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw IoError("cannot create output directory '" + dir.string() + "'");
    }
    const fs::path probe = dir / ".write_probe";
    {
        std::ofstream out(probe);
        if (!out) throw IoError("output directory '" + dir.string() + "' is not writable");
    }
    fs::remove(probe, ec);
}

void write_metadata(const fs::path &dir, const std::string &command, const ExperimentConfig &config) {
    auto out = open_output(dir / "run_metadata.txt");
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    out << "command " << command << '\n';
    out << "timestamp " << std::put_time(std::gmtime(&now), "%Y-%m-%dT%H:%M:%SZ") << '\n';
    out << "jobs " << config.jobs << '\n';
}

}  // namespace

void ExperimentConfig::set(const std::string &raw_key, const std::string &raw_value) {
    const std::string key = trim(raw_key);
    const std::string value = trim(raw_value);
    MoeadConfig &mo = lla.moead;
    if (key == "problem") problem = value;
    else if (key == "n") n = to_count(key, value);
    else if (key == "lambda0") lambda0 = to_reals(key, value);
    else if (key == "population") lla.population = to_count(key, value);
    else if (key == "generations") lla.generations = to_count(key, value);
    else if (key == "gamma") gammas = to_reals(key, value);
    else if (key == "sigma2") lla.sigma2 = to_real(key, value);
    else if (key == "sigma2_noise") lla.sigma2_noise = to_real(key, value);
    else if (key == "replicates") replicates = to_count(key, value);
    else if (key == "seed") seed_base = to_count(key, value);
    else if (key == "out") out_dir = value;
    else if (key == "baseline") baseline = to_bool(key, value);
    else if (key == "compensation") compensation = to_bool(key, value);
    else if (key == "jobs") jobs = to_count(key, value);
    else if (key == "delta_mode") delta_mode = parse_delta_mode(value);
    else if (key == "front_points") front_points = to_count(key, value);
    else if (key == "reg_tol") lla.regression.tol = to_real(key, value);
    else if (key == "reg_max_iters") lla.regression.max_iters = to_count(key, value);
    else if (key == "neighborhood_size") mo.neighborhood_size = to_count(key, value);
    else if (key == "mating_locality") mo.mating_locality = to_real(key, value);
    else if (key == "max_replacements") mo.max_replacements = to_count(key, value);
    else if (key == "de_scale") mo.de_scale = to_real(key, value);
    else if (key == "crossover_rate") mo.crossover_rate = to_real(key, value);
    else if (key == "mutation_prob") mo.mutation_prob = to_real(key, value);
    else if (key == "mutation_eta") mo.mutation_eta = to_real(key, value);
    else if (key == "permute_order") mo.permute_order = to_bool(key, value);
    else if (key == "problems") problems = split(value, ',');
    else throw ConfigError("unknown configuration key '" + key + "'");
}

void ExperimentConfig::validate() const {
    if (replicates < 1) throw ConfigError("replicates: must be at least 1");
    if (gammas.empty()) throw ConfigError("gamma: list must not be empty");
    for (double g : gammas) {
        if (!(g >= 0.0)) throw ConfigError("gamma: values must be nonnegative");
    }
    if (jobs < 1) throw ConfigError("jobs: must be at least 1");
    const auto def = make_problem_definition();
    (void)anchor_for(def);
    LlaConfig checked = lla;
    checked.gamma = gammas.front();
    try {
        checked.validate();
    } catch (const ConfigError &e) {
        throw ConfigError(std::string("invalid algorithm setting: ") + e.what());
    }
    for (const auto &name : problems) (void)parse_problem_kind(name);
}

MopDefinition ExperimentConfig::make_problem_definition() const {
    return n ? make_problem(problem, *n) : make_problem(problem);
}

PreferenceVector ExperimentConfig::anchor_for(const MopDefinition &def) const {
    if (lambda0.empty()) return PreferenceVector::uniform(def.m());
    if (lambda0.size() != def.m()) {
        throw ConfigError("lambda0: expected " + std::to_string(def.m()) + " weights for " +
                          def.name());
    }
    try {
        return PreferenceVector::from_weights(lambda0, 1e-9);
    } catch (const ConfigError &e) {
        throw ConfigError(std::string("lambda0: ") + e.what());
    }
}

ExperimentConfig parse_config(std::istream &in, ExperimentConfig base) {
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        }
        base.set(line.substr(0, eq), line.substr(eq + 1));
    }
    return base;
}

ExperimentConfig load_config(const fs::path &path, ExperimentConfig base) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config file '" + path.string() + "'");
    return parse_config(in, std::move(base));
}

void write_config(std::ostream &out, const ExperimentConfig &c) {
    const MoeadConfig &mo = c.lla.moead;
    out << "problem = " << c.problem << '\n';
    if (c.n) out << "n = " << *c.n << '\n';
    if (!c.lambda0.empty()) out << "lambda0 = " << join_reals(c.lambda0) << '\n';
    out << "population = " << c.lla.population << '\n';
    out << "generations = " << c.lla.generations << '\n';
    out << "gamma = " << join_reals(c.gammas) << '\n';
    out << "sigma2 = " << format_double(c.lla.sigma2) << '\n';
    out << "sigma2_noise = " << format_double(c.lla.sigma2_noise) << '\n';
    out << "replicates = " << c.replicates << '\n';
    out << "seed = " << c.seed_base << '\n';
    out << "baseline = " << (c.baseline ? "true" : "false") << '\n';
    out << "compensation = " << (c.compensation ? "true" : "false") << '\n';
    out << "delta_mode = " << to_string(c.delta_mode) << '\n';
    out << "front_points = " << c.front_points << '\n';
    out << "reg_tol = " << format_double(c.lla.regression.tol) << '\n';
    out << "reg_max_iters = " << c.lla.regression.max_iters << '\n';
    out << "neighborhood_size = " << mo.neighborhood_size << '\n';
    out << "mating_locality = " << format_double(mo.mating_locality) << '\n';
    out << "max_replacements = " << mo.max_replacements << '\n';
    out << "de_scale = " << format_double(mo.de_scale) << '\n';
    out << "crossover_rate = " << format_double(mo.crossover_rate) << '\n';
    out << "mutation_prob = " << format_double(mo.mutation_prob) << '\n';
    out << "mutation_eta = " << format_double(mo.mutation_eta) << '\n';
    out << "permute_order = " << (mo.permute_order ? "true" : "false") << '\n';
    out << "problems = ";
    for (std::size_t i = 0; i < c.problems.size(); ++i) out << (i ? "," : "") << c.problems[i];
    out << '\n';
}

fs::path default_output_root() {
    if (const char *env = std::getenv("LLA_OUTPUT_ROOT"); env && *env) return env;
    return "lla_out";
}

void parallel_for(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)> &fn) {
    const std::size_t workers = std::max<std::size_t>(1, std::min(jobs, count));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        threads.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    for (auto &t : threads) t.join();
    if (failure) std::rethrow_exception(failure);
}

namespace {

std::vector<DecisionVector> decisions_of(const Population &pop) {
    std::vector<DecisionVector> out;
    out.reserve(pop.size());
    for (const auto &ind : pop.members) out.push_back(ind.x);
    return out;
}

std::vector<ObjectiveVector> objectives_of(const Population &pop) {
    std::vector<ObjectiveVector> out;
    out.reserve(pop.size());
    for (const auto &ind : pop.members) out.push_back(ind.f);
    return out;
}

double refit_vsd(const std::vector<DecisionVector> &solutions, const PreferenceSet &prefs, double gamma,
                 const FitOptions &options) {
    RegressionDataset data{prefs.members, solutions, prefs.anchor};
    FitOptions o = options;
    o.gamma = gamma;
    return vsd(fit(data, o).model);
}

struct SavedRun {
    std::vector<DecisionVector> x;
    std::vector<ObjectiveVector> f;
    std::vector<double> reference;
};

MetricReport population_report(const MopDefinition &problem, const std::string &source, double gamma,
                               std::uint64_t seed, const std::vector<DecisionVector> &x,
                               const std::vector<ObjectiveVector> &f, const PreferenceSet &prefs,
                               const ReferencePoint &z, const FitOptions &fit_options,
                               const RMetricContext &ctx) {
    return make_report(problem, source, gamma, seed, x, f, prefs, z,
                       refit_vsd(x, prefs, gamma, fit_options), ctx);
}

MetricReport prediction_report(const MopDefinition &problem, double gamma, std::uint64_t seed,
                               const LinearModel &model, const PreferenceSet &prefs,
                               const ReferencePoint &z, const RMetricContext &ctx,
                               std::vector<DecisionVector> *x_out = nullptr,
                               std::vector<ObjectiveVector> *f_out = nullptr) {
    auto x = predict_clamped(model, prefs.members, problem);
    std::vector<ObjectiveVector> f;
    f.reserve(x.size());
    for (const auto &xi : x) f.push_back(problem.evaluate(xi));
    MetricReport report = make_report(problem, "predictions", gamma, seed, x, f, prefs, z, vsd(model), ctx);
    if (has_subproblem_oracle(problem)) report.mse = mse_to_true_ps(model, prefs, problem, z);
    if (x_out) *x_out = std::move(x);
    if (f_out) *f_out = std::move(f);
    return report;
}

}  // namespace

ReplicateOutcome run_replicate(const MopDefinition &problem, const PreferenceVector &anchor,
                               const ExperimentConfig &config, double gamma, std::uint64_t seed,
                               const RMetricContext &ctx, const ReplicateOptions &options) {
    ReplicateOutcome out;
    out.problem = problem.name();
    out.gamma = gamma;
    out.seed = seed;

    Rng pref_rng = make_rng(seed, 0);
    out.prefs = sample_preference_set(anchor, config.lla.sigma2, config.lla.population, pref_rng);

    LlaConfig lla_config = config.lla;
    lla_config.gamma = gamma;
    lla_config.track_mse = options.track_curves;
    Rng lla_rng = make_rng(seed, 1);
    out.lla = run_lla(problem, out.prefs, lla_config, lla_rng);

    const PreferenceSet &prefs = out.prefs;
    const std::size_t generations = config.lla.generations;
    out.reports.push_back(population_report(problem, "population", gamma, seed,
                                            decisions_of(out.lla.population),
                                            objectives_of(out.lla.population), prefs,
                                            out.lla.population.z, config.lla.regression, ctx));
    out.reports.push_back(prediction_report(problem, gamma, seed, out.lla.model, prefs,
                                            out.lla.population.z, ctx, &out.predictions,
                                            &out.prediction_objectives));

    if (options.baseline) {
        const std::size_t n_pop = prefs.size();
        const std::optional<std::size_t> budget =
            options.compensation ? std::optional<std::size_t>(n_pop + 2 * generations * n_pop)
                                 : std::nullopt;
        const std::size_t ratio = options.compensation ? 2 : 1;
        out.baseline_mse_curve.assign(generations, std::nullopt);
        const bool curves = options.track_curves && has_subproblem_oracle(problem);
        GenerationObserver observer;
        if (curves) {
            observer = [&](const Population &pop, std::size_t gen) {
                if (gen % ratio != 0 || gen / ratio > generations) return;
                out.baseline_mse_curve[gen / ratio - 1] = solutions_mse(decisions_of(pop), prefs, problem, pop.z);
            };
        }
        Rng base_rng = make_rng(seed, 2);
        out.baseline = run_moead_de(problem, prefs, generations, config.lla.moead, base_rng, budget, observer);
        out.reports.push_back(population_report(problem, "baseline", gamma, seed,
                                                decisions_of(*out.baseline),
                                                objectives_of(*out.baseline), prefs, out.baseline->z,
                                                config.lla.regression, ctx));
    }
    return out;
}

CsvTable read_numeric_csv(std::istream &in) {
    CsvTable table;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            table.comments.push_back(line);
            continue;
        }
        auto fields = split(line, ',');
        if (!have_header) {
            table.header = std::move(fields);
            have_header = true;
            continue;
        }
        if (fields.size() != table.header.size()) throw IoError("csv row width mismatch: " + line);
        std::vector<double> row;
        row.reserve(fields.size());
        for (const auto &f : fields) row.push_back(parse_double(f));
        table.rows.push_back(std::move(row));
    }
    return table;
}

void write_numeric_csv(std::ostream &out, const CsvTable &table) {
    for (const auto &c : table.comments) out << c << '\n';
    for (std::size_t i = 0; i < table.header.size(); ++i) out << (i ? "," : "") << table.header[i];
    out << '\n';
    for (const auto &row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_double(row[i]);
        out << '\n';
    }
}

namespace {

std::string reference_comment(const std::vector<double> &z) {
    std::string out = "# reference";
    for (double v : z) out += ' ' + format_double(v);
    return out;
}

void write_population_csv(const fs::path &path, const std::vector<DecisionVector> &x,
                          const std::vector<ObjectiveVector> &f, const ReferencePoint &z) {
    CsvTable t;
    t.comments = {"# schema: lla-population v1", reference_comment(z.z)};
    for (std::size_t j = 1; j <= x.front().size(); ++j) t.header.push_back("x_" + std::to_string(j));
    for (std::size_t j = 1; j <= f.front().size(); ++j) t.header.push_back("f_" + std::to_string(j));
    for (std::size_t i = 0; i < x.size(); ++i) {
        std::vector<double> row(x[i]);
        row.insert(row.end(), f[i].begin(), f[i].end());
        t.rows.push_back(std::move(row));
    }
    auto out = open_output(path);
    write_numeric_csv(out, t);
}

SavedRun read_population_csv(const fs::path &path, std::size_t n) {
    auto in = open_input(path);
    const CsvTable t = read_numeric_csv(in);
    SavedRun run;
    for (const auto &c : t.comments) {
        if (c.rfind("# reference", 0) == 0) {
            std::istringstream ss(c.substr(11));
            std::string token;
            while (ss >> token) run.reference.push_back(parse_double(token));
        }
    }
    for (const auto &row : t.rows) {
        if (row.size() <= n) throw IoError("population file '" + path.string() + "' has too few columns");
        run.x.emplace_back(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(n));
        run.f.emplace_back(row.begin() + static_cast<std::ptrdiff_t>(n), row.end());
    }
    return run;
}

void write_prefs_csv(const fs::path &path, const PreferenceSet &prefs) {
    CsvTable t;
    t.comments = {"# schema: lla-prefs v1"};
    for (std::size_t j = 1; j <= prefs.anchor.size(); ++j) t.header.push_back("w_" + std::to_string(j));
    for (const auto &p : prefs.members) t.rows.push_back(p.weights());
    auto out = open_output(path);
    write_numeric_csv(out, t);
}

void write_history_csv(const fs::path &path, const LlaHistory &history) {
    auto out = open_output(path);
    out << "# schema: lla-history v1\n";
    out << "generation,mean_chebyshev,mse,vsd,eval_count\n";
    for (const auto &r : history.records) {
        out << r.generation << ',' << format_double(r.mean_chebyshev) << ','
            << (r.mse ? format_double(*r.mse) : std::string{}) << ',' << format_double(r.vsd) << ','
            << r.eval_count << '\n';
    }
}

void write_rmetric_comment(std::ostream &out, const MopDefinition &problem, const RMetricContext &ctx) {
    out << "# r-metric " << problem.name() << ": delta=" << format_double(ctx.params.delta)
        << " delta_mode=" << to_string(ctx.delta_mode) << " z_utopian=" << join_reals(ctx.params.z_utopian)
        << " z_worst=" << join_reals(ctx.params.z_worst) << " hv_ref=" << join_reals(ctx.hv_ref)
        << " front_points=" << ctx.front.size() << '\n';
}

RMetricContext context_for(const MopDefinition &problem, const PreferenceVector &anchor,
                           const ExperimentConfig &config) {
    const std::size_t k = config.front_points ? config.front_points : default_front_points(problem);
    return RMetricContext::build(problem, anchor, config.lla.sigma2, config.delta_mode, k);
}

fs::path resolve_out(const ExperimentConfig &config, const std::string &command) {
    return config.out_dir.empty() ? default_output_root() / command : config.out_dir;
}

void save_replicate(const fs::path &dir, const ReplicateOutcome &o, const MopDefinition &problem) {
    const std::string tag = run_tag(o.problem, o.gamma, o.seed);
    {
        auto out = open_output(dir / ("model_" + tag + ".txt"));
        ModelDocument doc{o.lla.model, o.problem, problem.n(), o.gamma, o.seed, o.lla.population.z.z};
        write_model(out, doc);
    }
    write_prefs_csv(dir / ("prefs_" + tag + ".csv"), o.prefs);
    write_population_csv(dir / ("population_" + tag + ".csv"), decisions_of(o.lla.population),
                         objectives_of(o.lla.population), o.lla.population.z);
    write_history_csv(dir / ("history_" + tag + ".csv"), o.lla.history);
    if (o.baseline) {
        write_population_csv(dir / ("baseline_" + tag + ".csv"), decisions_of(*o.baseline),
                             objectives_of(*o.baseline), o.baseline->z);
    }
}

std::vector<ReplicateOutcome> run_grid(const MopDefinition &problem, const PreferenceVector &anchor,
                                       const ExperimentConfig &config, const RMetricContext &ctx,
                                       const ReplicateOptions &options) {
    const std::size_t per_gamma = config.replicates;
    std::vector<ReplicateOutcome> outcomes(config.gammas.size() * per_gamma);
    parallel_for(outcomes.size(), config.jobs, [&](std::size_t k) {
        const double gamma = config.gammas[k / per_gamma];
        const std::uint64_t seed = config.seed_base + k % per_gamma;
        outcomes[k] = run_replicate(problem, anchor, config, gamma, seed, ctx, options);
    });
    return outcomes;
}

void write_reports(const fs::path &path, const MopDefinition &problem, const RMetricContext &ctx,
                   const std::vector<MetricReport> &reports) {
    auto out = open_output(path);
    out << kReportSchema << '\n';
    write_rmetric_comment(out, problem, ctx);
    write_report_header(out, problem.n());
    for (const auto &r : reports) write_report_row(out, r);
}

struct MeanStd {
    double mean = 0.0;
    double std = 0.0;
    std::size_t count = 0;
};

MeanStd mean_std(const std::vector<double> &values) {
    MeanStd out;
    out.count = values.size();
    if (values.empty()) return out;
    for (double v : values) out.mean += v;
    out.mean /= static_cast<double>(values.size());
    if (values.size() > 1) {
        for (double v : values) out.std += (v - out.mean) * (v - out.mean);
        out.std = std::sqrt(out.std / static_cast<double>(values.size() - 1));
    }
    return out;
}

void begin_command(const fs::path &dir, const std::string &command, const ExperimentConfig &config) {
    ensure_directory(dir);
    write_metadata(dir, command, config);
    auto out = open_output(dir / "config.txt");
    write_config(out, config);
}

}  // namespace

RunSummary cmd_run(const ExperimentConfig &config) {
    config.validate();
    const fs::path dir = resolve_out(config, "run");
    const MopDefinition problem = config.make_problem_definition();
    const PreferenceVector anchor = config.anchor_for(problem);
    begin_command(dir, "run", config);

    const RMetricContext ctx = context_for(problem, anchor, config);
    ReplicateOptions options{config.baseline, config.compensation, false};
    RunSummary summary;
    summary.outcomes = run_grid(problem, anchor, config, ctx, options);

    std::vector<MetricReport> reports;
    auto budget = open_output(dir / "budget.csv");
    budget << "# schema: lla-budget v1\nproblem,gamma,seed,lla_evals,baseline_evals\n";
    for (const auto &o : summary.outcomes) {
        save_replicate(dir, o, problem);
        reports.insert(reports.end(), o.reports.begin(), o.reports.end());
        budget << o.problem << ',' << format_double(o.gamma) << ',' << o.seed << ','
               << o.lla.population.eval_count << ','
               << (o.baseline ? std::to_string(o.baseline->eval_count) : std::string{}) << '\n';
    }
    write_reports(dir / "reports.csv", problem, ctx, reports);
    return summary;
}

std::vector<SweepRow> cmd_sweep(const ExperimentConfig &config) {
    config.validate();
    if (config.gammas.size() < 2) {
        throw ConfigError("sweep needs at least 2 gamma values, e.g. gamma = 1e-4,1e-3,5e-2,1,5");
    }
    const fs::path dir = resolve_out(config, "sweep");
    const MopDefinition problem = config.make_problem_definition();
    const PreferenceVector anchor = config.anchor_for(problem);
    begin_command(dir, "sweep", config);

    const RMetricContext ctx = context_for(problem, anchor, config);
    const auto outcomes = run_grid(problem, anchor, config, ctx, ReplicateOptions{false, false, false});

    std::vector<MetricReport> reports;
    for (const auto &o : outcomes) reports.insert(reports.end(), o.reports.begin(), o.reports.end());
    write_reports(dir / "reports.csv", problem, ctx, reports);

    std::vector<SweepRow> rows;
    auto out = open_output(dir / "sweep.csv");
    out << "# schema: lla-sweep v1 (std = sample standard deviation over replicates)\n";
    write_rmetric_comment(out, problem, ctx);
    out << "gamma,source,r_igd_mean,r_igd_std,r_hv_mean,r_hv_std,vsd_mean,replicates\n";
    auto variances = open_output(dir / "sweep_variances.csv");
    variances << "# schema: lla-sweep-variances v1 (mean prediction variance per variable)\n";
    variances << "gamma";
    for (std::size_t j = 1; j <= problem.n(); ++j) variances << ",var_" << j;
    variances << '\n';

    for (double gamma : config.gammas) {
        for (const std::string source : {"population", "predictions"}) {
            std::vector<double> igd_v, hv_v, vsd_v;
            for (const auto &r : reports) {
                if (r.gamma != gamma || r.source != source) continue;
                if (r.r_igd) igd_v.push_back(*r.r_igd);
                if (r.r_hv) hv_v.push_back(*r.r_hv);
                vsd_v.push_back(r.vsd);
            }
            const auto igd_s = mean_std(igd_v);
            const auto hv_s = mean_std(hv_v);
            SweepRow row{gamma, source, igd_s.mean, igd_s.std, hv_s.mean, hv_s.std,
                         mean_std(vsd_v).mean, igd_s.count};
            out << format_double(gamma) << ',' << source << ',' << format_double(row.r_igd_mean) << ','
                << format_double(row.r_igd_std) << ',' << format_double(row.r_hv_mean) << ','
                << format_double(row.r_hv_std) << ',' << format_double(row.vsd_mean) << ','
                << row.defined << '\n';
            rows.push_back(row);
        }
        std::vector<double> mean_var(problem.n(), 0.0);
        std::size_t count = 0;
        for (const auto &r : reports) {
            if (r.gamma != gamma || r.source != "predictions") continue;
            for (std::size_t j = 0; j < mean_var.size(); ++j) mean_var[j] += r.variances[j];
            ++count;
        }
        variances << format_double(gamma);
        for (double v : mean_var) variances << ',' << format_double(v / static_cast<double>(count));
        variances << '\n';
    }
    return rows;
}

std::vector<Table1Row> cmd_table1(const ExperimentConfig &config) {
    config.validate();
    const fs::path dir = resolve_out(config, "table1");
    begin_command(dir, "table1", config);

    const double gamma = config.gammas.front();
    ExperimentConfig single = config;
    single.gammas = {gamma};

    std::vector<Table1Row> rows;
    auto all_reports = open_output(dir / "reports.csv");
    all_reports << kReportSchema << '\n';
    for (const auto &name : config.problems) {
        const MopDefinition problem = make_problem(name);
        const PreferenceVector anchor = config.anchor_for(problem);
        const RMetricContext ctx = context_for(problem, anchor, single);
        const auto outcomes =
            run_grid(problem, anchor, single, ctx, ReplicateOptions{true, config.compensation, false});

        Table1Row row;
        row.problem = problem.name();
        row.hv_ref = ctx.hv_ref;
        static const char *sources[3] = {"baseline", "population", "predictions"};
        write_rmetric_comment(all_reports, problem, ctx);
        for (int s = 0; s < 3; ++s) {
            std::vector<double> igd_v, hv_v;
            for (const auto &o : outcomes) {
                for (const auto &r : o.reports) {
                    if (r.source != sources[s]) continue;
                    if (r.r_igd) igd_v.push_back(*r.r_igd);
                    if (r.r_hv) hv_v.push_back(*r.r_hv);
                }
            }
            row.r_igd[s] = mean_std(igd_v).mean;
            row.r_hv[s] = mean_std(hv_v).mean;
        }
        write_report_header(all_reports, problem.n());
        for (const auto &o : outcomes) {
            for (const auto &r : o.reports) write_report_row(all_reports, r);
        }
        rows.push_back(row);
    }

    auto csv = open_output(dir / "table1.csv");
    csv << "# schema: lla-table1 v1 (means over replicates; hv_ref per problem)\n";
    csv << "problem,baseline_r_igd,baseline_r_hv,pop_r_igd,pop_r_hv,pred_r_igd,pred_r_hv,hv_ref\n";
    auto md = open_output(dir / "table1.md");
    md << "| Problem | MOEA/D-DE R-IGD | MOEA/D-DE R-HV | LLA Pop R-IGD | LLA Pop R-HV | LLA Pred R-IGD | LLA Pred R-HV |\n";
    md << "|---|---|---|---|---|---|---|\n";
    for (const auto &row : rows) {
        csv << row.problem;
        for (int s = 0; s < 3; ++s) csv << ',' << format_double(row.r_igd[s]) << ',' << format_double(row.r_hv[s]);
        csv << ',';
        for (std::size_t i = 0; i < row.hv_ref.size(); ++i) csv << (i ? " " : "") << format_double(row.hv_ref[i]);
        csv << '\n';

        const int best_igd = static_cast<int>(std::min_element(row.r_igd, row.r_igd + 3) - row.r_igd);
        const int best_hv = static_cast<int>(std::max_element(row.r_hv, row.r_hv + 3) - row.r_hv);
        auto cell = [](double v, bool bold) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.2e", v);
            return bold ? "**" + std::string(buf) + "**" : std::string(buf);
        };
        md << "| " << row.problem;
        for (int s = 0; s < 3; ++s) {
            md << " | " << cell(row.r_igd[s], s == best_igd) << " | " << cell(row.r_hv[s], s == best_hv);
        }
        md << " |\n";
    }
    md << "\nR-HV reference point per problem: z_worst + 0.1 (z_worst - z_utopian) of the analytic front.\n";
    return rows;
}

std::vector<ErrorCurveRow> cmd_error_curve(const ExperimentConfig &config) {
    config.validate();
    const MopDefinition problem = config.make_problem_definition();
    if (!has_subproblem_oracle(problem)) {
        throw UnsupportedProblemError("error-curve needs an analytic Pareto set; " + problem.name() +
                                      " has none");
    }
    const fs::path dir = resolve_out(config, "error-curve");
    const PreferenceVector anchor = config.anchor_for(problem);
    begin_command(dir, "error-curve", config);

    ExperimentConfig single = config;
    single.gammas = {config.gammas.front()};
    const RMetricContext ctx = context_for(problem, anchor, single);
    const auto outcomes =
        run_grid(problem, anchor, single, ctx, ReplicateOptions{true, config.compensation, true});

    const std::size_t generations = config.lla.generations;
    const std::size_t ratio = config.compensation ? 2 : 1;
    std::vector<ErrorCurveRow> rows(generations);
    for (std::size_t g = 0; g < generations; ++g) {
        ErrorCurveRow &row = rows[g];
        row.generation = g + 1;
        row.baseline_generation = (g + 1) * ratio;
        std::size_t pred_count = 0, base_count = 0;
        for (const auto &o : outcomes) {
            const auto &rec = o.lla.history.records[g];
            row.lla_evals = rec.eval_count;
            if (rec.mse) {
                row.prediction_mse += *rec.mse;
                ++pred_count;
            }
            if (o.baseline_mse_curve[g]) {
                row.baseline_mse += *o.baseline_mse_curve[g];
                ++base_count;
            }
        }
        row.prediction_mse /= static_cast<double>(std::max<std::size_t>(pred_count, 1));
        row.baseline_mse /= static_cast<double>(std::max<std::size_t>(base_count, 1));
    }
    auto out = open_output(dir / "error_curve.csv");
    out << "# schema: lla-error-curve v1 (means over " << config.replicates
        << " replicates; baseline sampled at equal evaluation budget)\n";
    out << "generation,lla_evals,prediction_mse,baseline_generation,baseline_mse\n";
    for (const auto &r : rows) {
        out << r.generation << ',' << r.lla_evals << ',' << format_double(r.prediction_mse) << ','
            << r.baseline_generation << ',' << format_double(r.baseline_mse) << '\n';
    }
    return rows;
}

std::vector<MetricReport> cmd_metrics(const ExperimentConfig &config) {
    const fs::path dir = resolve_out(config, "run");
    if (!fs::is_directory(dir)) throw IoError("no run directory at '" + dir.string() + "'");
    std::vector<fs::path> models;
    for (const auto &entry : fs::directory_iterator(dir)) {
        const auto name = entry.path().filename().string();
        if (name.rfind("model_", 0) == 0 && entry.path().extension() == ".txt") models.push_back(entry.path());
    }
    std::sort(models.begin(), models.end());
    if (models.empty()) throw IoError("no model files in '" + dir.string() + "'");

    std::vector<MetricReport> reports;
    std::optional<MopDefinition> last_problem;
    std::optional<RMetricContext> ctx;
    for (const auto &path : models) {
        auto in = open_input(path);
        const ModelDocument doc = read_model(in);
        const std::string tag = path.stem().string().substr(6);
        const MopDefinition problem = make_problem(doc.problem, doc.n);
        if (!last_problem || last_problem->name() != problem.name() || !ctx ||
            ctx->params.anchor != doc.model.anchor()) {
            ctx = context_for(problem, doc.model.anchor(), config);
            last_problem = problem;
        }

        auto prefs_in = open_input(dir / ("prefs_" + tag + ".csv"));
        const CsvTable prefs_table = read_numeric_csv(prefs_in);
        PreferenceSet prefs;
        prefs.anchor = doc.model.anchor();
        prefs.sigma2 = config.lla.sigma2;
        for (const auto &row : prefs_table.rows) prefs.members.push_back(PreferenceVector::from_stored(row));

        const SavedRun pop = read_population_csv(dir / ("population_" + tag + ".csv"), doc.n);
        const ReferencePoint z{pop.reference};
        reports.push_back(population_report(problem, "population", doc.gamma, doc.seed, pop.x, pop.f, prefs, z,
                                            config.lla.regression, *ctx));
        reports.push_back(prediction_report(problem, doc.gamma, doc.seed, doc.model, prefs,
                                            ReferencePoint{doc.reference}, *ctx));
        const fs::path base_path = dir / ("baseline_" + tag + ".csv");
        if (fs::exists(base_path)) {
            const SavedRun base = read_population_csv(base_path, doc.n);
            reports.push_back(population_report(problem, "baseline", doc.gamma, doc.seed, base.x, base.f,
                                                prefs, ReferencePoint{base.reference},
                                                config.lla.regression, *ctx));
        }
    }
    auto out = open_output(dir / "reports_recomputed.csv");
    out << kReportSchema << '\n';
    write_rmetric_comment(out, *last_problem, *ctx);
    write_report_header(out, last_problem->n());
    for (const auto &r : reports) write_report_row(out, r);
    return reports;
}

}  // namespace lla
