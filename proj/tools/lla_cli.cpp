#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "lla/errors.hpp"
#include "lla/harness.hpp"

namespace {

struct Overrides {
    std::string config_path;
    std::vector<double> gammas;
    std::string problem;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> generations;
    std::optional<std::size_t> replicates;
    std::optional<std::size_t> jobs;
    std::string out;
};

void add_common(CLI::App *cmd, Overrides &o) {
    cmd->add_option("--config", o.config_path, "key = value configuration file");
    cmd->add_option("--gamma", o.gammas, "regularization weight(s)")->delimiter(',');
    cmd->add_option("--problem", o.problem, "ZDT1 ZDT2 ZDT4 ZDT6 DTLZ1-4 MOZDT1");
    cmd->add_option("--seed", o.seed, "first replicate seed");
    cmd->add_option("--generations", o.generations, "generations per run");
    cmd->add_option("--replicates", o.replicates, "number of seeds");
    cmd->add_option("--jobs", o.jobs, "worker threads");
    cmd->add_option("--out", o.out, "output directory");
}

lla::ExperimentConfig resolve(const Overrides &o) {
    lla::ExperimentConfig c;
    if (!o.config_path.empty()) c = lla::load_config(o.config_path, c);
    if (!o.gammas.empty()) c.gammas = o.gammas;
    if (!o.problem.empty()) {
        c.problem = o.problem;
        c.problems = {o.problem};
    }
    if (o.seed) c.seed_base = *o.seed;
    if (o.generations) c.lla.generations = *o.generations;
    if (o.replicates) c.replicates = *o.replicates;
    if (o.jobs) c.jobs = *o.jobs;
    if (!o.out.empty()) c.out_dir = o.out;
    return c;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"MOEA/D with a group-lasso linear model of the local Pareto set"};
    app.require_subcommand(1);
    Overrides o;
    auto *run = app.add_subcommand("run", "LLA replicates plus the budget-matched baseline");
    auto *sweep = app.add_subcommand("sweep", "R-metrics and sharing degree across gamma values");
    auto *table1 = app.add_subcommand("table1", "baseline vs LLA population vs LLA predictions");
    auto *curve = app.add_subcommand("error-curve", "prediction vs baseline MSE per generation");
    auto *metrics = app.add_subcommand("metrics", "recompute reports from a run directory");
    for (auto *cmd : {run, sweep, table1, curve, metrics}) add_common(cmd, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        const lla::ExperimentConfig config = resolve(o);
        if (*run) {
            const auto summary = lla::cmd_run(config);
            for (const auto &out : summary.outcomes) {
                for (const auto &r : out.reports) {
                    std::printf("%s gamma=%g seed=%llu %-11s R-IGD=%s R-HV=%s vsd=%.4g\n", r.problem.c_str(),
                                r.gamma, static_cast<unsigned long long>(r.seed), r.source.c_str(),
                                r.r_igd ? std::to_string(*r.r_igd).c_str() : "undefined",
                                r.r_hv ? std::to_string(*r.r_hv).c_str() : "undefined", r.vsd);
                }
            }
        } else if (*sweep) {
            for (const auto &r : lla::cmd_sweep(config)) {
                std::printf("gamma=%-8g %-11s R-IGD=%.4e+-%.2e R-HV=%.4e+-%.2e vsd=%.4g\n", r.gamma,
                            r.source.c_str(), r.r_igd_mean, r.r_igd_std, r.r_hv_mean, r.r_hv_std, r.vsd_mean);
            }
        } else if (*table1) {
            std::printf("%-8s %12s %12s %12s %12s %12s %12s\n", "problem", "base R-IGD", "base R-HV",
                        "pop R-IGD", "pop R-HV", "pred R-IGD", "pred R-HV");
            for (const auto &r : lla::cmd_table1(config)) {
                std::printf("%-8s %12.4e %12.4e %12.4e %12.4e %12.4e %12.4e\n", r.problem.c_str(), r.r_igd[0],
                            r.r_hv[0], r.r_igd[1], r.r_hv[1], r.r_igd[2], r.r_hv[2]);
            }
        } else if (*curve) {
            const auto rows = lla::cmd_error_curve(config);
            for (const auto &r : rows) {
                if (r.generation % 25 == 0 || r.generation == 1) {
                    std::printf("gen %4zu evals %7zu prediction MSE %.4e baseline MSE %.4e\n", r.generation,
                                r.lla_evals, r.prediction_mse, r.baseline_mse);
                }
            }
        } else if (*metrics) {
            std::printf("recomputed %zu reports\n", lla::cmd_metrics(config).size());
        }
    } catch (const lla::IoError &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const lla::ConfigError &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const lla::UnsupportedProblemError &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 0;
}
