#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include "lla/errors.hpp"
#include "lla/harness.hpp"

using namespace lla;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string &name) {
    const fs::path dir = fs::temp_directory_path() / ("lla_harness_test_" + name);
    fs::remove_all(dir);
    return dir;
}

ExperimentConfig tiny(const fs::path &out) {
    ExperimentConfig c;
    c.problem = "ZDT1";
    c.n = 8;
    c.lla.population = 20;
    c.lla.generations = 8;
    c.lla.moead.neighborhood_size = 5;
    c.replicates = 2;
    c.out_dir = out;
    return c;
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("config parsing") {
    std::istringstream text(
        "# comment\n"
        "problem = DTLZ2\n"
        "n = 8\n"
        "lambda0 = 0.2, 0.3, 0.5\n"
        "gamma = 1e-4, 5e-2\n"
        "replicates = 3   # trailing comment\n"
        "seed = 40\n"
        "compensation = false\n"
        "delta_mode = variance\n"
        "mutation_prob = 0.2\n");
    const auto c = parse_config(text);
    CHECK(c.problem == "DTLZ2");
    CHECK(c.n == 8u);
    CHECK(c.lambda0 == std::vector<double>{0.2, 0.3, 0.5});
    CHECK(c.gammas == std::vector<double>{1e-4, 5e-2});
    CHECK(c.replicates == 3);
    CHECK(c.seed_base == 40);
    CHECK_FALSE(c.compensation);
    CHECK(c.delta_mode == DeltaMode::Variance);
    CHECK(c.lla.moead.mutation_prob == 0.2);
    CHECK_NOTHROW(c.validate());

    std::stringstream round;
    write_config(round, c);
    const auto again = parse_config(round);
    CHECK(again.gammas == c.gammas);
    CHECK(again.lambda0 == c.lambda0);
    CHECK(again.lla.moead.mutation_prob == c.lla.moead.mutation_prob);
}

TEST_CASE("config errors name the key") {
    auto message = [](const std::string &line) {
        std::istringstream in(line);
        try {
            parse_config(in).validate();
        } catch (const ConfigError &e) {
            return std::string(e.what());
        }
        return std::string("no error");
    };
    CHECK(message("gamma = abc\n").find("gamma") != std::string::npos);
    CHECK(message("replicates = -1\n").find("replicates") != std::string::npos);
    CHECK(message("replicates = 0\n").find("replicates") != std::string::npos);
    CHECK(message("colour = red\n").find("colour") != std::string::npos);
    CHECK(message("lambda0 = 0.5, 0.6\n").find("lambda0") != std::string::npos);
    CHECK(message("lambda0 = 0.5, 0.5, 0.0\n").find("lambda0") != std::string::npos);
    CHECK(message("problem = ZDT9\n").find("ZDT9") != std::string::npos);
    CHECK(message("baseline = maybe\n").find("baseline") != std::string::npos);
    CHECK(message("gamma = -1\n").find("gamma") != std::string::npos);
}

TEST_CASE("numeric csv round trip") {
    CsvTable t;
    t.comments = {"# schema: test v1"};
    t.header = {"a", "b"};
    t.rows = {{0.1, 1.0 / 3.0}, {-2.5e-300, 1e300}};
    std::stringstream ss;
    write_numeric_csv(ss, t);
    const auto back = read_numeric_csv(ss);
    CHECK(back.comments == t.comments);
    CHECK(back.header == t.header);
    CHECK(back.rows == t.rows);
}

TEST_CASE("run writes the documented artifacts") {
    const auto dir = scratch("run");
    const auto summary = cmd_run(tiny(dir));
    REQUIRE(summary.outcomes.size() == 2);
    for (const char *f : {"reports.csv", "budget.csv", "config.txt", "run_metadata.txt", "model_ZDT1_g0.001_s1.txt",
                          "population_ZDT1_g0.001_s2.csv", "history_ZDT1_g0.001_s1.csv", "prefs_ZDT1_g0.001_s1.csv",
                          "baseline_ZDT1_g0.001_s2.csv"}) {
        CHECK_MESSAGE(fs::exists(dir / f), f);
    }
    std::ifstream in(dir / "reports.csv");
    const auto reports = read_reports(in);
    CHECK(reports.size() == 6);
    for (const auto &o : summary.outcomes) {
        const auto lla_evals = o.lla.population.eval_count;
        REQUIRE(o.baseline.has_value());
        CHECK(lla_evals - o.baseline->eval_count <= 20);
        CHECK(lla_evals == 20 + 2 * 8 * 20);
    }

    const auto recomputed = cmd_metrics(tiny(dir));
    REQUIRE(recomputed.size() == reports.size());
    for (const auto &r : recomputed) {
        bool found = false;
        for (const auto &q : reports) found = found || q == r;
        CHECK_MESSAGE(found, r.source << " seed " << r.seed);
    }
}

TEST_CASE("reruns are byte identical") {
    const auto a = scratch("det_a"), b = scratch("det_b");
    auto ca = tiny(a), cb = tiny(b);
    ca.jobs = 1;
    cb.jobs = 2;
    cmd_run(ca);
    cmd_run(cb);
    std::size_t compared = 0;
    for (const auto &entry : fs::directory_iterator(a)) {
        const auto name = entry.path().filename();
        if (name == "run_metadata.txt" || name == "config.txt") continue;
        CHECK_MESSAGE(slurp(entry.path()) == slurp(b / name), name.string());
        ++compared;
    }
    CHECK(compared >= 10);
}

TEST_CASE("sweep and curves") {
    auto c = tiny(scratch("sweep"));
    CHECK_THROWS_AS(cmd_sweep(c), ConfigError);
    c.gammas = {1e-4, 5.0};
    const auto rows = cmd_sweep(c);
    CHECK(rows.size() == 4);
    CHECK(fs::exists(c.out_dir / "sweep.csv"));
    CHECK(fs::exists(c.out_dir / "sweep_variances.csv"));

    auto e = tiny(scratch("curve"));
    const auto curve = cmd_error_curve(e);
    CHECK(curve.size() == 8);
    CHECK(curve.back().baseline_generation == 16);
    e.problem = "DTLZ4";
    e.n.reset();
    CHECK_THROWS_AS(cmd_error_curve(e), UnsupportedProblemError);
}

TEST_CASE("table1 shape") {
    auto c = tiny(scratch("table1"));
    c.n.reset();
    c.lla.generations = 3;
    c.replicates = 1;
    c.problems = {"ZDT1", "DTLZ2"};
    const auto rows = cmd_table1(c);
    REQUIRE(rows.size() == 2);
    CHECK(rows[1].hv_ref.size() == 3);
    const auto md = slurp(c.out_dir / "table1.md");
    CHECK(md.find("**") != std::string::npos);
    CHECK(md.find("DTLZ2") != std::string::npos);
}

TEST_CASE("unwritable output is an I/O error") {
    const auto blocker = scratch("blocker");
    std::ofstream(blocker) << "file, not a directory";
    auto c = tiny(blocker / "sub");
    CHECK_THROWS_AS(cmd_run(c), IoError);
    fs::remove(blocker);
    CHECK_THROWS_AS(load_config("/nonexistent/lla.cfg"), IoError);
}

TEST_CASE("parallel_for covers every index once") {
    std::vector<int> hits(100, 0);
    parallel_for(100, 4, [&](std::size_t i) { hits[i] += 1; });
    for (int h : hits) CHECK(h == 1);
    CHECK_THROWS_AS(parallel_for(10, 3, [](std::size_t i) {
                        if (i == 7) throw std::runtime_error("boom");
                    }),
                    std::runtime_error);
}
