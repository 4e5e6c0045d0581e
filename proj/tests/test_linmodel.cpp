#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "lla/errors.hpp"
#include "lla/linmodel.hpp"
#include "oracles.hpp"

using namespace lla;

namespace {

PreferenceVector pv(std::vector<double> w) { return PreferenceVector::from_weights(std::move(w)); }

RegressionDataset random_dataset(std::mt19937_64 &rng, std::size_t m, std::size_t rows, std::size_t n) {
    std::gamma_distribution<double> expo(1.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto simplex = [&] {
        std::vector<double> w(m);
        double s = 0.0;
        for (double &v : w) s += (v = expo(rng));
        for (double &v : w) v /= s;
        return PreferenceVector::from_weights(w);
    };
    RegressionDataset d;
    d.anchor = simplex();
    for (std::size_t i = 0; i < rows; ++i) {
        d.prefs.push_back(simplex());
        DecisionVector x(n);
        for (double &v : x) v = unit(rng);
        d.solutions.push_back(x);
    }
    return d;
}

std::vector<std::vector<double>> offsets(const RegressionDataset &d) {
    std::vector<std::vector<double>> out;
    for (const auto &p : d.prefs) {
        std::vector<double> o;
        for (std::size_t c = 0; c + 1 < d.anchor.size(); ++c) o.push_back(p[c] - d.anchor[c]);
        out.push_back(o);
    }
    return out;
}

std::vector<double> column(const RegressionDataset &d, std::size_t j) {
    std::vector<double> out;
    for (const auto &x : d.solutions) out.push_back(x[j]);
    return out;
}

}  // namespace

TEST_CASE("predict examples") {
    const auto anchor = pv({0.5, 0.5});
    const LinearModel model({2.0, -1.0}, {0.5, 0.5}, anchor);
    const auto x = predict(model, pv({0.6, 0.4}));
    CHECK(x[0] == doctest::Approx(0.7).epsilon(1e-14));
    CHECK(x[1] == doctest::Approx(0.4).epsilon(1e-14));
    CHECK(predict(model, anchor) == model.b());
    const auto flat = LinearModel::constant({0.1, 0.2, 0.3}, anchor);
    CHECK(predict(flat, pv({0.9, 0.1})) == flat.b());
    CHECK_THROWS_AS(LinearModel({1.0}, {0.5, 0.5}, anchor), std::invalid_argument);
    CHECK_THROWS_AS(LinearModel({NAN, 0.0}, {0.5, 0.5}, anchor), NumericError);
}

TEST_CASE("vsd and row norms") {
    const auto a2 = pv({0.5, 0.5});
    CHECK(vsd(LinearModel::constant({1.0, 2.0}, a2)) == 0.0);
    CHECK(vsd(LinearModel({3.0, -4.0}, {0.0, 0.0}, a2)) == 7.0);
    const LinearModel m3({3.0, 4.0, 0.0, 0.0}, {0.0, 0.0}, PreferenceVector::uniform(3));
    CHECK(vsd(m3) == 5.0);
    const auto norms = row_norms(m3);
    CHECK(norms == std::vector<double>{5.0, 0.0});
    CHECK(shared_rows(m3) == std::vector<bool>{false, true});
    CHECK(shared_rows(LinearModel::constant({1.0, 2.0}, a2)) == std::vector<bool>{true, true});
}

TEST_CASE("predict is affine in the preference offset") {
    std::mt19937_64 rng(2);
    std::normal_distribution<double> normal;
    const auto anchor = pv({0.2, 0.3, 0.5});
    std::vector<double> a(8), b(4);
    for (double &v : a) v = normal(rng);
    for (double &v : b) v = normal(rng);
    const LinearModel model(a, b, anchor);
    const auto l1 = pv({0.3, 0.3, 0.4}), l2 = pv({0.1, 0.5, 0.4});
    const auto s = pv({0.3 + 0.1 - 0.2, 0.3 + 0.5 - 0.3, 1.0 - 0.2 - 0.5});
    const auto p1 = predict(model, l1), p2 = predict(model, l2), p0 = predict(model, anchor), ps = predict(model, s);
    for (std::size_t j = 0; j < 4; ++j) CHECK(std::abs(p1[j] + p2[j] - p0[j] - ps[j]) < 1e-12);
}

TEST_CASE("fit examples") {
    const auto anchor = pv({0.5, 0.5});
    RegressionDataset d{{pv({0.6, 0.4}), pv({0.4, 0.6})}, {{1.0}, {0.0}}, anchor};
    auto r = fit(d, FitOptions{0.1});
    CHECK(std::abs(r.model.a(0, 0)) < 1e-15);
    CHECK(r.model.b()[0] == doctest::Approx(0.5));

    // gamma = 0 on an exactly linear dataset recovers A and b.
    const LinearModel truth({1.5, -0.25, 0.0, 2.0, 0.75, -1.0}, {0.3, 0.6, 0.1}, PreferenceVector::uniform(3));
    RegressionDataset lin;
    lin.anchor = truth.anchor();
    for (const auto &w : std::vector<std::vector<double>>{{0.2, 0.3, 0.5}, {0.5, 0.2, 0.3}, {0.3, 0.4, 0.3}, {0.4, 0.4, 0.2}}) {
        lin.prefs.push_back(pv(w));
        lin.solutions.push_back(predict(truth, lin.prefs.back()));
    }
    r = fit(lin, FitOptions{0.0, 100000, 1e-14});
    for (std::size_t k = 0; k < truth.a_data().size(); ++k) CHECK(std::abs(r.model.a_data()[k] - truth.a_data()[k]) < 1e-8);
    for (std::size_t j = 0; j < 3; ++j) CHECK(std::abs(r.model.b()[j] - truth.b()[j]) < 1e-8);
    CHECK_FALSE(r.degenerate);

    // Above the largest zero threshold every row vanishes and b is the mean.
    const auto thresholds = zero_thresholds(lin);
    const double gmax = *std::max_element(thresholds.begin(), thresholds.end());
    r = fit(lin, FitOptions{gmax * 1.0001});
    CHECK(vsd(r.model) == 0.0);
    for (std::size_t j = 0; j < 3; ++j) {
        double mean = 0.0;
        for (const auto &x : lin.solutions) mean += x[j];
        CHECK(r.model.b()[j] == doctest::Approx(mean / 4.0).epsilon(1e-14));
    }

    CHECK_THROWS_AS(fit(lin, FitOptions{-1.0}), ConfigError);
}

TEST_CASE("degenerate design is flagged") {
    const auto anchor = pv({0.5, 0.5});
    RegressionDataset d{{pv({0.7, 0.3}), pv({0.7, 0.3}), pv({0.7, 0.3})}, {{0.1, 1.0}, {0.2, 2.0}, {0.6, 3.0}}, anchor};
    const auto r = fit(d, FitOptions{0.0});
    CHECK(r.degenerate);
    CHECK(vsd(r.model) == 0.0);
    CHECK(r.model.b()[0] == doctest::Approx(0.3));
    CHECK(r.model.b()[1] == doctest::Approx(2.0));
}

TEST_CASE("fit matches independent minimizers on random datasets") {
    std::mt19937_64 rng(1234);
    std::uniform_int_distribution<std::size_t> rows_d(2, 10), dims_d(1, 5);
    std::uniform_real_distribution<double> log_gamma(-4.0, 0.0);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t m = trial % 2 ? 3 : 2;
        const auto d = random_dataset(rng, m, rows_d(rng), dims_d(rng));
        const double gamma = std::pow(10.0, log_gamma(rng));
        const auto r = fit(d, FitOptions{gamma});
        const auto off = offsets(d);
        double oracle_total = 0.0;
        for (std::size_t j = 0; j < r.model.n(); ++j) {
            double amax = 0.0;
            for (double v : r.model.row(j)) amax = std::max(amax, std::abs(v));
            oracle_total += oracle::group_lasso_min(off, column(d, j), gamma, std::max(10.0, 4.0 * amax));
            if (m == 2) {
                std::vector<double> d1;
                for (const auto &o : off) d1.push_back(o[0]);
                CHECK(std::abs(r.model.a(j, 0) - oracle::soft_threshold_slope(d1, column(d, j), gamma)) < 1e-10);
            }
        }
        CHECK(std::abs(r.objective - oracle_total) < 1e-6);
        CHECK(r.objective == doctest::Approx(fit_objective(r.model, d, gamma)));
    }
}

TEST_CASE("zero rows grow monotonically with gamma") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 20; ++trial) {
        const auto d = random_dataset(rng, 2 + trial % 2, 8, 5);
        const auto thresholds = zero_thresholds(d);
        std::vector<bool> previous(5, false);
        for (int k = 0; k < 10; ++k) {
            const double gamma = 1e-3 * std::pow(2.0, k);
            const auto zero = shared_rows(fit(d, FitOptions{gamma}).model, 0.0);
            for (std::size_t j = 0; j < 5; ++j) {
                if (previous[j]) CHECK(zero[j]);
                CHECK(zero[j] == (thresholds[j] <= gamma));
            }
            previous = zero;
        }
    }
}

TEST_CASE("proximal iterations descend monotonically") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 30; ++trial) {
        const auto d = random_dataset(rng, 3, 9, 1);
        const auto off = offsets(d);
        const auto x = column(d, 0);
        double xbar = 0.0;
        for (double v : x) xbar += v;
        xbar /= static_cast<double>(x.size());
        double mean0 = 0.0, mean1 = 0.0;
        for (const auto &o : off) {
            mean0 += o[0];
            mean1 += o[1];
        }
        mean0 /= static_cast<double>(off.size());
        mean1 /= static_cast<double>(off.size());
        std::vector<double> gram(4, 0.0), c(2, 0.0);
        double sxx = 0.0;
        for (std::size_t i = 0; i < off.size(); ++i) {
            const double u[2] = {off[i][0] - mean0, off[i][1] - mean1};
            for (int p = 0; p < 2; ++p) {
                c[p] += u[p] * (x[i] - xbar);
                for (int q = 0; q < 2; ++q) gram[p * 2 + q] += u[p] * u[q];
            }
            sxx += (x[i] - xbar) * (x[i] - xbar);
        }
        const double tr = gram[0] + gram[3], det = gram[0] * gram[3] - gram[1] * gram[2];
        const double lmax = 0.5 * tr + std::sqrt(std::max(0.25 * tr * tr - det, 0.0));
        std::vector<double> a(2), trace;
        const double gamma = 1e-3;
        detail::solve_block(gram, c, lmax, off.size(), gamma, FitOptions{gamma}, a, &trace, sxx);
        double previous = detail::block_objective(gram, c, sxx, off.size(), gamma, std::vector<double>{0.0, 0.0});
        for (double v : trace) {
            CHECK(v <= previous + 1e-15);
            previous = v;
        }
    }
}

TEST_CASE("model sampling") {
    const auto p = make_problem("ZDT1", 5);
    const auto anchor = pv({0.5, 0.5});
    Rng rng = make_rng(3);
    const auto set = sample_preference_set(anchor, 0.02, 20, rng);
    const LinearModel wild({40.0, -40.0, 3.0, 0.0, 0.0}, {0.5, 0.5, 0.5, 0.5, 0.5}, anchor);
    Rng a = make_rng(9), b = make_rng(9);
    const auto s1 = sample_from_model(wild, set, 0.05, p, a);
    const auto s2 = sample_from_model(wild, set, 0.05, p, b);
    CHECK(s1 == s2);
    REQUIRE(s1.size() == 20);
    for (const auto &x : s1) CHECK(p.in_bounds(x));

    const auto flat = LinearModel::constant({1.5, 0.2, -0.3, 0.4, 0.5}, anchor);
    for (const auto &x : sample_from_model(flat, set, 1e-30, p, a)) {
        CHECK(x == DecisionVector{1.0, 0.2, 0.0, 0.4, 0.5});
    }
}

TEST_CASE("model document round trip is bit exact") {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> normal;
    std::vector<double> a(12), b(6);
    for (double &v : a) v = normal(rng) * 1e-7;
    for (double &v : b) v = normal(rng) / 3.0;
    const ModelDocument doc{LinearModel(a, b, pv({0.2, 0.3, 0.5})), "DTLZ2", 6, 1.0 / 3.0, 42, {0.1 / 3.0, -1e-6, 2.0}};
    std::stringstream ss;
    write_model(ss, doc);
    const auto back = read_model(ss);
    CHECK(back.model == doc.model);
    CHECK(back.problem == doc.problem);
    CHECK(back.n == 6);
    CHECK(back.gamma == doc.gamma);
    CHECK(back.seed == 42);
    CHECK(back.reference == doc.reference);

    std::stringstream bad("# lla-model v1\nproblem ZDT1\nbogus 1\n");
    CHECK_THROWS_AS(read_model(bad), IoError);
}
