#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "lla/preference.hpp"
#include "lla/problems.hpp"
#include "lla/types.hpp"

namespace lla {

/// Local Pareto-set model h(lambda) = A (lambda_{1:m-1} - anchor_{1:m-1}) + b.
///
/// `a` is row-major with n rows and m-1 columns; row j drives decision
/// variable j. A row of zeros means variable j is shared by every prediction.
class LinearModel {
public:
    LinearModel() = default;
    LinearModel(std::vector<double> a, std::vector<double> b, PreferenceVector anchor);

    /// A = 0 with the given bias.
    static LinearModel constant(std::vector<double> b, PreferenceVector anchor);

    std::size_t n() const noexcept { return b_.size(); }
    std::size_t cols() const noexcept { return anchor_.size() - 1; }
    double a(std::size_t row, std::size_t col) const { return a_[row * cols() + col]; }
    std::span<const double> row(std::size_t j) const { return {a_.data() + j * cols(), cols()}; }
    const std::vector<double> &a_data() const noexcept { return a_; }
    const std::vector<double> &b() const noexcept { return b_; }
    const PreferenceVector &anchor() const noexcept { return anchor_; }

    friend bool operator==(const LinearModel &, const LinearModel &) = default;

private:
    std::vector<double> a_;
    std::vector<double> b_;
    PreferenceVector anchor_;
};

/// Unclamped prediction.
DecisionVector predict(const LinearModel &model, const PreferenceVector &lambda);

/// Euclidean norm of each row of A.
std::vector<double> row_norms(const LinearModel &model);

/// Rows whose norm is at most `threshold` count as shared variables.
std::vector<bool> shared_rows(const LinearModel &model, double threshold = 1e-10);

/// Variable sharing degree: the (2,1)-norm of A.
double vsd(const LinearModel &model);

struct RegressionDataset {
    std::vector<PreferenceVector> prefs;
    std::vector<DecisionVector> solutions;
    PreferenceVector anchor;
};

struct FitOptions {
    double gamma = 0.0;
    std::size_t max_iters = 10000;
    double tol = 1e-10;
};

struct FitResult {
    LinearModel model;
    /// Value of (1/N) sum ||x - h(lambda)||^2 + gamma ||A||_{2,1} at the returned model.
    double objective = 0.0;
    /// All preference offsets identical: A forced to 0, b = column means.
    bool degenerate = false;
    /// Largest proximal iteration count over dimensions (0 for m = 2).
    std::size_t iterations = 0;
};

/// Group-lasso fit of the model to (lambda^i, x^i) pairs, one independent
/// sub-problem per decision variable. The bias is eliminated by centering;
/// m = 2 uses the exact soft-threshold, m = 3 proximal gradient with step 1/L.
FitResult fit(const RegressionDataset &data, const FitOptions &options);

/// Loss of `model` on `data`, evaluated directly.
double fit_objective(const LinearModel &model, const RegressionDataset &data, double gamma);

/// Per-dimension zero threshold ||(2/N) D_c' x_c||: row j is zero iff gamma >= it.
std::vector<double> zero_thresholds(const RegressionDataset &data);

/// Model-based candidates: perturb each preference, predict, clamp to bounds.
std::vector<DecisionVector> sample_from_model(const LinearModel &model, const PreferenceSet &prefs,
                                              double sigma2_noise, const MopDefinition &problem,
                                              Rng &rng);

/// Same as sample_from_model but with the perturbed preferences already drawn.
std::vector<DecisionVector> predict_clamped(const LinearModel &model,
                                            const std::vector<PreferenceVector> &prefs,
                                            const MopDefinition &problem);

namespace detail {

/// Per-dimension loss (1/N)(sxx - 2 a'c + a'G a) + gamma ||a|| on centered data.
double block_objective(std::span<const double> gram, std::span<const double> c, double sxx,
                       std::size_t n_samples, double gamma, std::span<const double> a);

/// Solves one group-lasso block in place. `lmax` is the largest eigenvalue of
/// `gram`. When `trace` is set, the objective after every proximal step is
/// appended. Returns the number of proximal steps taken.
std::size_t solve_block(std::span<const double> gram, std::span<const double> c, double lmax,
                        std::size_t n_samples, double gamma, const FitOptions &options,
                        std::span<double> a, std::vector<double> *trace, double sxx);

}  // namespace detail

/// Text document holding a fitted model plus run metadata.
struct ModelDocument {
    LinearModel model;
    std::string problem;
    std::size_t n = 0;
    double gamma = 0.0;
    std::uint64_t seed = 0;
    std::vector<double> reference;  // final z of the run, may be empty
};

/// Writes 17-significant-digit decimals; read_model reproduces every value bit-exactly.
void write_model(std::ostream &out, const ModelDocument &doc);
ModelDocument read_model(std::istream &in);

}  // namespace lla
