#pragma once

#include "hospsim/param_space.hpp"
#include "hospsim/random.hpp"

#include <cstdint>
#include <set>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Cholesky>

namespace hospsim {

/// Training data for the surrogate families: inputs normalized to [0,1] per
/// column, one response per row. param_indices names the original 1-based
/// parameter behind each column (empty for abstract test designs).
struct Design {
    Eigen::MatrixXd X;
    Eigen::VectorXd y;
    std::vector<int> param_indices;

    int n() const { return static_cast<int>(X.rows()); }
    int d() const { return static_cast<int>(X.cols()); }
};

/// Normalizes raw vectors over the space's bounds, keeping only dimensions
/// outside `mask` (ascending index order).
Design make_design(const std::vector<ParamVector>& xs, const std::vector<double>& ys,
                   const ParamSpace& space, const std::set<int>& mask = {});

// ---------------------------------------------------------------------------
// Kriging (Gaussian-process regression)
// ---------------------------------------------------------------------------

/// Anisotropic squared-exponential kernel with constant trend:
///   R_ij = exp(-sum_k theta_k (x_ik - x_jk)^2) + lambda [i == j].
/// theta and lambda are chosen by maximizing the concentrated log-likelihood
/// with a multi-start compass search in log space.
struct KrigingConfig {
    double theta_lo = 1e-2;
    double theta_hi = 1e3;
    bool estimate_nugget = true;
    double fixed_nugget = 0.0; // used when estimate_nugget is false
    double nugget_lo = 1e-8;
    double nugget_hi = 1.0;
    int restarts = 10;
    int pattern_iters = 40;
};

class KrigingModel {
public:
    struct Prediction {
        double mean = 0.0;
        double sd = 0.0;
    };

    [[nodiscard]] static KrigingModel fit(const Design& design, const KrigingConfig& cfg, RngStream& rng);

    Prediction predict(const Eigen::VectorXd& x) const;
    /// Per-dimension activity; doubles as the importance signal.
    const Eigen::VectorXd& theta() const { return theta_; }
    double nugget() const { return lambda_; }
    /// True when the response was constant and the model degenerated to its
    /// mean with zero activity.
    bool is_constant() const { return constant_; }
    double process_variance() const { return sigma2_ * y_sd_ * y_sd_; }
    int dims() const { return static_cast<int>(theta_.size()); }

    const Design& training() const { return design_; }

    /// Rebuilds a model from stored (design, theta, lambda); refactorizes.
    static KrigingModel restore(Design design, Eigen::VectorXd theta, double lambda);

private:
    void factorize();

    Design design_;
    Eigen::VectorXd theta_;
    double lambda_ = 0.0;
    bool constant_ = false;

    // Fitted internals on the standardized-y scale.
    double y_mean_ = 0.0;
    double y_sd_ = 1.0;
    double mu_ = 0.0;
    double sigma2_ = 0.0;
    Eigen::VectorXd alpha_; // R^{-1} (y_std - mu 1)
    Eigen::MatrixXd chol_L_;
};

/// Expected improvement for minimization: (best - m) Phi(z) + s phi(z) with
/// z = (best - m)/s; for s = 0 this is max(0, best - m). Never negative.
double expected_improvement(double mean, double sd, double best_observed);
double expected_improvement(const KrigingModel& model, const Eigen::VectorXd& x,
                            double best_observed);

/// Standard normal CDF and density (shared by EI and the rank tests).
double normal_cdf(double z);
double normal_pdf(double z);

// ---------------------------------------------------------------------------
// Linear main-effects model
// ---------------------------------------------------------------------------

struct LinearModel {
    double intercept = 0.0;       // response mean
    Eigen::VectorXd beta;         // coefficients on standardized inputs
    Eigen::VectorXd col_mean;
    Eigen::VectorXd col_sd;
    double residual_sd = 0.0;

    [[nodiscard]] static LinearModel fit(const Design& design);
    double predict(const Eigen::VectorXd& x) const;
};

// ---------------------------------------------------------------------------
// Random-forest regression
// ---------------------------------------------------------------------------

struct ForestConfig {
    int trees = 500;
    int min_leaf = 5;
    int mtry = 0; // 0 picks ceil(d/3)
};

class ForestModel {
public:
    struct Node {
        int feature = -1; // -1 marks a leaf
        double threshold = 0.0;
        int left = -1;
        int right = -1;
        double value = 0.0;
    };
    struct Tree {
        std::vector<Node> nodes;
    };

    [[nodiscard]] static ForestModel fit(const Design& design, const ForestConfig& cfg, std::uint64_t seed);

    double predict(const Eigen::VectorXd& x) const;
    /// Out-of-bag permutation importance (mean OOB-MSE increase per tree);
    /// entries may be negative, only the ordering feeds downstream.
    const Eigen::VectorXd& importance_scores() const { return importance_; }
    /// MSE of the aggregated out-of-bag predictions.
    double oob_mse() const { return oob_mse_; }
    const std::vector<Tree>& trees() const { return trees_; }
    const ForestConfig& config() const { return cfg_; }
    std::uint64_t seed() const { return seed_; }
    int dims() const { return dims_; }
    const Design& training() const { return design_; }

private:
    std::vector<Tree> trees_;
    Eigen::VectorXd importance_;
    double oob_mse_ = 0.0;
    ForestConfig cfg_{};
    std::uint64_t seed_ = 0;
    int dims_ = 0;
    Design design_;
};

// ---------------------------------------------------------------------------
// Importance and ranking
// ---------------------------------------------------------------------------

std::vector<double> importance(const KrigingModel& model); // theta_i
std::vector<double> importance(const LinearModel& model);  // |beta_i|
std::vector<double> importance(const ForestModel& model);  // OOB permutation

/// Column indices (1-based) sorted from most to least important; ties are
/// broken by ascending index. Always a permutation of 1..d.
std::vector<int> rank_parameters(const std::vector<double>& scores);

} // namespace hospsim
