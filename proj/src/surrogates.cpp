#include "hospsim/surrogates.hpp"

#include "hospsim/errors.hpp"
#include "hospsim/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <Eigen/QR>

namespace hospsim {

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014327;
constexpr double kTinySd = 1e-15;

std::string column_label(const Design& design, int col) {
    if (!design.param_indices.empty())
        return "x" + std::to_string(design.param_indices[static_cast<size_t>(col)]);
    return "column " + std::to_string(col + 1);
}

void check_design(const Design& design) {
    if (design.n() < 1) throw ConfigError("design is empty");
    if (design.d() < 1) throw ConfigError("design has no input dimensions");
    if (design.y.size() != design.X.rows())
        throw ConfigError("design: response length does not match row count");
    if (!design.param_indices.empty() &&
        static_cast<int>(design.param_indices.size()) != design.d())
        throw ConfigError("design: param_indices length does not match column count");
}

struct Likelihood {
    const Design& design;
    std::vector<Eigen::MatrixXd> dist2; // per-dimension squared distances
    Eigen::VectorXd y_std;
    bool estimate_nugget = false;
    double fixed_nugget = 0.0;

    Likelihood(const Design& d, const Eigen::VectorXd& ys, bool est, double fixed)
        : design(d), y_std(ys), estimate_nugget(est), fixed_nugget(fixed) {
        const int n = design.n();
        dist2.reserve(static_cast<size_t>(design.d()));
        for (int k = 0; k < design.d(); ++k) {
            Eigen::MatrixXd D(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    const double diff = design.X(i, k) - design.X(j, k);
                    D(i, j) = diff * diff;
                }
            dist2.push_back(std::move(D));
        }
    }

    Eigen::MatrixXd correlation(const Eigen::VectorXd& theta, double lambda) const {
        const int n = design.n();
        Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
        for (int k = 0; k < design.d(); ++k) M.noalias() += theta[k] * dist2[static_cast<size_t>(k)];
        Eigen::MatrixXd R = (-M.array()).exp().matrix();
        R.diagonal().array() += lambda;
        return R;
    }

    void split(const Eigen::VectorXd& log10_params, Eigen::VectorXd& theta, double& lambda) const {
        theta = Eigen::VectorXd(design.d());
        for (int k = 0; k < design.d(); ++k)
            theta[k] = std::pow(10.0, log10_params[k]);
        lambda = estimate_nugget ? std::pow(10.0, log10_params[design.d()]) : fixed_nugget;
    }

    // Concentrated negative log-likelihood: n log sigma^2 + log det R.
    double operator()(const Eigen::VectorXd& log10_params) const {
        Eigen::VectorXd theta;
        double lambda = 0.0;
        split(log10_params, theta, lambda);
        const int n = design.n();
        Eigen::MatrixXd R = correlation(theta, lambda);
        Eigen::LLT<Eigen::MatrixXd> llt;
        double jitter = 0.0;
        for (int attempt = 0; attempt < 5; ++attempt) {
            Eigen::MatrixXd Rj = R;
            if (jitter > 0.0) Rj.diagonal().array() += jitter;
            llt.compute(Rj);
            if (llt.info() == Eigen::Success) break;
            jitter = jitter == 0.0 ? 1e-12 : jitter * 100.0;
        }
        if (llt.info() != Eigen::Success) return std::numeric_limits<double>::infinity();

        const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
        const Eigen::VectorXd a = llt.solve(ones);
        const double denom = a.sum();
        if (!(std::abs(denom) > 0.0)) return std::numeric_limits<double>::infinity();
        const double mu = a.dot(y_std) / denom;
        const Eigen::VectorXd resid = y_std - mu * ones;
        const Eigen::VectorXd c = llt.solve(resid);
        const double sigma2 = std::max(resid.dot(c) / n, 1e-300);
        double logdet = 0.0;
        const auto& L = llt.matrixLLT();
        for (int i = 0; i < n; ++i) logdet += 2.0 * std::log(L(i, i));
        const double nll = n * std::log(sigma2) + logdet;
        return std::isfinite(nll) ? nll : std::numeric_limits<double>::infinity();
    }
};

} // namespace

Design make_design(const std::vector<ParamVector>& xs, const std::vector<double>& ys,
                   const ParamSpace& space, const std::set<int>& mask) {
    if (xs.size() != ys.size())
        throw ConfigError("design: input and response counts differ");
    if (xs.empty()) throw ConfigError("design is empty");
    std::vector<int> cols;
    for (const ParamDef& def : space.entries())
        if (!mask.count(def.index)) cols.push_back(def.index);
    if (cols.empty()) throw ConfigError("design: mask leaves no free dimensions");

    Design design;
    design.param_indices = cols;
    design.X.resize(static_cast<Eigen::Index>(xs.size()), static_cast<Eigen::Index>(cols.size()));
    design.y.resize(static_cast<Eigen::Index>(ys.size()));
    for (size_t i = 0; i < xs.size(); ++i) {
        for (size_t j = 0; j < cols.size(); ++j) {
            const ParamDef& def = space.def(cols[j]);
            const double span = def.upper - def.lower;
            const double v = xs[i].at(cols[j]);
            design.X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                span > 0.0 ? (v - def.lower) / span : 0.5;
        }
        design.y[static_cast<Eigen::Index>(i)] = ys[i];
    }
    return design;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }
double normal_pdf(double z) { return kInvSqrt2Pi * std::exp(-0.5 * z * z); }

KrigingModel KrigingModel::fit(const Design& design, const KrigingConfig& cfg, RngStream& rng) {
    check_design(design);
    if (cfg.theta_lo <= 0.0 || cfg.theta_hi < cfg.theta_lo)
        throw ConfigError("kriging: invalid theta bounds");
    if (!cfg.estimate_nugget && cfg.fixed_nugget == 0.0) {
        for (int i = 0; i < design.n(); ++i)
            for (int j = i + 1; j < design.n(); ++j)
                if ((design.X.row(i) - design.X.row(j)).cwiseAbs().maxCoeff() < 1e-12)
                    throw ConfigError("kriging: duplicate design rows " + std::to_string(i + 1) +
                                      " and " + std::to_string(j + 1) + " with zero nugget");
    }

    KrigingModel model;
    model.design_ = design;
    model.y_mean_ = design.y.mean();
    const double var =
        (design.y.array() - model.y_mean_).square().sum() / std::max(design.n(), 1);
    model.y_sd_ = std::sqrt(var);

    if (model.y_sd_ < kTinySd) {
        model.constant_ = true;
        model.theta_ = Eigen::VectorXd::Zero(design.d());
        model.lambda_ = cfg.estimate_nugget ? cfg.nugget_lo : cfg.fixed_nugget;
        model.y_sd_ = 1.0;
        model.mu_ = 0.0;
        model.sigma2_ = 0.0;
        return model;
    }

    const Eigen::VectorXd y_std = (design.y.array() - model.y_mean_) / model.y_sd_;
    const Likelihood nll(design, y_std, cfg.estimate_nugget, cfg.fixed_nugget);

    const int dims = design.d() + (cfg.estimate_nugget ? 1 : 0);
    Eigen::VectorXd lo(dims), hi(dims);
    for (int k = 0; k < design.d(); ++k) {
        lo[k] = std::log10(cfg.theta_lo);
        hi[k] = std::log10(cfg.theta_hi);
    }
    if (cfg.estimate_nugget) {
        lo[design.d()] = std::log10(cfg.nugget_lo);
        hi[design.d()] = std::log10(cfg.nugget_hi);
    }

    // Starting thetas are scaled so the average correlation exponent across the
    // design is near one. A naive midpoint start drives R to the identity in
    // high dimension and the likelihood goes flat.
    Eigen::VectorXd center(dims);
    for (int k = 0; k < design.d(); ++k) {
        double mean_d2 = 0.0;
        int pairs = 0;
        for (int i = 0; i < design.n(); ++i)
            for (int j = i + 1; j < design.n(); ++j) {
                mean_d2 += nll.dist2[static_cast<size_t>(k)](i, j);
                ++pairs;
            }
        mean_d2 = pairs > 0 ? mean_d2 / pairs : 0.0;
        if (mean_d2 <= 0.0) mean_d2 = 1.0 / 6.0;
        center[k] = std::clamp(std::log10(1.0 / (design.d() * mean_d2)), lo[k], hi[k]);
    }
    if (cfg.estimate_nugget)
        center[design.d()] = std::clamp(std::log10(1e-4), lo[design.d()], hi[design.d()]);

    // Extra search direction: scale every theta together. Individual
    // coordinate moves barely change the likelihood when d is large.
    std::vector<Eigen::VectorXd> extra_dirs;
    {
        Eigen::VectorXd all_theta = Eigen::VectorXd::Zero(dims);
        for (int k = 0; k < design.d(); ++k) all_theta[k] = 1.0;
        extra_dirs.push_back(std::move(all_theta));
    }

    Eigen::VectorXd best_point;
    double best_value = std::numeric_limits<double>::infinity();
    const int restarts = std::max(cfg.restarts, 1);
    for (int r = 0; r < restarts; ++r) {
        Eigen::VectorXd point = center;
        if (r > 0) {
            // Coherent restarts: one joint magnitude shift plus per-dim jitter,
            // so random starts stay in the responsive likelihood region.
            const double shift = rng.uniform(-1.5, 1.5);
            for (int k = 0; k < design.d(); ++k)
                point[k] = std::clamp(center[k] + shift + rng.uniform(-0.75, 0.75), lo[k], hi[k]);
            if (cfg.estimate_nugget)
                point[design.d()] = rng.uniform(lo[design.d()], hi[design.d()]);
        }
        double value = nll(point);
        compass_minimize(nll, point, value, lo, hi, cfg.pattern_iters, extra_dirs);
        if (value < best_value) {
            best_value = value;
            best_point = point;
        }
    }
    if (!std::isfinite(best_value))
        throw SimulationError("kriging: likelihood search found no factorizable model");

    nll.split(best_point, model.theta_, model.lambda_);
    model.factorize();
    return model;
}

KrigingModel KrigingModel::restore(Design design, Eigen::VectorXd theta, double lambda) {
    check_design(design);
    if (theta.size() != design.d())
        throw ConfigError("kriging: theta length does not match design dimensions");
    KrigingModel model;
    model.design_ = std::move(design);
    model.theta_ = std::move(theta);
    model.lambda_ = lambda;
    model.y_mean_ = model.design_.y.mean();
    const double var = (model.design_.y.array() - model.y_mean_).square().sum() /
                       std::max(model.design_.n(), 1);
    model.y_sd_ = std::sqrt(var);
    if (model.y_sd_ < kTinySd) {
        model.constant_ = true;
        model.y_sd_ = 1.0;
        model.mu_ = 0.0;
        model.sigma2_ = 0.0;
        return model;
    }
    model.factorize();
    return model;
}

void KrigingModel::factorize() {
    const int n = design_.n();
    const Eigen::VectorXd y_std = (design_.y.array() - y_mean_) / y_sd_;
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
    for (int k = 0; k < design_.d(); ++k) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const double diff = design_.X(i, k) - design_.X(j, k);
                M(i, j) += theta_[k] * diff * diff;
            }
    }
    Eigen::MatrixXd R = (-M.array()).exp().matrix();
    R.diagonal().array() += lambda_;

    Eigen::LLT<Eigen::MatrixXd> llt;
    double jitter = 0.0;
    for (int attempt = 0; attempt < 5; ++attempt) {
        Eigen::MatrixXd Rj = R;
        if (jitter > 0.0) Rj.diagonal().array() += jitter;
        llt.compute(Rj);
        if (llt.info() == Eigen::Success) break;
        jitter = jitter == 0.0 ? 1e-12 : jitter * 100.0;
    }
    if (llt.info() != Eigen::Success)
        throw SimulationError("kriging: correlation matrix is not positive definite");

    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
    const Eigen::VectorXd a = llt.solve(ones);
    mu_ = a.dot(y_std) / a.sum();
    const Eigen::VectorXd resid = y_std - mu_ * ones;
    alpha_ = llt.solve(resid);
    sigma2_ = std::max(resid.dot(alpha_) / n, 0.0);
    chol_L_ = llt.matrixL();
}

KrigingModel::Prediction KrigingModel::predict(const Eigen::VectorXd& x) const {
    if (x.size() != theta_.size())
        throw ConfigError("kriging predict: point dimension mismatch");
    if (constant_) return {y_mean_, 0.0};

    const int n = design_.n();
    Eigen::VectorXd r(n);
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int k = 0; k < design_.d(); ++k) {
            const double diff = x[k] - design_.X(i, k);
            acc += theta_[k] * diff * diff;
        }
        r[i] = std::exp(-acc);
    }
    const double mean_std = mu_ + r.dot(alpha_);
    const Eigen::VectorXd w = chol_L_.triangularView<Eigen::Lower>().solve(r);
    const double s2 = std::max(sigma2_ * (1.0 + lambda_ - w.squaredNorm()), 0.0);
    return {y_mean_ + y_sd_ * mean_std, y_sd_ * std::sqrt(s2)};
}

double expected_improvement(double mean, double sd, double best_observed) {
    const double gap = best_observed - mean;
    if (sd <= 0.0) return std::max(0.0, gap);
    const double z = gap / sd;
    const double ei = gap * normal_cdf(z) + sd * normal_pdf(z);
    return std::max(0.0, ei);
}

double expected_improvement(const KrigingModel& model, const Eigen::VectorXd& x,
                            double best_observed) {
    const KrigingModel::Prediction p = model.predict(x);
    return expected_improvement(p.mean, p.sd, best_observed);
}

LinearModel LinearModel::fit(const Design& design) {
    check_design(design);
    const int n = design.n();
    const int d = design.d();
    if (n < d + 2)
        throw ConfigError("linear fit needs at least d + 2 = " + std::to_string(d + 2) +
                          " points, got " + std::to_string(n));

    LinearModel model;
    model.col_mean = design.X.colwise().mean();
    model.col_sd.resize(d);
    std::vector<int> degenerate;
    for (int k = 0; k < d; ++k) {
        const double var = (design.X.col(k).array() - model.col_mean[k]).square().sum() / n;
        model.col_sd[k] = std::sqrt(var);
        if (model.col_sd[k] < kTinySd) degenerate.push_back(k);
    }
    if (!degenerate.empty()) {
        std::string names;
        for (int k : degenerate) names += (names.empty() ? "" : ", ") + column_label(design, k);
        throw ConfigError("linear fit: constant (collinear) columns: " + names);
    }

    Eigen::MatrixXd Z(n, d);
    for (int k = 0; k < d; ++k)
        Z.col(k) = (design.X.col(k).array() - model.col_mean[k]) / model.col_sd[k];
    model.intercept = design.y.mean();
    const Eigen::VectorXd yc = design.y.array() - model.intercept;

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Z);
    qr.setThreshold(1e-10);
    if (qr.rank() < d) {
        // Columns permuted past the numerical rank are the dependent ones.
        const auto perm = qr.colsPermutation().indices();
        std::string names;
        for (int k = static_cast<int>(qr.rank()); k < d; ++k)
            names += (names.empty() ? "" : ", ") + column_label(design, perm[k]);
        throw ConfigError("linear fit: collinear columns: " + names);
    }
    model.beta = qr.solve(yc);
    const double sse = (Z * model.beta - yc).squaredNorm();
    model.residual_sd = n > d + 1 ? std::sqrt(sse / (n - d - 1)) : 0.0;
    return model;
}

double LinearModel::predict(const Eigen::VectorXd& x) const {
    if (x.size() != beta.size()) throw ConfigError("linear predict: point dimension mismatch");
    double acc = intercept;
    for (int k = 0; k < beta.size(); ++k)
        acc += beta[k] * (x[k] - col_mean[k]) / col_sd[k];
    return acc;
}

namespace {

double tree_predict(const ForestModel::Tree& tree, const Eigen::VectorXd& x) {
    int node = 0;
    while (tree.nodes[static_cast<size_t>(node)].feature >= 0) {
        const auto& nd = tree.nodes[static_cast<size_t>(node)];
        node = x[nd.feature] <= nd.threshold ? nd.left : nd.right;
    }
    return tree.nodes[static_cast<size_t>(node)].value;
}

struct TreeBuilder {
    const Design& design;
    int min_leaf;
    int mtry;
    RngStream& rng;
    ForestModel::Tree tree;

    int build(std::vector<int> samples) {
        const int node_id = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();
        double sum = 0.0;
        for (int i : samples) sum += design.y[i];
        const double mean = sum / static_cast<double>(samples.size());
        tree.nodes.back().value = mean;
        if (static_cast<int>(samples.size()) < 2 * min_leaf) return node_id;

        bool spread = false;
        for (int i : samples)
            if (design.y[i] != design.y[samples.front()]) {
                spread = true;
                break;
            }
        if (!spread) return node_id;

        // Sample mtry candidate features without replacement.
        const int d = design.d();
        std::vector<int> features(static_cast<size_t>(d));
        std::iota(features.begin(), features.end(), 0);
        for (int k = 0; k < mtry && k < d; ++k) {
            const int j = k + static_cast<int>(rng.below(static_cast<std::uint64_t>(d - k)));
            std::swap(features[static_cast<size_t>(k)], features[static_cast<size_t>(j)]);
        }

        int best_feature = -1;
        double best_threshold = 0.0;
        double best_sse = std::numeric_limits<double>::infinity();
        std::vector<std::pair<double, double>> vals(samples.size());
        for (int f = 0; f < std::min(mtry, d); ++f) {
            const int feat = features[static_cast<size_t>(f)];
            for (size_t i = 0; i < samples.size(); ++i)
                vals[i] = {design.X(samples[i], feat), design.y[samples[i]]};
            std::sort(vals.begin(), vals.end());
            double left_sum = 0.0, left_sq = 0.0;
            double right_sum = 0.0, right_sq = 0.0;
            for (const auto& [xv, yv] : vals) {
                right_sum += yv;
                right_sq += yv * yv;
            }
            const int m = static_cast<int>(vals.size());
            for (int i = 0; i < m - 1; ++i) {
                const double yv = vals[static_cast<size_t>(i)].second;
                left_sum += yv;
                left_sq += yv * yv;
                right_sum -= yv;
                right_sq -= yv * yv;
                if (i + 1 < min_leaf || m - i - 1 < min_leaf) continue;
                if (vals[static_cast<size_t>(i)].first == vals[static_cast<size_t>(i + 1)].first)
                    continue;
                const int nl = i + 1, nr = m - i - 1;
                const double sse = (left_sq - left_sum * left_sum / nl) +
                                   (right_sq - right_sum * right_sum / nr);
                if (sse < best_sse) {
                    best_sse = sse;
                    best_feature = feat;
                    best_threshold = 0.5 * (vals[static_cast<size_t>(i)].first +
                                            vals[static_cast<size_t>(i + 1)].first);
                }
            }
        }
        if (best_feature < 0) return node_id;

        std::vector<int> left, right;
        for (int i : samples)
            (design.X(i, best_feature) <= best_threshold ? left : right).push_back(i);
        if (static_cast<int>(left.size()) < min_leaf || static_cast<int>(right.size()) < min_leaf)
            return node_id;
        samples.clear();
        samples.shrink_to_fit();
        const int left_id = build(std::move(left));
        const int right_id = build(std::move(right));
        tree.nodes[static_cast<size_t>(node_id)].feature = best_feature;
        tree.nodes[static_cast<size_t>(node_id)].threshold = best_threshold;
        tree.nodes[static_cast<size_t>(node_id)].left = left_id;
        tree.nodes[static_cast<size_t>(node_id)].right = right_id;
        return node_id;
    }
};

} // namespace

ForestModel ForestModel::fit(const Design& design, const ForestConfig& cfg, std::uint64_t seed) {
    check_design(design);
    if (cfg.trees < 1) throw ConfigError("forest: tree count must be positive");
    if (cfg.min_leaf < 1) throw ConfigError("forest: min_leaf must be positive");

    ForestModel model;
    model.cfg_ = cfg;
    model.cfg_.mtry = cfg.mtry > 0 ? cfg.mtry : (design.d() + 2) / 3;
    model.seed_ = seed;
    model.dims_ = design.d();
    model.design_ = design;
    model.trees_.reserve(static_cast<size_t>(cfg.trees));

    const int n = design.n();
    Eigen::VectorXd oob_sum = Eigen::VectorXd::Zero(n);
    Eigen::VectorXi oob_count = Eigen::VectorXi::Zero(n);
    Eigen::VectorXd imp_sum = Eigen::VectorXd::Zero(design.d());
    int imp_trees = 0;

    for (int t = 0; t < cfg.trees; ++t) {
        RngStream boot = derive_stream(
            SeedSpec{seed, {"forest-boot", static_cast<std::uint64_t>(t), 0}});
        std::vector<int> rows(static_cast<size_t>(n));
        std::vector<bool> in_bag(static_cast<size_t>(n), false);
        for (int i = 0; i < n; ++i) {
            const int pick = static_cast<int>(boot.below(static_cast<std::uint64_t>(n)));
            rows[static_cast<size_t>(i)] = pick;
            in_bag[static_cast<size_t>(pick)] = true;
        }

        RngStream split_rng = derive_stream(
            SeedSpec{seed, {"forest-split", static_cast<std::uint64_t>(t), 0}});
        TreeBuilder builder{design, model.cfg_.min_leaf, model.cfg_.mtry, split_rng, {}};
        builder.build(rows);
        model.trees_.push_back(std::move(builder.tree));
        const Tree& tree = model.trees_.back();

        std::vector<int> oob;
        for (int i = 0; i < n; ++i)
            if (!in_bag[static_cast<size_t>(i)]) oob.push_back(i);
        if (oob.empty()) continue;

        std::vector<double> base_pred(oob.size());
        double base_err = 0.0;
        for (size_t i = 0; i < oob.size(); ++i) {
            base_pred[i] = tree_predict(tree, design.X.row(oob[i]).transpose());
            const double diff = base_pred[i] - design.y[oob[i]];
            base_err += diff * diff;
            oob_sum[oob[i]] += base_pred[i];
            ++oob_count[oob[i]];
        }
        base_err /= static_cast<double>(oob.size());

        ++imp_trees;
        for (int feat = 0; feat < design.d(); ++feat) {
            RngStream perm_rng = derive_stream(SeedSpec{
                seed,
                {"forest-perm", hash_combine(static_cast<std::uint64_t>(t),
                                             static_cast<std::uint64_t>(feat)),
                 0}});
            std::vector<int> shuffled = oob;
            for (size_t i = shuffled.size(); i > 1; --i) {
                const size_t j = static_cast<size_t>(perm_rng.below(i));
                std::swap(shuffled[i - 1], shuffled[j]);
            }
            double perm_err = 0.0;
            Eigen::VectorXd x(design.d());
            for (size_t i = 0; i < oob.size(); ++i) {
                x = design.X.row(oob[i]).transpose();
                x[feat] = design.X(shuffled[i], feat);
                const double diff = tree_predict(tree, x) - design.y[oob[i]];
                perm_err += diff * diff;
            }
            perm_err /= static_cast<double>(oob.size());
            imp_sum[feat] += perm_err - base_err;
        }
    }

    model.importance_ = imp_trees > 0 ? Eigen::VectorXd(imp_sum / imp_trees)
                                      : Eigen::VectorXd::Zero(design.d());
    double mse = 0.0;
    int covered = 0;
    for (int i = 0; i < n; ++i) {
        if (oob_count[i] == 0) continue;
        const double diff = oob_sum[i] / oob_count[i] - design.y[i];
        mse += diff * diff;
        ++covered;
    }
    model.oob_mse_ = covered > 0 ? mse / covered : 0.0;
    return model;
}

double ForestModel::predict(const Eigen::VectorXd& x) const {
    if (x.size() != dims_) throw ConfigError("forest predict: point dimension mismatch");
    double sum = 0.0;
    for (const Tree& tree : trees_) sum += tree_predict(tree, x);
    return sum / static_cast<double>(trees_.size());
}

std::vector<double> importance(const KrigingModel& model) {
    return {model.theta().data(), model.theta().data() + model.theta().size()};
}

std::vector<double> importance(const LinearModel& model) {
    std::vector<double> out(static_cast<size_t>(model.beta.size()));
    for (int k = 0; k < model.beta.size(); ++k) out[static_cast<size_t>(k)] = std::abs(model.beta[k]);
    return out;
}

std::vector<double> importance(const ForestModel& model) {
    const Eigen::VectorXd& imp = model.importance_scores();
    return {imp.data(), imp.data() + imp.size()};
}

std::vector<int> rank_parameters(const std::vector<double>& scores) {
    std::vector<int> order(scores.size());
    std::iota(order.begin(), order.end(), 1);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const double sa = scores[static_cast<size_t>(a - 1)];
        const double sb = scores[static_cast<size_t>(b - 1)];
        if (sa != sb) return sa > sb;
        return a < b;
    });
    return order;
}

} // namespace hospsim
