#pragma once

#include <algorithm>
#include <vector>

#include <Eigen/Core>

namespace hospsim {

/// Compass (coordinate pattern) search minimizing f over the box [lo, hi]:
/// greedy +/- probes per coordinate with geometric step shrinking. Optional
/// extra directions (unit-scale vectors) are probed each sweep, which lets
/// callers add coupled moves a per-coordinate probe cannot make. point and
/// value are updated in place. Deterministic.
template <typename F>
void compass_minimize(F&& f, Eigen::VectorXd& point, double& value, const Eigen::VectorXd& lo,
                      const Eigen::VectorXd& hi, int max_iters,
                      const std::vector<Eigen::VectorXd>& extra_dirs = {}) {
    const int dims = static_cast<int>(point.size());
    Eigen::VectorXd step = 0.25 * (hi - lo);
    auto clamp_into = [&](Eigen::VectorXd& p) {
        for (int k = 0; k < dims; ++k) p[k] = std::clamp(p[k], lo[k], hi[k]);
    };
    for (int iter = 0; iter < max_iters; ++iter) {
        bool improved = false;
        for (int k = 0; k < dims; ++k) {
            if (step[k] <= 0.0) continue;
            for (const double dir : {+1.0, -1.0}) {
                Eigen::VectorXd probe = point;
                probe[k] = std::clamp(probe[k] + dir * step[k], lo[k], hi[k]);
                if (probe[k] == point[k]) continue;
                const double v = f(probe);
                if (v < value) {
                    point = probe;
                    value = v;
                    improved = true;
                    break;
                }
            }
        }
        for (const Eigen::VectorXd& d : extra_dirs) {
            for (const double dir : {+1.0, -1.0}) {
                Eigen::VectorXd probe = point + dir * d.cwiseProduct(step);
                clamp_into(probe);
                if (probe == point) continue;
                const double v = f(probe);
                if (v < value) {
                    point = probe;
                    value = v;
                    improved = true;
                    break;
                }
            }
        }
        if (!improved) {
            step *= 0.5;
            if (step.maxCoeff() < 1e-3) return;
        }
    }
}

} // namespace hospsim
