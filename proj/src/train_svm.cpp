#include <algorithm>
#include <cmath>
#include <vector>

#include "statleak/classifiers.hpp"
#include "statleak/errors.hpp"

namespace statleak {

namespace {

// Sequential minimal optimization for the linear soft-margin dual. The
// weight vector is maintained explicitly so kernel evaluations are O(d).
struct SmoSolver {
    const std::vector<std::vector<double>>& x;  // normalized rows
    const std::vector<double>& y;               // -1 / +1
    double c;
    double tol;

    std::vector<double> alpha;
    std::vector<double> w;
    double b = 0.0;

    static constexpr double kBoundEps = 1e-9;
    static constexpr double kStepEps = 1e-12;

    explicit SmoSolver(const std::vector<std::vector<double>>& x_in,
                       const std::vector<double>& y_in, double c_in, double tol_in)
        : x(x_in), y(y_in), c(c_in), tol(tol_in), alpha(x_in.size(), 0.0),
          w(x_in.empty() ? 0 : x_in[0].size(), 0.0) {}

    double dot(const std::vector<double>& a, const std::vector<double>& b_vec) const {
        double s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b_vec[i];
        return s;
    }

    double decision(std::size_t i) const { return dot(w, x[i]) + b; }
    double error(std::size_t i) const { return decision(i) - y[i]; }

    bool non_bound(std::size_t i) const {
        return alpha[i] > kBoundEps && alpha[i] < c - kBoundEps;
    }

    bool take_step(std::size_t i1, std::size_t i2, double e2) {
        if (i1 == i2) return false;
        const double a1 = alpha[i1];
        const double a2 = alpha[i2];
        const double y1 = y[i1];
        const double y2 = y[i2];
        const double e1 = error(i1);
        const double s = y1 * y2;

        double lo, hi;
        if (s < 0.0) {
            lo = std::max(0.0, a2 - a1);
            hi = std::min(c, c + a2 - a1);
        } else {
            lo = std::max(0.0, a1 + a2 - c);
            hi = std::min(c, a1 + a2);
        }
        if (hi - lo < kStepEps) return false;

        const double k11 = dot(x[i1], x[i1]);
        const double k22 = dot(x[i2], x[i2]);
        const double k12 = dot(x[i1], x[i2]);
        const double eta = k11 + k22 - 2.0 * k12;

        double a2_new;
        if (eta > kStepEps) {
            a2_new = std::clamp(a2 + y2 * (e1 - e2) / eta, lo, hi);
        } else {
            // Degenerate direction (duplicate points): objective is linear in
            // a2, so the optimum sits at a bound.
            const double grad = y2 * (e1 - e2);
            if (std::abs(grad) < kStepEps) return false;
            a2_new = grad < 0.0 ? hi : lo;
        }
        if (std::abs(a2_new - a2) < kStepEps * (a2_new + a2 + kStepEps)) return false;

        const double a1_new = a1 + s * (a2 - a2_new);
        const double d1 = y1 * (a1_new - a1);
        const double d2 = y2 * (a2_new - a2);
        for (std::size_t f = 0; f < w.size(); ++f) {
            w[f] += d1 * x[i1][f] + d2 * x[i2][f];
        }
        alpha[i1] = a1_new;
        alpha[i2] = a2_new;

        // Recompute the intercept from a point forced onto the margin.
        const double b1 = y1 - (decision(i1) - b);
        const double b2 = y2 - (decision(i2) - b);
        const bool nb1 = a1_new > kBoundEps && a1_new < c - kBoundEps;
        const bool nb2 = a2_new > kBoundEps && a2_new < c - kBoundEps;
        if (nb1) {
            b = b1;
        } else if (nb2) {
            b = b2;
        } else {
            b = (b1 + b2) / 2.0;
        }
        return true;
    }

    bool examine(std::size_t i2) {
        const double e2 = error(i2);
        const double r2 = e2 * y[i2];
        const bool violated =
            (r2 < -tol && alpha[i2] < c - kBoundEps) || (r2 > tol && alpha[i2] > kBoundEps);
        if (!violated) return false;

        // Second-choice heuristic: largest |E1 - E2| over non-bound points.
        std::size_t best = i2;
        double best_gap = -1.0;
        for (std::size_t i = 0; i < alpha.size(); ++i) {
            if (!non_bound(i)) continue;
            const double gap = std::abs(error(i) - e2);
            if (gap > best_gap) {
                best_gap = gap;
                best = i;
            }
        }
        if (best != i2 && take_step(best, i2, e2)) return true;

        // Deterministic fallbacks: non-bound points, then everything.
        for (std::size_t off = 0; off < alpha.size(); ++off) {
            const std::size_t i1 = (i2 + 1 + off) % alpha.size();
            if (non_bound(i1) && take_step(i1, i2, e2)) return true;
        }
        for (std::size_t off = 0; off < alpha.size(); ++off) {
            const std::size_t i1 = (i2 + 1 + off) % alpha.size();
            if (take_step(i1, i2, e2)) return true;
        }
        return false;
    }

    void solve() {
        bool examine_all = true;
        std::size_t changed = 0;
        const std::size_t max_passes = 2000 + 200 * alpha.size();
        for (std::size_t pass = 0; pass < max_passes; ++pass) {
            changed = 0;
            if (examine_all) {
                for (std::size_t i = 0; i < alpha.size(); ++i) changed += examine(i) ? 1 : 0;
            } else {
                for (std::size_t i = 0; i < alpha.size(); ++i) {
                    if (non_bound(i)) changed += examine(i) ? 1 : 0;
                }
            }
            if (examine_all) {
                if (changed == 0) break;
                examine_all = false;
            } else if (changed == 0) {
                examine_all = true;
            }
        }
    }
};

}  // namespace

ModelPtr train_linear_svm(const Dataset& ds, const SvmOptions& options) {
    if (ds.instances.empty()) throw EmptyDataset();
    if (ds.n_classes() != 2) {
        throw NotBinary("linear svm requires a binary class, got " +
                        std::to_string(ds.n_classes()) + " values");
    }
    if (options.c <= 0.0) throw BadParameter("complexity constant must be positive");
    if (options.tolerance <= 0.0) throw BadParameter("tolerance must be positive");

    const auto normalized = min_max_normalize(ds);
    const std::size_t n = ds.n_instances();
    std::vector<std::vector<double>> x(n);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = normalized.dataset.instances[i].values;
        y[i] = ds.instances[i].label == 1 ? 1.0 : -1.0;
    }

    SmoSolver solver(x, y, options.c, options.tolerance);
    solver.solve();

    return std::make_unique<LinearSvmModel>(TrainingMeta{ds.feature_names, ds.class_values},
                                            std::move(solver.w), solver.b,
                                            normalized.table, std::move(solver.alpha));
}

}  // namespace statleak
