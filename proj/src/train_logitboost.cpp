#include <algorithm>
#include <cmath>
#include <numeric>

#include "statleak/classifiers.hpp"
#include "statleak/errors.hpp"

namespace statleak {

namespace {

constexpr double kProbClamp = 1e-5;
constexpr double kResponseClamp = 4.0;

// Weighted least-squares regression stump: each side predicts the weighted
// mean of the targets, threshold at the midpoint minimizing total squared
// error. Ties go to the lower attribute index, then the lower threshold.
LogitBoostModel::RegressionStump fit_regression_stump(
    const Dataset& ds, const std::vector<std::vector<int>>& sorted_orders,
    const std::vector<double>& z, const std::vector<double>& w) {
    const std::size_t n = ds.n_instances();
    double sw_total = 0.0;
    double swz_total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sw_total += w[i];
        swz_total += w[i] * z[i];
    }

    LogitBoostModel::RegressionStump best;
    // Constant fallback when no attribute admits a split.
    best.attribute = 0;
    best.threshold = ds.instances[0].values.empty() ? 0.0 : ds.instances[0].values[0];
    best.left_value = best.right_value = swz_total / sw_total;
    // Score of the constant fit; any real split must beat it.
    double best_score = swz_total * swz_total / sw_total;

    for (std::size_t f = 0; f < ds.n_features(); ++f) {
        const auto& order = sorted_orders[f];
        double sw_left = 0.0;
        double swz_left = 0.0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            const int idx = order[i];
            sw_left += w[idx];
            swz_left += w[idx] * z[idx];
            const double v = ds.instances[idx].values[f];
            const double next = ds.instances[order[i + 1]].values[f];
            if (v == next) continue;
            const double sw_right = sw_total - sw_left;
            const double swz_right = swz_total - swz_left;
            if (sw_left <= 0.0 || sw_right <= 0.0) continue;
            const double score =
                swz_left * swz_left / sw_left + swz_right * swz_right / sw_right;
            if (score > best_score + 1e-12) {
                best_score = score;
                best.attribute = static_cast<int>(f);
                best.threshold = (v + next) / 2.0;
                best.left_value = swz_left / sw_left;
                best.right_value = swz_right / sw_right;
            }
        }
    }
    return best;
}

}  // namespace

ModelPtr train_logitboost(const Dataset& ds, const LogitBoostOptions& options) {
    if (ds.instances.empty()) throw EmptyDataset();
    if (ds.n_classes() != 2) {
        throw NotBinary("logitboost requires a binary class, got " +
                        std::to_string(ds.n_classes()) + " values");
    }
    if (options.iterations < 0) throw BadParameter("iterations must be non-negative");

    const std::size_t n = ds.n_instances();
    std::vector<std::vector<int>> sorted_orders(ds.n_features());
    for (std::size_t f = 0; f < ds.n_features(); ++f) {
        auto& order = sorted_orders[f];
        order.resize(n);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            return ds.instances[a].values[f] < ds.instances[b].values[f];
        });
    }

    std::vector<double> score(n, 0.0);  // F(x_i)
    std::vector<double> z(n);
    std::vector<double> w(n);
    std::vector<LogitBoostModel::RegressionStump> stumps;
    std::vector<double> nll_trace;

    for (int iteration = 0; iteration < options.iterations; ++iteration) {
        for (std::size_t i = 0; i < n; ++i) {
            double p = 1.0 / (1.0 + std::exp(-2.0 * score[i]));
            p = std::clamp(p, kProbClamp, 1.0 - kProbClamp);
            const double target = ds.instances[i].label == 1 ? 1.0 : 0.0;
            w[i] = p * (1.0 - p);
            z[i] = std::clamp((target - p) / w[i], -kResponseClamp, kResponseClamp);
        }
        const auto stump = fit_regression_stump(ds, sorted_orders, z, w);
        for (std::size_t i = 0; i < n; ++i) {
            score[i] += 0.5 * stump.value(ds.instances[i].values);
        }
        stumps.push_back(stump);

        // -log p stated as softplus of the signed logit, stable for extreme
        // scores: -ln p = ln(1 + e^{-2F}), -ln(1-p) = ln(1 + e^{2F}).
        const auto softplus = [](double x) { return x > 30.0 ? x : std::log1p(std::exp(x)); };
        double nll = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double logit = 2.0 * score[i];
            nll += ds.instances[i].label == 1 ? softplus(-logit) : softplus(logit);
        }
        nll_trace.push_back(nll);
    }

    return std::make_unique<LogitBoostModel>(TrainingMeta{ds.feature_names, ds.class_values},
                                             std::move(stumps), std::move(nll_trace));
}

}  // namespace statleak
