#include "statleak/eval.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <sstream>

#include "statleak/errors.hpp"
#include "statleak/rng.hpp"

namespace statleak {

std::vector<std::vector<int>> stratified_folds(const Dataset& ds, int k, std::uint64_t seed) {
    const std::size_t n = ds.n_instances();
    if (k < 2 || static_cast<std::size_t>(k) > n) {
        throw BadParameter("fold count must be in [2, " + std::to_string(n) + "], got " +
                           std::to_string(k));
    }
    SplitMix64 rng(seed);
    std::vector<std::vector<int>> folds(k);
    // Deal the class-grouped shuffled instances round-robin with one global
    // cursor, so small classes still spread over all folds (leave-one-out
    // works) while per-fold class counts stay within one of proportional.
    std::size_t cursor = 0;
    for (std::size_t c = 0; c < ds.n_classes(); ++c) {
        std::vector<int> members;
        for (std::size_t i = 0; i < n; ++i) {
            if (ds.instances[i].label == static_cast<int>(c)) {
                members.push_back(static_cast<int>(i));
            }
        }
        rng.shuffle(members);
        for (int member : members) {
            folds[cursor++ % k].push_back(member);
        }
    }
    for (auto& fold : folds) std::sort(fold.begin(), fold.end());
    return folds;
}

namespace {

Dataset subset_by_indices(const Dataset& ds, const std::vector<int>& indices) {
    Dataset out;
    out.relation_name = ds.relation_name;
    out.feature_names = ds.feature_names;
    out.class_values = ds.class_values;
    out.instances.reserve(indices.size());
    for (int i : indices) out.instances.push_back(ds.instances[i]);
    return out;
}

std::vector<double> class_proportions(const Dataset& ds) {
    std::vector<double> dist(ds.n_classes(), 0.0);
    for (const auto& inst : ds.instances) dist[inst.label] += 1.0;
    for (double& d : dist) d /= static_cast<double>(ds.n_instances());
    return dist;
}

}  // namespace

EvalReport cross_validate(const Trainer& trainer, const Dataset& ds, int folds,
                          std::uint64_t seed) {
    if (ds.instances.empty()) throw EmptyDataset();
    const auto fold_indices = stratified_folds(ds, folds, seed);
    const std::size_t n_classes = ds.n_classes();

    EvalReport report;
    report.class_values = ds.class_values;
    report.folds = folds;
    report.seed = seed;
    report.confusion.assign(n_classes, std::vector<std::size_t>(n_classes, 0));

    double abs_err = 0.0;
    double sq_err = 0.0;
    double abs_err_base = 0.0;
    double sq_err_base = 0.0;

    std::vector<int> train_idx;
    for (int f = 0; f < folds; ++f) {
        train_idx.clear();
        for (int g = 0; g < folds; ++g) {
            if (g == f) continue;
            train_idx.insert(train_idx.end(), fold_indices[g].begin(), fold_indices[g].end());
        }
        std::sort(train_idx.begin(), train_idx.end());
        const Dataset train_ds = subset_by_indices(ds, train_idx);
        const ModelPtr model = trainer(train_ds);
        const std::vector<double> prior = class_proportions(train_ds);

        for (int i : fold_indices[f]) {
            const auto& inst = ds.instances[i];
            const int predicted = model->predict(inst.values);
            const auto dist = model->class_distribution(inst.values);
            if (predicted == inst.label) {
                ++report.correct;
            } else {
                ++report.incorrect;
            }
            ++report.confusion[inst.label][predicted];
            for (std::size_t c = 0; c < n_classes; ++c) {
                const double truth = c == static_cast<std::size_t>(inst.label) ? 1.0 : 0.0;
                abs_err += std::abs(dist[c] - truth);
                sq_err += (dist[c] - truth) * (dist[c] - truth);
                abs_err_base += std::abs(prior[c] - truth);
                sq_err_base += (prior[c] - truth) * (prior[c] - truth);
            }
        }
    }

    const double total = static_cast<double>(report.total());
    report.accuracy = static_cast<double>(report.correct) / total * 100.0;

    // Chance-corrected agreement from the pooled matrix.
    double expected = 0.0;
    for (std::size_t c = 0; c < n_classes; ++c) {
        double row = 0.0;
        double col = 0.0;
        for (std::size_t j = 0; j < n_classes; ++j) {
            row += static_cast<double>(report.confusion[c][j]);
            col += static_cast<double>(report.confusion[j][c]);
        }
        expected += row * col;
    }
    expected /= total * total;
    const double observed = static_cast<double>(report.correct) / total;
    if (expected >= 1.0) {
        report.kappa = 0.0;
        report.kappa_defined = false;
    } else {
        report.kappa = (observed - expected) / (1.0 - expected);
    }

    const double terms = total * static_cast<double>(n_classes);
    report.mae = abs_err / terms;
    report.rmse = std::sqrt(sq_err / terms);
    const double mae_base = abs_err_base / terms;
    const double rmse_base = std::sqrt(sq_err_base / terms);
    report.rae_percent = mae_base > 0.0 ? report.mae / mae_base * 100.0 : 0.0;
    report.rrse_percent = rmse_base > 0.0 ? report.rmse / rmse_base * 100.0 : 0.0;

    const ModelPtr full_model = trainer(ds);
    report.model_report = full_model->report();
    report.tree_stats = full_model->tree_stats();
    if (const auto* forest = dynamic_cast<const RandomForestModel*>(full_model.get())) {
        report.oob_error = forest->oob_error();
    }
    return report;
}

std::string EvalReport::summary() const {
    std::ostringstream out;
    out << "=== Stratified cross-validation ===\n=== Summary ===\n\n";
    out << std::fixed;
    const auto metric = [&](const char* name, double value, const char* suffix = "") {
        out << std::left << std::setw(37) << name << std::right << std::setprecision(4)
            << value << suffix << '\n';
    };
    out << std::left << std::setw(37) << "Correctly Classified Instances" << correct << "    "
        << std::fixed << std::setprecision(4) << accuracy << " %\n";
    out << std::left << std::setw(37) << "Incorrectly Classified Instances" << incorrect << "    "
        << std::setprecision(4) << (100.0 - accuracy) << " %\n";
    if (kappa_defined) {
        metric("Kappa statistic", kappa);
    } else {
        out << std::left << std::setw(37) << "Kappa statistic" << "0 (undefined: degenerate chance agreement)\n";
    }
    metric("Mean absolute error", mae);
    metric("Root mean squared error", rmse);
    metric("Relative absolute error", rae_percent, " %");
    metric("Root relative squared error", rrse_percent, " %");
    out << std::left << std::setw(37) << "Total Number of Instances" << total() << '\n';
    if (tree_stats) {
        out << std::left << std::setw(37) << "Number of Leaves" << tree_stats->first << '\n';
        out << std::left << std::setw(37) << "Size of the tree" << tree_stats->second << '\n';
    }
    if (oob_error) {
        out << std::left << std::setw(37) << "Out of bag error" << std::setprecision(4)
            << *oob_error << '\n';
    }

    out << "\n=== Confusion Matrix ===\n\n";
    std::size_t width = 1;
    for (const auto& row : confusion) {
        for (std::size_t v : row) width = std::max(width, std::to_string(v).size());
    }
    for (std::size_t c = 0; c < class_values.size(); ++c) {
        out << ' ' << std::setw(static_cast<int>(width))
            << static_cast<char>('a' + c);
    }
    out << "   <-- classified as\n";
    for (std::size_t r = 0; r < confusion.size(); ++r) {
        for (std::size_t c = 0; c < confusion[r].size(); ++c) {
            out << ' ' << std::setw(static_cast<int>(width)) << confusion[r][c];
        }
        out << " |   " << static_cast<char>('a' + r) << " = " << class_values[r] << '\n';
    }
    return out.str();
}

Dataset stratified_sample(const Dataset& ds, std::size_t size, std::uint64_t seed) {
    const std::size_t n = ds.n_instances();
    if (size < 1 || size > n) {
        throw BadParameter("sample size must be in [1, " + std::to_string(n) + "], got " +
                           std::to_string(size));
    }
    if (size == n) return ds;

    const auto counts = ds.class_counts();
    const std::size_t n_classes = ds.n_classes();

    // Proportional quotas, remainders to the largest fractional parts
    // (ties toward the lower class index).
    std::vector<std::size_t> quota(n_classes);
    std::vector<std::pair<double, std::size_t>> fractional;
    std::size_t assigned = 0;
    for (std::size_t c = 0; c < n_classes; ++c) {
        const double exact = static_cast<double>(size) * static_cast<double>(counts[c]) /
                             static_cast<double>(n);
        quota[c] = static_cast<std::size_t>(exact);
        assigned += quota[c];
        fractional.emplace_back(exact - static_cast<double>(quota[c]), c);
    }
    std::stable_sort(fractional.begin(), fractional.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t i = 0; assigned < size; ++i) {
        ++quota[fractional[i % n_classes].second];
        ++assigned;
    }

    SplitMix64 rng(seed);
    std::vector<int> chosen;
    for (std::size_t c = 0; c < n_classes; ++c) {
        std::vector<int> members;
        for (std::size_t i = 0; i < n; ++i) {
            if (ds.instances[i].label == static_cast<int>(c)) {
                members.push_back(static_cast<int>(i));
            }
        }
        rng.shuffle(members);
        members.resize(std::min(quota[c], members.size()));
        chosen.insert(chosen.end(), members.begin(), members.end());
    }
    std::sort(chosen.begin(), chosen.end());
    return subset_by_indices(ds, chosen);
}

std::vector<LearningCurveRow> learning_curve(const Trainer& trainer, const Dataset& ds,
                                             const std::vector<std::size_t>& sizes, int folds,
                                             std::uint64_t seed) {
    if (!std::is_sorted(sizes.begin(), sizes.end())) {
        throw BadParameter("sample sizes must be ascending");
    }
    std::vector<LearningCurveRow> rows;
    for (std::size_t s = 0; s < sizes.size(); ++s) {
        if (sizes[s] > ds.n_instances()) {
            throw BadParameter("sample size " + std::to_string(sizes[s]) +
                               " exceeds corpus size " + std::to_string(ds.n_instances()));
        }
        // Per-size derived sampling seed; the cross-validation itself uses
        // the master seed so a full-size row equals a plain evaluation.
        const Dataset sample = stratified_sample(ds, sizes[s], seed + s);
        const EvalReport report = cross_validate(trainer, sample, folds, seed);
        LearningCurveRow row;
        row.size = sizes[s];
        row.accuracy = report.accuracy;
        row.tree_nodes = report.tree_stats ? report.tree_stats->second : 0;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace statleak
