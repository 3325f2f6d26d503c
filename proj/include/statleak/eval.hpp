#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "statleak/classifiers.hpp"
#include "statleak/dataset.hpp"

namespace statleak {

using Trainer = std::function<ModelPtr(const Dataset&)>;

// Pooled cross-validation metrics in the shape of the usual summary block.
struct EvalReport {
    std::size_t correct = 0;
    std::size_t incorrect = 0;
    double accuracy = 0.0;  // percent
    // rows = actual class, columns = predicted class, dataset class order
    std::vector<std::vector<std::size_t>> confusion;
    double kappa = 0.0;
    bool kappa_defined = true;  // false when chance agreement is degenerate
    double mae = 0.0;
    double rmse = 0.0;
    double rae_percent = 0.0;
    double rrse_percent = 0.0;
    std::vector<std::string> class_values;
    int folds = 0;
    std::uint64_t seed = 0;

    // Trained-on-all-data model extras.
    std::string model_report;
    std::optional<std::pair<int, int>> tree_stats;  // (leaves, nodes)
    std::optional<double> oob_error;

    std::size_t total() const { return correct + incorrect; }
    std::string summary() const;
};

// Deterministic stratified partition: each fold's class proportions match
// the dataset's within one instance per class.
std::vector<std::vector<int>> stratified_folds(const Dataset& ds, int k, std::uint64_t seed);

EvalReport cross_validate(const Trainer& trainer, const Dataset& ds, int folds = 10,
                          std::uint64_t seed = 1);

// Stratified subsample of the requested size, instances kept in dataset
// order.
Dataset stratified_sample(const Dataset& ds, std::size_t size, std::uint64_t seed);

struct LearningCurveRow {
    std::size_t size = 0;
    int tree_nodes = 0;  // 0 for models without tree structure
    double accuracy = 0.0;
};

// Cross-validated accuracy and full-sample model size at increasing
// stratified sample sizes.
std::vector<LearningCurveRow> learning_curve(const Trainer& trainer, const Dataset& ds,
                                             const std::vector<std::size_t>& sizes,
                                             int folds = 10, std::uint64_t seed = 1);

}  // namespace statleak
