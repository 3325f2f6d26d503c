#include <algorithm>
#include <cmath>
#include <numeric>

#include "statleak/classifiers.hpp"
#include "statleak/errors.hpp"

namespace statleak {

namespace {

TrainingMeta meta_of(const Dataset& ds) {
    return {ds.feature_names, ds.class_values};
}

std::vector<double> class_count_vector(const Dataset& ds) {
    std::vector<double> counts(ds.n_classes(), 0.0);
    for (const auto& inst : ds.instances) counts[inst.label] += 1.0;
    return counts;
}

}  // namespace

ModelPtr train_majority(const Dataset& ds) {
    if (ds.instances.empty()) throw EmptyDataset();
    return std::make_unique<MajorityModel>(meta_of(ds), class_count_vector(ds));
}

namespace {

struct SplitChoice {
    int attribute = -1;
    double threshold = 0.0;
    double gain = 0.0;
    std::vector<double> left_counts;
    std::vector<double> right_counts;
};

// Best information-gain split over every attribute and every midpoint
// between adjacent distinct values. Ties resolve to the lower attribute
// index, then the lower threshold (the scan order).
SplitChoice best_gain_split(const Dataset& ds) {
    const std::size_t n = ds.n_instances();
    const std::size_t n_classes = ds.n_classes();
    std::vector<double> total_counts(n_classes, 0.0);
    for (const auto& inst : ds.instances) total_counts[inst.label] += 1.0;
    const double parent_entropy = count_entropy(total_counts, static_cast<double>(n));

    SplitChoice best;
    std::vector<int> order(n);
    for (std::size_t f = 0; f < ds.n_features(); ++f) {
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            return ds.instances[a].values[f] < ds.instances[b].values[f];
        });
        std::vector<double> left(n_classes, 0.0);
        std::vector<double> right = total_counts;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            const int idx = order[i];
            left[ds.instances[idx].label] += 1.0;
            right[ds.instances[idx].label] -= 1.0;
            const double v = ds.instances[idx].values[f];
            const double next = ds.instances[order[i + 1]].values[f];
            if (v == next) continue;
            const double n_left = static_cast<double>(i + 1);
            const double n_right = static_cast<double>(n - i - 1);
            const double child =
                (n_left * count_entropy(left, n_left) + n_right * count_entropy(right, n_right)) /
                static_cast<double>(n);
            const double gain = parent_entropy - child;
            if (gain > best.gain + 1e-12) {
                best.attribute = static_cast<int>(f);
                best.threshold = (v + next) / 2.0;
                best.gain = gain;
                best.left_counts = left;
                best.right_counts = right;
            }
        }
    }
    return best;
}

}  // namespace

ModelPtr train_stump(const Dataset& ds) {
    if (ds.instances.empty()) throw EmptyDataset();
    const SplitChoice best = best_gain_split(ds);
    if (best.attribute < 0) {
        // No informative split (pure class or identical instances).
        return train_majority(ds);
    }
    return std::make_unique<StumpModel>(meta_of(ds), best.attribute, best.threshold,
                                        best.left_counts, best.right_counts);
}

}  // namespace statleak
