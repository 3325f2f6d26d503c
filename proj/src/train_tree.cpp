#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "statleak/classifiers.hpp"
#include "statleak/errors.hpp"
#include "statleak/stats.hpp"

namespace statleak {

namespace {

// Grows the tree over per-feature pre-sorted index columns. Every node owns
// the range [lo, hi) of all columns; splitting stably partitions each column
// in place, so children stay sorted and no node ever re-sorts. All split
// entropies come from an x*log2(x) table over integer counts, maintained
// incrementally along the sweep.
struct C45Builder {
    const Dataset& ds;
    std::size_t min_leaf;
    std::size_t n_classes;
    std::vector<std::vector<int>> columns;  // [feature][position] = instance
    std::vector<int> scratch;
    std::vector<double> xlogx;  // xlogx[k] = k * log2(k)

    struct Split {
        int attribute = -1;
        double threshold = 0.0;
        double gain = 0.0;
        double gain_ratio = 0.0;
    };

    C45Builder(const Dataset& dataset, int min_leaf_in)
        : ds(dataset),
          min_leaf(static_cast<std::size_t>(min_leaf_in)),
          n_classes(dataset.n_classes()) {
        const std::size_t n = ds.n_instances();
        columns.resize(ds.n_features());
        for (std::size_t f = 0; f < ds.n_features(); ++f) {
            auto& order = columns[f];
            order.resize(n);
            std::iota(order.begin(), order.end(), 0);
            std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
                return ds.instances[a].values[f] < ds.instances[b].values[f];
            });
        }
        scratch.resize(n);
        xlogx.resize(n + 1);
        xlogx[0] = 0.0;
        for (std::size_t k = 1; k <= n; ++k) {
            const double kd = static_cast<double>(k);
            xlogx[k] = kd * std::log2(kd);
        }
    }

    // n*H(counts) = xlogx(n) - sum_c xlogx(count_c), all integer counts.
    double scaled_entropy(const std::vector<std::size_t>& counts, std::size_t total) const {
        double sum = 0.0;
        for (std::size_t c : counts) sum += xlogx[c];
        return xlogx[total] - sum;
    }

    // One sweep over every (feature, boundary) candidate. In the first pass
    // `select` is null and the gains are only accumulated; in the second the
    // best admissible split at or above the mean gain is chosen. Ties go to
    // the lower attribute index, then the lower threshold (the scan order).
    void sweep(std::size_t lo, std::size_t hi, const std::vector<std::size_t>& total_counts,
               double parent_scaled, double& gain_sum, std::size_t& gain_count,
               double mean_gain, Split* select) const {
        const std::size_t n = hi - lo;
        const double nd = static_cast<double>(n);
        std::vector<std::size_t> left(n_classes);
        for (std::size_t f = 0; f < ds.n_features(); ++f) {
            const auto& order = columns[f];
            std::fill(left.begin(), left.end(), 0);
            // Incremental xlogx sums of the left and right class counts.
            double sum_left = 0.0;
            double sum_right = 0.0;
            for (std::size_t c : total_counts) sum_right += xlogx[c];
            std::vector<std::size_t> right = total_counts;
            for (std::size_t i = lo; i + 1 < hi; ++i) {
                const auto& inst = ds.instances[order[i]];
                const int label = inst.label;
                sum_left += xlogx[left[label] + 1] - xlogx[left[label]];
                sum_right += xlogx[right[label] - 1] - xlogx[right[label]];
                ++left[label];
                --right[label];
                const double v = inst.values[f];
                const double next = ds.instances[order[i + 1]].values[f];
                if (v == next) continue;
                const std::size_t n_left = i + 1 - lo;
                const std::size_t n_right = n - n_left;
                if (n_left < min_leaf || n_right < min_leaf) continue;
                // n*(H(S) - weighted child entropy), exact in integer counts.
                const double child_scaled =
                    (xlogx[n_left] - sum_left) + (xlogx[n_right] - sum_right);
                const double gain = (parent_scaled - child_scaled) / nd;
                if (gain <= 1e-12) continue;
                if (select == nullptr) {
                    gain_sum += gain;
                    ++gain_count;
                    continue;
                }
                if (gain < mean_gain - 1e-12) continue;
                const double split_info =
                    (xlogx[n] - xlogx[n_left] - xlogx[n_right]) / nd;
                const double gain_ratio = gain / split_info;
                if (select->attribute < 0 || gain_ratio > select->gain_ratio + 1e-12) {
                    *select = {static_cast<int>(f), (v + next) / 2.0, gain, gain_ratio};
                }
            }
        }
    }

    // Stable two-pass partition of one column range by the split predicate.
    std::size_t partition_column(std::vector<int>& order, std::size_t lo, std::size_t hi,
                                 int attribute, double threshold) {
        std::size_t n_left = 0;
        std::size_t n_right = 0;
        for (std::size_t i = lo; i < hi; ++i) {
            const int idx = order[i];
            if (ds.instances[idx].values[attribute] <= threshold) {
                order[lo + n_left++] = idx;
            } else {
                scratch[n_right++] = idx;
            }
        }
        std::copy(scratch.begin(), scratch.begin() + n_right, order.begin() + lo + n_left);
        return n_left;
    }

    std::unique_ptr<TreeNode> build(std::size_t lo, std::size_t hi) {
        auto node = std::make_unique<TreeNode>();
        std::vector<std::size_t> counts(n_classes, 0);
        for (std::size_t i = lo; i < hi; ++i) {
            ++counts[ds.instances[columns[0][i]].label];
        }
        node->class_counts.assign(counts.begin(), counts.end());
        node->label = static_cast<int>(std::max_element(counts.begin(), counts.end()) -
                                       counts.begin());
        if (node->misclassified() == 0.0) return node;  // pure

        const double parent_scaled = scaled_entropy(counts, hi - lo);
        double gain_sum = 0.0;
        std::size_t gain_count = 0;
        sweep(lo, hi, counts, parent_scaled, gain_sum, gain_count, 0.0, nullptr);
        if (gain_count == 0) return node;

        // C4.5 heuristic: only splits with at least average gain compete,
        // then gain ratio decides.
        const double mean_gain = gain_sum / static_cast<double>(gain_count);
        Split best;
        sweep(lo, hi, counts, parent_scaled, gain_sum, gain_count, mean_gain, &best);
        if (best.attribute < 0) return node;

        std::size_t n_left = 0;
        for (auto& order : columns) {
            n_left = partition_column(order, lo, hi, best.attribute, best.threshold);
        }
        node->attribute = best.attribute;
        node->threshold = best.threshold;
        node->left = build(lo, lo + n_left);
        node->right = build(lo + n_left, hi);
        return node;
    }
};

// Additional errors at the upper confidence bound of the binomial error
// rate, following C4.5's estimate (continuity-corrected normal bound with
// linear interpolation below one error).
double added_error(double n, double e, double cf, double z) {
    if (e < 1.0) {
        const double base = n * (1.0 - std::exp(std::log(cf) / n));
        if (e == 0.0) return base;
        return base + e * (added_error(n, 1.0, cf, z) - base);
    }
    if (e + 0.5 >= n) return std::max(n - e, 0.0);
    const double f = (e + 0.5) / n;
    const double r =
        (f + z * z / (2.0 * n) + z * std::sqrt(f / n - f * f / n + z * z / (4.0 * n * n))) /
        (1.0 + z * z / n);
    return r * n - e;
}

double subtree_error(const TreeNode& node, double cf, double z) {
    if (node.is_leaf()) {
        return node.misclassified() + added_error(node.coverage(), node.misclassified(), cf, z);
    }
    return subtree_error(*node.left, cf, z) + subtree_error(*node.right, cf, z);
}

void prune(TreeNode& node, double cf, double z) {
    if (node.is_leaf()) return;
    prune(*node.left, cf, z);
    prune(*node.right, cf, z);
    const double keep = subtree_error(node, cf, z);
    const double collapse =
        node.misclassified() + added_error(node.coverage(), node.misclassified(), cf, z);
    if (collapse <= keep) {
        node.attribute = -1;
        node.left.reset();
        node.right.reset();
    }
}

}  // namespace

ModelPtr train_c45(const Dataset& ds, const C45Options& options) {
    if (ds.instances.empty()) throw EmptyDataset();
    if (options.min_leaf < 1) throw BadParameter("min_leaf must be at least 1");
    if (!(options.confidence > 0.0 && options.confidence < 1.0)) {
        throw BadParameter("confidence factor must be in (0,1)");
    }

    C45Builder builder(ds, options.min_leaf);
    auto root = builder.build(0, ds.n_instances());

    if (options.prune) {
        const double z = normal_quantile(1.0 - options.confidence);
        prune(*root, options.confidence, z);
    }
    return std::make_unique<TreeModel>(TrainingMeta{ds.feature_names, ds.class_values},
                                       std::move(root));
}

}  // namespace statleak
