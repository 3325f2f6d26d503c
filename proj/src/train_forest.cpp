#include <algorithm>
#include <cmath>
#include <numeric>

#include "statleak/classifiers.hpp"
#include "statleak/errors.hpp"
#include "statleak/rng.hpp"

namespace statleak {

namespace {

struct RandomTreeBuilder {
    const Dataset& ds;
    int k_features;
    SplitMix64& rng;
    std::size_t n_classes;
    std::vector<int> attribute_pool;  // scratch for per-node feature sampling

    std::unique_ptr<TreeNode> build(std::vector<int>& indices) {
        auto node = std::make_unique<TreeNode>();
        node->class_counts.assign(n_classes, 0.0);
        for (int i : indices) node->class_counts[ds.instances[i].label] += 1.0;
        node->label = static_cast<int>(std::max_element(node->class_counts.begin(),
                                                        node->class_counts.end()) -
                                       node->class_counts.begin());
        if (node->misclassified() == 0.0 || indices.size() < 2) return node;

        // Sample k attributes without replacement for this node.
        const int m = static_cast<int>(ds.n_features());
        for (int i = 0; i < k_features; ++i) {
            const int j = i + static_cast<int>(rng.next_below(m - i));
            std::swap(attribute_pool[i], attribute_pool[j]);
        }

        const double n = static_cast<double>(indices.size());
        const double parent_entropy = count_entropy(node->class_counts, n);
        int best_attr = -1;
        double best_threshold = 0.0;
        double best_gain = 0.0;
        for (int s = 0; s < k_features; ++s) {
            const int f = attribute_pool[s];
            std::sort(indices.begin(), indices.end(), [&](int a, int b) {
                return ds.instances[a].values[f] < ds.instances[b].values[f];
            });
            std::vector<double> left(n_classes, 0.0);
            std::vector<double> right = node->class_counts;
            for (std::size_t i = 0; i + 1 < indices.size(); ++i) {
                const auto& inst = ds.instances[indices[i]];
                left[inst.label] += 1.0;
                right[inst.label] -= 1.0;
                const double v = inst.values[f];
                const double next = ds.instances[indices[i + 1]].values[f];
                if (v == next) continue;
                const double n_left = static_cast<double>(i + 1);
                const double n_right = n - n_left;
                const double child = (n_left * count_entropy(left, n_left) +
                                      n_right * count_entropy(right, n_right)) /
                                     n;
                const double gain = parent_entropy - child;
                const bool better =
                    gain > best_gain + 1e-12 ||
                    (gain > best_gain - 1e-12 && best_attr >= 0 &&
                     (f < best_attr || (f == best_attr && (v + next) / 2.0 < best_threshold)));
                if (gain > 1e-12 && (best_attr < 0 || better)) {
                    best_attr = f;
                    best_threshold = (v + next) / 2.0;
                    best_gain = gain;
                }
            }
        }
        if (best_attr < 0) return node;  // nothing informative among the sample

        std::vector<int> left_idx;
        std::vector<int> right_idx;
        for (int i : indices) {
            if (ds.instances[i].values[best_attr] <= best_threshold) {
                left_idx.push_back(i);
            } else {
                right_idx.push_back(i);
            }
        }
        node->attribute = best_attr;
        node->threshold = best_threshold;
        node->left = build(left_idx);
        node->right = build(right_idx);
        return node;
    }
};

}  // namespace

ModelPtr train_random_forest(const Dataset& ds, const RandomForestOptions& options) {
    if (options.trees < 1) throw BadParameter("forest needs at least 1 tree");
    if (ds.instances.empty()) throw EmptyDataset();

    const int m = static_cast<int>(ds.n_features());
    int k = options.k_features;
    if (k <= 0) k = static_cast<int>(std::floor(std::log2(static_cast<double>(m)))) + 1;
    k = std::clamp(k, 1, m);

    const std::size_t n = ds.n_instances();
    std::vector<std::unique_ptr<TreeNode>> trees;
    trees.reserve(options.trees);
    // Votes on each instance from trees whose bootstrap excluded it.
    std::vector<std::vector<int>> oob_votes(n, std::vector<int>(ds.n_classes(), 0));

    for (int t = 0; t < options.trees; ++t) {
        SplitMix64 rng = derive_rng(options.seed, static_cast<std::uint64_t>(t));
        std::vector<int> bag;
        std::vector<bool> in_bag(n, false);
        bag.reserve(n);
        if (options.bootstrap) {
            for (std::size_t i = 0; i < n; ++i) {
                const int pick = static_cast<int>(rng.next_below(n));
                bag.push_back(pick);
                in_bag[pick] = true;
            }
        } else {
            bag.resize(n);
            std::iota(bag.begin(), bag.end(), 0);
            in_bag.assign(n, true);
        }

        RandomTreeBuilder builder{ds, k, rng, ds.n_classes(), {}};
        builder.attribute_pool.resize(m);
        std::iota(builder.attribute_pool.begin(), builder.attribute_pool.end(), 0);
        auto tree = builder.build(bag);

        for (std::size_t i = 0; i < n; ++i) {
            if (!in_bag[i]) ++oob_votes[i][predict_tree(*tree, ds.instances[i].values)];
        }
        trees.push_back(std::move(tree));
    }

    std::size_t oob_counted = 0;
    std::size_t oob_wrong = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& votes = oob_votes[i];
        const int total = std::accumulate(votes.begin(), votes.end(), 0);
        if (total == 0) continue;
        const int voted = static_cast<int>(std::max_element(votes.begin(), votes.end()) -
                                           votes.begin());
        ++oob_counted;
        if (voted != ds.instances[i].label) ++oob_wrong;
    }
    std::optional<double> oob_error;
    if (oob_counted > 0) {
        oob_error = static_cast<double>(oob_wrong) / static_cast<double>(oob_counted);
    }

    return std::make_unique<RandomForestModel>(TrainingMeta{ds.feature_names, ds.class_values},
                                               std::move(trees), k, options.seed, oob_error);
}

}  // namespace statleak
