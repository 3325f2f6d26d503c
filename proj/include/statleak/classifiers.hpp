#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "statleak/dataset.hpp"

namespace statleak {

struct TrainingMeta {
    std::vector<std::string> feature_names;
    std::vector<std::string> class_values;
};

// Uniform contract for all trained classifiers: deterministic prediction,
// printable structure, versioned text serialization.
class Model {
public:
    virtual ~Model() = default;

    virtual std::string kind() const = 0;

    // Predicted class index. Throws ShapeError on arity mismatch.
    int predict(std::span<const double> values) const;

    // Per-class probability estimates; models without probability outputs
    // return the one-hot vector of their prediction.
    std::vector<double> class_distribution(std::span<const double> values) const;

    virtual std::string report() const = 0;

    void save(std::ostream& out) const;

    // (leaf count, total node count) for tree-structured models.
    virtual std::optional<std::pair<int, int>> tree_stats() const { return std::nullopt; }

    const TrainingMeta& meta() const { return meta_; }

protected:
    virtual int do_predict(std::span<const double> values) const = 0;
    virtual std::vector<double> do_distribution(std::span<const double> values) const;
    virtual void do_save(std::ostream& out) const = 0;

    void check_arity(std::span<const double> values) const;

    TrainingMeta meta_;
};

using ModelPtr = std::unique_ptr<Model>;

ModelPtr load_model(std::istream& in);
ModelPtr load_model_file(const std::filesystem::path& path);
void save_model_file(const Model& model, const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Decision tree node, shared by the stump, C4.5 tree and forest models.

struct TreeNode {
    int attribute = -1;  // -1 marks a leaf
    double threshold = 0.0;
    std::unique_ptr<TreeNode> left;   // values <= threshold
    std::unique_ptr<TreeNode> right;  // values > threshold
    int label = 0;
    std::vector<double> class_counts;  // training class counts reaching this node

    bool is_leaf() const { return attribute < 0; }
    double coverage() const;
    double misclassified() const;
};

int predict_tree(const TreeNode& node, std::span<const double> values);

// ---------------------------------------------------------------------------
// Trainers.

// Always predicts the modal training class; ties go to the lowest index.
ModelPtr train_majority(const Dataset& ds);

// Single information-gain split over all attributes and all midpoints
// between adjacent distinct values. Falls back to the majority model when no
// split exists.
ModelPtr train_stump(const Dataset& ds);

struct C45Options {
    double confidence = 0.25;  // error-based pruning confidence factor
    int min_leaf = 2;          // minimum instances on each side of a split
    bool prune = true;
};

// Gain-ratio tree with C4.5's mean-gain candidate filter and error-based
// pruning.
ModelPtr train_c45(const Dataset& ds, const C45Options& options = {});

struct LogitBoostOptions {
    int iterations = 10;
};

// Additive logistic regression over weighted least-squares regression
// stumps (binary class only).
ModelPtr train_logitboost(const Dataset& ds, const LogitBoostOptions& options = {});

struct RandomForestOptions {
    int trees = 10;
    int k_features = 0;  // 0 = floor(log2(m)) + 1
    std::uint64_t seed = 1;
    bool bootstrap = true;  // disabled only for debugging/determinism tests
};

ModelPtr train_random_forest(const Dataset& ds, const RandomForestOptions& options = {});

struct SvmOptions {
    double c = 1.0;
    double tolerance = 1e-3;
};

// Linear soft-margin SVM trained by sequential minimal optimization on
// min-max-normalized inputs (binary class only).
ModelPtr train_linear_svm(const Dataset& ds, const SvmOptions& options = {});

// ---------------------------------------------------------------------------
// Concrete model types, exposed so reports and diagnostics can be inspected.

class MajorityModel : public Model {
public:
    MajorityModel(TrainingMeta meta, std::vector<double> class_counts);

    std::string kind() const override { return "majority"; }
    std::string report() const override;

    int label() const { return label_; }

protected:
    int do_predict(std::span<const double>) const override { return label_; }
    std::vector<double> do_distribution(std::span<const double>) const override;
    void do_save(std::ostream& out) const override;

private:
    friend ModelPtr load_model(std::istream&);
    std::vector<double> class_counts_;
    int label_;
};

class StumpModel : public Model {
public:
    StumpModel(TrainingMeta meta, int attribute, double threshold,
               std::vector<double> left_counts, std::vector<double> right_counts);

    std::string kind() const override { return "stump"; }
    std::string report() const override;
    std::optional<std::pair<int, int>> tree_stats() const override { return {{2, 3}}; }

    int attribute() const { return attribute_; }
    double threshold() const { return threshold_; }

protected:
    int do_predict(std::span<const double> values) const override;
    std::vector<double> do_distribution(std::span<const double> values) const override;
    void do_save(std::ostream& out) const override;

private:
    int attribute_;
    double threshold_;
    std::vector<double> left_counts_;
    std::vector<double> right_counts_;
    int left_label_;
    int right_label_;
};

class TreeModel : public Model {
public:
    TreeModel(TrainingMeta meta, std::unique_ptr<TreeNode> root, std::string kind_name = "tree");

    std::string kind() const override { return kind_; }
    std::string report() const override;
    std::optional<std::pair<int, int>> tree_stats() const override;

    const TreeNode& root() const { return *root_; }

protected:
    int do_predict(std::span<const double> values) const override;
    std::vector<double> do_distribution(std::span<const double> values) const override;
    void do_save(std::ostream& out) const override;

private:
    std::unique_ptr<TreeNode> root_;
    std::string kind_;
};

class LogitBoostModel : public Model {
public:
    struct RegressionStump {
        int attribute = 0;
        double threshold = 0.0;
        double left_value = 0.0;
        double right_value = 0.0;

        double value(std::span<const double> x) const {
            return x[attribute] <= threshold ? left_value : right_value;
        }
    };

    LogitBoostModel(TrainingMeta meta, std::vector<RegressionStump> stumps,
                    std::vector<double> nll_trace);

    std::string kind() const override { return "logitboost"; }
    std::string report() const override;

    // Additive score F(x); the class-1 probability is 1 / (1 + e^{-2F}).
    double score(std::span<const double> values) const;

    const std::vector<RegressionStump>& stumps() const { return stumps_; }
    // Training negative log-likelihood after each boosting iteration.
    const std::vector<double>& nll_trace() const { return nll_trace_; }

protected:
    int do_predict(std::span<const double> values) const override;
    std::vector<double> do_distribution(std::span<const double> values) const override;
    void do_save(std::ostream& out) const override;

private:
    std::vector<RegressionStump> stumps_;
    std::vector<double> nll_trace_;
};

class RandomForestModel : public Model {
public:
    RandomForestModel(TrainingMeta meta, std::vector<std::unique_ptr<TreeNode>> trees,
                      int k_features, std::uint64_t seed, std::optional<double> oob_error);

    std::string kind() const override { return "forest"; }
    std::string report() const override;
    std::optional<std::pair<int, int>> tree_stats() const override;

    int tree_count() const { return static_cast<int>(trees_.size()); }
    const TreeNode& tree(int index) const { return *trees_[index]; }
    int k_features() const { return k_features_; }
    std::optional<double> oob_error() const { return oob_error_; }

protected:
    int do_predict(std::span<const double> values) const override;
    std::vector<double> do_distribution(std::span<const double> values) const override;
    void do_save(std::ostream& out) const override;

private:
    std::vector<std::unique_ptr<TreeNode>> trees_;
    int k_features_;
    std::uint64_t seed_;
    std::optional<double> oob_error_;
};

class LinearSvmModel : public Model {
public:
    LinearSvmModel(TrainingMeta meta, std::vector<double> weights, double bias,
                   NormalizationTable normalization, std::vector<double> alphas);

    std::string kind() const override { return "linear_svm"; }
    std::string report() const override;

    // Decision value w . x_norm + b.
    double decision_value(std::span<const double> values) const;

    const std::vector<double>& weights() const { return weights_; }
    double bias() const { return bias_; }
    const NormalizationTable& normalization() const { return normalization_; }
    // Dual coefficients of the training instances, in dataset order
    // (in-memory diagnostic; not serialized).
    const std::vector<double>& alphas() const { return alphas_; }

protected:
    int do_predict(std::span<const double> values) const override;
    void do_save(std::ostream& out) const override;

private:
    std::vector<double> weights_;
    double bias_;
    NormalizationTable normalization_;
    std::vector<double> alphas_;
};

// Shared by trainers and tests: Shannon entropy of a count vector, in bits.
double count_entropy(std::span<const double> counts, double total);

}  // namespace statleak
