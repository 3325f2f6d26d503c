#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "statleak/classifiers.hpp"
#include "statleak/errors.hpp"

namespace statleak {

double count_entropy(std::span<const double> counts, double total) {
    if (total <= 0.0) return 0.0;
    double h = 0.0;
    for (double c : counts) {
        if (c <= 0.0) continue;
        const double p = c / total;
        h -= p * std::log2(p);
    }
    return h == 0.0 ? 0.0 : h;
}

void Model::check_arity(std::span<const double> values) const {
    if (values.size() != meta_.feature_names.size()) {
        throw ShapeError("expected " + std::to_string(meta_.feature_names.size()) +
                         " feature values, got " + std::to_string(values.size()));
    }
}

int Model::predict(std::span<const double> values) const {
    check_arity(values);
    return do_predict(values);
}

std::vector<double> Model::class_distribution(std::span<const double> values) const {
    check_arity(values);
    return do_distribution(values);
}

std::vector<double> Model::do_distribution(std::span<const double> values) const {
    std::vector<double> dist(meta_.class_values.size(), 0.0);
    dist[do_predict(values)] = 1.0;
    return dist;
}

namespace {

constexpr const char* kMagic = "statleak-model v1";

int argmax_counts(const std::vector<double>& counts) {
    return static_cast<int>(std::max_element(counts.begin(), counts.end()) - counts.begin());
}

std::vector<double> counts_to_distribution(const std::vector<double>& counts, int fallback_label) {
    double total = 0.0;
    for (double c : counts) total += c;
    std::vector<double> dist(counts.size(), 0.0);
    if (total <= 0.0) {
        dist[fallback_label] = 1.0;
        return dist;
    }
    for (std::size_t i = 0; i < counts.size(); ++i) dist[i] = counts[i] / total;
    return dist;
}

void write_counts(std::ostream& out, const std::vector<double>& counts) {
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (i > 0) out << ' ';
        out << format_double(counts[i]);
    }
}

// Weka-style count annotation: "(coverage/misclassified)", the error part
// omitted when zero.
std::string leaf_annotation(const TreeNode& node) {
    std::ostringstream out;
    out << '(' << std::fixed << std::setprecision(1) << node.coverage();
    if (node.misclassified() > 0.0) out << '/' << node.misclassified();
    out << ')';
    return out.str();
}

void print_tree(std::ostringstream& out, const TreeNode& node,
                const std::vector<std::string>& feature_names,
                const std::vector<std::string>& class_values, const std::string& prefix) {
    const std::string& attr = feature_names[node.attribute];
    const auto branch = [&](const TreeNode& child, const char* op) {
        out << prefix << attr << ' ' << op << ' ' << format_double(node.threshold);
        if (child.is_leaf()) {
            out << ": " << class_values[child.label] << ' ' << leaf_annotation(child) << '\n';
        } else {
            out << '\n';
            print_tree(out, child, feature_names, class_values, prefix + "|   ");
        }
    };
    branch(*node.left, "<=");
    branch(*node.right, ">");
}

std::pair<int, int> count_tree(const TreeNode& node) {
    if (node.is_leaf()) return {1, 1};
    const auto [ll, ln] = count_tree(*node.left);
    const auto [rl, rn] = count_tree(*node.right);
    return {ll + rl, ln + rn + 1};
}

void save_tree(std::ostream& out, const TreeNode& node) {
    if (node.is_leaf()) {
        out << "leaf " << node.label << ' ';
        write_counts(out, node.class_counts);
        out << '\n';
        return;
    }
    out << "split " << node.attribute << ' ' << format_double(node.threshold) << ' ';
    write_counts(out, node.class_counts);
    out << '\n';
    save_tree(out, *node.left);
    save_tree(out, *node.right);
}

struct LineReader {
    std::istream& in;
    std::size_t line_no = 0;

    std::string next() {
        std::string line;
        if (!std::getline(in, line)) {
            throw ParseError("line " + std::to_string(line_no) + ": unexpected end of model file",
                             line_no);
        }
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return line;
    }

    [[noreturn]] void fail(const std::string& message) const {
        throw ParseError("line " + std::to_string(line_no) + ": " + message, line_no);
    }

    // Splits "keyword rest" and checks the keyword.
    std::string expect(const std::string& keyword) {
        const std::string line = next();
        if (line.substr(0, keyword.size()) != keyword) fail("expected '" + keyword + "'");
        std::string rest = line.substr(keyword.size());
        if (!rest.empty() && rest.front() == ' ') rest.erase(rest.begin());
        return rest;
    }
};

std::vector<double> parse_doubles(const std::string& text, LineReader& reader) {
    std::istringstream in(text);
    std::vector<double> values;
    double v;
    while (in >> v) values.push_back(v);
    if (!in.eof()) reader.fail("bad numeric list");
    return values;
}

std::unique_ptr<TreeNode> load_tree(LineReader& reader) {
    std::istringstream line(reader.next());
    std::string tag;
    line >> tag;
    auto node = std::make_unique<TreeNode>();
    if (tag == "leaf") {
        line >> node->label;
        double c;
        while (line >> c) node->class_counts.push_back(c);
        return node;
    }
    if (tag != "split") reader.fail("expected 'leaf' or 'split'");
    line >> node->attribute >> node->threshold;
    double c;
    while (line >> c) node->class_counts.push_back(c);
    node->left = load_tree(reader);
    node->right = load_tree(reader);
    node->label = argmax_counts(node->class_counts);
    return node;
}

}  // namespace

double TreeNode::coverage() const {
    double total = 0.0;
    for (double c : class_counts) total += c;
    return total;
}

double TreeNode::misclassified() const {
    return coverage() - (class_counts.empty() ? 0.0 : class_counts[label]);
}

int predict_tree(const TreeNode& node, std::span<const double> values) {
    const TreeNode* cur = &node;
    while (!cur->is_leaf()) {
        cur = values[cur->attribute] <= cur->threshold ? cur->left.get() : cur->right.get();
    }
    return cur->label;
}

void Model::save(std::ostream& out) const {
    out << kMagic << '\n';
    out << "kind " << kind() << '\n';
    out << "features " << meta_.feature_names.size() << '\n';
    for (const auto& name : meta_.feature_names) out << name << '\n';
    out << "classes " << meta_.class_values.size() << '\n';
    for (const auto& name : meta_.class_values) out << name << '\n';
    do_save(out);
    out << "end\n";
}

// ---------------------------------------------------------------------------
// MajorityModel

MajorityModel::MajorityModel(TrainingMeta meta, std::vector<double> class_counts)
    : class_counts_(std::move(class_counts)) {
    meta_ = std::move(meta);
    label_ = argmax_counts(class_counts_);
}

std::string MajorityModel::report() const {
    std::ostringstream out;
    double total = 0.0;
    for (double c : class_counts_) total += c;
    out << "Majority class predictor: " << meta_.class_values[label_] << " ("
        << format_double(class_counts_[label_]) << '/' << format_double(total) << ")\n";
    return out.str();
}

std::vector<double> MajorityModel::do_distribution(std::span<const double>) const {
    return counts_to_distribution(class_counts_, label_);
}

void MajorityModel::do_save(std::ostream& out) const {
    out << "counts ";
    write_counts(out, class_counts_);
    out << '\n';
}

// ---------------------------------------------------------------------------
// StumpModel

StumpModel::StumpModel(TrainingMeta meta, int attribute, double threshold,
                       std::vector<double> left_counts, std::vector<double> right_counts)
    : attribute_(attribute),
      threshold_(threshold),
      left_counts_(std::move(left_counts)),
      right_counts_(std::move(right_counts)) {
    meta_ = std::move(meta);
    left_label_ = argmax_counts(left_counts_);
    right_label_ = argmax_counts(right_counts_);
}

int StumpModel::do_predict(std::span<const double> values) const {
    return values[attribute_] <= threshold_ ? left_label_ : right_label_;
}

std::vector<double> StumpModel::do_distribution(std::span<const double> values) const {
    const bool left = values[attribute_] <= threshold_;
    return counts_to_distribution(left ? left_counts_ : right_counts_,
                                  left ? left_label_ : right_label_);
}

std::string StumpModel::report() const {
    const auto line = [&](const char* op, const std::vector<double>& counts, int label) {
        double total = 0.0;
        for (double c : counts) total += c;
        std::ostringstream out;
        out << meta_.feature_names[attribute_] << ' ' << op << ' ' << format_double(threshold_)
            << ": " << meta_.class_values[label] << " (" << std::fixed << std::setprecision(1)
            << total;
        const double wrong = total - counts[label];
        if (wrong > 0.0) out << '/' << wrong;
        out << ")\n";
        return out.str();
    };
    return "Decision stump\n\n" + line("<=", left_counts_, left_label_) +
           line(">", right_counts_, right_label_);
}

void StumpModel::do_save(std::ostream& out) const {
    out << "attribute " << attribute_ << '\n';
    out << "threshold " << format_double(threshold_) << '\n';
    out << "left ";
    write_counts(out, left_counts_);
    out << '\n';
    out << "right ";
    write_counts(out, right_counts_);
    out << '\n';
}

// ---------------------------------------------------------------------------
// TreeModel

TreeModel::TreeModel(TrainingMeta meta, std::unique_ptr<TreeNode> root, std::string kind_name)
    : root_(std::move(root)), kind_(std::move(kind_name)) {
    meta_ = std::move(meta);
}

int TreeModel::do_predict(std::span<const double> values) const {
    return predict_tree(*root_, values);
}

std::vector<double> TreeModel::do_distribution(std::span<const double> values) const {
    const TreeNode* cur = root_.get();
    while (!cur->is_leaf()) {
        cur = values[cur->attribute] <= cur->threshold ? cur->left.get() : cur->right.get();
    }
    return counts_to_distribution(cur->class_counts, cur->label);
}

std::optional<std::pair<int, int>> TreeModel::tree_stats() const {
    return count_tree(*root_);
}

std::string TreeModel::report() const {
    std::ostringstream out;
    if (root_->is_leaf()) {
        out << ": " << meta_.class_values[root_->label] << ' ' << leaf_annotation(*root_) << '\n';
    } else {
        print_tree(out, *root_, meta_.feature_names, meta_.class_values, "");
    }
    const auto [leaves, nodes] = count_tree(*root_);
    out << "\nNumber of Leaves  : " << leaves << "\n\nSize of the tree : " << nodes << '\n';
    return out.str();
}

void TreeModel::do_save(std::ostream& out) const {
    save_tree(out, *root_);
}

// ---------------------------------------------------------------------------
// LogitBoostModel

LogitBoostModel::LogitBoostModel(TrainingMeta meta, std::vector<RegressionStump> stumps,
                                 std::vector<double> nll_trace)
    : stumps_(std::move(stumps)), nll_trace_(std::move(nll_trace)) {
    meta_ = std::move(meta);
}

double LogitBoostModel::score(std::span<const double> values) const {
    double f = 0.0;
    for (const auto& stump : stumps_) f += 0.5 * stump.value(values);
    return f;
}

int LogitBoostModel::do_predict(std::span<const double> values) const {
    return score(values) > 0.0 ? 1 : 0;
}

std::vector<double> LogitBoostModel::do_distribution(std::span<const double> values) const {
    const double p = 1.0 / (1.0 + std::exp(-2.0 * score(values)));
    return {1.0 - p, p};
}

std::string LogitBoostModel::report() const {
    std::ostringstream out;
    out << "LogitBoost: Base classifiers and their weights:\n\n";
    for (std::size_t i = 0; i < stumps_.size(); ++i) {
        const auto& s = stumps_[i];
        out << "Iteration " << (i + 1) << ": " << meta_.feature_names[s.attribute] << " <= "
            << format_double(s.threshold) << " -> " << format_double(s.left_value) << ", > -> "
            << format_double(s.right_value) << '\n';
    }
    return out.str();
}

void LogitBoostModel::do_save(std::ostream& out) const {
    out << "iterations " << stumps_.size() << '\n';
    for (const auto& s : stumps_) {
        out << "rstump " << s.attribute << ' ' << format_double(s.threshold) << ' '
            << format_double(s.left_value) << ' ' << format_double(s.right_value) << '\n';
    }
}

// ---------------------------------------------------------------------------
// RandomForestModel

RandomForestModel::RandomForestModel(TrainingMeta meta,
                                     std::vector<std::unique_ptr<TreeNode>> trees, int k_features,
                                     std::uint64_t seed, std::optional<double> oob_error)
    : trees_(std::move(trees)), k_features_(k_features), seed_(seed), oob_error_(oob_error) {
    meta_ = std::move(meta);
}

int RandomForestModel::do_predict(std::span<const double> values) const {
    std::vector<int> votes(meta_.class_values.size(), 0);
    for (const auto& tree : trees_) ++votes[predict_tree(*tree, values)];
    return static_cast<int>(std::max_element(votes.begin(), votes.end()) - votes.begin());
}

std::vector<double> RandomForestModel::do_distribution(std::span<const double> values) const {
    std::vector<double> dist(meta_.class_values.size(), 0.0);
    for (const auto& tree : trees_) {
        const TreeNode* cur = tree.get();
        while (!cur->is_leaf()) {
            cur = values[cur->attribute] <= cur->threshold ? cur->left.get() : cur->right.get();
        }
        const auto leaf_dist = counts_to_distribution(cur->class_counts, cur->label);
        for (std::size_t c = 0; c < dist.size(); ++c) dist[c] += leaf_dist[c];
    }
    for (double& d : dist) d /= static_cast<double>(trees_.size());
    return dist;
}

std::optional<std::pair<int, int>> RandomForestModel::tree_stats() const {
    int leaves = 0;
    int nodes = 0;
    for (const auto& tree : trees_) {
        const auto [l, n] = count_tree(*tree);
        leaves += l;
        nodes += n;
    }
    return {{leaves, nodes}};
}

std::string RandomForestModel::report() const {
    std::ostringstream out;
    out << "Random forest of " << trees_.size() << " trees, each constructed while considering "
        << k_features_ << " random features.\n";
    if (oob_error_) {
        out << "Out of bag error: " << std::fixed << std::setprecision(4) << *oob_error_ << '\n';
    }
    return out.str();
}

void RandomForestModel::do_save(std::ostream& out) const {
    out << "trees " << trees_.size() << '\n';
    out << "k_features " << k_features_ << '\n';
    out << "seed " << seed_ << '\n';
    out << "oob " << (oob_error_ ? format_double(*oob_error_) : std::string("none")) << '\n';
    for (const auto& tree : trees_) save_tree(out, *tree);
}

// ---------------------------------------------------------------------------
// LinearSvmModel

LinearSvmModel::LinearSvmModel(TrainingMeta meta, std::vector<double> weights, double bias,
                               NormalizationTable normalization, std::vector<double> alphas)
    : weights_(std::move(weights)),
      bias_(bias),
      normalization_(std::move(normalization)),
      alphas_(std::move(alphas)) {
    meta_ = std::move(meta);
}

double LinearSvmModel::decision_value(std::span<const double> values) const {
    double f = bias_;
    for (std::size_t i = 0; i < weights_.size(); ++i) {
        f += weights_[i] * normalization_.apply(i, values[i]);
    }
    return f;
}

int LinearSvmModel::do_predict(std::span<const double> values) const {
    return decision_value(values) > 0.0 ? 1 : 0;
}

std::string LinearSvmModel::report() const {
    std::ostringstream out;
    out << "Machine linear: showing attribute weights, not support vectors.\n\n";
    out << std::fixed << std::setprecision(4);
    for (std::size_t i = 0; i < weights_.size(); ++i) {
        out << (i == 0 ? "  " : "+ ") << std::setw(10) << weights_[i] << " * (normalized) "
            << meta_.feature_names[i] << '\n';
    }
    out << "+ " << std::setw(10) << bias_ << '\n';
    return out.str();
}

void LinearSvmModel::do_save(std::ostream& out) const {
    out << "weights ";
    write_counts(out, weights_);
    out << '\n';
    out << "bias " << format_double(bias_) << '\n';
    out << "norm " << normalization_.ranges.size() << '\n';
    for (const auto& [lo, hi] : normalization_.ranges) {
        out << format_double(lo) << ' ' << format_double(hi) << '\n';
    }
}

// ---------------------------------------------------------------------------
// Deserialization

ModelPtr load_model(std::istream& in) {
    LineReader reader{in};
    if (reader.next() != kMagic) reader.fail("not a statleak model file");
    const std::string kind = reader.expect("kind");

    TrainingMeta meta;
    const std::size_t n_features = std::stoul(reader.expect("features"));
    for (std::size_t i = 0; i < n_features; ++i) meta.feature_names.push_back(reader.next());
    const std::size_t n_classes = std::stoul(reader.expect("classes"));
    for (std::size_t i = 0; i < n_classes; ++i) meta.class_values.push_back(reader.next());

    ModelPtr model;
    if (kind == "majority") {
        auto counts = parse_doubles(reader.expect("counts"), reader);
        if (counts.size() != n_classes) reader.fail("count arity mismatch");
        model = std::make_unique<MajorityModel>(std::move(meta), std::move(counts));
    } else if (kind == "stump") {
        const int attribute = std::stoi(reader.expect("attribute"));
        const double threshold = std::stod(reader.expect("threshold"));
        auto left = parse_doubles(reader.expect("left"), reader);
        auto right = parse_doubles(reader.expect("right"), reader);
        model = std::make_unique<StumpModel>(std::move(meta), attribute, threshold,
                                             std::move(left), std::move(right));
    } else if (kind == "tree") {
        auto root = load_tree(reader);
        model = std::make_unique<TreeModel>(std::move(meta), std::move(root));
    } else if (kind == "logitboost") {
        const std::size_t iterations = std::stoul(reader.expect("iterations"));
        std::vector<LogitBoostModel::RegressionStump> stumps;
        for (std::size_t i = 0; i < iterations; ++i) {
            std::istringstream line(reader.expect("rstump"));
            LogitBoostModel::RegressionStump s;
            if (!(line >> s.attribute >> s.threshold >> s.left_value >> s.right_value)) {
                reader.fail("bad regression stump");
            }
            stumps.push_back(s);
        }
        model = std::make_unique<LogitBoostModel>(std::move(meta), std::move(stumps),
                                                  std::vector<double>{});
    } else if (kind == "forest") {
        const std::size_t n_trees = std::stoul(reader.expect("trees"));
        const int k = std::stoi(reader.expect("k_features"));
        const std::uint64_t seed = std::stoull(reader.expect("seed"));
        const std::string oob_text = reader.expect("oob");
        std::optional<double> oob;
        if (oob_text != "none") oob = std::stod(oob_text);
        std::vector<std::unique_ptr<TreeNode>> trees;
        for (std::size_t i = 0; i < n_trees; ++i) trees.push_back(load_tree(reader));
        model = std::make_unique<RandomForestModel>(std::move(meta), std::move(trees), k, seed, oob);
    } else if (kind == "linear_svm") {
        auto weights = parse_doubles(reader.expect("weights"), reader);
        const double bias = std::stod(reader.expect("bias"));
        const std::size_t n_norm = std::stoul(reader.expect("norm"));
        NormalizationTable table;
        for (std::size_t i = 0; i < n_norm; ++i) {
            std::istringstream line(reader.next());
            double lo, hi;
            if (!(line >> lo >> hi)) reader.fail("bad normalization range");
            table.ranges.emplace_back(lo, hi);
        }
        model = std::make_unique<LinearSvmModel>(std::move(meta), std::move(weights), bias,
                                                 std::move(table), std::vector<double>{});
    } else {
        reader.fail("unknown model kind '" + kind + "'");
    }

    if (reader.expect("end").empty() == false) reader.fail("trailing content after 'end'");
    return model;
}

ModelPtr load_model_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open model file: " + path.string());
    return load_model(in);
}

void save_model_file(const Model& model, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open for writing: " + path.string());
    model.save(out);
    if (!out) throw Error("write failed: " + path.string());
}

}  // namespace statleak
