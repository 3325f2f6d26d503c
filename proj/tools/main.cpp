#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "statleak/attrsel.hpp"
#include "statleak/audit.hpp"
#include "statleak/classifiers.hpp"
#include "statleak/dataset.hpp"
#include "statleak/errors.hpp"
#include "statleak/eval.hpp"
#include "statleak/raster.hpp"
#include "statleak/stats.hpp"
#include "statleak/synth.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitPartial = 2;
constexpr int kExitDataError = 3;

using namespace statleak;

std::uint64_t fnv1a64(const std::vector<std::string>& parts) {
    std::uint64_t hash = 1469598103934665603ull;
    for (const auto& part : parts) {
        for (unsigned char c : part) {
            hash ^= c;
            hash *= 1099511628211ull;
        }
        hash ^= '\0';
        hash *= 1099511628211ull;
    }
    return hash;
}

// Every command output opens with version, seed(s) and a digest of the
// invocation, so a run can be reproduced byte-for-byte.
void print_header(const std::vector<std::string>& argv_copy, const std::string& seeds) {
    std::ostringstream digest;
    digest << std::hex << std::setfill('0') << std::setw(16) << fnv1a64(argv_copy);
    std::cout << "# statleak " << kVersion << "\n";
    if (!seeds.empty()) std::cout << "# seed: " << seeds << "\n";
    std::cout << "# config: " << digest.str() << "\n";
}

const char* error_kind(const Error& e) {
    if (dynamic_cast<const EmptyStream*>(&e)) return "EmptyStream";
    if (dynamic_cast<const InsufficientData*>(&e)) return "InsufficientData";
    if (dynamic_cast<const ParseError*>(&e)) return "ParseError";
    if (dynamic_cast<const BadCorpusLayout*>(&e)) return "BadCorpusLayout";
    if (dynamic_cast<const EmptyClass*>(&e)) return "EmptyClass";
    if (dynamic_cast<const BadAttribute*>(&e)) return "BadAttribute";
    if (dynamic_cast<const EmptyDataset*>(&e)) return "EmptyDataset";
    if (dynamic_cast<const NotBinary*>(&e)) return "NotBinary";
    if (dynamic_cast<const BadParameter*>(&e)) return "BadParameter";
    if (dynamic_cast<const ShapeError*>(&e)) return "ShapeError";
    return "Error";
}

struct TrainFlags {
    std::string algo = "j48";
    std::uint64_t seed = 1;
    double confidence = 0.25;
    int min_leaf = 2;
    bool no_prune = false;
    int iterations = 10;
    int trees = 10;
    int k_features = 0;
    double c = 1.0;
    double tolerance = 1e-3;

    TrainerSpec spec() const {
        TrainerSpec out;
        out.algo = algo;
        out.c45 = {confidence, min_leaf, !no_prune};
        out.boost = {iterations};
        out.forest = {trees, k_features, seed, true};
        out.svm = {c, tolerance};
        return out;
    }

    void add_to(CLI::App* cmd) {
        cmd->add_option("--algo", algo, "majority|stump|j48|logitboost|forest|svm")
            ->default_val("j48");
        cmd->add_option("--seed", seed, "Seed for randomized trainers")->default_val(1);
        cmd->add_option("--confidence", confidence, "Pruning confidence factor (j48)");
        cmd->add_option("--min-leaf", min_leaf, "Minimum instances per branch (j48)");
        cmd->add_flag("--no-prune", no_prune, "Disable error-based pruning (j48)");
        cmd->add_option("--iterations", iterations, "Boosting iterations (logitboost)");
        cmd->add_option("--trees", trees, "Number of trees (forest)");
        cmd->add_option("--k-features", k_features,
                        "Features sampled per node, 0 = floor(log2(m))+1 (forest)");
        cmd->add_option("--c", c, "Soft-margin complexity (svm)");
        cmd->add_option("--tolerance", tolerance, "KKT tolerance (svm)");
    }
};

std::string fixed(double value, int digits) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(digits) << value;
    return out.str();
}

// Display precision follows the conventional report layout (entropy, mean
// and pi at 2 decimals, correlation at 6); stored values are never rounded.
void print_fingerprint_report(const Fingerprint& fp, const ChiSquareResult& chi,
                              const std::string& name) {
    std::cout << "File: " << name << "\n";
    std::cout << "Entropy = " << fixed(fp.entropy, 2) << " bits per byte.\n";
    std::cout << "Optimum compression would reduce the size of this " << fp.size
              << " byte file by " << fixed(fp.compression_rate, 0) << " percent.\n";
    std::cout << "Chi square distribution for " << fp.size << " samples is "
              << fixed(fp.chisq_statistic, 2) << ", and randomly would exceed this value "
              << fixed(chi.p_value * 100.0, 2) << " percent of the times.\n";
    std::cout << "Arithmetic mean value of data bytes is " << fixed(fp.arith_mean, 2)
              << " (127.5 = random).\n";
    std::cout << "Monte Carlo value for Pi is " << fixed(fp.monte_pi, 2) << " (error "
              << fixed(fp.err_monte_pi, 2) << " percent).\n";
    if (fp.corr_defined) {
        std::cout << "Serial correlation coefficient is " << fixed(fp.serial_corr, 6)
                  << " (totally uncorrelated = 0.0).\n";
    } else {
        std::cout << "Serial correlation coefficient is undefined (constant stream; "
                     "recorded as 0 in datasets).\n";
    }
    std::cout << "\n";
}

int cmd_fingerprint(const std::vector<std::string>& files, const std::string& format) {
    bool any_skipped = false;
    if (format == "tsv") {
        std::cout << "#";
        for (const auto& name : Fingerprint::feature_names()) std::cout << ' ' << name;
        std::cout << " file\n";
    }
    for (const auto& file : files) {
        Fingerprint fp;
        try {
            fp = fingerprint_file(file);
        } catch (const Error& e) {
            std::cerr << "skipped " << file << ": " << error_kind(e) << ": " << e.what() << "\n";
            any_skipped = true;
            continue;
        }
        if (format == "report") {
            ChiSquareResult chi;
            chi.statistic = fp.chisq_statistic;
            chi.p_value = chi_square_p_value(fp.chisq_statistic, 255);
            print_fingerprint_report(fp, chi, file);
        } else {
            for (double v : fp.values()) std::cout << format_double(v) << '\t';
            std::cout << file << "\n";
        }
    }
    return any_skipped ? kExitPartial : kExitOk;
}

Dataset load_dataset_checked(const std::string& path) {
    const Dataset ds = read_arff_file(path);
    if (ds.instances.empty()) {
        throw EmptyDataset("no data rows in " + path);
    }
    return ds;
}

int cmd_build_dataset(const std::string& root, const std::string& output,
                      const std::string& skip_log, unsigned threads,
                      const std::string& relation) {
    IngestResult result = ingest_corpus(root, threads);
    if (!relation.empty()) result.dataset.relation_name = relation;

    if (output.size() >= 4 && output.substr(output.size() - 4) == ".csv") {
        std::ofstream out(output);
        if (!out) throw Error("cannot open for writing: " + output);
        write_csv(result.dataset, out);
    } else {
        write_arff_file(result.dataset, output);
    }

    std::cout << "instances: " << result.dataset.n_instances() << "\n";
    const auto counts = result.dataset.class_counts();
    for (std::size_t c = 0; c < counts.size(); ++c) {
        std::cout << "class " << result.dataset.class_values[c] << ": " << counts[c] << "\n";
    }
    std::cout << "skipped: " << result.skipped.size() << "\n";
    std::cout << "wrote: " << output << "\n";

    if (!result.skipped.empty()) {
        std::ostream* sink = &std::cerr;
        std::ofstream log;
        if (!skip_log.empty()) {
            log.open(skip_log);
            if (log) sink = &log;
        }
        for (const auto& [path, reason] : result.skipped) {
            *sink << path.string() << '\t' << reason << "\n";
        }
        return kExitPartial;
    }
    return kExitOk;
}

int cmd_train(const TrainFlags& flags, const std::string& arff, const std::string& output) {
    const Dataset ds = load_dataset_checked(arff);
    const ModelPtr model = make_trainer(flags.spec())(ds);
    std::cout << "=== Classifier model (full training set) ===\n\n";
    std::cout << model->report() << "\n";
    if (!output.empty()) {
        save_model_file(*model, output);
        std::cout << "saved model: " << output << "\n";
    }
    return kExitOk;
}

int cmd_evaluate(const TrainFlags& flags, const std::string& arff, int folds,
                 const std::string& format) {
    const Dataset ds = load_dataset_checked(arff);
    const EvalReport report = cross_validate(make_trainer(flags.spec()), ds, folds, flags.seed);
    if (format == "tsv") {
        std::cout << "algo\t" << flags.algo << "\n";
        std::cout << "instances\t" << report.total() << "\n";
        std::cout << "correct\t" << report.correct << "\n";
        std::cout << "accuracy\t" << format_double(report.accuracy) << "\n";
        std::cout << "kappa\t" << format_double(report.kappa) << "\n";
        std::cout << "mae\t" << format_double(report.mae) << "\n";
        std::cout << "rmse\t" << format_double(report.rmse) << "\n";
        std::cout << "rae\t" << format_double(report.rae_percent) << "\n";
        std::cout << "rrse\t" << format_double(report.rrse_percent) << "\n";
        for (std::size_t r = 0; r < report.confusion.size(); ++r) {
            std::cout << "confusion_" << report.class_values[r];
            for (std::size_t c = 0; c < report.confusion[r].size(); ++c) {
                std::cout << '\t' << report.confusion[r][c];
            }
            std::cout << "\n";
        }
        return kExitOk;
    }
    std::cout << "=== Run information ===\n\n";
    std::cout << "Scheme:       " << flags.algo << "\n";
    std::cout << "Relation:     " << ds.relation_name << "\n";
    std::cout << "Instances:    " << ds.n_instances() << "\n";
    std::cout << "Attributes:   " << ds.n_features() + 1 << "\n";
    std::cout << "Test mode:    " << folds << "-fold cross-validation, seed " << flags.seed
              << "\n\n";
    std::cout << "=== Classifier model (full training set) ===\n\n";
    std::cout << report.model_report << "\n";
    std::cout << report.summary();
    return kExitOk;
}

int cmd_rank(const std::string& arff, int folds, std::uint64_t seed, const std::string& format) {
    const Dataset ds = load_dataset_checked(arff);
    const RankingReport report = rank_attributes_cv(ds, folds, seed);
    if (format == "tsv") {
        std::cout << "# attribute\tindex\tmean_merit\tstddev_merit\tmean_rank\tstddev_rank\n";
        for (const auto& row : report.rows) {
            std::cout << row.name << '\t' << row.index << '\t' << format_double(row.mean_merit)
                      << '\t' << format_double(row.stddev_merit) << '\t'
                      << format_double(row.mean_rank) << '\t' << format_double(row.stddev_rank)
                      << "\n";
        }
        return kExitOk;
    }
    std::cout << report.text();
    return kExitOk;
}

int cmd_select(const std::string& arff, int stale) {
    const Dataset ds = load_dataset_checked(arff);
    const SubsetSearchResult result = cfs_best_first(ds, stale);
    std::cout << result.text(ds);
    return kExitOk;
}

int cmd_learning_curve(const TrainFlags& flags, const std::string& arff,
                       const std::vector<std::size_t>& sizes, int folds,
                       const std::string& format) {
    const Dataset ds = load_dataset_checked(arff);
    const auto rows = learning_curve(make_trainer(flags.spec()), ds, sizes, folds, flags.seed);
    if (format == "tsv") {
        std::cout << "# size\tnodes\taccuracy\n";
        for (const auto& row : rows) {
            std::cout << row.size << '\t' << row.tree_nodes << '\t'
                      << format_double(row.accuracy) << "\n";
        }
        return kExitOk;
    }
    std::cout << "Images  Nodes  Accuracy\n";
    for (const auto& row : rows) {
        std::cout << std::left << std::setw(8) << row.size << std::setw(7) << row.tree_nodes
                  << fixed(row.accuracy, 1) << " %\n";
    }
    return kExitOk;
}

std::vector<LabeledRasters> load_base_rasters(const std::string& dir) {
    namespace fs = std::filesystem;
    std::vector<LabeledRasters> bases;
    std::vector<std::string> classes;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_directory()) classes.push_back(entry.path().filename().string());
    }
    std::sort(classes.begin(), classes.end());
    if (classes.size() < 2) throw BadCorpusLayout("base directory needs 2+ class subdirectories");
    for (const auto& cls : classes) {
        LabeledRasters labeled;
        labeled.class_name = cls;
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(fs::path(dir) / cls)) {
            if (entry.is_regular_file() && entry.path().extension() == ".ppm") {
                files.push_back(entry.path());
            }
        }
        std::sort(files.begin(), files.end());
        for (const auto& file : files) labeled.rasters.push_back(read_ppm_file(file));
        if (labeled.rasters.empty()) throw EmptyClass("no .ppm bases in class " + cls);
        bases.push_back(std::move(labeled));
    }
    return bases;
}

// "name:sigma:amplitude:count" per class.
SyntheticClassSpec parse_gen_class(const std::string& text) {
    SyntheticClassSpec spec;
    std::istringstream in(text);
    std::string field;
    if (!std::getline(in, field, ':')) throw BadParameter("bad --gen-class: " + text);
    spec.name = field;
    if (!std::getline(in, field, ':')) throw BadParameter("bad --gen-class: " + text);
    spec.noise_sigma = std::stod(field);
    if (!std::getline(in, field, ':')) throw BadParameter("bad --gen-class: " + text);
    spec.gradient_amplitude = std::stod(field);
    if (!std::getline(in, field, ':')) throw BadParameter("bad --gen-class: " + text);
    spec.count = std::stoi(field);
    return spec;
}

int cmd_synth_corpus(const std::string& bases_dir, const std::vector<std::string>& gen_classes,
                     int gen_width, int gen_height, const std::string& mark_path, double alpha,
                     int per_class, std::uint64_t seed, const std::string& encoder_text,
                     const std::string& out_dir) {
    std::vector<LabeledRasters> bases;
    if (!bases_dir.empty()) {
        bases = load_base_rasters(bases_dir);
    } else if (!gen_classes.empty()) {
        SyntheticBaseSpec spec;
        spec.width = gen_width;
        spec.height = gen_height;
        for (const auto& text : gen_classes) spec.classes.push_back(parse_gen_class(text));
        bases = generate_synthetic_bases(spec, seed);
    } else {
        throw BadParameter("one of --bases or --gen-class is required");
    }

    Raster mark;
    if (!mark_path.empty()) {
        mark = read_ppm_file(mark_path);
    } else {
        // Default test logo: a small high-contrast square.
        mark = Raster::solid(std::max(2, gen_width / 8), std::max(2, gen_height / 8), 230, 20, 20);
    }

    SynthCorpusOptions options;
    options.alpha = alpha;
    options.count_per_class = per_class;
    options.seed = seed;
    if (encoder_text == "ppm") {
        options.encoder = PpmEncoder{};
    } else if (encoder_text == "rle") {
        options.encoder = RleEncoder{};
    } else if (encoder_text.rfind("exec:", 0) == 0) {
        options.encoder = ExecEncoder{encoder_text.substr(5)};
    } else {
        throw BadParameter("encoder must be ppm, rle, or exec:<template>");
    }

    synth_corpus(bases, mark, options, out_dir);
    std::cout << "classes: " << bases.size() << "\n";
    std::cout << "files: " << bases.size() * static_cast<std::size_t>(per_class) << "\n";
    std::cout << "wrote: " << out_dir << "\n";
    return kExitOk;
}

int cmd_report(const std::string& root, int folds, std::uint64_t seed,
               const std::string& format) {
    const IngestResult ingested = ingest_corpus(root);
    AuditOptions options;
    options.folds = folds;
    options.seed = seed;
    const AuditReport audit = run_audit(ingested.dataset, options);
    if (format == "tsv") {
        std::cout << "# classifier\tnon_allowed\tused\taccuracy\n";
        for (const auto& row : audit.rows) {
            std::cout << row.classifier << '\t' << row.non_allowed << '\t' << row.used << '\t'
                      << format_double(row.accuracy) << "\n";
        }
        std::cout << "# majority_baseline\t" << format_double(audit.majority_accuracy) << "\n";
    } else {
        std::cout << audit.text(ingested.dataset);
    }
    if (!ingested.skipped.empty()) {
        std::cerr << ingested.skipped.size() << " file(s) skipped during ingestion\n";
        return kExitPartial;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Byte-statistics side-channel analysis of labeled image corpora"};
    app.require_subcommand(1);
    std::vector<std::string> argv_copy(argv, argv + argc);

    auto* fingerprint_cmd = app.add_subcommand(
        "fingerprint", "Compute the eight byte statistics of files");
    std::vector<std::string> fp_files;
    std::string fp_format = "tsv";
    fingerprint_cmd->add_option("files", fp_files, "Input files")->required()->expected(-1);
    fingerprint_cmd->add_option("--format", fp_format, "tsv|report")
        ->check(CLI::IsMember({"tsv", "report"}));

    auto* build_cmd = app.add_subcommand("build-dataset", "Fingerprint a labeled corpus tree");
    std::string build_root, build_out, build_skip_log, build_relation;
    unsigned build_threads = 0;
    build_cmd->add_option("root", build_root, "Corpus root (class subdirectories)")->required();
    build_cmd->add_option("-o,--output", build_out, "Output .arff (or .csv)")->required();
    build_cmd->add_option("--skip-log", build_skip_log, "Write skipped files here");
    build_cmd->add_option("--threads", build_threads, "Fingerprinting threads (0 = auto)");
    build_cmd->add_option("--relation", build_relation, "Relation name override");

    auto* train_cmd = app.add_subcommand("train", "Train a classifier on an ARFF dataset");
    TrainFlags train_flags;
    std::string train_arff, train_out;
    train_flags.add_to(train_cmd);
    train_cmd->add_option("arff", train_arff, "Input dataset")->required();
    train_cmd->add_option("-o,--output", train_out, "Save the model here");

    auto* eval_cmd = app.add_subcommand("evaluate", "Stratified cross-validation");
    TrainFlags eval_flags;
    std::string eval_arff, eval_format = "text";
    int eval_folds = 10;
    eval_flags.add_to(eval_cmd);
    eval_cmd->add_option("arff", eval_arff, "Input dataset")->required();
    eval_cmd->add_option("--folds", eval_folds, "Fold count")->default_val(10);
    eval_cmd->add_option("--format", eval_format, "text|tsv")
        ->check(CLI::IsMember({"text", "tsv"}));

    auto* rank_cmd = app.add_subcommand("rank-attributes", "Chi-square attribute ranking");
    std::string rank_arff, rank_format = "text";
    int rank_folds = 10;
    std::uint64_t rank_seed = 1;
    rank_cmd->add_option("arff", rank_arff, "Input dataset")->required();
    rank_cmd->add_option("--folds", rank_folds, "Fold count")->default_val(10);
    rank_cmd->add_option("--seed", rank_seed, "Fold seed")->default_val(1);
    rank_cmd->add_option("--format", rank_format, "text|tsv")
        ->check(CLI::IsMember({"text", "tsv"}));

    auto* select_cmd = app.add_subcommand("select-subset", "CFS best-first subset search");
    std::string select_arff;
    int select_stale = 5;
    select_cmd->add_option("arff", select_arff, "Input dataset")->required();
    select_cmd->add_option("--stale", select_stale, "Stop after this many stale expansions")
        ->default_val(5);

    auto* curve_cmd = app.add_subcommand("learning-curve", "Accuracy at growing sample sizes");
    TrainFlags curve_flags;
    std::string curve_arff, curve_format = "text";
    std::vector<std::size_t> curve_sizes;
    int curve_folds = 10;
    curve_flags.add_to(curve_cmd);
    curve_cmd->add_option("arff", curve_arff, "Input dataset")->required();
    curve_cmd->add_option("--sizes", curve_sizes, "Comma-separated sample sizes")
        ->required()
        ->delimiter(',');
    curve_cmd->add_option("--folds", curve_folds, "Fold count")->default_val(10);
    curve_cmd->add_option("--format", curve_format, "text|tsv")
        ->check(CLI::IsMember({"text", "tsv"}));

    auto* synth_cmd = app.add_subcommand("synth-corpus", "Expand bases into a watermarked corpus");
    std::string synth_bases, synth_mark, synth_encoder = "rle", synth_out;
    std::vector<std::string> synth_gen_classes;
    int synth_gen_width = 64, synth_gen_height = 64, synth_per_class = 1;
    double synth_alpha = 0.25;
    std::uint64_t synth_seed = 1;
    synth_cmd->add_option("--bases", synth_bases, "Directory of PPM bases (class subdirs)");
    synth_cmd->add_option("--gen-class", synth_gen_classes,
                          "Synthesize bases: name:sigma:amplitude:count (repeatable)");
    synth_cmd
        ->add_option("--gen-size", synth_gen_width, "Synthetic base width and height")
        ->each([&synth_gen_height](const std::string& v) { synth_gen_height = std::stoi(v); });
    synth_cmd->add_option("--mark", synth_mark, "Watermark PPM (defaults to a small square)");
    synth_cmd->add_option("--alpha", synth_alpha, "Watermark opacity in [0,1]")->default_val(0.25);
    synth_cmd->add_option("--per-class", synth_per_class, "Outputs per class")->required();
    synth_cmd->add_option("--seed", synth_seed, "Master seed")->default_val(1);
    synth_cmd->add_option("--encoder", synth_encoder, "ppm|rle|exec:<template>")
        ->default_val("rle");
    synth_cmd->add_option("-o,--output", synth_out, "Output corpus directory")->required();

    auto* report_cmd = app.add_subcommand("report", "Full leakage audit of a corpus tree");
    std::string report_root;
    int report_folds = 10;
    std::uint64_t report_seed = 1;
    std::string report_format = "text";
    report_cmd->add_option("root", report_root, "Corpus root (class subdirectories)")->required();
    report_cmd->add_option("--folds", report_folds, "Fold count")->default_val(10);
    report_cmd->add_option("--seed", report_seed, "Seed")->default_val(1);
    report_cmd->add_option("--format", report_format, "text|tsv")
        ->check(CLI::IsMember({"text", "tsv"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (fingerprint_cmd->parsed()) {
            print_header(argv_copy, "");
            return cmd_fingerprint(fp_files, fp_format);
        }
        if (build_cmd->parsed()) {
            print_header(argv_copy, "");
            return cmd_build_dataset(build_root, build_out, build_skip_log, build_threads,
                                     build_relation);
        }
        if (train_cmd->parsed()) {
            print_header(argv_copy, std::to_string(train_flags.seed));
            return cmd_train(train_flags, train_arff, train_out);
        }
        if (eval_cmd->parsed()) {
            print_header(argv_copy, std::to_string(eval_flags.seed));
            return cmd_evaluate(eval_flags, eval_arff, eval_folds, eval_format);
        }
        if (rank_cmd->parsed()) {
            print_header(argv_copy, std::to_string(rank_seed));
            return cmd_rank(rank_arff, rank_folds, rank_seed, rank_format);
        }
        if (select_cmd->parsed()) {
            print_header(argv_copy, "");
            return cmd_select(select_arff, select_stale);
        }
        if (curve_cmd->parsed()) {
            print_header(argv_copy, std::to_string(curve_flags.seed));
            return cmd_learning_curve(curve_flags, curve_arff, curve_sizes, curve_folds,
                                      curve_format);
        }
        if (synth_cmd->parsed()) {
            print_header(argv_copy, std::to_string(synth_seed));
            return cmd_synth_corpus(synth_bases, synth_gen_classes, synth_gen_width,
                                    synth_gen_height, synth_mark, synth_alpha, synth_per_class,
                                    synth_seed, synth_encoder, synth_out);
        }
        if (report_cmd->parsed()) {
            print_header(argv_copy, std::to_string(report_seed));
            return cmd_report(report_root, report_folds, report_seed, report_format);
        }
    } catch (const Error& e) {
        std::cerr << error_kind(e) << ": " << e.what() << "\n";
        return kExitDataError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDataError;
    }
    return kExitUsage;
}
