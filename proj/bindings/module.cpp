#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <fstream>
#include <sstream>

#include "statleak/attrsel.hpp"
#include "statleak/audit.hpp"
#include "statleak/classifiers.hpp"
#include "statleak/dataset.hpp"
#include "statleak/errors.hpp"
#include "statleak/eval.hpp"
#include "statleak/raster.hpp"
#include "statleak/stats.hpp"
#include "statleak/synth.hpp"

namespace py = pybind11;
using namespace statleak;

namespace {

TrainerSpec build_spec(const std::string& algo, std::uint64_t seed, int iterations, int trees,
                       int k_features, double confidence, int min_leaf, bool prune, double c,
                       double tolerance) {
    TrainerSpec spec;
    spec.algo = algo;
    spec.c45 = {confidence, min_leaf, prune};
    spec.boost = {iterations};
    spec.forest = {trees, k_features, seed, true};
    spec.svm = {c, tolerance};
    return spec;
}

Fingerprint fingerprint_from_bytes(const py::bytes& data) {
    const std::string_view view = data;
    return fingerprint_bytes(
        std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(view.data()),
                                      view.size()));
}

}  // namespace

PYBIND11_MODULE(_statleak, m) {
    m.doc() = "Byte-statistics side-channel analysis of labeled file corpora";

    py::register_exception<Error>(m, "StatleakError");

    py::class_<Fingerprint>(m, "Fingerprint")
        .def_readonly("entropy", &Fingerprint::entropy)
        .def_readonly("size", &Fingerprint::size)
        .def_readonly("compression_rate", &Fingerprint::compression_rate)
        .def_readonly("chisq_statistic", &Fingerprint::chisq_statistic)
        .def_readonly("arith_mean", &Fingerprint::arith_mean)
        .def_readonly("monte_pi", &Fingerprint::monte_pi)
        .def_readonly("err_monte_pi", &Fingerprint::err_monte_pi)
        .def_readonly("serial_corr", &Fingerprint::serial_corr)
        .def_readonly("corr_defined", &Fingerprint::corr_defined)
        .def("values",
             [](const Fingerprint& fp) {
                 const auto v = fp.values();
                 return std::vector<double>(v.begin(), v.end());
             })
        .def_static("feature_names", [] {
            const auto& names = Fingerprint::feature_names();
            return std::vector<std::string>(names.begin(), names.end());
        });

    m.def("fingerprint_bytes", &fingerprint_from_bytes, py::arg("data"),
          "Eight byte statistics of a bytes object (needs at least 6 bytes)");
    m.def("fingerprint_file", &fingerprint_file, py::arg("path"));
    m.def("chi_square_p_value", &chi_square_p_value, py::arg("statistic"),
          py::arg("degrees_of_freedom") = 255);

    py::class_<Dataset>(m, "Dataset")
        .def(py::init<>())
        .def_readwrite("relation_name", &Dataset::relation_name)
        .def_readonly("feature_names", &Dataset::feature_names)
        .def_readonly("class_values", &Dataset::class_values)
        .def_property_readonly("n_instances", &Dataset::n_instances)
        .def("class_counts", &Dataset::class_counts)
        .def("values", [](const Dataset& ds, std::size_t i) { return ds.instances.at(i).values; },
             py::arg("index"))
        .def("label", [](const Dataset& ds, std::size_t i) { return ds.instances.at(i).label; },
             py::arg("index"))
        .def("__len__", &Dataset::n_instances)
        .def("__eq__", [](const Dataset& a, const Dataset& b) { return a == b; });

    m.def(
        "ingest_corpus",
        [](const std::filesystem::path& root, unsigned threads) {
            IngestResult result = ingest_corpus(root, threads);
            std::vector<std::pair<std::string, std::string>> skipped;
            for (const auto& [path, reason] : result.skipped) {
                skipped.emplace_back(path.string(), reason);
            }
            return py::make_tuple(result.dataset, skipped);
        },
        py::arg("root"), py::arg("threads") = 0,
        "Fingerprint a labeled corpus tree; returns (dataset, skipped)");

    m.def("read_arff", &read_arff_file, py::arg("path"));
    m.def("write_arff", &write_arff_file, py::arg("dataset"), py::arg("path"));
    m.def("remove_attributes", &remove_attributes, py::arg("dataset"), py::arg("names"));

    py::class_<Model>(m, "Model")
        .def("predict",
             [](const Model& model, const std::vector<double>& values) {
                 return model.predict(values);
             },
             py::arg("values"))
        .def("class_distribution",
             [](const Model& model, const std::vector<double>& values) {
                 return model.class_distribution(values);
             },
             py::arg("values"))
        .def_property_readonly("kind", &Model::kind)
        .def("report", &Model::report)
        .def("tree_stats", &Model::tree_stats)
        .def("save", [](const Model& model, const std::filesystem::path& path) {
            save_model_file(model, path);
        });

    m.def(
        "train",
        [](const Dataset& ds, const std::string& algo, std::uint64_t seed, int iterations,
           int trees, int k_features, double confidence, int min_leaf, bool prune, double c,
           double tolerance) {
            return make_trainer(build_spec(algo, seed, iterations, trees, k_features, confidence,
                                           min_leaf, prune, c, tolerance))(ds);
        },
        py::arg("dataset"), py::arg("algo") = "j48", py::arg("seed") = 1,
        py::arg("iterations") = 10, py::arg("trees") = 10, py::arg("k_features") = 0,
        py::arg("confidence") = 0.25, py::arg("min_leaf") = 2, py::arg("prune") = true,
        py::arg("c") = 1.0, py::arg("tolerance") = 1e-3);

    m.def("load_model", &load_model_file, py::arg("path"));

    py::class_<EvalReport>(m, "EvalReport")
        .def_readonly("correct", &EvalReport::correct)
        .def_readonly("incorrect", &EvalReport::incorrect)
        .def_readonly("accuracy", &EvalReport::accuracy)
        .def_readonly("confusion", &EvalReport::confusion)
        .def_readonly("kappa", &EvalReport::kappa)
        .def_readonly("kappa_defined", &EvalReport::kappa_defined)
        .def_readonly("mae", &EvalReport::mae)
        .def_readonly("rmse", &EvalReport::rmse)
        .def_readonly("rae_percent", &EvalReport::rae_percent)
        .def_readonly("rrse_percent", &EvalReport::rrse_percent)
        .def_readonly("model_report", &EvalReport::model_report)
        .def("summary", &EvalReport::summary);

    m.def(
        "cross_validate",
        [](const Dataset& ds, const std::string& algo, int folds, std::uint64_t seed,
           int iterations, int trees, int k_features, double confidence, int min_leaf, bool prune,
           double c, double tolerance) {
            return cross_validate(make_trainer(build_spec(algo, seed, iterations, trees,
                                                          k_features, confidence, min_leaf, prune,
                                                          c, tolerance)),
                                  ds, folds, seed);
        },
        py::arg("dataset"), py::arg("algo") = "j48", py::arg("folds") = 10, py::arg("seed") = 1,
        py::arg("iterations") = 10, py::arg("trees") = 10, py::arg("k_features") = 0,
        py::arg("confidence") = 0.25, py::arg("min_leaf") = 2, py::arg("prune") = true,
        py::arg("c") = 1.0, py::arg("tolerance") = 1e-3);

    m.def(
        "learning_curve",
        [](const Dataset& ds, const std::string& algo, const std::vector<std::size_t>& sizes,
           int folds, std::uint64_t seed) {
            const auto rows = learning_curve(make_trainer(build_spec(algo, seed, 10, 10, 0, 0.25,
                                                                     2, true, 1.0, 1e-3)),
                                             ds, sizes, folds, seed);
            std::vector<py::tuple> out;
            for (const auto& row : rows) {
                out.push_back(py::make_tuple(row.size, row.tree_nodes, row.accuracy));
            }
            return out;
        },
        py::arg("dataset"), py::arg("algo"), py::arg("sizes"), py::arg("folds") = 10,
        py::arg("seed") = 1, "Rows of (sample size, tree nodes, accuracy percent)");

    py::class_<RankedAttribute>(m, "RankedAttribute")
        .def_readonly("index", &RankedAttribute::index)
        .def_readonly("name", &RankedAttribute::name)
        .def_readonly("mean_merit", &RankedAttribute::mean_merit)
        .def_readonly("stddev_merit", &RankedAttribute::stddev_merit)
        .def_readonly("mean_rank", &RankedAttribute::mean_rank)
        .def_readonly("stddev_rank", &RankedAttribute::stddev_rank);

    py::class_<RankingReport>(m, "RankingReport")
        .def_readonly("rows", &RankingReport::rows)
        .def("text", &RankingReport::text);

    m.def("rank_attributes", &rank_attributes_cv, py::arg("dataset"), py::arg("folds") = 10,
          py::arg("seed") = 1);

    m.def(
        "select_subset",
        [](const Dataset& ds, int stale_limit) {
            const SubsetSearchResult result = cfs_best_first(ds, stale_limit);
            std::vector<std::string> names;
            for (int f : result.attributes) names.push_back(ds.feature_names[f]);
            return py::make_tuple(names, result.merit, result.subsets_evaluated);
        },
        py::arg("dataset"), py::arg("stale_limit") = 5,
        "CFS best-first search; returns (attribute names, merit, subsets evaluated)");

    m.def(
        "make_synthetic_corpus",
        [](const std::filesystem::path& out_dir,
           const std::vector<std::tuple<std::string, double, double, int>>& classes, int width,
           int height, int per_class, std::uint64_t seed, double alpha,
           const std::string& encoder) {
            SyntheticBaseSpec spec;
            spec.width = width;
            spec.height = height;
            for (const auto& [name, sigma, amplitude, count] : classes) {
                spec.classes.push_back({name, sigma, amplitude, count});
            }
            const auto bases = generate_synthetic_bases(spec, seed);
            SynthCorpusOptions options;
            options.alpha = alpha;
            options.count_per_class = per_class;
            options.seed = seed;
            if (encoder == "ppm") {
                options.encoder = PpmEncoder{};
            } else if (encoder == "rle") {
                options.encoder = RleEncoder{};
            } else if (encoder.rfind("exec:", 0) == 0) {
                options.encoder = ExecEncoder{encoder.substr(5)};
            } else {
                throw BadParameter("encoder must be ppm, rle, or exec:<template>");
            }
            const Raster mark =
                Raster::solid(std::max(2, width / 8), std::max(2, height / 8), 230, 20, 20);
            synth_corpus(bases, mark, options, out_dir);
        },
        py::arg("out_dir"), py::arg("classes"), py::arg("width") = 64, py::arg("height") = 64,
        py::arg("per_class") = 100, py::arg("seed") = 1, py::arg("alpha") = 0.25,
        py::arg("encoder") = "rle",
        "Generate per-class textured bases and expand them into a watermarked corpus; "
        "classes are (name, noise_sigma, gradient_amplitude, base_count) tuples");

    m.def(
        "audit",
        [](const Dataset& ds, int folds, std::uint64_t seed) {
            AuditOptions options;
            options.folds = folds;
            options.seed = seed;
            const AuditReport report = run_audit(ds, options);
            std::vector<py::tuple> rows;
            for (const auto& row : report.rows) {
                rows.push_back(
                    py::make_tuple(row.classifier, row.non_allowed, row.used, row.accuracy));
            }
            return py::make_tuple(rows, report.majority_accuracy, report.text(ds));
        },
        py::arg("dataset"), py::arg("folds") = 10, py::arg("seed") = 1,
        "Full leakage audit; returns (rows, majority accuracy, rendered text)");

    m.attr("__version__") = "0.1.0";
}
