#include <cmath>

#include <doctest.h>

#include "helpers.hpp"
#include "statleak/classifiers.hpp"
#include "statleak/errors.hpp"
#include "statleak/rng.hpp"

using namespace statleak;

namespace {

double training_accuracy(const Model& model, const Dataset& ds) {
    std::size_t correct = 0;
    for (const auto& inst : ds.instances) {
        if (model.predict(inst.values) == inst.label) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(ds.n_instances());
}

// Checks every KKT condition of the trained dual within the solver
// tolerance, recomputing decision values from the stored weight vector.
int kkt_violations(const LinearSvmModel& model, const Dataset& ds, double c, double tol) {
    int violations = 0;
    for (std::size_t i = 0; i < ds.n_instances(); ++i) {
        const double y = ds.instances[i].label == 1 ? 1.0 : -1.0;
        const double margin = y * model.decision_value(ds.instances[i].values);
        const double alpha = model.alphas()[i];
        const double slack = 1e-8;
        if (alpha < slack) {
            if (margin < 1.0 - tol) ++violations;
        } else if (alpha > c - slack) {
            if (margin > 1.0 + tol) ++violations;
        } else {
            if (std::abs(margin - 1.0) > tol) ++violations;
        }
    }
    return violations;
}

}  // namespace

TEST_CASE("svm separates a two-point dataset") {
    const Dataset ds = testutil::make_dataset({"a"}, {"A", "B"}, {{0}, {1}}, {0, 1});
    const auto model = train_linear_svm(ds);
    const auto* svm = dynamic_cast<const LinearSvmModel*>(model.get());
    REQUIRE(svm != nullptr);
    CHECK(svm->weights()[0] > 0.0);  // class B sits at larger values
    CHECK(training_accuracy(*model, ds) == 1.0);
}

TEST_CASE("svm solves separable problems to KKT optimality") {
    SplitMix64 rng(97);
    for (int trial = 0; trial < 20; ++trial) {
        const Dataset ds = testutil::separable_dataset(rng, 25, 3, 7.0);
        const SvmOptions options;
        const auto model = train_linear_svm(ds, options);
        const auto* svm = dynamic_cast<const LinearSvmModel*>(model.get());
        REQUIRE(svm != nullptr);
        CHECK(training_accuracy(*model, ds) == 1.0);
        CHECK(kkt_violations(*svm, ds, options.c, options.tolerance) == 0);
    }
}

TEST_CASE("svm weight vector equals the alpha-weighted sum of inputs") {
    SplitMix64 rng(101);
    const Dataset ds = testutil::separable_dataset(rng, 30, 3, 6.0);
    const auto model = train_linear_svm(ds);
    const auto* svm = dynamic_cast<const LinearSvmModel*>(model.get());
    REQUIRE(svm != nullptr);

    std::vector<double> reconstructed(ds.n_features(), 0.0);
    for (std::size_t i = 0; i < ds.n_instances(); ++i) {
        const double y = ds.instances[i].label == 1 ? 1.0 : -1.0;
        for (std::size_t f = 0; f < ds.n_features(); ++f) {
            reconstructed[f] += svm->alphas()[i] * y *
                                svm->normalization().apply(f, ds.instances[i].values[f]);
        }
    }
    for (std::size_t f = 0; f < ds.n_features(); ++f) {
        CHECK(svm->weights()[f] == doctest::Approx(reconstructed[f]).epsilon(1e-9));
    }
}

TEST_CASE("svm report lists normalized attribute weights") {
    SplitMix64 rng(103);
    const Dataset ds = testutil::separable_dataset(rng, 10, 2, 6.0);
    const auto model = train_linear_svm(ds);
    const std::string report = model->report();
    CHECK(report.find("Machine linear: showing attribute weights, not support vectors.") !=
          std::string::npos);
    CHECK(report.find("(normalized) a0") != std::string::npos);
    CHECK(report.find("(normalized) a1") != std::string::npos);
}

TEST_CASE("svm rejects bad inputs") {
    Dataset ds = testutil::make_dataset({"a"}, {"x", "y"}, {{1}, {2}}, {0, 1});
    ds.class_values.push_back("z");
    CHECK_THROWS_AS(train_linear_svm(ds), NotBinary);
    CHECK_THROWS_AS(train_linear_svm(Dataset{}), EmptyDataset);

    const Dataset ok = testutil::make_dataset({"a"}, {"x", "y"}, {{1}, {2}}, {0, 1});
    SvmOptions bad;
    bad.c = -1.0;
    CHECK_THROWS_AS(train_linear_svm(ok, bad), BadParameter);
}
