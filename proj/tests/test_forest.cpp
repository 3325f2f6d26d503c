#include <doctest.h>

#include "helpers.hpp"
#include "statleak/classifiers.hpp"
#include "statleak/errors.hpp"
#include "statleak/rng.hpp"

using namespace statleak;

namespace {

// One attribute fully determines the class, the rest are continuous noise.
Dataset deterministic_attribute_dataset(SplitMix64& rng, std::size_t n) {
    Dataset ds;
    ds.relation_name = "determined";
    ds.feature_names = {"noise0", "signal", "noise1"};
    ds.class_values = {"A", "B"};
    for (std::size_t i = 0; i < n; ++i) {
        Instance inst;
        const int label = static_cast<int>(rng.next_below(2));
        inst.values = {rng.next_double() * 10.0,
                       label == 0 ? rng.next_double() : 4.0 + rng.next_double(),
                       rng.next_double() * 10.0};
        inst.label = label;
        ds.instances.push_back(std::move(inst));
    }
    ds.instances[0].label = 0;
    ds.instances[n - 1].label = 1;
    ds.instances[0].values[1] = 0.5;
    ds.instances[n - 1].values[1] = 4.5;
    return ds;
}

double training_accuracy(const Model& model, const Dataset& ds) {
    std::size_t correct = 0;
    for (const auto& inst : ds.instances) {
        if (model.predict(inst.values) == inst.label) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(ds.n_instances());
}

}  // namespace

TEST_CASE("default feature sample size is floor(log2(m)) + 1") {
    SplitMix64 rng(71);
    Dataset ds = testutil::random_dataset(rng, 30, 1);
    ds.feature_names.clear();
    for (int f = 0; f < 8; ++f) ds.feature_names.push_back("f" + std::to_string(f));
    for (auto& inst : ds.instances) {
        inst.values.resize(8);
        for (auto& v : inst.values) v = rng.next_double();
    }
    const auto model = train_random_forest(ds);
    const auto* forest = dynamic_cast<const RandomForestModel*>(model.get());
    REQUIRE(forest != nullptr);
    CHECK(forest->k_features() == 4);
    CHECK(forest->tree_count() == 10);
}

TEST_CASE("forest learns a perfectly determining attribute across seeds") {
    SplitMix64 data_rng(73);
    const Dataset ds = deterministic_attribute_dataset(data_rng, 200);
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        RandomForestOptions options;
        options.seed = seed;
        const auto model = train_random_forest(ds, options);
        CHECK(training_accuracy(*model, ds) == 1.0);
    }
}

TEST_CASE("single tree without bootstrap equals that tree's own predictions") {
    SplitMix64 rng(79);
    const Dataset ds = testutil::random_dataset(rng, 60, 4);
    RandomForestOptions options;
    options.trees = 1;
    options.bootstrap = false;
    options.k_features = static_cast<int>(ds.n_features());
    options.seed = 11;
    const auto model = train_random_forest(ds, options);
    const auto* forest = dynamic_cast<const RandomForestModel*>(model.get());
    REQUIRE(forest != nullptr);
    REQUIRE(forest->tree_count() == 1);
    for (const auto& inst : ds.instances) {
        CHECK(model->predict(inst.values) == predict_tree(forest->tree(0), inst.values));
    }
    // No bootstrap leaves nothing out of bag.
    CHECK(!forest->oob_error().has_value());
    // An unpruned tree fit to all features purifies the training data.
    CHECK(training_accuracy(*model, ds) == 1.0);
}

TEST_CASE("a forest of identical trees votes like a single tree") {
    SplitMix64 rng(97);
    const Dataset ds = testutil::random_dataset(rng, 50, 3);
    // Without bootstrap and with every feature in each node's sample, all
    // trees grow identically, so the vote cannot differ from one tree.
    RandomForestOptions options;
    options.trees = 7;
    options.bootstrap = false;
    options.k_features = static_cast<int>(ds.n_features());
    options.seed = 23;
    const auto model = train_random_forest(ds, options);
    const auto* forest = dynamic_cast<const RandomForestModel*>(model.get());
    REQUIRE(forest->tree_count() == 7);
    for (const auto& inst : ds.instances) {
        CHECK(model->predict(inst.values) == predict_tree(forest->tree(0), inst.values));
    }
}

TEST_CASE("forest reports an out-of-bag error with bootstrap enabled") {
    SplitMix64 rng(83);
    const Dataset ds = testutil::separable_dataset(rng, 30, 2, 5.0);
    RandomForestOptions options;
    options.seed = 17;
    const auto model = train_random_forest(ds, options);
    const auto* forest = dynamic_cast<const RandomForestModel*>(model.get());
    REQUIRE(forest->oob_error().has_value());
    CHECK(*forest->oob_error() >= 0.0);
    CHECK(*forest->oob_error() <= 1.0);
    // Well-separated blobs should have a small OOB error.
    CHECK(*forest->oob_error() <= 0.2);
    CHECK(model->report().find("Out of bag error") != std::string::npos);
    CHECK(model->report().find("Random forest of 10 trees") != std::string::npos);
}

TEST_CASE("forest rejects invalid tree counts") {
    SplitMix64 rng(89);
    const Dataset ds = testutil::random_dataset(rng, 20, 2);
    RandomForestOptions options;
    options.trees = 0;
    CHECK_THROWS_AS(train_random_forest(ds, options), BadParameter);
}
