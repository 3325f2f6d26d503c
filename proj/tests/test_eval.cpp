#include <algorithm>
#include <cmath>
#include <set>

#include <doctest.h>

#include "helpers.hpp"
#include "statleak/audit.hpp"
#include "statleak/errors.hpp"
#include "statleak/eval.hpp"
#include "statleak/rng.hpp"

using namespace statleak;

namespace {

Dataset two_class_dataset(std::size_t n_class0, std::size_t n_class1, std::uint64_t seed) {
    SplitMix64 rng(seed);
    Dataset ds;
    ds.relation_name = "counts";
    ds.feature_names = {"a"};
    ds.class_values = {"x", "y"};
    for (std::size_t i = 0; i < n_class0; ++i) ds.instances.push_back({{rng.next_double()}, 0});
    for (std::size_t i = 0; i < n_class1; ++i) ds.instances.push_back({{rng.next_double()}, 1});
    return ds;
}

}  // namespace

TEST_CASE("stratified folds preserve class proportions") {
    SUBCASE("divisible case: 60/40 over 10 folds") {
        const Dataset ds = two_class_dataset(60, 40, 5);
        const auto folds = stratified_folds(ds, 10, 1);
        for (const auto& fold : folds) {
            std::size_t c0 = 0;
            for (int i : fold) c0 += ds.instances[i].label == 0 ? 1 : 0;
            CHECK(c0 == 6);
            CHECK(fold.size() - c0 == 4);
        }
    }
    SUBCASE("remainder case: 45/68 over 10 folds") {
        const Dataset ds = two_class_dataset(45, 68, 6);
        const auto folds = stratified_folds(ds, 10, 1);
        for (const auto& fold : folds) {
            std::size_t c0 = 0;
            for (int i : fold) c0 += ds.instances[i].label == 0 ? 1 : 0;
            const std::size_t c1 = fold.size() - c0;
            CHECK(c0 >= 4);
            CHECK(c0 <= 5);
            CHECK(c1 >= 6);
            CHECK(c1 <= 7);
        }
    }
    SUBCASE("leave-one-out") {
        const Dataset ds = two_class_dataset(3, 3, 7);
        const auto folds = stratified_folds(ds, 6, 1);
        for (const auto& fold : folds) CHECK(fold.size() == 1);
    }
}

TEST_CASE("stratified folds partition the dataset exactly once") {
    const Dataset ds = two_class_dataset(23, 31, 8);
    const auto folds = stratified_folds(ds, 7, 42);
    std::set<int> seen;
    std::size_t total = 0;
    for (const auto& fold : folds) {
        for (int i : fold) {
            CHECK(seen.insert(i).second);  // disjoint
            ++total;
        }
    }
    CHECK(total == ds.n_instances());  // exhaustive

    // Same seed reproduces the folds; a different seed keeps the sizes.
    CHECK(stratified_folds(ds, 7, 42) == folds);
    const auto other = stratified_folds(ds, 7, 43);
    CHECK(other != folds);
    for (std::size_t f = 0; f < folds.size(); ++f) CHECK(other[f].size() == folds[f].size());
}

TEST_CASE("fold count validation") {
    const Dataset ds = two_class_dataset(5, 5, 9);
    CHECK_THROWS_AS(stratified_folds(ds, 1, 1), BadParameter);
    CHECK_THROWS_AS(stratified_folds(ds, 11, 1), BadParameter);
}

TEST_CASE("majority cross-validation has zero kappa and baseline relative error") {
    const Dataset ds = two_class_dataset(70, 30, 10);
    const auto report = cross_validate(make_trainer({.algo = "majority"}), ds, 10, 1);
    CHECK(report.kappa == 0.0);
    CHECK(report.kappa_defined);
    CHECK(report.rae_percent == doctest::Approx(100.0).epsilon(1e-12));
    CHECK(report.accuracy == doctest::Approx(70.0).epsilon(1e-9));
}

TEST_CASE("perfect classifier scores a perfect report") {
    SplitMix64 rng(137);
    const Dataset ds = testutil::separable_dataset(rng, 30, 2, 10.0);
    const auto report = cross_validate(make_trainer({.algo = "j48"}), ds, 10, 1);
    CHECK(report.accuracy == 100.0);
    CHECK(report.kappa == 1.0);
    CHECK(report.mae == 0.0);
    CHECK(report.rmse == 0.0);
    CHECK(report.correct == ds.n_instances());
    CHECK(report.incorrect == 0);
}

TEST_CASE("single-class dataset flags kappa as degenerate") {
    Dataset ds;
    ds.feature_names = {"a"};
    ds.class_values = {"only"};
    for (int i = 0; i < 12; ++i) ds.instances.push_back({{static_cast<double>(i)}, 0});
    const auto report = cross_validate(make_trainer({.algo = "majority"}), ds, 3, 1);
    CHECK(report.kappa == 0.0);
    CHECK(!report.kappa_defined);
    CHECK(report.accuracy == 100.0);
}

TEST_CASE("report arithmetic identities hold exactly") {
    SplitMix64 rng(139);
    const Dataset ds = testutil::random_dataset(rng, 80, 3);
    const auto report = cross_validate(make_trainer({.algo = "logitboost"}), ds, 5, 9);

    CHECK(report.correct + report.incorrect == ds.n_instances());
    std::size_t diagonal = 0;
    std::vector<std::size_t> row_sums(report.confusion.size(), 0);
    for (std::size_t r = 0; r < report.confusion.size(); ++r) {
        for (std::size_t c = 0; c < report.confusion[r].size(); ++c) {
            row_sums[r] += report.confusion[r][c];
            if (r == c) diagonal += report.confusion[r][c];
        }
    }
    CHECK(diagonal == report.correct);
    const auto class_counts = ds.class_counts();
    for (std::size_t r = 0; r < row_sums.size(); ++r) CHECK(row_sums[r] == class_counts[r]);
    CHECK(report.accuracy ==
          static_cast<double>(report.correct) / static_cast<double>(ds.n_instances()) * 100.0);

    // Same seed, same report; the summary block renders without surprises.
    const auto again = cross_validate(make_trainer({.algo = "logitboost"}), ds, 5, 9);
    CHECK(again.confusion == report.confusion);
    CHECK(again.summary() == report.summary());
    CHECK(report.summary().find("Correctly Classified Instances") != std::string::npos);
    CHECK(report.summary().find("<-- classified as") != std::string::npos);
}

TEST_CASE("stratified sampling draws per-class quotas deterministically") {
    const Dataset ds = two_class_dataset(60, 40, 11);
    const Dataset sample = stratified_sample(ds, 50, 7);
    CHECK(sample.n_instances() == 50);
    const auto counts = sample.class_counts();
    CHECK(counts[0] == 30);
    CHECK(counts[1] == 20);
    CHECK(stratified_sample(ds, 50, 7) == sample);
    CHECK(stratified_sample(ds, ds.n_instances(), 3) == ds);
    CHECK_THROWS_AS(stratified_sample(ds, 101, 1), BadParameter);
}

TEST_CASE("learning curve at full size equals a plain cross-validation") {
    SplitMix64 rng(149);
    const Dataset ds = testutil::separable_dataset(rng, 40, 2, 4.0);
    const auto rows = learning_curve(make_trainer({.algo = "j48"}), ds, {40, 80}, 5, 21);
    REQUIRE(rows.size() == 2);
    const auto direct = cross_validate(make_trainer({.algo = "j48"}), ds, 5, 21);
    CHECK(rows[1].accuracy == direct.accuracy);
    CHECK(rows[1].size == 80);
    CHECK(rows[1].tree_nodes == direct.tree_stats->second);

    CHECK_THROWS_AS(learning_curve(make_trainer({.algo = "j48"}), ds, {10, 5}, 5, 1),
                    BadParameter);
    CHECK_THROWS_AS(learning_curve(make_trainer({.algo = "j48"}), ds, {81}, 5, 1),
                    BadParameter);
}
