#include <sstream>

#include <doctest.h>

#include "helpers.hpp"
#include "statleak/dataset.hpp"
#include "statleak/errors.hpp"
#include "statleak/rng.hpp"

using namespace statleak;
using testutil::TempDir;

namespace {

// Lays out a two-class corpus of deterministic pseudo-random files.
void fill_corpus(const std::filesystem::path& root, int files_per_class, std::size_t file_bytes) {
    int seed = 0;
    for (const char* cls : {"alpha", "beta"}) {
        std::filesystem::create_directories(root / cls);
        for (int i = 0; i < files_per_class; ++i) {
            testutil::write_file(root / cls / ("f" + std::to_string(i) + ".bin"),
                                 random_bytes(seed++, file_bytes));
        }
    }
}

}  // namespace

TEST_CASE("ingest builds one instance per readable file") {
    TempDir dir("ingest");
    fill_corpus(dir.path(), 3, 256);

    const auto result = ingest_corpus(dir.path());
    CHECK(result.dataset.n_instances() == 6);
    CHECK(result.dataset.n_features() == 8);
    CHECK(result.dataset.class_values == std::vector<std::string>{"alpha", "beta"});
    CHECK(result.skipped.empty());
    const auto counts = result.dataset.class_counts();
    CHECK(counts[0] == 3);
    CHECK(counts[1] == 3);

    // Determinism: a second pass produces the identical dataset, no matter
    // how many threads fingerprint concurrently.
    CHECK(ingest_corpus(dir.path()).dataset == result.dataset);
    CHECK(ingest_corpus(dir.path(), 1).dataset == result.dataset);
    CHECK(ingest_corpus(dir.path(), 8).dataset == result.dataset);
}

TEST_CASE("ingest skips files that are too short") {
    TempDir dir("skip");
    fill_corpus(dir.path(), 2, 64);
    testutil::write_file(dir.path() / "alpha" / "tiny.bin", {1, 2, 3});

    const auto result = ingest_corpus(dir.path());
    CHECK(result.dataset.n_instances() == 4);
    REQUIRE(result.skipped.size() == 1);
    CHECK(result.skipped[0].first.filename() == "tiny.bin");
}

TEST_CASE("ingest rejects bad corpus layouts") {
    TempDir dir("layout");
    std::filesystem::create_directories(dir.path() / "only");
    testutil::write_file(dir.path() / "only" / "f.bin", random_bytes(1, 64));
    CHECK_THROWS_AS(ingest_corpus(dir.path()), BadCorpusLayout);

    // Second class whose every file is unreadable as a fingerprint.
    std::filesystem::create_directories(dir.path() / "second");
    testutil::write_file(dir.path() / "second" / "short.bin", {1, 2});
    CHECK_THROWS_AS(ingest_corpus(dir.path()), EmptyClass);
}

TEST_CASE("arff round trip is the identity on random datasets") {
    SplitMix64 rng(101);
    for (int trial = 0; trial < 40; ++trial) {
        const Dataset ds = testutil::random_dataset(rng, 30, 6);
        std::stringstream buffer;
        write_arff(ds, buffer);
        const Dataset back = read_arff(buffer);
        CHECK(back == ds);
    }
}

TEST_CASE("arff reader reports offending line numbers") {
    const char* arity_mismatch =
        "@relation t\n"
        "@attribute a numeric\n"
        "@attribute b numeric\n"
        "@attribute class {x,y}\n"
        "@data\n"
        "1.0,x\n";
    std::stringstream in(arity_mismatch);
    try {
        read_arff(in);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.position() == 6);
        CHECK(std::string(e.what()).find("line 6") != std::string::npos);
    }
}

TEST_CASE("arff reader handles headers, comments, and bad input") {
    // Comments and zero data rows are valid.
    const char* empty_data =
        "% generated\n"
        "@relation t\n"
        "% another comment\n"
        "@attribute a numeric\n"
        "@attribute class {x,y}\n"
        "@data\n"
        "% trailing comment\n";
    std::stringstream ok(empty_data);
    const Dataset ds = read_arff(ok);
    CHECK(ds.n_instances() == 0);
    CHECK(ds.n_features() == 1);

    std::stringstream unknown_class(
        "@relation t\n@attribute a numeric\n@attribute class {x,y}\n@data\n1.0,z\n");
    CHECK_THROWS_AS(read_arff(unknown_class), ParseError);

    std::stringstream string_attr(
        "@relation t\n@attribute a string\n@attribute class {x,y}\n@data\n");
    CHECK_THROWS_AS(read_arff(string_attr), ParseError);

    std::stringstream bad_number(
        "@relation t\n@attribute a numeric\n@attribute class {x,y}\n@data\n1.0.0,x\n");
    CHECK_THROWS_AS(read_arff(bad_number), ParseError);
}

TEST_CASE("remove_attributes drops columns without touching the source") {
    const Dataset ds = testutil::make_dataset(
        {"a", "b", "c"}, {"x", "y"},
        {{1, 2, 3}, {4, 5, 6}, {7, 8, 9}}, {0, 1, 0});

    const Dataset without_b = remove_attributes(ds, {"b"});
    CHECK(without_b.feature_names == std::vector<std::string>{"a", "c"});
    CHECK(without_b.n_instances() == 3);
    CHECK(without_b.instances[1].values == std::vector<double>{4, 6});
    CHECK(ds.n_features() == 3);  // original untouched

    CHECK(remove_attributes(ds, {}) == ds);
    CHECK_THROWS_AS(remove_attributes(ds, {"nope"}), BadAttribute);
    CHECK_THROWS_AS(remove_attributes(ds, {"class"}), BadAttribute);

    // Removal commutes with itself.
    const Dataset seq = remove_attributes(remove_attributes(ds, {"a"}), {"c"});
    const Dataset both = remove_attributes(ds, {"a", "c"});
    CHECK(seq == both);
}

TEST_CASE("min-max normalization maps columns into the unit interval") {
    const Dataset ds = testutil::make_dataset(
        {"a", "b"}, {"x", "y"}, {{0, 7}, {5, 7}, {10, 7}}, {0, 1, 0});
    const auto normalized = min_max_normalize(ds);
    CHECK(normalized.dataset.instances[0].values == std::vector<double>{0.0, 0.0});
    CHECK(normalized.dataset.instances[1].values == std::vector<double>{0.5, 0.0});
    CHECK(normalized.dataset.instances[2].values == std::vector<double>{1.0, 0.0});

    // The stored table reapplies the identical transform, clamped.
    CHECK(normalized.table.apply(0, -5.0) == 0.0);
    CHECK(normalized.table.apply(0, 50.0) == 1.0);
    CHECK(normalized.table.apply(0, 2.5) == 0.25);

    CHECK_THROWS_AS(min_max_normalize(Dataset{}), EmptyDataset);
}

TEST_CASE("csv writer emits a header plus one row per instance") {
    const Dataset ds = testutil::make_dataset({"a", "b"}, {"x", "y"}, {{1, 2}}, {1});
    std::ostringstream out;
    write_csv(ds, out);
    CHECK(out.str() == "a,b,class\n1,2,y\n");
}
