#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace statleak {

// One attribute declaration. All feature attributes are numeric; the single
// nominal attribute is the class, always last.
struct AttributeSpec {
    std::string name;
    std::vector<std::string> nominal_values;  // empty for numeric attributes

    bool is_numeric() const { return nominal_values.empty(); }
};

struct Instance {
    std::vector<double> values;  // one per numeric attribute
    int label = 0;               // index into the class value list

    bool operator==(const Instance&) const = default;
};

struct Dataset {
    std::string relation_name;
    std::vector<std::string> feature_names;
    std::vector<std::string> class_values;
    std::vector<Instance> instances;

    std::size_t n_features() const { return feature_names.size(); }
    std::size_t n_classes() const { return class_values.size(); }
    std::size_t n_instances() const { return instances.size(); }

    // Features followed by the nominal class attribute.
    std::vector<AttributeSpec> attribute_specs() const;

    // Index of a feature by name, or -1.
    int feature_index(const std::string& name) const;

    std::vector<std::size_t> class_counts() const;

    bool operator==(const Dataset&) const = default;
};

struct IngestResult {
    Dataset dataset;
    // (path, reason) for every file that was skipped rather than ingested.
    std::vector<std::pair<std::filesystem::path, std::string>> skipped;
};

// Builds a dataset from a directory tree whose immediate subdirectories name
// the classes. Every readable file becomes one instance with the eight byte
// statistics as features; unreadable or too-short files are skipped and
// listed. Instance order is (class, path), independent of how many threads
// fingerprinted concurrently.
IngestResult ingest_corpus(const std::filesystem::path& root, unsigned threads = 0);

// Returns a dataset without the named feature columns. Naming the class
// attribute or an unknown attribute throws BadAttribute.
Dataset remove_attributes(const Dataset& ds, const std::vector<std::string>& names);

struct NormalizationTable {
    std::vector<std::pair<double, double>> ranges;  // (min, max) per feature

    // Affine map of a raw feature value into [0,1], clamped; constant
    // training columns map to 0.
    double apply(std::size_t feature, double value) const;
};

struct NormalizedDataset {
    Dataset dataset;
    NormalizationTable table;
};

NormalizedDataset min_max_normalize(const Dataset& ds);

// ARFF subset: @relation, numeric @attribute lines, one nominal class
// attribute (last), @data with comma-separated rows, % comments.
void write_arff(const Dataset& ds, std::ostream& out);
Dataset read_arff(std::istream& in);

void write_arff_file(const Dataset& ds, const std::filesystem::path& path);
Dataset read_arff_file(const std::filesystem::path& path);

// CSV alternate: header row of feature names plus "class", then data rows.
void write_csv(const Dataset& ds, std::ostream& out);

// Shortest round-trip decimal form of a double (the number format used by
// the ARFF/CSV writers and model serialization).
std::string format_double(double value);

}  // namespace statleak
