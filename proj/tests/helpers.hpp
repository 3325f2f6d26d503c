#pragma once

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "statleak/dataset.hpp"
#include "statleak/rng.hpp"

namespace testutil {

// Scratch directory under the system temp root, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("statleak_" + tag + "_" + std::to_string(++counter) + "_" +
                 std::to_string(::getpid()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
}

// Dataset from explicit rows; the last column of each row is the label.
inline statleak::Dataset make_dataset(const std::vector<std::string>& feature_names,
                                      const std::vector<std::string>& class_values,
                                      const std::vector<std::vector<double>>& rows,
                                      const std::vector<int>& labels) {
    statleak::Dataset ds;
    ds.relation_name = "test";
    ds.feature_names = feature_names;
    ds.class_values = class_values;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        ds.instances.push_back({rows[i], labels[i]});
    }
    return ds;
}

// Random binary-class dataset with numeric attributes in [0, 10).
inline statleak::Dataset random_dataset(statleak::SplitMix64& rng, std::size_t max_instances,
                                        std::size_t max_features) {
    statleak::Dataset ds;
    ds.relation_name = "random";
    const std::size_t m = 1 + rng.next_below(max_features);
    const std::size_t n = 2 + rng.next_below(max_instances - 1);
    for (std::size_t f = 0; f < m; ++f) ds.feature_names.push_back("a" + std::to_string(f));
    ds.class_values = {"neg", "pos"};
    bool saw[2] = {false, false};
    for (std::size_t i = 0; i < n; ++i) {
        statleak::Instance inst;
        for (std::size_t f = 0; f < m; ++f) inst.values.push_back(rng.next_double() * 10.0);
        inst.label = static_cast<int>(rng.next_below(2));
        saw[inst.label] = true;
        ds.instances.push_back(std::move(inst));
    }
    // Guarantee both classes appear.
    if (!saw[0]) ds.instances[0].label = 0;
    if (!saw[1]) ds.instances[ds.instances.size() - 1].label = 1;
    return ds;
}

// Two well-separated Gaussian blobs along every attribute; linearly
// separable with a wide margin.
inline statleak::Dataset separable_dataset(statleak::SplitMix64& rng, std::size_t per_class,
                                           std::size_t features, double gap = 6.0) {
    statleak::Dataset ds;
    ds.relation_name = "separable";
    for (std::size_t f = 0; f < features; ++f) ds.feature_names.push_back("a" + std::to_string(f));
    ds.class_values = {"neg", "pos"};
    for (int cls = 0; cls < 2; ++cls) {
        for (std::size_t i = 0; i < per_class; ++i) {
            statleak::Instance inst;
            for (std::size_t f = 0; f < features; ++f) {
                inst.values.push_back(cls * gap + rng.next_gaussian());
            }
            inst.label = cls;
            ds.instances.push_back(std::move(inst));
        }
    }
    return ds;
}

}  // namespace testutil
