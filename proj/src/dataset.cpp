#include "statleak/dataset.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdlib>
#include <functional>
#include <thread>

#include "statleak/errors.hpp"
#include "statleak/stats.hpp"

namespace statleak {

namespace fs = std::filesystem;

std::vector<AttributeSpec> Dataset::attribute_specs() const {
    std::vector<AttributeSpec> specs;
    specs.reserve(feature_names.size() + 1);
    for (const auto& name : feature_names) specs.push_back({name, {}});
    specs.push_back({"class", class_values});
    return specs;
}

int Dataset::feature_index(const std::string& name) const {
    for (std::size_t i = 0; i < feature_names.size(); ++i) {
        if (feature_names[i] == name) return static_cast<int>(i);
    }
    return -1;
}

std::vector<std::size_t> Dataset::class_counts() const {
    std::vector<std::size_t> counts(class_values.size(), 0);
    for (const auto& inst : instances) ++counts[inst.label];
    return counts;
}

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

namespace {

unsigned resolve_thread_count(unsigned requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("STATLEAK_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return static_cast<unsigned>(n);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

// Runs fn(i) for i in [0, count) across `threads` workers. Callers write
// results into preallocated slots, so output order is deterministic.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn) {
    if (threads <= 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    const unsigned n = std::min<std::size_t>(threads, count);
    pool.reserve(n);
    for (unsigned t = 0; t < n; ++t) {
        pool.emplace_back([&]() {
            for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace

IngestResult ingest_corpus(const fs::path& root, unsigned threads) {
    if (!fs::is_directory(root)) throw BadCorpusLayout("not a directory: " + root.string());

    std::vector<std::string> classes;
    for (const auto& entry : fs::directory_iterator(root)) {
        if (entry.is_directory()) classes.push_back(entry.path().filename().string());
    }
    std::sort(classes.begin(), classes.end());
    if (classes.size() < 2) {
        throw BadCorpusLayout("corpus root needs at least 2 class directories, found " +
                              std::to_string(classes.size()));
    }

    struct Job {
        fs::path path;
        int label;
    };
    std::vector<Job> jobs;
    for (std::size_t c = 0; c < classes.size(); ++c) {
        std::vector<fs::path> files;
        for (const auto& entry : fs::recursive_directory_iterator(root / classes[c])) {
            if (entry.is_regular_file()) files.push_back(entry.path());
        }
        if (files.empty()) throw BadCorpusLayout("class directory is empty: " + classes[c]);
        std::sort(files.begin(), files.end());
        for (auto& f : files) jobs.push_back({std::move(f), static_cast<int>(c)});
    }

    struct Slot {
        bool ok = false;
        Fingerprint fp;
        std::string error;
    };
    std::vector<Slot> slots(jobs.size());
    parallel_for(jobs.size(), resolve_thread_count(threads), [&](std::size_t i) {
        try {
            slots[i].fp = fingerprint_file(jobs[i].path);
            slots[i].ok = true;
        } catch (const std::exception& e) {
            slots[i].error = e.what();
        }
    });

    IngestResult result;
    result.dataset.relation_name =
        root.filename().empty() ? std::string("corpus") : root.filename().string();
    const auto& names = Fingerprint::feature_names();
    result.dataset.feature_names.assign(names.begin(), names.end());
    result.dataset.class_values = classes;

    std::vector<std::size_t> kept_per_class(classes.size(), 0);
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        if (!slots[i].ok) {
            result.skipped.emplace_back(jobs[i].path, slots[i].error);
            continue;
        }
        const auto v = slots[i].fp.values();
        result.dataset.instances.push_back(
            {std::vector<double>(v.begin(), v.end()), jobs[i].label});
        ++kept_per_class[jobs[i].label];
    }
    for (std::size_t c = 0; c < classes.size(); ++c) {
        if (kept_per_class[c] == 0) {
            throw EmptyClass("every file in class '" + classes[c] + "' was skipped");
        }
    }
    return result;
}

Dataset remove_attributes(const Dataset& ds, const std::vector<std::string>& names) {
    std::vector<bool> drop(ds.n_features(), false);
    for (const auto& name : names) {
        if (name == "class") throw BadAttribute("cannot remove the class attribute");
        const int idx = ds.feature_index(name);
        if (idx < 0) throw BadAttribute("unknown attribute: " + name);
        drop[idx] = true;
    }
    Dataset out;
    out.relation_name = ds.relation_name;
    out.class_values = ds.class_values;
    for (std::size_t i = 0; i < ds.n_features(); ++i) {
        if (!drop[i]) out.feature_names.push_back(ds.feature_names[i]);
    }
    out.instances.reserve(ds.instances.size());
    for (const auto& inst : ds.instances) {
        Instance copy;
        copy.label = inst.label;
        copy.values.reserve(out.feature_names.size());
        for (std::size_t i = 0; i < ds.n_features(); ++i) {
            if (!drop[i]) copy.values.push_back(inst.values[i]);
        }
        out.instances.push_back(std::move(copy));
    }
    return out;
}

double NormalizationTable::apply(std::size_t feature, double value) const {
    const auto [lo, hi] = ranges[feature];
    if (hi <= lo) return 0.0;
    const double scaled = (value - lo) / (hi - lo);
    return std::clamp(scaled, 0.0, 1.0);
}

NormalizedDataset min_max_normalize(const Dataset& ds) {
    if (ds.instances.empty()) throw EmptyDataset();
    NormalizedDataset out;
    out.table.ranges.resize(ds.n_features());
    for (std::size_t f = 0; f < ds.n_features(); ++f) {
        double lo = ds.instances[0].values[f];
        double hi = lo;
        for (const auto& inst : ds.instances) {
            lo = std::min(lo, inst.values[f]);
            hi = std::max(hi, inst.values[f]);
        }
        out.table.ranges[f] = {lo, hi};
    }
    out.dataset = ds;
    for (auto& inst : out.dataset.instances) {
        for (std::size_t f = 0; f < ds.n_features(); ++f) {
            inst.values[f] = out.table.apply(f, inst.values[f]);
        }
    }
    return out;
}

}  // namespace statleak
