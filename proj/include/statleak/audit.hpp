#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "statleak/attrsel.hpp"
#include "statleak/eval.hpp"

namespace statleak {

// Algorithm selector plus hyperparameters, the "trainer spec" accepted by
// the CLI and the audit. Valid algo tokens: majority, stump, j48,
// logitboost, forest, svm.
struct TrainerSpec {
    std::string algo = "j48";
    C45Options c45;
    LogitBoostOptions boost;
    RandomForestOptions forest;
    SvmOptions svm;
};

Trainer make_trainer(const TrainerSpec& spec);

struct AuditOptions {
    int folds = 10;
    std::uint64_t seed = 1;
};

struct AuditRow {
    std::string classifier;
    std::string non_allowed;  // removed attributes, "-" when none
    std::string used;
    double accuracy = 0.0;  // percent
};

// Full information-leakage audit of a labeled dataset: attribute ranking,
// cross-validated accuracy of every classifier, and ablation re-runs with
// the top-ranked attributes removed.
struct AuditReport {
    RankingReport ranking;
    std::vector<AuditRow> rows;  // sorted by accuracy, descending
    double majority_accuracy = 0.0;
    std::vector<std::string> suggestions;

    std::string text(const Dataset& ds) const;
};

AuditReport run_audit(const Dataset& ds, const AuditOptions& options = {});

}  // namespace statleak
