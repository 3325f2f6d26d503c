#include "statleak/audit.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

#include "statleak/errors.hpp"

namespace statleak {

Trainer make_trainer(const TrainerSpec& spec) {
    if (spec.algo == "majority") {
        return [](const Dataset& ds) { return train_majority(ds); };
    }
    if (spec.algo == "stump") {
        return [](const Dataset& ds) { return train_stump(ds); };
    }
    if (spec.algo == "j48") {
        return [options = spec.c45](const Dataset& ds) { return train_c45(ds, options); };
    }
    if (spec.algo == "logitboost") {
        return [options = spec.boost](const Dataset& ds) { return train_logitboost(ds, options); };
    }
    if (spec.algo == "forest") {
        return [options = spec.forest](const Dataset& ds) {
            return train_random_forest(ds, options);
        };
    }
    if (spec.algo == "svm") {
        return [options = spec.svm](const Dataset& ds) { return train_linear_svm(ds, options); };
    }
    throw BadParameter("unknown algorithm '" + spec.algo +
                       "' (expected majority|stump|j48|logitboost|forest|svm)");
}

namespace {

const std::vector<std::string>& audit_algos() {
    static const std::vector<std::string> algos = {"majority", "stump",  "j48",
                                                   "logitboost", "forest", "svm"};
    return algos;
}

bool algo_supports(const std::string& algo, const Dataset& ds) {
    // The boosting and SVM trainers are binary-only.
    if (algo == "logitboost" || algo == "svm") return ds.n_classes() == 2;
    return true;
}

}  // namespace

AuditReport run_audit(const Dataset& ds, const AuditOptions& options) {
    if (ds.instances.empty()) throw EmptyDataset();

    AuditReport report;
    report.ranking = rank_attributes_cv(ds, options.folds, options.seed);

    // Ablation sets: everything, minus the top-ranked attribute, minus the
    // top two.
    std::vector<std::vector<std::string>> removals = {{}};
    if (!report.ranking.rows.empty()) removals.push_back({report.ranking.rows[0].name});
    if (report.ranking.rows.size() > 1) {
        removals.push_back({report.ranking.rows[0].name, report.ranking.rows[1].name});
    }

    for (const auto& removed : removals) {
        const Dataset view = removed.empty() ? ds : remove_attributes(ds, removed);
        if (view.n_features() == 0) continue;
        std::string non_allowed = "-";
        if (!removed.empty()) {
            non_allowed.clear();
            for (std::size_t i = 0; i < removed.size(); ++i) {
                if (i > 0) non_allowed += ", ";
                non_allowed += removed[i];
            }
        }
        for (const auto& algo : audit_algos()) {
            if (!algo_supports(algo, view)) continue;
            TrainerSpec spec;
            spec.algo = algo;
            spec.forest.seed = options.seed;
            const EvalReport eval =
                cross_validate(make_trainer(spec), view, options.folds, options.seed);
            AuditRow row;
            row.classifier = algo;
            row.non_allowed = non_allowed;
            row.used = removed.empty() ? "all" : "rest";
            row.accuracy = eval.accuracy;
            report.rows.push_back(std::move(row));
            if (algo == "majority" && removed.empty()) {
                report.majority_accuracy = eval.accuracy;
            }
        }
    }

    std::stable_sort(report.rows.begin(), report.rows.end(),
                     [](const AuditRow& a, const AuditRow& b) { return a.accuracy > b.accuracy; });

    if (!report.ranking.rows.empty()) {
        const auto& top = report.ranking.rows[0];
        report.suggestions.push_back(
            "'" + top.name + "' leaks the most class information (mean merit " +
            std::to_string(top.mean_merit).substr(0, 7) +
            "); equalize it across classes before serving challenges.");
    }
    report.suggestions.push_back(
        "Removing single attributes rarely stops classification; re-run this audit after "
        "every countermeasure and compare against the majority baseline.");
    report.suggestions.push_back(
        "Watermarking at random positions does not reseed byte statistics; prefer "
        "re-encoding every challenge image with randomized encoder settings.");

    return report;
}

std::string AuditReport::text(const Dataset& ds) const {
    std::ostringstream out;
    out << "=== Leakage audit ===\n";
    out << "relation: " << ds.relation_name << ", instances: " << ds.n_instances()
        << ", attributes: " << ds.n_features() + 1 << '\n';
    out << "folds: " << ranking.folds << ", seed: " << ranking.seed << "\n\n";
    out << ranking.text() << '\n';

    out << std::left << std::setw(14) << "classifier" << std::setw(26) << "non-allowed parameters"
        << std::setw(18) << "parameters used" << "accuracy\n";
    out << std::fixed << std::setprecision(4);
    for (const auto& row : rows) {
        out << std::left << std::setw(14) << row.classifier << std::setw(26) << row.non_allowed
            << std::setw(18) << row.used << row.accuracy << " %\n";
    }
    out << '\n' << "Majority baseline: " << std::setprecision(4) << majority_accuracy << " %\n\n";
    out << "Suggestions:\n";
    for (const auto& s : suggestions) out << "  - " << s << '\n';
    return out.str();
}

}  // namespace statleak
