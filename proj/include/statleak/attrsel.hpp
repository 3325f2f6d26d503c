#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "statleak/dataset.hpp"

namespace statleak {

// Per-attribute cut points (strictly increasing; empty = one bin).
struct DiscretizationMap {
    std::vector<std::vector<double>> cuts;

    // Bin index of a value under the cuts of one attribute.
    static std::size_t bin_of(const std::vector<double>& cuts, double value);
};

// Entropy-based binary-recursive discretization with the MDL acceptance
// criterion. Attributes carrying no class information end up with no cuts.
DiscretizationMap discretize_mdl(const Dataset& ds);

// Chi-square statistic of the (bins x classes) contingency table of one
// discretized attribute against the class. One-bin attributes score 0.
double chi_square_merit(const Dataset& ds, int attribute, const std::vector<double>& cuts);

struct RankedAttribute {
    int index = 0;  // 1-based attribute position, as conventionally printed
    std::string name;
    double mean_merit = 0.0;
    double stddev_merit = 0.0;
    double mean_rank = 0.0;
    double stddev_rank = 0.0;
};

struct RankingReport {
    std::vector<RankedAttribute> rows;  // sorted by mean merit, descending
    int folds = 0;
    std::uint64_t seed = 0;

    std::string text() const;
};

// Fold-averaged chi-square ranking: merits are computed on each training
// portion of a stratified k-fold split, then summarized as mean +- stddev of
// merit and of rank.
RankingReport rank_attributes_cv(const Dataset& ds, int folds = 10, std::uint64_t seed = 1);

struct SubsetSearchResult {
    std::vector<int> attributes;  // 0-based feature indices, ascending
    double merit = 0.0;
    std::size_t subsets_evaluated = 0;

    std::string text(const Dataset& ds) const;
};

// Correlation-based subset merit: k * mean(attr-class SU) /
// sqrt(k + k(k-1) * mean(attr-attr SU)), with symmetric uncertainty over
// MDL-discretized attributes. Exposed for the exhaustive-search oracle.
double cfs_merit(const Dataset& ds, const DiscretizationMap& map,
                 const std::vector<int>& subset);

// Forward best-first search from the empty set, stopping after `stale_limit`
// consecutive non-improving expansions.
SubsetSearchResult cfs_best_first(const Dataset& ds, int stale_limit = 5);

}  // namespace statleak
