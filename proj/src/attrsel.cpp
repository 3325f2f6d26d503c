#include "statleak/attrsel.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "statleak/classifiers.hpp"
#include "statleak/errors.hpp"
#include "statleak/eval.hpp"

namespace statleak {

std::size_t DiscretizationMap::bin_of(const std::vector<double>& cuts, double value) {
    return static_cast<std::size_t>(
        std::upper_bound(cuts.begin(), cuts.end(), value) - cuts.begin());
}

namespace {

double entropy_of_counts(const std::vector<double>& counts) {
    double total = 0.0;
    for (double c : counts) total += c;
    return count_entropy(counts, total);
}

int distinct_classes(const std::vector<double>& counts) {
    int k = 0;
    for (double c : counts) k += c > 0.0 ? 1 : 0;
    return k;
}

struct MdlSplitter {
    const std::vector<std::pair<double, int>>& points;  // sorted (value, label)
    std::size_t n_classes;
    std::vector<double>& cuts;

    void recurse(std::size_t lo, std::size_t hi) {
        const std::size_t n = hi - lo;
        if (n < 2) return;

        std::vector<double> total(n_classes, 0.0);
        for (std::size_t i = lo; i < hi; ++i) total[points[i].second] += 1.0;

        // Best binary cut by class entropy.
        std::vector<double> left(n_classes, 0.0);
        std::vector<double> best_left;
        double best_weighted = std::numeric_limits<double>::infinity();
        std::size_t best_pos = 0;
        for (std::size_t i = lo; i + 1 < hi; ++i) {
            left[points[i].second] += 1.0;
            if (points[i].first == points[i + 1].first) continue;
            const double n_left = static_cast<double>(i + 1 - lo);
            const double n_right = static_cast<double>(hi - i - 1);
            std::vector<double> right(n_classes);
            for (std::size_t c = 0; c < n_classes; ++c) right[c] = total[c] - left[c];
            const double weighted = (n_left * count_entropy(left, n_left) +
                                     n_right * count_entropy(right, n_right)) /
                                    static_cast<double>(n);
            if (weighted < best_weighted - 1e-12) {
                best_weighted = weighted;
                best_pos = i + 1;
                best_left = left;
            }
        }
        if (best_pos == 0) return;  // constant segment

        std::vector<double> best_right(n_classes);
        for (std::size_t c = 0; c < n_classes; ++c) best_right[c] = total[c] - best_left[c];

        const double h_all = entropy_of_counts(total);
        const double gain = h_all - best_weighted;

        // MDL acceptance: gain must pay for encoding the cut.
        const double k = distinct_classes(total);
        const double k1 = distinct_classes(best_left);
        const double k2 = distinct_classes(best_right);
        const double h1 = entropy_of_counts(best_left);
        const double h2 = entropy_of_counts(best_right);
        const double nd = static_cast<double>(n);
        const double delta =
            std::log2(std::pow(3.0, k) - 2.0) - (k * h_all - k1 * h1 - k2 * h2);
        const double threshold = (std::log2(nd - 1.0) + delta) / nd;
        if (gain <= threshold) return;

        cuts.push_back((points[best_pos - 1].first + points[best_pos].first) / 2.0);
        recurse(lo, best_pos);
        recurse(best_pos, hi);
    }
};

}  // namespace

DiscretizationMap discretize_mdl(const Dataset& ds) {
    if (ds.n_instances() < 2) throw BadParameter("discretization needs at least 2 instances");
    DiscretizationMap map;
    map.cuts.resize(ds.n_features());
    std::vector<std::pair<double, int>> points(ds.n_instances());
    for (std::size_t f = 0; f < ds.n_features(); ++f) {
        for (std::size_t i = 0; i < ds.n_instances(); ++i) {
            points[i] = {ds.instances[i].values[f], ds.instances[i].label};
        }
        std::sort(points.begin(), points.end());
        MdlSplitter splitter{points, ds.n_classes(), map.cuts[f]};
        splitter.recurse(0, points.size());
        std::sort(map.cuts[f].begin(), map.cuts[f].end());
    }
    return map;
}

double chi_square_merit(const Dataset& ds, int attribute, const std::vector<double>& cuts) {
    if (cuts.empty()) return 0.0;
    const std::size_t n_bins = cuts.size() + 1;
    const std::size_t n_classes = ds.n_classes();
    std::vector<std::vector<double>> table(n_bins, std::vector<double>(n_classes, 0.0));
    for (const auto& inst : ds.instances) {
        table[DiscretizationMap::bin_of(cuts, inst.values[attribute])][inst.label] += 1.0;
    }
    std::vector<double> row_sum(n_bins, 0.0);
    std::vector<double> col_sum(n_classes, 0.0);
    double n = 0.0;
    for (std::size_t b = 0; b < n_bins; ++b) {
        for (std::size_t c = 0; c < n_classes; ++c) {
            row_sum[b] += table[b][c];
            col_sum[c] += table[b][c];
            n += table[b][c];
        }
    }
    double statistic = 0.0;
    for (std::size_t b = 0; b < n_bins; ++b) {
        for (std::size_t c = 0; c < n_classes; ++c) {
            const double expected = row_sum[b] * col_sum[c] / n;
            if (expected <= 0.0) continue;
            const double diff = table[b][c] - expected;
            statistic += diff * diff / expected;
        }
    }
    return statistic;
}

RankingReport rank_attributes_cv(const Dataset& ds, int folds, std::uint64_t seed) {
    const std::size_t m = ds.n_features();
    const auto fold_indices = stratified_folds(ds, folds, seed);  // validates fold count

    std::vector<double> merit_sum(m, 0.0);
    std::vector<double> merit_sq(m, 0.0);
    std::vector<double> rank_sum(m, 0.0);
    std::vector<double> rank_sq(m, 0.0);

    for (int f = 0; f < folds; ++f) {
        Dataset train;
        train.relation_name = ds.relation_name;
        train.feature_names = ds.feature_names;
        train.class_values = ds.class_values;
        for (int g = 0; g < folds; ++g) {
            if (g == f) continue;
            for (int i : fold_indices[g]) train.instances.push_back(ds.instances[i]);
        }
        const DiscretizationMap map = discretize_mdl(train);
        std::vector<double> merits(m);
        for (std::size_t a = 0; a < m; ++a) {
            merits[a] = chi_square_merit(train, static_cast<int>(a), map.cuts[a]);
        }
        std::vector<std::size_t> order(m);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return merits[a] > merits[b]; });
        for (std::size_t pos = 0; pos < m; ++pos) {
            const std::size_t a = order[pos];
            const double rank = static_cast<double>(pos + 1);
            merit_sum[a] += merits[a];
            merit_sq[a] += merits[a] * merits[a];
            rank_sum[a] += rank;
            rank_sq[a] += rank * rank;
        }
    }

    const double kf = static_cast<double>(folds);
    RankingReport report;
    report.folds = folds;
    report.seed = seed;
    for (std::size_t a = 0; a < m; ++a) {
        RankedAttribute row;
        row.index = static_cast<int>(a) + 1;
        row.name = ds.feature_names[a];
        row.mean_merit = merit_sum[a] / kf;
        row.stddev_merit =
            std::sqrt(std::max(0.0, merit_sq[a] / kf - row.mean_merit * row.mean_merit));
        row.mean_rank = rank_sum[a] / kf;
        row.stddev_rank =
            std::sqrt(std::max(0.0, rank_sq[a] / kf - row.mean_rank * row.mean_rank));
        report.rows.push_back(std::move(row));
    }
    std::stable_sort(report.rows.begin(), report.rows.end(),
                     [](const RankedAttribute& a, const RankedAttribute& b) {
                         return a.mean_merit > b.mean_merit;
                     });
    return report;
}

namespace {

// Fixed 3 decimals with trailing zeros trimmed, the conventional ranking
// table number style ("729.115", "1", "7.2").
std::string fmt3(double v) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(3) << v;
    std::string s = out.str();
    while (!s.empty() && s.back() == '0') s.pop_back();
    if (!s.empty() && s.back() == '.') s.pop_back();
    if (s == "-0") s = "0";
    return s;
}

}  // namespace

std::string RankingReport::text() const {
    std::ostringstream out;
    out << "=== Attribute selection " << folds << " fold cross-validation (stratified), seed: "
        << seed << " ===\n\n";
    out << "average merit      average rank   attribute\n";
    for (const auto& row : rows) {
        const std::string merit = fmt3(row.mean_merit) + " +-" + fmt3(row.stddev_merit);
        const std::string rank = fmt3(row.mean_rank) + " +- " + fmt3(row.stddev_rank);
        out << std::left << std::setw(19) << merit << std::setw(15) << rank << row.index << ' '
            << row.name << '\n';
    }
    return out.str();
}

namespace {

// Symmetric uncertainty between two discrete variables given their joint
// contingency table.
double symmetric_uncertainty(const std::vector<std::vector<double>>& joint) {
    const std::size_t rows = joint.size();
    const std::size_t cols = rows == 0 ? 0 : joint[0].size();
    std::vector<double> row_sum(rows, 0.0);
    std::vector<double> col_sum(cols, 0.0);
    double n = 0.0;
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            row_sum[r] += joint[r][c];
            col_sum[c] += joint[r][c];
            n += joint[r][c];
        }
    }
    if (n <= 0.0) return 0.0;
    const double hx = count_entropy(row_sum, n);
    const double hy = count_entropy(col_sum, n);
    if (hx + hy == 0.0) return 0.0;
    double hxy = 0.0;
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            if (joint[r][c] <= 0.0) continue;
            const double p = joint[r][c] / n;
            hxy -= p * std::log2(p);
        }
    }
    return 2.0 * (hx + hy - hxy) / (hx + hy);
}

struct CfsEvaluator {
    const Dataset& ds;
    std::vector<std::vector<std::size_t>> bins;  // per attribute, per instance
    std::vector<std::size_t> n_bins;
    std::vector<double> su_class;
    std::vector<std::vector<double>> su_pair;  // -1 = not yet computed

    CfsEvaluator(const Dataset& dataset, const DiscretizationMap& map) : ds(dataset) {
        const std::size_t m = ds.n_features();
        const std::size_t n = ds.n_instances();
        bins.resize(m);
        n_bins.resize(m);
        su_class.resize(m);
        su_pair.assign(m, std::vector<double>(m, -1.0));
        for (std::size_t f = 0; f < m; ++f) {
            bins[f].resize(n);
            n_bins[f] = map.cuts[f].size() + 1;
            for (std::size_t i = 0; i < n; ++i) {
                bins[f][i] = DiscretizationMap::bin_of(map.cuts[f], ds.instances[i].values[f]);
            }
            std::vector<std::vector<double>> joint(n_bins[f],
                                                   std::vector<double>(ds.n_classes(), 0.0));
            for (std::size_t i = 0; i < n; ++i) joint[bins[f][i]][ds.instances[i].label] += 1.0;
            su_class[f] = symmetric_uncertainty(joint);
        }
    }

    double pair_su(std::size_t a, std::size_t b) {
        if (su_pair[a][b] >= 0.0) return su_pair[a][b];
        std::vector<std::vector<double>> joint(n_bins[a], std::vector<double>(n_bins[b], 0.0));
        for (std::size_t i = 0; i < ds.n_instances(); ++i) joint[bins[a][i]][bins[b][i]] += 1.0;
        const double su = symmetric_uncertainty(joint);
        su_pair[a][b] = su;
        su_pair[b][a] = su;
        return su;
    }

    double merit(const std::vector<int>& subset) {
        const double k = static_cast<double>(subset.size());
        if (subset.empty()) return 0.0;
        double class_corr = 0.0;
        for (int f : subset) class_corr += su_class[f];
        class_corr /= k;
        double pair_corr = 0.0;
        if (subset.size() > 1) {
            for (std::size_t i = 0; i < subset.size(); ++i) {
                for (std::size_t j = i + 1; j < subset.size(); ++j) {
                    pair_corr += pair_su(subset[i], subset[j]);
                }
            }
            pair_corr /= k * (k - 1.0) / 2.0;
        }
        const double denom = std::sqrt(k + k * (k - 1.0) * pair_corr);
        return denom > 0.0 ? k * class_corr / denom : 0.0;
    }
};

std::vector<int> mask_to_subset(std::uint32_t mask) {
    std::vector<int> subset;
    for (int f = 0; mask != 0; ++f, mask >>= 1) {
        if (mask & 1u) subset.push_back(f);
    }
    return subset;
}

}  // namespace

double cfs_merit(const Dataset& ds, const DiscretizationMap& map,
                 const std::vector<int>& subset) {
    CfsEvaluator evaluator(ds, map);
    return evaluator.merit(subset);
}

SubsetSearchResult cfs_best_first(const Dataset& ds, int stale_limit) {
    const std::size_t m = ds.n_features();
    if (m < 2) throw BadParameter("subset search needs at least 2 attributes");
    if (m > 30) throw BadParameter("subset search supports at most 30 attributes");
    if (stale_limit < 1) throw BadParameter("stale limit must be positive");

    const DiscretizationMap map = discretize_mdl(ds);
    CfsEvaluator evaluator(ds, map);

    std::map<std::uint32_t, double> evaluated;
    const auto eval = [&](std::uint32_t mask) {
        const auto it = evaluated.find(mask);
        if (it != evaluated.end()) return it->second;
        const double merit = evaluator.merit(mask_to_subset(mask));
        evaluated.emplace(mask, merit);
        return merit;
    };

    // Open list ordered by merit descending, smaller mask on ties.
    struct OpenOrder {
        bool operator()(const std::pair<double, std::uint32_t>& a,
                        const std::pair<double, std::uint32_t>& b) const {
            if (a.first != b.first) return a.first > b.first;
            return a.second < b.second;
        }
    };
    std::set<std::pair<double, std::uint32_t>, OpenOrder> open;
    std::set<std::uint32_t> expanded;

    double best_merit = -std::numeric_limits<double>::infinity();
    std::uint32_t best_mask = 0;
    open.insert({best_merit, 0});

    int stale = 0;
    while (!open.empty() && stale < stale_limit) {
        const auto [merit, mask] = *open.begin();
        open.erase(open.begin());
        if (!expanded.insert(mask).second) continue;

        bool improved = false;
        for (std::size_t f = 0; f < m; ++f) {
            const std::uint32_t child = mask | (1u << f);
            if (child == mask || evaluated.count(child)) continue;
            const double child_merit = eval(child);
            open.insert({child_merit, child});
            if (child_merit > best_merit + 1e-10) {
                best_merit = child_merit;
                best_mask = child;
                improved = true;
            }
        }
        if (improved) {
            stale = 0;
        } else {
            ++stale;
        }
    }

    SubsetSearchResult result;
    result.attributes = mask_to_subset(best_mask);
    result.merit = best_mask == 0 ? 0.0 : best_merit;
    result.subsets_evaluated = evaluated.size();
    return result;
}

std::string SubsetSearchResult::text(const Dataset& ds) const {
    std::ostringstream out;
    out << "Search method: best first (forward)\n";
    out << "Total number of subsets evaluated: " << subsets_evaluated << '\n';
    out << "Merit of best subset found: " << fmt3(merit) << '\n';
    out << "Selected attributes: ";
    for (std::size_t i = 0; i < attributes.size(); ++i) {
        if (i > 0) out << ',';
        out << attributes[i] + 1;
    }
    out << " : " << attributes.size() << '\n';
    for (int f : attributes) out << "    " << ds.feature_names[f] << '\n';
    return out.str();
}

}  // namespace statleak
