#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "printra/metrics.hpp"
#include "printra/models.hpp"
#include "printra/types.hpp"

namespace printra {

// Seeded partition of n samples into k folds of near-equal size.
struct FoldPlan {
    std::size_t k = 10;
    std::vector<std::size_t> assignment;  // per-sample fold index
    std::uint64_t seed = kDefaultSeed;
};

FoldPlan make_fold_plan(std::size_t n, std::size_t k, std::uint64_t seed);

struct CvResult {
    MetricSet metrics;
    std::vector<PredictionRecord> records;  // pooled, sorted by sample_index
};

// k-fold cross-validation: fit on the complement of each fold, predict the
// fold, score the pooled records.
CvResult cross_validate(const DataMatrix& data, const ModelSpec& spec, std::size_t k,
                        std::uint64_t seed);
CvResult cross_validate(const DataMatrix& data, const ModelSpec& spec, const FoldPlan& plan);
CvResult cross_validate(const Dataset& ds, const ModelSpec& spec, std::size_t k,
                        std::uint64_t seed);

// Fit once on train, predict every test row, score pooled.
CvResult holdout_evaluate(const DataMatrix& train, const DataMatrix& test,
                          const ModelSpec& spec);
CvResult holdout_evaluate(const Dataset& train, const Dataset& test, const ModelSpec& spec);

struct ErrorHistogram {
    double bin_width = 1.0;  // um
    std::vector<std::pair<double, std::size_t>> bins;  // (lower edge, count)
    std::size_t total = 0;
};

// Absolute errors |forecast - actual| bucketed into [m*w, (m+1)*w).
ErrorHistogram error_histogram(const std::vector<PredictionRecord>& records, double bin_width);

enum class RankMethod { pearson, wrapper };

struct SignificanceRanking {
    struct Entry {
        std::string feature;
        double score = 0.0;
        bool constant_feature = false;  // pearson method: score pinned to 0
    };
    std::vector<Entry> entries;  // descending score
    RankMethod method = RankMethod::pearson;
};

// Pearson correlation of each feature against the target, descending.
SignificanceRanking rank_by_correlation(const DataMatrix& data);
SignificanceRanking rank_by_correlation(const Dataset& ds);

// Leave-one-feature-out wrapper: score = CV mean-absolute-error with the
// feature removed minus the full-feature CV error; positive means the
// feature carries signal the model uses.
SignificanceRanking rank_by_wrapper(const DataMatrix& data, const ModelSpec& spec,
                                    std::uint64_t seed, std::size_t k = 10);
SignificanceRanking rank_by_wrapper(const Dataset& ds, const ModelSpec& spec,
                                    std::uint64_t seed, std::size_t k = 10);

} // namespace printra
