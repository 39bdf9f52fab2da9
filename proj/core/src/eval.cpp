#include "printra/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace printra {

FoldPlan make_fold_plan(std::size_t n, std::size_t k, std::uint64_t seed) {
    if (k < 2 || k > n) {
        throw ParameterError("fold plan: requires 2 <= k <= n, got k=" + std::to_string(k) +
                             ", n=" + std::to_string(n));
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    SplitMix64 rng(seed);
    seeded_shuffle(order, rng);

    FoldPlan plan;
    plan.k = k;
    plan.seed = seed;
    plan.assignment.resize(n);
    // round-robin over the shuffled order keeps fold sizes within 1
    for (std::size_t i = 0; i < n; ++i) {
        plan.assignment[order[i]] = i % k;
    }
    return plan;
}

CvResult cross_validate(const DataMatrix& data, const ModelSpec& spec, const FoldPlan& plan) {
    if (plan.assignment.size() != data.size()) {
        throw ParameterError("fold plan does not match dataset size");
    }
    CvResult result;
    for (std::size_t fold = 0; fold < plan.k; ++fold) {
        DataMatrix train;
        train.feature_names = data.feature_names;
        std::vector<std::size_t> test_rows;
        for (std::size_t i = 0; i < data.size(); ++i) {
            if (plan.assignment[i] == fold) {
                test_rows.push_back(i);
            } else {
                train.rows.push_back(data.rows[i]);
                train.targets.push_back(data.targets[i]);
            }
        }
        ModelSpec fold_spec = spec;
        fold_spec.forest.seed = derive_stream(spec.forest.seed, fold);
        auto model = make_model(fold_spec);
        model->fit(train);
        for (std::size_t i : test_rows) {
            result.records.push_back({data.targets[i], model->predict(data.rows[i]), i});
        }
    }
    // normalize pooled order so results are schedule-independent
    std::sort(result.records.begin(), result.records.end(),
              [](const PredictionRecord& a, const PredictionRecord& b) {
                  return a.sample_index < b.sample_index;
              });
    result.metrics = evaluate(result.records);
    return result;
}

CvResult cross_validate(const DataMatrix& data, const ModelSpec& spec, std::size_t k,
                        std::uint64_t seed) {
    return cross_validate(data, spec, make_fold_plan(data.size(), k, seed));
}

CvResult cross_validate(const Dataset& ds, const ModelSpec& spec, std::size_t k,
                        std::uint64_t seed) {
    return cross_validate(encode_dataset(ds), spec, k, seed);
}

CvResult holdout_evaluate(const DataMatrix& train, const DataMatrix& test,
                          const ModelSpec& spec) {
    if (train.feature_names != test.feature_names) {
        throw SchemaError("holdout: train and test feature schemas differ");
    }
    auto model = make_model(spec);
    model->fit(train);
    CvResult result;
    result.records.reserve(test.size());
    for (std::size_t i = 0; i < test.size(); ++i) {
        result.records.push_back({test.targets[i], model->predict(test.rows[i]), i});
    }
    result.metrics = evaluate(result.records);
    return result;
}

CvResult holdout_evaluate(const Dataset& train, const Dataset& test, const ModelSpec& spec) {
    return holdout_evaluate(encode_dataset(train), encode_dataset(test), spec);
}

ErrorHistogram error_histogram(const std::vector<PredictionRecord>& records, double bin_width) {
    if (!(bin_width > 0.0)) {
        throw ParameterError("histogram: bin width must be > 0");
    }
    if (records.empty()) {
        throw ParameterError("histogram: no records");
    }
    std::size_t max_bin = 0;
    std::vector<std::size_t> bin_of(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        const double err = std::abs(records[i].forecast - records[i].actual);
        bin_of[i] = static_cast<std::size_t>(std::floor(err / bin_width));
        max_bin = std::max(max_bin, bin_of[i]);
    }
    ErrorHistogram h;
    h.bin_width = bin_width;
    h.total = records.size();
    h.bins.resize(max_bin + 1);
    for (std::size_t m = 0; m <= max_bin; ++m) {
        h.bins[m] = {static_cast<double>(m) * bin_width, 0};
    }
    for (std::size_t b : bin_of) ++h.bins[b].second;
    return h;
}

namespace {

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    const double n = static_cast<double>(a.size());
    double am = 0.0, bm = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        am += a[i];
        bm += b[i];
    }
    am /= n;
    bm /= n;
    double saa = 0.0, sbb = 0.0, sab = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double da = a[i] - am, db = b[i] - bm;
        saa += da * da;
        sbb += db * db;
        sab += da * db;
    }
    if (saa == 0.0 || sbb == 0.0) return 0.0;
    return sab / std::sqrt(saa * sbb);
}

void sort_descending(SignificanceRanking& ranking) {
    std::stable_sort(ranking.entries.begin(), ranking.entries.end(),
                     [](const auto& a, const auto& b) { return a.score > b.score; });
}

double mean_absolute_error(const std::vector<PredictionRecord>& records) {
    double sum = 0.0;
    for (const auto& r : records) sum += std::abs(r.forecast - r.actual);
    return sum / static_cast<double>(records.size());
}

} // namespace

SignificanceRanking rank_by_correlation(const DataMatrix& data) {
    if (data.size() == 0) {
        throw EmptyDatasetError("rank_by_correlation: dataset is empty");
    }
    SignificanceRanking ranking;
    ranking.method = RankMethod::pearson;
    std::vector<double> col(data.size());
    for (std::size_t j = 0; j < data.arity(); ++j) {
        for (std::size_t i = 0; i < data.size(); ++i) col[i] = data.rows[i][j];
        SignificanceRanking::Entry entry;
        entry.feature = data.feature_names[j];
        const bool constant =
            std::all_of(col.begin(), col.end(), [&](double v) { return v == col[0]; });
        entry.constant_feature = constant;
        entry.score = constant ? 0.0 : pearson(col, data.targets);
        ranking.entries.push_back(std::move(entry));
    }
    sort_descending(ranking);
    return ranking;
}

SignificanceRanking rank_by_correlation(const Dataset& ds) {
    return rank_by_correlation(encode_dataset(ds));
}

SignificanceRanking rank_by_wrapper(const DataMatrix& data, const ModelSpec& spec,
                                    std::uint64_t seed, std::size_t k) {
    if (data.arity() < 2) {
        throw ParameterError("rank_by_wrapper: needs at least 2 features");
    }
    const FoldPlan plan = make_fold_plan(data.size(), k, seed);
    const double base_error = mean_absolute_error(cross_validate(data, spec, plan).records);

    SignificanceRanking ranking;
    ranking.method = RankMethod::wrapper;
    for (std::size_t j = 0; j < data.arity(); ++j) {
        const DataMatrix reduced = data.without_feature(j);
        const double err = mean_absolute_error(cross_validate(reduced, spec, plan).records);
        ranking.entries.push_back({data.feature_names[j], err - base_error, false});
    }
    sort_descending(ranking);
    return ranking;
}

SignificanceRanking rank_by_wrapper(const Dataset& ds, const ModelSpec& spec,
                                    std::uint64_t seed, std::size_t k) {
    return rank_by_wrapper(encode_dataset(ds), spec, seed, k);
}

} // namespace printra
