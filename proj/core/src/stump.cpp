#include "printra/models.hpp"

#include <algorithm>
#include <numeric>

namespace printra {

namespace {

struct SplitSearch {
    int feature = -1;
    double threshold = 0.0;
    double left_mean = 0.0;
    double right_mean = 0.0;
    double sse = 0.0;
};

// Best (feature, midpoint) split by total within-leaf squared error.
// Features scanned in index order, thresholds ascending, strict-improvement
// comparisons: ties resolve to lowest feature index, then lowest threshold.
SplitSearch exhaustive_best_split(const DataMatrix& train) {
    const std::size_t n = train.size();
    double total = 0.0, total_sq = 0.0;
    for (double y : train.targets) {
        total += y;
        total_sq += y * y;
    }
    SplitSearch best;
    best.sse = total_sq - total * total / static_cast<double>(n);  // root SSE
    best.left_mean = total / static_cast<double>(n);

    std::vector<std::size_t> order(n);
    for (std::size_t j = 0; j < train.arity(); ++j) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return train.rows[a][j] < train.rows[b][j];
        });
        double left_sum = 0.0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            left_sum += train.targets[order[i]];
            const double lo = train.rows[order[i]][j];
            const double hi = train.rows[order[i + 1]][j];
            if (lo == hi) continue;
            const double nl = static_cast<double>(i + 1);
            const double nr = static_cast<double>(n - i - 1);
            const double right_sum = total - left_sum;
            const double sse =
                total_sq - left_sum * left_sum / nl - right_sum * right_sum / nr;
            if (sse < best.sse) {
                best.sse = sse;
                best.feature = static_cast<int>(j);
                best.threshold = lo + (hi - lo) / 2.0;
                best.left_mean = left_sum / nl;
                best.right_mean = right_sum / nr;
            }
        }
    }
    return best;
}

} // namespace

void DecisionStumpModel::fit(const DataMatrix& train) {
    require_trainable(train);
    const SplitSearch best = exhaustive_best_split(train);
    split_feature_ = best.feature;
    threshold_ = best.threshold;
    left_mean_ = best.left_mean;
    right_mean_ = best.right_mean;
    mark_fitted(train.arity());
}

double DecisionStumpModel::do_predict(const FeatureVector& x) const {
    if (split_feature_ < 0) {
        return left_mean_;
    }
    return x[static_cast<std::size_t>(split_feature_)] < threshold_ ? left_mean_ : right_mean_;
}

nlohmann::json DecisionStumpModel::describe() const {
    return nlohmann::json{{"kind", "stump"}};
}

void DecisionStumpModel::save_params(nlohmann::json& out) const {
    out["split_feature"] = split_feature_;
    out["threshold"] = threshold_;
    out["left_mean"] = left_mean_;
    out["right_mean"] = right_mean_;
}

void DecisionStumpModel::load_params(const nlohmann::json& in) {
    split_feature_ = in.at("split_feature").get<int>();
    threshold_ = in.at("threshold").get<double>();
    left_mean_ = in.at("left_mean").get<double>();
    right_mean_ = in.at("right_mean").get<double>();
    mark_fitted(in.at("arity").get<std::size_t>());
}

} // namespace printra
