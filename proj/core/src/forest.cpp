#include "printra/models.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace printra {

namespace {

std::size_t auto_subset_size(std::size_t p) {
    std::size_t k = 1;
    while ((std::size_t{1} << k) <= p) ++k;  // k = floor(log2 p) + 1
    return std::min(k, p);
}

class TreeBuilder {
public:
    TreeBuilder(const DataMatrix& data, std::size_t subset_size, std::size_t min_leaf,
                SplitMix64 rng)
        : data_(data), subset_size_(subset_size), min_leaf_(min_leaf), rng_(rng),
          scratch_features_(data.arity()) {}

    RandomForestModel::Tree build(std::vector<std::size_t> indices) {
        tree_.clear();
        grow(std::move(indices));
        return std::move(tree_);
    }

private:
    std::int32_t grow(std::vector<std::size_t> idx) {
        const double n = static_cast<double>(idx.size());
        double sum = 0.0, sumsq = 0.0;
        for (std::size_t i : idx) {
            const double y = data_.targets[i];
            sum += y;
            sumsq += y * y;
        }
        const double node_sse = sumsq - sum * sum / n;
        const double mean = sum / n;

        const auto leaf = [&] {
            RandomForestModel::Node node;
            node.value = mean;
            tree_.push_back(node);
            return static_cast<std::int32_t>(tree_.size() - 1);
        };
        if (idx.size() < 2 * min_leaf_ || node_sse <= 1e-12) {
            return leaf();
        }

        // Per-node uniform draw of candidate features, then scanned in
        // ascending index order so split ties break deterministically.
        std::iota(scratch_features_.begin(), scratch_features_.end(), std::size_t{0});
        for (std::size_t i = 0; i < subset_size_; ++i) {
            const std::size_t j =
                i + static_cast<std::size_t>(rng_.next_below(scratch_features_.size() - i));
            std::swap(scratch_features_[i], scratch_features_[j]);
        }
        std::sort(scratch_features_.begin(), scratch_features_.begin() +
                                                 static_cast<std::ptrdiff_t>(subset_size_));

        int best_feature = -1;
        double best_threshold = 0.0;
        double best_sse = node_sse;
        std::vector<std::size_t> order(idx);
        for (std::size_t fi = 0; fi < subset_size_; ++fi) {
            const std::size_t f = scratch_features_[fi];
            std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                return data_.rows[a][f] < data_.rows[b][f];
            });
            double left_sum = 0.0;
            for (std::size_t i = 0; i + 1 < order.size(); ++i) {
                left_sum += data_.targets[order[i]];
                const double lo = data_.rows[order[i]][f];
                const double hi = data_.rows[order[i + 1]][f];
                if (lo == hi) continue;
                const std::size_t nl = i + 1, nr = order.size() - i - 1;
                if (nl < min_leaf_ || nr < min_leaf_) continue;
                const double right_sum = sum - left_sum;
                const double sse = sumsq - left_sum * left_sum / static_cast<double>(nl) -
                                   right_sum * right_sum / static_cast<double>(nr);
                if (sse < best_sse) {
                    best_sse = sse;
                    best_feature = static_cast<int>(f);
                    best_threshold = lo + (hi - lo) / 2.0;
                }
            }
        }
        if (best_feature < 0) {
            return leaf();
        }

        std::vector<std::size_t> left, right;
        for (std::size_t i : idx) {
            (data_.rows[i][static_cast<std::size_t>(best_feature)] < best_threshold ? left
                                                                                    : right)
                .push_back(i);
        }
        RandomForestModel::Node node;
        node.feature = best_feature;
        node.threshold = best_threshold;
        tree_.push_back(node);
        const std::int32_t self = static_cast<std::int32_t>(tree_.size() - 1);
        const std::int32_t l = grow(std::move(left));
        const std::int32_t r = grow(std::move(right));
        tree_[static_cast<std::size_t>(self)].left = l;
        tree_[static_cast<std::size_t>(self)].right = r;
        return self;
    }

    const DataMatrix& data_;
    std::size_t subset_size_;
    std::size_t min_leaf_;
    SplitMix64 rng_;
    std::vector<std::size_t> scratch_features_;
    RandomForestModel::Tree tree_;
};

double predict_tree(const RandomForestModel::Tree& tree, const FeatureVector& x) {
    std::size_t at = 0;
    while (tree[at].feature >= 0) {
        at = static_cast<std::size_t>(x[static_cast<std::size_t>(tree[at].feature)] <
                                              tree[at].threshold
                                          ? tree[at].left
                                          : tree[at].right);
    }
    return tree[at].value;
}

} // namespace

void RandomForestModel::fit(const DataMatrix& train) {
    require_trainable(train);
    const std::size_t p = train.arity();
    if (cfg_.n_trees < 1) {
        throw ParameterError("forest config: n_trees must be >= 1");
    }
    std::size_t subset = cfg_.feature_subset_size == 0 ? auto_subset_size(p)
                                                       : cfg_.feature_subset_size;
    if (subset < 1 || subset > p) {
        throw ParameterError("forest config: feature_subset_size must be in [1, p]");
    }
    if (cfg_.min_leaf < 1) {
        throw ParameterError("forest config: min_leaf must be >= 1");
    }

    const std::size_t n = train.size();
    trees_.clear();
    trees_.reserve(cfg_.n_trees);
    // One pre-derived stream per tree: results do not depend on build order.
    for (std::size_t t = 0; t < cfg_.n_trees; ++t) {
        SplitMix64 rng(derive_stream(cfg_.seed, t));
        std::vector<std::size_t> indices;
        indices.reserve(n);
        if (cfg_.bootstrap) {
            for (std::size_t i = 0; i < n; ++i) {
                indices.push_back(static_cast<std::size_t>(rng.next_below(n)));
            }
        } else {
            indices.resize(n);
            std::iota(indices.begin(), indices.end(), std::size_t{0});
        }
        TreeBuilder builder(train, subset, cfg_.min_leaf, rng);
        trees_.push_back(builder.build(std::move(indices)));
    }
    mark_fitted(p);
}

double RandomForestModel::do_predict(const FeatureVector& x) const {
    double sum = 0.0;
    for (const auto& tree : trees_) sum += predict_tree(tree, x);
    return sum / static_cast<double>(trees_.size());
}

std::vector<double> RandomForestModel::predict_per_tree(const FeatureVector& x) const {
    if (!fitted()) {
        throw StateError("predict_per_tree called on an unfitted model");
    }
    std::vector<double> out;
    out.reserve(trees_.size());
    for (const auto& tree : trees_) out.push_back(predict_tree(tree, x));
    return out;
}

nlohmann::json RandomForestModel::describe() const {
    return nlohmann::json{{"kind", "rf"},
                          {"n_trees", cfg_.n_trees},
                          {"feature_subset_size", cfg_.feature_subset_size},
                          {"min_leaf", cfg_.min_leaf},
                          {"seed", cfg_.seed},
                          {"bootstrap", cfg_.bootstrap}};
}

void RandomForestModel::save_params(nlohmann::json& out) const {
    out["n_trees"] = cfg_.n_trees;
    out["feature_subset_size"] = cfg_.feature_subset_size;
    out["min_leaf"] = cfg_.min_leaf;
    out["seed"] = cfg_.seed;
    out["bootstrap"] = cfg_.bootstrap;
    nlohmann::json trees = nlohmann::json::array();
    for (const auto& tree : trees_) {
        nlohmann::json nodes = nlohmann::json::array();
        for (const auto& n : tree) {
            nodes.push_back({{"f", n.feature},
                             {"t", n.threshold},
                             {"l", n.left},
                             {"r", n.right},
                             {"v", n.value}});
        }
        trees.push_back(std::move(nodes));
    }
    out["trees"] = std::move(trees);
}

void RandomForestModel::load_params(const nlohmann::json& in) {
    cfg_.n_trees = in.at("n_trees").get<std::size_t>();
    cfg_.feature_subset_size = in.at("feature_subset_size").get<std::size_t>();
    cfg_.min_leaf = in.at("min_leaf").get<std::size_t>();
    cfg_.seed = in.at("seed").get<std::uint64_t>();
    cfg_.bootstrap = in.at("bootstrap").get<bool>();
    trees_.clear();
    for (const auto& nodes : in.at("trees")) {
        Tree tree;
        for (const auto& jn : nodes) {
            Node n;
            n.feature = jn.at("f").get<int>();
            n.threshold = jn.at("t").get<double>();
            n.left = jn.at("l").get<std::int32_t>();
            n.right = jn.at("r").get<std::int32_t>();
            n.value = jn.at("v").get<double>();
            tree.push_back(n);
        }
        trees_.push_back(std::move(tree));
    }
    if (trees_.empty()) {
        throw FormatError("forest model file contains no trees");
    }
    mark_fitted(in.at("arity").get<std::size_t>());
}

} // namespace printra
