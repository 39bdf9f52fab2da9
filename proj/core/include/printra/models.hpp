#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "printra/rng.hpp"
#include "printra/types.hpp"

namespace printra {

// Default seed used everywhere a seed is not given explicitly.
inline constexpr std::uint64_t kDefaultSeed = 42;

enum class ModelKind { zero_r, linear, smo_reg, decision_stump, random_forest };

const char* to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& name);  // ParameterError on unknown

struct ForestConfig {
    std::size_t n_trees = 100;
    std::size_t feature_subset_size = 0;  // 0 = auto: floor(log2(p)) + 1
    std::size_t min_leaf = 1;
    std::uint64_t seed = kDefaultSeed;
    bool bootstrap = true;  // test hook; true in normal operation
};

struct SvrConfig {
    double complexity = 1.0;   // C
    double epsilon = 1e-3;     // tube half-width
    double tolerance = 1e-3;   // KKT stopping tolerance
    std::size_t max_pair_updates = 1000000;
    // kernel: linear; inputs min-max normalized to [0,1] (the only modes)
};

// Common fit/predict contract of the five model families.
class RegressionModel {
public:
    virtual ~RegressionModel() = default;

    virtual ModelKind kind() const = 0;
    virtual void fit(const DataMatrix& train) = 0;
    void fit(const Dataset& train) { fit(encode_dataset(train)); }

    // StateError before fit, SchemaError on arity mismatch.
    double predict(const FeatureVector& x) const;

    bool fitted() const { return fitted_; }
    std::size_t arity() const { return arity_; }

    // Hyperparameter record, for reports and model files.
    virtual nlohmann::json describe() const = 0;

    virtual void save_params(nlohmann::json& out) const = 0;
    virtual void load_params(const nlohmann::json& in) = 0;

protected:
    virtual double do_predict(const FeatureVector& x) const = 0;

    void require_trainable(const DataMatrix& train) const;
    void mark_fitted(std::size_t arity) {
        arity_ = arity;
        fitted_ = true;
    }

    bool fitted_ = false;
    std::size_t arity_ = 0;
};

// --- ZeroR ------------------------------------------------------------

class ZeroRModel final : public RegressionModel {
public:
    using RegressionModel::fit;
    ModelKind kind() const override { return ModelKind::zero_r; }
    void fit(const DataMatrix& train) override;
    nlohmann::json describe() const override;
    void save_params(nlohmann::json& out) const override;
    void load_params(const nlohmann::json& in) override;

    double mean() const { return mean_; }

protected:
    double do_predict(const FeatureVector&) const override { return mean_; }

private:
    double mean_ = 0.0;
};

// --- Linear regression with backward AIC selection --------------------

class LinearAicModel final : public RegressionModel {
public:
    using RegressionModel::fit;
    ModelKind kind() const override { return ModelKind::linear; }
    void fit(const DataMatrix& train) override;
    nlohmann::json describe() const override;
    void save_params(nlohmann::json& out) const override;
    void load_params(const nlohmann::json& in) override;

    // Retained attribute indices into the training schema, ascending.
    const std::vector<std::size_t>& selected_features() const { return selected_; }
    const std::vector<double>& coefficients() const { return coef_; }  // per selected feature
    double intercept() const { return intercept_; }
    double aic() const { return aic_; }

protected:
    double do_predict(const FeatureVector& x) const override;

private:
    std::vector<std::size_t> selected_;
    std::vector<double> coef_;
    double intercept_ = 0.0;
    double aic_ = 0.0;
};

// --- Epsilon-insensitive SVR solved by SMO ----------------------------

class SmoRegModel final : public RegressionModel {
public:
    SmoRegModel() = default;
    explicit SmoRegModel(SvrConfig cfg) : cfg_(cfg) {}

    using RegressionModel::fit;
    ModelKind kind() const override { return ModelKind::smo_reg; }
    void fit(const DataMatrix& train) override;
    nlohmann::json describe() const override;
    void save_params(nlohmann::json& out) const override;
    void load_params(const nlohmann::json& in) override;

    const SvrConfig& config() const { return cfg_; }
    double bias() const { return bias_; }
    // Per training row: (alpha_i, alpha*_i), both in [0, C], product 0.
    const std::vector<std::pair<double, double>>& alphas() const { return alphas_; }
    double converged_kkt_gap() const { return kkt_gap_; }

protected:
    double do_predict(const FeatureVector& x) const override;

private:
    FeatureVector normalize(const FeatureVector& x) const;

    SvrConfig cfg_;
    std::vector<FeatureVector> train_x_;  // normalized training inputs
    std::vector<std::pair<double, double>> alphas_;
    std::vector<double> beta_;  // alpha - alpha*
    double bias_ = 0.0;
    double kkt_gap_ = 0.0;
    std::vector<double> feat_min_, feat_range_;
};

// --- Decision stump ---------------------------------------------------

class DecisionStumpModel final : public RegressionModel {
public:
    using RegressionModel::fit;
    ModelKind kind() const override { return ModelKind::decision_stump; }
    void fit(const DataMatrix& train) override;
    nlohmann::json describe() const override;
    void save_params(nlohmann::json& out) const override;
    void load_params(const nlohmann::json& in) override;

    bool has_split() const { return split_feature_ >= 0; }
    int split_feature() const { return split_feature_; }
    double threshold() const { return threshold_; }
    double left_mean() const { return left_mean_; }
    double right_mean() const { return right_mean_; }

protected:
    double do_predict(const FeatureVector& x) const override;

private:
    int split_feature_ = -1;  // -1: degenerate mean rule, left_mean_ holds the mean
    double threshold_ = 0.0;
    double left_mean_ = 0.0;
    double right_mean_ = 0.0;
};

// --- Random forest of CART regression trees ---------------------------

class RandomForestModel final : public RegressionModel {
public:
    struct Node {
        int feature = -1;  // -1 = leaf
        double threshold = 0.0;
        std::int32_t left = -1, right = -1;
        double value = 0.0;  // leaf mean
    };
    using Tree = std::vector<Node>;

    RandomForestModel() = default;
    explicit RandomForestModel(ForestConfig cfg) : cfg_(cfg) {}

    using RegressionModel::fit;
    ModelKind kind() const override { return ModelKind::random_forest; }
    void fit(const DataMatrix& train) override;
    nlohmann::json describe() const override;
    void save_params(nlohmann::json& out) const override;
    void load_params(const nlohmann::json& in) override;

    const ForestConfig& config() const { return cfg_; }
    std::size_t tree_count() const { return trees_.size(); }
    std::vector<double> predict_per_tree(const FeatureVector& x) const;

protected:
    double do_predict(const FeatureVector& x) const override;

private:
    ForestConfig cfg_;
    std::vector<Tree> trees_;
};

// --- Factory, convenience fitters, persistence ------------------------

struct ModelSpec {
    ModelKind kind = ModelKind::random_forest;
    ForestConfig forest;
    SvrConfig svr;
};

std::unique_ptr<RegressionModel> make_model(const ModelSpec& spec);

std::unique_ptr<ZeroRModel> fit_zero_r(const Dataset& train);
std::unique_ptr<LinearAicModel> fit_linear(const Dataset& train);
std::unique_ptr<SmoRegModel> fit_smo_reg(const Dataset& train, const SvrConfig& cfg = {});
std::unique_ptr<DecisionStumpModel> fit_decision_stump(const Dataset& train);
std::unique_ptr<RandomForestModel> fit_random_forest(const Dataset& train,
                                                     const ForestConfig& cfg = {});

// Versioned JSON model files; round-trips predictions exactly.
void save_model(const RegressionModel& model, const std::string& path);
std::unique_ptr<RegressionModel> load_model(const std::string& path);

} // namespace printra
