#include "printra/models.hpp"

#include <cmath>
#include <fstream>

namespace printra {

namespace {

constexpr const char* kMagic = "printra-model";
constexpr int kFormatVersion = 1;

} // namespace

const char* to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::zero_r: return "zeror";
        case ModelKind::linear: return "lr";
        case ModelKind::smo_reg: return "smoreg";
        case ModelKind::decision_stump: return "stump";
        case ModelKind::random_forest: return "rf";
    }
    return "?";
}

ModelKind model_kind_from_string(const std::string& name) {
    if (name == "zeror") return ModelKind::zero_r;
    if (name == "lr") return ModelKind::linear;
    if (name == "smoreg") return ModelKind::smo_reg;
    if (name == "stump" || name == "ds") return ModelKind::decision_stump;
    if (name == "rf") return ModelKind::random_forest;
    throw ParameterError("unknown model kind '" + name +
                         "' (expected zeror|lr|smoreg|stump|rf)");
}

double RegressionModel::predict(const FeatureVector& x) const {
    if (!fitted_) {
        throw StateError("predict called on an unfitted model");
    }
    if (x.size() != arity_) {
        throw SchemaError("feature vector has arity " + std::to_string(x.size()) +
                          ", model expects " + std::to_string(arity_));
    }
    for (double v : x) {
        if (!std::isfinite(v)) {
            throw SchemaError("feature vector contains a non-finite value");
        }
    }
    return do_predict(x);
}

void RegressionModel::require_trainable(const DataMatrix& train) const {
    if (train.size() == 0) {
        throw EmptyDatasetError("fit: training set is empty");
    }
    if (train.arity() == 0) {
        throw SchemaError("fit: training set has no features");
    }
    if (train.targets.size() != train.rows.size()) {
        throw SchemaError("fit: target count does not match row count");
    }
}

std::unique_ptr<RegressionModel> make_model(const ModelSpec& spec) {
    switch (spec.kind) {
        case ModelKind::zero_r: return std::make_unique<ZeroRModel>();
        case ModelKind::linear: return std::make_unique<LinearAicModel>();
        case ModelKind::smo_reg: return std::make_unique<SmoRegModel>(spec.svr);
        case ModelKind::decision_stump: return std::make_unique<DecisionStumpModel>();
        case ModelKind::random_forest: return std::make_unique<RandomForestModel>(spec.forest);
    }
    throw ParameterError("make_model: unknown model kind");
}

std::unique_ptr<ZeroRModel> fit_zero_r(const Dataset& train) {
    auto m = std::make_unique<ZeroRModel>();
    m->fit(train);
    return m;
}

std::unique_ptr<LinearAicModel> fit_linear(const Dataset& train) {
    auto m = std::make_unique<LinearAicModel>();
    m->fit(train);
    return m;
}

std::unique_ptr<SmoRegModel> fit_smo_reg(const Dataset& train, const SvrConfig& cfg) {
    auto m = std::make_unique<SmoRegModel>(cfg);
    m->fit(train);
    return m;
}

std::unique_ptr<DecisionStumpModel> fit_decision_stump(const Dataset& train) {
    auto m = std::make_unique<DecisionStumpModel>();
    m->fit(train);
    return m;
}

std::unique_ptr<RandomForestModel> fit_random_forest(const Dataset& train,
                                                     const ForestConfig& cfg) {
    auto m = std::make_unique<RandomForestModel>(cfg);
    m->fit(train);
    return m;
}

void save_model(const RegressionModel& model, const std::string& path) {
    if (!model.fitted()) {
        throw StateError("save_model: model is not fitted");
    }
    nlohmann::json j;
    j["magic"] = kMagic;
    j["format_version"] = kFormatVersion;
    j["kind"] = to_string(model.kind());
    j["arity"] = model.arity();
    j["config"] = model.describe();
    nlohmann::json params;
    model.save_params(params);
    params["arity"] = model.arity();
    j["params"] = params;

    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    out << j.dump(2) << "\n";
    if (!out.flush()) {
        throw IoError("write failed for '" + path + "'");
    }
}

std::unique_ptr<RegressionModel> load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open '" + path + "' for reading");
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("'" + path + "' is not a valid model file: " + e.what());
    }
    try {
        if (!j.is_object() || j.value("magic", "") != kMagic) {
            throw FormatError("'" + path + "' is missing the model file magic header");
        }
        const int version = j.value("format_version", -1);
        if (version != kFormatVersion) {
            throw FormatError("'" + path + "' has format version " + std::to_string(version) +
                              ", this build supports version " + std::to_string(kFormatVersion));
        }
        ModelSpec spec;
        spec.kind = model_kind_from_string(j.at("kind").get<std::string>());
        auto model = make_model(spec);
        model->load_params(j.at("params"));
        if (!model->fitted() || model->arity() != j.at("arity").get<std::size_t>()) {
            throw FormatError("'" + path + "' parameters are inconsistent with its header");
        }
        return model;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("'" + path + "' is malformed: " + e.what());
    }
}

} // namespace printra
