#include "printra/models.hpp"

namespace printra {

void ZeroRModel::fit(const DataMatrix& train) {
    require_trainable(train);
    double sum = 0.0;
    for (double y : train.targets) sum += y;
    mean_ = sum / static_cast<double>(train.size());
    mark_fitted(train.arity());
}

nlohmann::json ZeroRModel::describe() const {
    return nlohmann::json{{"kind", "zeror"}};
}

void ZeroRModel::save_params(nlohmann::json& out) const {
    out["mean"] = mean_;
}

void ZeroRModel::load_params(const nlohmann::json& in) {
    mean_ = in.at("mean").get<double>();
    mark_fitted(in.at("arity").get<std::size_t>());
}

} // namespace printra
