#include "printra/types.hpp"

#include <cmath>

namespace printra {

namespace {

void require(bool ok, const char* field, const char* what) {
    if (!ok) {
        throw SchemaError(std::string("invalid sample: field '") + field + "' " + what);
    }
}

} // namespace

void PrintSample::validate() const {
    require(std::isfinite(layer_height) && layer_height > 0, "layer_height", "must be > 0");
    require(std::isfinite(printing_speed) && printing_speed > 0, "printing_speed", "must be > 0");
    require(std::isfinite(printing_temperature), "printing_temperature", "must be finite");
    require(std::isfinite(wall_thickness) && wall_thickness > 0, "wall_thickness", "must be > 0");
    require(std::isfinite(infill_density) && infill_density >= 0 && infill_density <= 100,
            "infill_density", "must be in [0, 100]");
    require(std::isfinite(nozzle_diameter) && nozzle_diameter > 0, "nozzle_diameter",
            "must be > 0");
    if (ra.has_value()) {
        require(std::isfinite(*ra) && *ra > 0, "ra", "must be > 0 when present");
    }
}

const char* to_string(Provenance p) {
    return p == Provenance::literature ? "literature" : "experimental";
}

FeatureVector encode(const PrintSample& sample) {
    sample.validate();
    return {sample.layer_height,   sample.printing_speed,  sample.printing_temperature,
            sample.wall_thickness, sample.infill_density,  sample.nozzle_diameter,
            static_cast<double>(sample.shape)};
}

DataMatrix DataMatrix::without_feature(std::size_t j) const {
    if (j >= arity()) {
        throw ParameterError("without_feature: column index out of range");
    }
    DataMatrix out;
    out.targets = targets;
    out.feature_names = feature_names;
    out.feature_names.erase(out.feature_names.begin() + static_cast<std::ptrdiff_t>(j));
    out.rows.reserve(rows.size());
    for (const auto& r : rows) {
        FeatureVector v = r;
        v.erase(v.begin() + static_cast<std::ptrdiff_t>(j));
        out.rows.push_back(std::move(v));
    }
    return out;
}

DataMatrix encode_dataset(const Dataset& ds) {
    if (ds.empty()) {
        throw EmptyDatasetError("encode_dataset: dataset is empty");
    }
    DataMatrix m;
    m.feature_names.assign(kFeatureNames.begin(), kFeatureNames.end());
    m.rows.reserve(ds.size());
    m.targets.reserve(ds.size());
    for (const auto& s : ds.samples) {
        if (!s.ra.has_value()) {
            throw SchemaError("encode_dataset: sample is missing field 'ra'");
        }
        m.rows.push_back(encode(s));
        m.targets.push_back(*s.ra);
    }
    return m;
}

} // namespace printra
