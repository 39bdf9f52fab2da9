#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "printra/error.hpp"

namespace printra {

// Canonical feature schema, in encoding order. Units are fixed (mm, mm/s,
// degC, %, mm, code); ingestion rejects anything else, nothing is converted.
inline constexpr std::size_t kFeatureCount = 7;
inline constexpr std::array<const char*, kFeatureCount> kFeatureNames = {
    "layer_height",   "printing_speed", "printing_temperature", "wall_thickness",
    "infill_density", "nozzle_diameter", "shape"};

// One printed specimen: process parameters plus the measured roughness
// target. `ra` is absent on pure prediction inputs.
struct PrintSample {
    double layer_height = 0.0;          // mm
    double printing_speed = 0.0;        // mm/s
    double printing_temperature = 0.0;  // degC
    double wall_thickness = 0.0;        // mm
    double infill_density = 0.0;        // percent, 0-100
    double nozzle_diameter = 0.0;       // mm
    int shape = 0;                      // categorical code, 0 = cylinder
    std::optional<double> ra;           // um

    // Throws SchemaError naming the offending field.
    void validate() const;

    bool operator==(const PrintSample&) const = default;
};

enum class Provenance { literature, experimental };

const char* to_string(Provenance p);

// Ordered, schema-validated sample collection. Iteration order is stable
// across runs; instances are immutable by convention once built.
struct Dataset {
    std::vector<PrintSample> samples;
    Provenance provenance = Provenance::literature;
    std::vector<std::string> source_labels;  // citation key or "lab", per sample

    std::size_t size() const { return samples.size(); }
    bool empty() const { return samples.empty(); }
};

using FeatureVector = std::vector<double>;

// Numeric encoding of a sample's predictors, in schema order.
FeatureVector encode(const PrintSample& sample);

struct PredictionRecord {
    double actual = 0.0;    // um
    double forecast = 0.0;  // um
    std::size_t sample_index = 0;
};

// Dense design matrix plus targets; the representation all models train on.
// Feature columns can be a subset of the canonical schema (the wrapper
// significance analysis refits with one column deleted).
struct DataMatrix {
    std::vector<FeatureVector> rows;
    std::vector<double> targets;               // um
    std::vector<std::string> feature_names;

    std::size_t size() const { return rows.size(); }
    std::size_t arity() const { return feature_names.size(); }

    // Copy with feature column `j` removed.
    DataMatrix without_feature(std::size_t j) const;
};

// Requires every sample to carry ra; throws SchemaError otherwise.
DataMatrix encode_dataset(const Dataset& ds);

} // namespace printra
