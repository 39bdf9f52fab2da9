#pragma once

#include "printra/types.hpp"

namespace printra {

// The 128-row experimental test set bundled with the library: 16 printed
// cylinder configurations, each with its 8 positional Ra readings. See
// data/README.md for the measurement context and the shape code table.
Dataset build_experimental_dataset();

// The 16 configurations and their raw readings, exposed for fidelity tests.
struct ExperimentalRun {
    const char* printer;  // "US5" or "U3"
    double layer_height;
    double printing_speed;
    double printing_temperature;
    double wall_thickness;
    double infill_density;
    double ra[8];
};

const std::array<ExperimentalRun, 16>& experimental_runs();

} // namespace printra
