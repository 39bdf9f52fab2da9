#include "printra/builtin_data.hpp"

namespace printra {

namespace {

// 16 cylinder specimens, nozzle 0.4 mm, infill 20 %, eight Ra readings each
// taken at 45-degree steps around the part.
constexpr std::array<ExperimentalRun, 16> kRuns = {{
    {"US5", 0.15, 60, 200, 2, 20, {8.64, 9.39, 9.22, 9.84, 9.70, 8.53, 8.84, 9.28}},
    {"US5", 0.23, 60, 200, 2, 20, {15.70, 15.95, 15.83, 16.63, 16.34, 16.26, 16.22, 16.33}},
    {"US5", 0.30, 60, 200, 2, 20, {22.61, 22.76, 22.33, 21.89, 20.87, 22.17, 22.11, 22.52}},
    {"US5", 0.23, 60, 215, 2, 20, {15.28, 15.64, 15.86, 16.77, 14.98, 15.16, 15.95, 16.15}},
    {"US5", 0.23, 60, 230, 2, 20, {16.29, 16.35, 16.53, 15.51, 16.99, 15.26, 15.91, 16.55}},
    {"US5", 0.23, 60, 200, 1, 20, {15.70, 15.52, 15.53, 14.81, 16.58, 15.82, 15.37, 15.82}},
    {"US5", 0.23, 60, 200, 3, 20, {15.14, 15.44, 14.93, 15.76, 15.83, 14.48, 15.61, 15.51}},
    {"US5", 0.23, 40, 200, 2, 20, {15.68, 16.30, 16.19, 17.01, 15.95, 15.30, 16.62, 16.18}},
    {"U3", 0.15, 60, 200, 2, 20, {10.19, 11.79, 11.29, 11.87, 10.90, 10.84, 9.55, 10.53}},
    {"U3", 0.23, 60, 200, 2, 20, {17.62, 18.57, 19.74, 18.14, 16.10, 16.81, 16.79, 17.29}},
    {"U3", 0.30, 60, 200, 2, 20, {21.65, 21.90, 21.98, 22.00, 21.14, 22.08, 21.99, 21.41}},
    {"U3", 0.23, 60, 215, 2, 20, {17.10, 16.36, 17.65, 18.44, 16.61, 18.31, 15.66, 18.27}},
    {"U3", 0.23, 60, 230, 2, 20, {17.55, 18.84, 17.60, 17.26, 16.06, 15.76, 15.55, 17.73}},
    {"U3", 0.23, 60, 200, 1, 20, {26.49, 27.02, 26.25, 26.00, 22.70, 21.57, 21.47, 21.81}},
    {"U3", 0.23, 60, 200, 3, 20, {17.17, 17.31, 18.31, 16.97, 16.11, 17.44, 16.25, 17.42}},
    {"U3", 0.23, 40, 200, 2, 20, {18.09, 18.72, 19.03, 18.53, 17.09, 16.89, 17.80, 18.97}},
}};

} // namespace

const std::array<ExperimentalRun, 16>& experimental_runs() { return kRuns; }

Dataset build_experimental_dataset() {
    Dataset ds;
    ds.provenance = Provenance::experimental;
    ds.samples.reserve(128);
    ds.source_labels.reserve(128);
    for (const auto& run : kRuns) {
        for (double ra : run.ra) {
            PrintSample s;
            s.layer_height = run.layer_height;
            s.printing_speed = run.printing_speed;
            s.printing_temperature = run.printing_temperature;
            s.wall_thickness = run.wall_thickness;
            s.infill_density = run.infill_density;
            s.nozzle_diameter = 0.4;
            s.shape = 0;  // cylinder
            s.ra = ra;
            ds.samples.push_back(s);
            ds.source_labels.emplace_back("lab");
        }
    }
    return ds;
}

} // namespace printra
