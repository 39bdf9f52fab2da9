#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "printra/types.hpp"

namespace printra {

// Per-file ingestion outcome. Row numbers are 1-based file line numbers
// (the header is line 1), so a reason can be chased back to the file.
struct IngestReport {
    std::size_t accepted_rows = 0;
    std::vector<std::pair<std::size_t, std::string>> rejected_rows;  // (line, reason)
    Provenance provenance = Provenance::literature;

    std::size_t total_rows() const { return accepted_rows + rejected_rows.size(); }
};

// Canonical header. Columns may appear in any order; unknown names are a
// schema error. `source` is optional, `ra_um` is required for load_csv.
inline constexpr const char* kCsvHeader =
    "layer_height_mm,printing_speed_mm_s,printing_temp_c,wall_thickness_mm,"
    "infill_density_pct,nozzle_diameter_mm,shape,ra_um,source";

// Loads and validates a training/testing CSV. Rows violating PrintSample
// invariants or missing ra are rejected with per-row reasons. Field
// delimiter is ',' or ';' (auto-detected from the header); with ';' a
// decimal comma is accepted and normalized.
std::pair<Dataset, IngestReport> load_csv(const std::string& path, Provenance provenance);

// Prediction inputs: same schema minus ra (an ra_um column, if present,
// must be empty). Throws on any invalid row instead of rejecting.
std::vector<PrintSample> load_feature_csv(const std::string& path);

void write_csv(const std::string& path, const Dataset& ds);

struct ColumnSummary {
    std::string name;
    double min = 0.0, max = 0.0, mean = 0.0;
};

struct DatasetSummary {
    std::vector<ColumnSummary> features;  // schema order
    ColumnSummary ra;
    std::size_t n = 0;
};

DatasetSummary summarize(const Dataset& ds);

} // namespace printra
