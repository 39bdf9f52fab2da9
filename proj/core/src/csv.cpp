#include "printra/csv.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

namespace printra {

namespace {

std::vector<std::string> split(const std::string& line, char delim) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, delim)) {
        out.push_back(field);
    }
    if (!line.empty() && line.back() == delim) {
        out.emplace_back();
    }
    return out;
}

std::string trim(std::string s) {
    const auto is_space = [](unsigned char c) { return c == ' ' || c == '\t' || c == '\r'; };
    while (!s.empty() && is_space(s.front())) s.erase(s.begin());
    while (!s.empty() && is_space(s.back())) s.pop_back();
    return s;
}

// Parses a full-field double. With a ';'-delimited file a decimal comma is
// unambiguous and gets normalized; in a ','-delimited file it cannot occur
// (the splitter already consumed it).
bool parse_double(std::string field, double& out) {
    std::replace(field.begin(), field.end(), ',', '.');
    if (field.empty()) return false;
    errno = 0;
    char* end = nullptr;
    out = std::strtod(field.c_str(), &end);
    return errno == 0 && end == field.c_str() + field.size();
}

bool parse_int(const std::string& field, int& out) {
    double d;
    if (!parse_double(field, d)) return false;
    if (d != static_cast<double>(static_cast<int>(d))) return false;
    out = static_cast<int>(d);
    return true;
}

struct ColumnMap {
    // index into the split row for each canonical column, -1 if absent
    int layer_height = -1, printing_speed = -1, printing_temp = -1, wall_thickness = -1,
        infill_density = -1, nozzle_diameter = -1, shape = -1, ra = -1, source = -1;
    char delim = ',';
    std::size_t width = 0;
};

ColumnMap parse_header(const std::string& header_line, const std::string& path) {
    ColumnMap cm;
    cm.delim = header_line.find(';') != std::string::npos ? ';' : ',';
    const auto names = split(header_line, cm.delim);
    cm.width = names.size();
    const std::map<std::string, int*> known = {
        {"layer_height_mm", &cm.layer_height},
        {"printing_speed_mm_s", &cm.printing_speed},
        {"printing_temp_c", &cm.printing_temp},
        {"wall_thickness_mm", &cm.wall_thickness},
        {"infill_density_pct", &cm.infill_density},
        {"nozzle_diameter_mm", &cm.nozzle_diameter},
        {"shape", &cm.shape},
        {"ra_um", &cm.ra},
        {"source", &cm.source},
    };
    for (std::size_t i = 0; i < names.size(); ++i) {
        const std::string name = trim(names[i]);
        const auto it = known.find(name);
        if (it == known.end()) {
            throw SchemaError(path + ": unknown column '" + name + "' in header");
        }
        if (*it->second != -1) {
            throw SchemaError(path + ": duplicate column '" + name + "' in header");
        }
        *it->second = static_cast<int>(i);
    }
    for (const auto& [name, slot] : known) {
        if (*slot == -1 && name != "source" && name != "ra_um") {
            throw SchemaError(path + ": missing required column '" + name + "'");
        }
    }
    return cm;
}

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open '" + path + "' for reading");
    }
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    if (lines.empty()) {
        throw SchemaError(path + ": file has no header row");
    }
    return lines;
}

// Returns a rejection reason, or empty on success.
std::string parse_row(const std::vector<std::string>& fields, const ColumnMap& cm,
                      bool require_ra, PrintSample& out, std::string& source) {
    if (fields.size() != cm.width) {
        return "field_count:expected " + std::to_string(cm.width) + ", got " +
               std::to_string(fields.size());
    }
    const auto get = [&](int idx) { return trim(fields[static_cast<std::size_t>(idx)]); };
    struct NumField {
        int idx;
        double* dst;
        const char* name;
    };
    const NumField nums[] = {
        {cm.layer_height, &out.layer_height, "layer_height_mm"},
        {cm.printing_speed, &out.printing_speed, "printing_speed_mm_s"},
        {cm.printing_temp, &out.printing_temperature, "printing_temp_c"},
        {cm.wall_thickness, &out.wall_thickness, "wall_thickness_mm"},
        {cm.infill_density, &out.infill_density, "infill_density_pct"},
        {cm.nozzle_diameter, &out.nozzle_diameter, "nozzle_diameter_mm"},
    };
    for (const auto& f : nums) {
        if (!parse_double(get(f.idx), *f.dst)) {
            return std::string("unparseable:") + f.name;
        }
    }
    if (!parse_int(get(cm.shape), out.shape)) {
        return "unparseable:shape";
    }
    out.ra.reset();
    if (cm.ra != -1) {
        const std::string ra_field = get(cm.ra);
        if (!ra_field.empty()) {
            double ra;
            if (!parse_double(ra_field, ra)) {
                return "unparseable:ra_um";
            }
            out.ra = ra;
        }
    }
    if (require_ra && !out.ra.has_value()) {
        return "missing_ra";
    }
    source = cm.source != -1 ? get(cm.source) : std::string();
    try {
        out.validate();
    } catch (const SchemaError& e) {
        return std::string("invariant:") + e.what();
    }
    return {};
}

} // namespace

std::pair<Dataset, IngestReport> load_csv(const std::string& path, Provenance provenance) {
    const auto lines = read_lines(path);
    const ColumnMap cm = parse_header(lines[0], path);
    if (cm.ra == -1) {
        throw SchemaError(path + ": missing required column 'ra_um'");
    }

    Dataset ds;
    ds.provenance = provenance;
    IngestReport report;
    report.provenance = provenance;

    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (trim(lines[i]).empty()) continue;
        PrintSample sample;
        std::string source;
        const std::string reason = parse_row(split(lines[i], cm.delim), cm, true, sample, source);
        if (reason.empty()) {
            ds.samples.push_back(sample);
            ds.source_labels.push_back(source);
            ++report.accepted_rows;
        } else {
            report.rejected_rows.emplace_back(i + 1, reason);
        }
    }
    if (report.accepted_rows == 0) {
        throw EmptyDatasetError(path + ": no valid rows (" +
                                std::to_string(report.rejected_rows.size()) + " rejected)");
    }
    return {std::move(ds), std::move(report)};
}

std::vector<PrintSample> load_feature_csv(const std::string& path) {
    const auto lines = read_lines(path);
    const ColumnMap cm = parse_header(lines[0], path);
    std::vector<PrintSample> samples;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (trim(lines[i]).empty()) continue;
        PrintSample sample;
        std::string source;
        const std::string reason = parse_row(split(lines[i], cm.delim), cm, false, sample, source);
        if (!reason.empty()) {
            throw SchemaError(path + ": line " + std::to_string(i + 1) + ": " + reason);
        }
        samples.push_back(sample);
    }
    if (samples.empty()) {
        throw EmptyDatasetError(path + ": no data rows");
    }
    return samples;
}

void write_csv(const std::string& path, const Dataset& ds) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    out << kCsvHeader << "\n";
    char buf[64];
    const auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.10g", v);
        return std::string(buf);
    };
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const auto& s = ds.samples[i];
        out << num(s.layer_height) << ',' << num(s.printing_speed) << ','
            << num(s.printing_temperature) << ',' << num(s.wall_thickness) << ','
            << num(s.infill_density) << ',' << num(s.nozzle_diameter) << ',' << s.shape << ','
            << (s.ra ? num(*s.ra) : std::string()) << ','
            << (i < ds.source_labels.size() ? ds.source_labels[i] : std::string()) << "\n";
    }
    if (!out.flush()) {
        throw IoError("write failed for '" + path + "'");
    }
}

DatasetSummary summarize(const Dataset& ds) {
    if (ds.empty()) {
        throw EmptyDatasetError("summarize: dataset is empty");
    }
    DatasetSummary summary;
    summary.n = ds.size();
    const DataMatrix m = [&] {
        // summarize tolerates missing ra on individual rows; reuse encode()
        // per row and track ra separately
        DataMatrix mm;
        mm.feature_names.assign(kFeatureNames.begin(), kFeatureNames.end());
        for (const auto& s : ds.samples) mm.rows.push_back(encode(s));
        return mm;
    }();
    for (std::size_t j = 0; j < kFeatureCount; ++j) {
        ColumnSummary cs;
        cs.name = kFeatureNames[j];
        cs.min = std::numeric_limits<double>::infinity();
        cs.max = -cs.min;
        double sum = 0.0;
        for (const auto& r : m.rows) {
            cs.min = std::min(cs.min, r[j]);
            cs.max = std::max(cs.max, r[j]);
            sum += r[j];
        }
        cs.mean = sum / static_cast<double>(m.rows.size());
        summary.features.push_back(cs);
    }
    summary.ra.name = "ra";
    summary.ra.min = std::numeric_limits<double>::infinity();
    summary.ra.max = -summary.ra.min;
    double ra_sum = 0.0;
    std::size_t ra_n = 0;
    for (const auto& s : ds.samples) {
        if (!s.ra) continue;
        summary.ra.min = std::min(summary.ra.min, *s.ra);
        summary.ra.max = std::max(summary.ra.max, *s.ra);
        ra_sum += *s.ra;
        ++ra_n;
    }
    if (ra_n == 0) {
        summary.ra.min = summary.ra.max = summary.ra.mean = 0.0;
    } else {
        summary.ra.mean = ra_sum / static_cast<double>(ra_n);
    }
    return summary;
}

} // namespace printra
