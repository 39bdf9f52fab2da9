#include "doctest.h"

#include <cstdint>
#include <fstream>
#include <sstream>

#include "printra/builtin_data.hpp"
#include "printra/csv.hpp"

#include "test_util.hpp"

using namespace printra;
using test::TempFile;

namespace {

const std::string kHeader =
    "layer_height_mm,printing_speed_mm_s,printing_temp_c,wall_thickness_mm,"
    "infill_density_pct,nozzle_diameter_mm,shape,ra_um,source\n";

std::uint64_t fnv1a64(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char c;
    while (in.get(c)) {
        h = (h ^ static_cast<unsigned char>(c)) * 0x100000001b3ULL;
    }
    return h;
}

} // namespace

TEST_CASE("bundled experimental CSV matches the in-memory table bit for bit") {
    const std::string path = std::string(PRINTRA_SOURCE_DATA_DIR) + "/experimental.csv";
    CHECK(fnv1a64(path) == 0xea73d161a3c24687ULL);

    const auto [ds, report] = load_csv(path, Provenance::experimental);
    CHECK(report.accepted_rows == 128);
    CHECK(report.rejected_rows.empty());

    const Dataset builtin = build_experimental_dataset();
    REQUIRE(ds.size() == builtin.size());
    CHECK(ds.samples == builtin.samples);
    CHECK(ds.source_labels == builtin.source_labels);
}

TEST_CASE("experimental dataset reproduces the measured readings") {
    const Dataset ds = build_experimental_dataset();
    REQUIRE(ds.size() == 128);

    SUBCASE("sample 1 carries its eight readings") {
        const std::vector<double> expected = {8.64, 9.39, 9.22, 9.84, 9.70, 8.53, 8.84, 9.28};
        for (std::size_t i = 0; i < 8; ++i) {
            CHECK(ds.samples[i].ra == expected[i]);
            CHECK(ds.samples[i].layer_height == 0.15);
            CHECK(ds.samples[i].nozzle_diameter == 0.4);
            CHECK(ds.samples[i].shape == 0);
        }
    }

    SUBCASE("global extrema") {
        double lo = 1e9, hi = -1e9;
        for (const auto& s : ds.samples) {
            lo = std::min(lo, *s.ra);
            hi = std::max(hi, *s.ra);
        }
        CHECK(lo == 8.53);
        CHECK(hi == 27.02);
    }

    SUBCASE("per-configuration means match the published averages to 0.005") {
        // rows 3 and 13 restate the mean of the eight readings; the source
        // table prints 22.03 and 16.99 there, which its own readings do not
        // average to
        const double published_avg[16] = {9.18, 16.16, 22.16, 15.72, 16.17, 15.64,
                                          15.34, 16.15, 10.87, 17.63, 21.77, 17.30,
                                          17.04, 24.16, 17.12, 18.14};
        for (std::size_t cfg = 0; cfg < 16; ++cfg) {
            double sum = 0.0;
            for (std::size_t r = 0; r < 8; ++r) sum += *ds.samples[cfg * 8 + r].ra;
            CHECK(std::abs(sum / 8.0 - published_avg[cfg]) <= 0.005);
        }
    }
}

TEST_CASE("load_csv is idempotent") {
    const std::string path = std::string(PRINTRA_SOURCE_DATA_DIR) + "/experimental.csv";
    const auto first = load_csv(path, Provenance::experimental);
    const auto second = load_csv(path, Provenance::experimental);
    CHECK(first.first.samples == second.first.samples);
    CHECK(first.second.accepted_rows == second.second.accepted_rows);
}

TEST_CASE("rejected rows carry reasons and partition the input") {
    TempFile file(kHeader +
                  "0.2,60,200,2,20,0.4,0,10.5,a\n"     // ok
                  "-0.2,60,200,2,20,0.4,0,10.5,a\n"    // bad layer height
                  "0.2,60,200,2,20,0.4,0,,a\n"         // missing ra
                  "0.2,sixty,200,2,20,0.4,0,10.5,a\n"  // unparseable speed
                  "0.2,60,200,2,20,0.4,0,10.5\n");     // wrong field count
    const auto [ds, report] = load_csv(file.path(), Provenance::literature);
    CHECK(report.accepted_rows == 1);
    REQUIRE(report.rejected_rows.size() == 4);
    CHECK(report.accepted_rows + report.rejected_rows.size() == report.total_rows());
    CHECK(report.rejected_rows[0].first == 3);
    CHECK(report.rejected_rows[0].second.find("layer_height") != std::string::npos);
    CHECK(report.rejected_rows[1].second == "missing_ra");
    CHECK(report.rejected_rows[2].second == "unparseable:printing_speed_mm_s");
    CHECK(report.rejected_rows[3].second.find("field_count") != std::string::npos);
}

TEST_CASE("a file whose rows all lack ra is an empty-dataset error") {
    TempFile file(kHeader + "0.2,60,200,2,20,0.4,0,,a\n0.3,60,200,2,20,0.4,0,,a\n");
    CHECK_THROWS_AS(load_csv(file.path(), Provenance::literature), EmptyDatasetError);
}

TEST_CASE("header validation") {
    SUBCASE("unknown column") {
        TempFile file("layer_height_mm,bed_temp_c\n0.2,60\n");
        CHECK_THROWS_WITH_AS(load_csv(file.path(), Provenance::literature),
                             doctest::Contains("bed_temp_c"), SchemaError);
    }
    SUBCASE("missing required column") {
        TempFile file("layer_height_mm,printing_speed_mm_s\n0.2,60\n");
        CHECK_THROWS_AS(load_csv(file.path(), Provenance::literature), SchemaError);
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS(load_csv("/definitely/not/here.csv", Provenance::literature), IoError);
    }
}

TEST_CASE("semicolon delimiter with decimal commas") {
    TempFile file(
        "layer_height_mm;printing_speed_mm_s;printing_temp_c;wall_thickness_mm;"
        "infill_density_pct;nozzle_diameter_mm;shape;ra_um;source\n"
        "0,2;60;200;2;20;0,4;0;10,5;euro\n");
    const auto [ds, report] = load_csv(file.path(), Provenance::literature);
    REQUIRE(report.accepted_rows == 1);
    CHECK(ds.samples[0].layer_height == 0.2);
    CHECK(ds.samples[0].nozzle_diameter == 0.4);
    CHECK(ds.samples[0].ra == 10.5);
    CHECK(ds.source_labels[0] == "euro");
}

TEST_CASE("load_feature_csv accepts ra-less prediction inputs") {
    TempFile file(
        "layer_height_mm,printing_speed_mm_s,printing_temp_c,wall_thickness_mm,"
        "infill_density_pct,nozzle_diameter_mm,shape\n"
        "0.2,60,200,2,20,0.4,0\n");
    const auto samples = load_feature_csv(file.path());
    REQUIRE(samples.size() == 1);
    CHECK_FALSE(samples[0].ra.has_value());

    TempFile bad(
        "layer_height_mm,printing_speed_mm_s,printing_temp_c,wall_thickness_mm,"
        "infill_density_pct,nozzle_diameter_mm,shape\n"
        "0.2,60,200,-2,20,0.4,0\n");
    CHECK_THROWS_AS(load_feature_csv(bad.path()), SchemaError);
}

TEST_CASE("summarize") {
    SUBCASE("singleton dataset collapses min = max = mean") {
        Dataset ds;
        ds.samples = {test::sample_with(0.2, 9.5)};
        ds.source_labels = {"x"};
        const DatasetSummary s = summarize(ds);
        CHECK(s.n == 1);
        for (const auto& col : s.features) {
            CHECK(col.min == col.max);
            CHECK(col.min == col.mean);
        }
        CHECK(s.ra.min == 9.5);
        CHECK(s.ra.max == 9.5);
        CHECK(s.ra.mean == 9.5);
    }
    SUBCASE("experimental ra range") {
        const DatasetSummary s = summarize(build_experimental_dataset());
        CHECK(s.ra.min == 8.53);
        CHECK(s.ra.max == 27.02);
    }
    SUBCASE("empty dataset") {
        CHECK_THROWS_AS(summarize(Dataset{}), EmptyDatasetError);
    }
}
