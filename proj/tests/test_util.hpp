#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <unistd.h>

#include "printra/rng.hpp"
#include "printra/types.hpp"

namespace printra::test {

inline PrintSample sample_with(double layer_height = 0.2, double ra = 10.0) {
    PrintSample s;
    s.layer_height = layer_height;
    s.printing_speed = 60;
    s.printing_temperature = 200;
    s.wall_thickness = 2;
    s.infill_density = 20;
    s.nozzle_diameter = 0.4;
    s.shape = 0;
    s.ra = ra;
    return s;
}

// Random design matrix with p features in [0, 1) and targets in [1, 11).
inline DataMatrix random_matrix(std::size_t n, std::size_t p, SplitMix64& rng) {
    DataMatrix m;
    for (std::size_t j = 0; j < p; ++j) m.feature_names.push_back("f" + std::to_string(j));
    for (std::size_t i = 0; i < n; ++i) {
        FeatureVector row(p);
        for (auto& v : row) v = rng.next_unit();
        m.rows.push_back(std::move(row));
        m.targets.push_back(1.0 + 10.0 * rng.next_unit());
    }
    return m;
}

// Self-deleting temp file; content written on construction when non-empty.
class TempFile {
public:
    explicit TempFile(const std::string& content = "", const std::string& suffix = ".csv") {
        static int counter = 0;
        path_ = (std::filesystem::temp_directory_path() /
                 ("printra_test_" + std::to_string(::getpid()) + "_" +
                  std::to_string(counter++) + suffix))
                    .string();
        if (!content.empty()) {
            std::ofstream out(path_);
            out << content;
        }
    }
    ~TempFile() { std::remove(path_.c_str()); }
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

} // namespace printra::test
