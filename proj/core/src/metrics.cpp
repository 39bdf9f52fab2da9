#include "printra/metrics.hpp"

#include <cmath>

namespace printra {

namespace {

double actual_mean(const std::vector<PredictionRecord>& records) {
    double sum = 0.0;
    for (const auto& r : records) sum += r.actual;
    return sum / static_cast<double>(records.size());
}

} // namespace

double rae(const std::vector<PredictionRecord>& records) {
    if (records.size() < 2) {
        throw ParameterError("rae: needs at least 2 records");
    }
    const double mean = actual_mean(records);
    double num = 0.0, den = 0.0;
    for (const auto& r : records) {
        num += std::abs(r.forecast - r.actual);
        den += std::abs(mean - r.actual);
    }
    if (den == 0.0) {
        throw DegenerateTargetError("rae: all actual values equal, denominator is zero");
    }
    return 100.0 * num / den;
}

double mape(const std::vector<PredictionRecord>& records) {
    if (records.empty()) {
        throw ParameterError("mape: needs at least 1 record");
    }
    double sum = 0.0;
    for (const auto& r : records) {
        if (r.actual == 0.0) {
            throw DegenerateTargetError("mape: actual value is zero");
        }
        sum += std::abs((r.forecast - r.actual) / r.actual);
    }
    return 100.0 * sum / static_cast<double>(records.size());
}

double correlation(const std::vector<PredictionRecord>& records) {
    if (records.size() < 2) {
        throw ParameterError("correlation: needs at least 2 records");
    }
    const double n = static_cast<double>(records.size());
    double fm = 0.0, am = 0.0;
    for (const auto& r : records) {
        fm += r.forecast;
        am += r.actual;
    }
    fm /= n;
    am /= n;
    double sff = 0.0, saa = 0.0, sfa = 0.0;
    for (const auto& r : records) {
        const double df = r.forecast - fm;
        const double da = r.actual - am;
        sff += df * df;
        saa += da * da;
        sfa += df * da;
    }
    if (saa == 0.0) {
        throw DegenerateTargetError("correlation: actual values have zero variance");
    }
    if (sff == 0.0) {
        return 0.0;  // constant forecast, pinned to 0
    }
    return sfa / std::sqrt(sff * saa);
}

MetricSet evaluate(const std::vector<PredictionRecord>& records) {
    return MetricSet{correlation(records), rae(records), mape(records)};
}

} // namespace printra
