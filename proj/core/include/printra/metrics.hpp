#pragma once

#include <vector>

#include "printra/types.hpp"

namespace printra {

struct MetricSet {
    double correlation = 0.0;  // Pearson; 0 for constant forecasts
    double rae_pct = 0.0;
    double mape_pct = 0.0;
};

// Relative absolute error: total |forecast - actual| normalized by the total
// absolute deviation of actuals from their mean, in percent. A mean-rule
// forecast scores exactly 100.
double rae(const std::vector<PredictionRecord>& records);

// Mean absolute percentage error.
double mape(const std::vector<PredictionRecord>& records);

// Pearson correlation of forecasts vs actuals. Constant forecasts score 0;
// constant actuals are a degenerate-target error.
double correlation(const std::vector<PredictionRecord>& records);

MetricSet evaluate(const std::vector<PredictionRecord>& records);

} // namespace printra
