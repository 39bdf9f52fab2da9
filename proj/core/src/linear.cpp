#include "printra/models.hpp"

#include <algorithm>
#include <cmath>

namespace printra {

namespace {

struct LsFit {
    std::vector<double> coef;  // per column in `cols`
    double intercept = 0.0;
    double sse = 0.0;
};

// Least squares over the listed columns plus an intercept, via the normal
// equations with partially pivoted Gaussian elimination.
LsFit solve_least_squares(const DataMatrix& train, const std::vector<std::size_t>& cols) {
    const std::size_t n = train.size();
    const std::size_t k = cols.size();
    const std::size_t dim = k + 1;  // intercept last

    std::vector<std::vector<double>> a(dim, std::vector<double>(dim, 0.0));
    std::vector<double> rhs(dim, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
        const auto& row = train.rows[r];
        const double y = train.targets[r];
        for (std::size_t i = 0; i < dim; ++i) {
            const double xi = i < k ? row[cols[i]] : 1.0;
            for (std::size_t j = i; j < dim; ++j) {
                const double xj = j < k ? row[cols[j]] : 1.0;
                a[i][j] += xi * xj;
            }
            rhs[i] += xi * y;
        }
    }
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < i; ++j) a[i][j] = a[j][i];
    }

    double scale = 0.0;
    for (std::size_t i = 0; i < dim; ++i) scale = std::max(scale, std::abs(a[i][i]));

    for (std::size_t step = 0; step < dim; ++step) {
        std::size_t pivot = step;
        for (std::size_t r = step + 1; r < dim; ++r) {
            if (std::abs(a[r][step]) > std::abs(a[pivot][step])) pivot = r;
        }
        if (std::abs(a[pivot][step]) <= 1e-12 * scale) {
            const std::string col =
                step < k ? train.feature_names[cols[step]] : std::string("intercept");
            throw SingularityError("normal equations are singular; column '" + col +
                                   "' is colinear with the others");
        }
        std::swap(a[step], a[pivot]);
        std::swap(rhs[step], rhs[pivot]);
        for (std::size_t r = step + 1; r < dim; ++r) {
            const double f = a[r][step] / a[step][step];
            if (f == 0.0) continue;
            for (std::size_t c = step; c < dim; ++c) a[r][c] -= f * a[step][c];
            rhs[r] -= f * rhs[step];
        }
    }

    std::vector<double> w(dim, 0.0);
    for (std::size_t i = dim; i-- > 0;) {
        double v = rhs[i];
        for (std::size_t j = i + 1; j < dim; ++j) v -= a[i][j] * w[j];
        w[i] = v / a[i][i];
    }

    LsFit fit;
    fit.coef.assign(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(k));
    fit.intercept = w[k];
    for (std::size_t r = 0; r < n; ++r) {
        double pred = fit.intercept;
        for (std::size_t i = 0; i < k; ++i) pred += fit.coef[i] * train.rows[r][cols[i]];
        const double e = pred - train.targets[r];
        fit.sse += e * e;
    }
    return fit;
}

// AIC = n ln(SSE/n) + 2k, k = retained attributes + intercept.
double aic_of(double sse, std::size_t n, std::size_t retained) {
    const double floor_sse = std::max(sse, 1e-300);
    return static_cast<double>(n) * std::log(floor_sse / static_cast<double>(n)) +
           2.0 * static_cast<double>(retained + 1);
}

} // namespace

void LinearAicModel::fit(const DataMatrix& train) {
    require_trainable(train);
    const std::size_t n = train.size();
    const std::size_t p = train.arity();
    if (n < p + 2) {
        throw ParameterError("linear fit needs at least p+2 = " + std::to_string(p + 2) +
                             " samples, got " + std::to_string(n));
    }

    // Constant columns are colinear with the intercept; they can never be
    // selected, so start the backward pass without them.
    std::vector<std::size_t> current;
    for (std::size_t j = 0; j < p; ++j) {
        double lo = train.rows[0][j], hi = lo;
        for (const auto& r : train.rows) {
            lo = std::min(lo, r[j]);
            hi = std::max(hi, r[j]);
        }
        if (hi > lo) current.push_back(j);
    }

    LsFit fit = solve_least_squares(train, current);
    double best_aic = aic_of(fit.sse, n, current.size());

    // Greedy backward elimination on AIC.
    while (!current.empty()) {
        std::size_t drop = current.size();  // sentinel: nothing improves
        LsFit drop_fit;
        for (std::size_t i = 0; i < current.size(); ++i) {
            std::vector<std::size_t> trial = current;
            trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(i));
            LsFit tf = solve_least_squares(train, trial);
            const double trial_aic = aic_of(tf.sse, n, trial.size());
            if (trial_aic < best_aic) {
                best_aic = trial_aic;
                drop = i;
                drop_fit = std::move(tf);
            }
        }
        if (drop == current.size()) break;
        current.erase(current.begin() + static_cast<std::ptrdiff_t>(drop));
        fit = std::move(drop_fit);
    }

    selected_ = std::move(current);
    coef_ = std::move(fit.coef);
    intercept_ = fit.intercept;
    aic_ = best_aic;
    mark_fitted(p);
}

double LinearAicModel::do_predict(const FeatureVector& x) const {
    double v = intercept_;
    for (std::size_t i = 0; i < selected_.size(); ++i) v += coef_[i] * x[selected_[i]];
    return v;
}

nlohmann::json LinearAicModel::describe() const {
    return nlohmann::json{{"kind", "lr"}, {"selection", "backward-aic"}};
}

void LinearAicModel::save_params(nlohmann::json& out) const {
    out["selected"] = selected_;
    out["coef"] = coef_;
    out["intercept"] = intercept_;
    out["aic"] = aic_;
}

void LinearAicModel::load_params(const nlohmann::json& in) {
    selected_ = in.at("selected").get<std::vector<std::size_t>>();
    coef_ = in.at("coef").get<std::vector<double>>();
    intercept_ = in.at("intercept").get<double>();
    aic_ = in.at("aic").get<double>();
    if (coef_.size() != selected_.size()) {
        throw FormatError("linear model parameters are inconsistent");
    }
    mark_fitted(in.at("arity").get<std::size_t>());
}

} // namespace printra
