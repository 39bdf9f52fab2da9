#include "printra/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace printra {

namespace {

// The epsilon-insensitive dual is solved in its 2n-variable box form: index
// t < n is alpha_i (sign +1), t >= n is alpha*_i (sign -1), all in [0, C]
// with sum_i (alpha_i - alpha*_i) = 0. Pairs are picked by maximal KKT
// violation; the stopping gap is the reported violation measure.
struct Solver {
    const std::vector<FeatureVector>& x;
    const std::vector<double>& y;
    const SvrConfig& cfg;

    std::size_t n;
    std::vector<double> kernel;  // n x n, row-major
    std::vector<double> lambda;  // 2n
    std::vector<double> beta;    // alpha - alpha*, per row
    std::vector<double> fx;      // sum_j beta_j K(j, i), per row
    double gap = 0.0;
    double bias = 0.0;

    double k_at(std::size_t a, std::size_t b) const { return kernel[a * n + b]; }
    int sign(std::size_t t) const { return t < n ? 1 : -1; }
    std::size_t row(std::size_t t) const { return t < n ? t : t - n; }

    // G_t = -z_t * grad_t; KKT asks G to be equal across I_up and I_low.
    double g_of(std::size_t t) const {
        const std::size_t i = row(t);
        return t < n ? y[i] - cfg.epsilon - fx[i] : y[i] + cfg.epsilon - fx[i];
    }
    bool in_up(std::size_t t) const {
        return sign(t) > 0 ? lambda[t] < cfg.complexity : lambda[t] > 0.0;
    }
    bool in_low(std::size_t t) const {
        return sign(t) > 0 ? lambda[t] > 0.0 : lambda[t] < cfg.complexity;
    }

    void solve() {
        n = x.size();
        kernel.resize(n * n);
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = a; b < n; ++b) {
                double dot = 0.0;
                for (std::size_t d = 0; d < x[a].size(); ++d) dot += x[a][d] * x[b][d];
                kernel[a * n + b] = kernel[b * n + a] = dot;
            }
        }
        lambda.assign(2 * n, 0.0);
        beta.assign(n, 0.0);
        fx.assign(n, 0.0);

        std::size_t updates = 0;
        while (true) {
            double g_up = -std::numeric_limits<double>::infinity();
            double g_low = std::numeric_limits<double>::infinity();
            std::size_t ti = 0, tj = 0;
            for (std::size_t t = 0; t < 2 * n; ++t) {
                const double g = g_of(t);
                if (in_up(t) && g > g_up) {
                    g_up = g;
                    ti = t;
                }
                if (in_low(t) && g < g_low) {
                    g_low = g;
                    tj = t;
                }
            }
            gap = g_up - g_low;
            if (gap <= cfg.tolerance) {
                bias = compute_bias(g_up, g_low);
                return;
            }
            if (++updates > cfg.max_pair_updates) {
                throw ConvergenceError(
                    "SMO did not converge within " + std::to_string(cfg.max_pair_updates) +
                        " pair updates (max KKT violation " + std::to_string(gap) + ")",
                    gap);
            }
            take_step(ti, tj, g_up - g_low);
        }
    }

    // Joint move along z_i*t on lambda_i and -z_j*t on lambda_j keeps the
    // equality constraint; both moves add +t / -t to the rows' betas.
    void take_step(std::size_t ti, std::size_t tj, double g_diff) {
        const std::size_t ri = row(ti), rj = row(tj);
        double eta = k_at(ri, ri) + k_at(rj, rj) - 2.0 * k_at(ri, rj);
        if (eta <= 1e-12) eta = 1e-12;
        double step = g_diff / eta;

        const auto hi_room = [&](std::size_t t, int dir) {
            // room for lambda_t to move by dir*step while staying in [0, C]
            return dir > 0 ? cfg.complexity - lambda[t] : lambda[t];
        };
        // lambda_i moves by +z_i*step relative to g-increase direction:
        // d lambda_i = z_i * step, d lambda_j = -z_j * step, step >= 0
        step = std::min(step, hi_room(ti, sign(ti)));
        step = std::min(step, hi_room(tj, -sign(tj)));
        if (step <= 0.0) return;  // pinned by the box; selection will move on

        lambda[ti] += sign(ti) > 0 ? step : -step;
        lambda[tj] -= sign(tj) > 0 ? step : -step;
        beta[ri] += step;
        beta[rj] -= step;
        for (std::size_t m = 0; m < n; ++m) {
            fx[m] += step * (k_at(ri, m) - k_at(rj, m));
        }
    }

    double compute_bias(double g_up, double g_low) const {
        double sum = 0.0;
        std::size_t free_count = 0;
        for (std::size_t t = 0; t < 2 * n; ++t) {
            if (lambda[t] > 0.0 && lambda[t] < cfg.complexity) {
                sum += g_of(t);
                ++free_count;
            }
        }
        return free_count > 0 ? sum / static_cast<double>(free_count) : (g_up + g_low) / 2.0;
    }
};

} // namespace

void SmoRegModel::fit(const DataMatrix& train) {
    require_trainable(train);
    if (cfg_.complexity <= 0.0 || cfg_.epsilon < 0.0 || cfg_.tolerance <= 0.0) {
        throw ParameterError("svr config: requires C > 0, epsilon >= 0, tolerance > 0");
    }
    const std::size_t p = train.arity();
    feat_min_.assign(p, 0.0);
    feat_range_.assign(p, 0.0);
    for (std::size_t j = 0; j < p; ++j) {
        double lo = train.rows[0][j], hi = lo;
        for (const auto& r : train.rows) {
            lo = std::min(lo, r[j]);
            hi = std::max(hi, r[j]);
        }
        feat_min_[j] = lo;
        feat_range_[j] = hi - lo;
    }
    train_x_.clear();
    train_x_.reserve(train.size());
    arity_ = p;  // normalize() needs the arity before mark_fitted
    for (const auto& r : train.rows) train_x_.push_back(normalize(r));

    Solver solver{train_x_, train.targets, cfg_, 0, {}, {}, {}, {}};
    solver.solve();

    beta_ = solver.beta;
    bias_ = solver.bias;
    kkt_gap_ = solver.gap;
    alphas_.resize(train.size());
    for (std::size_t i = 0; i < train.size(); ++i) {
        double up = solver.lambda[i];
        double dn = solver.lambda[train.size() + i];
        // complementarity cleanup: shrinking both alphas by their common
        // part leaves beta and the equality constraint untouched
        const double common = std::min(up, dn);
        up -= common;
        dn -= common;
        alphas_[i] = {up, dn};
        beta_[i] = up - dn;
    }
    mark_fitted(p);
}

FeatureVector SmoRegModel::normalize(const FeatureVector& x) const {
    FeatureVector out(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
        out[j] = feat_range_[j] > 0.0 ? (x[j] - feat_min_[j]) / feat_range_[j] : 0.0;
    }
    return out;
}

double SmoRegModel::do_predict(const FeatureVector& x) const {
    const FeatureVector z = normalize(x);
    double f = bias_;
    for (std::size_t i = 0; i < train_x_.size(); ++i) {
        if (beta_[i] == 0.0) continue;
        double dot = 0.0;
        for (std::size_t d = 0; d < z.size(); ++d) dot += train_x_[i][d] * z[d];
        f += beta_[i] * dot;
    }
    return f;
}

nlohmann::json SmoRegModel::describe() const {
    return nlohmann::json{{"kind", "smoreg"},       {"kernel", "linear"},
                          {"C", cfg_.complexity},   {"epsilon", cfg_.epsilon},
                          {"tolerance", cfg_.tolerance},
                          {"normalization", "min-max"}};
}

void SmoRegModel::save_params(nlohmann::json& out) const {
    out["C"] = cfg_.complexity;
    out["epsilon"] = cfg_.epsilon;
    out["tolerance"] = cfg_.tolerance;
    out["bias"] = bias_;
    out["kkt_gap"] = kkt_gap_;
    out["feat_min"] = feat_min_;
    out["feat_range"] = feat_range_;
    // only support vectors matter for prediction
    nlohmann::json sv = nlohmann::json::array();
    for (std::size_t i = 0; i < train_x_.size(); ++i) {
        if (beta_[i] == 0.0) continue;
        sv.push_back({{"beta", beta_[i]}, {"x", train_x_[i]}});
    }
    out["support"] = std::move(sv);
}

void SmoRegModel::load_params(const nlohmann::json& in) {
    cfg_.complexity = in.at("C").get<double>();
    cfg_.epsilon = in.at("epsilon").get<double>();
    cfg_.tolerance = in.at("tolerance").get<double>();
    bias_ = in.at("bias").get<double>();
    kkt_gap_ = in.at("kkt_gap").get<double>();
    feat_min_ = in.at("feat_min").get<std::vector<double>>();
    feat_range_ = in.at("feat_range").get<std::vector<double>>();
    train_x_.clear();
    beta_.clear();
    alphas_.clear();
    for (const auto& sv : in.at("support")) {
        beta_.push_back(sv.at("beta").get<double>());
        train_x_.push_back(sv.at("x").get<FeatureVector>());
    }
    mark_fitted(in.at("arity").get<std::size_t>());
}

} // namespace printra
