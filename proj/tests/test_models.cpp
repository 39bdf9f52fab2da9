#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "printra/builtin_data.hpp"
#include "printra/models.hpp"

#include "test_util.hpp"

using namespace printra;
using test::TempFile;

namespace {

DataMatrix matrix_of(const std::vector<FeatureVector>& rows, const std::vector<double>& y) {
    DataMatrix m;
    for (std::size_t j = 0; j < rows[0].size(); ++j) {
        m.feature_names.push_back("f" + std::to_string(j));
    }
    m.rows = rows;
    m.targets = y;
    return m;
}

// y = 2*x0 + 1 with the other columns noise-free constants.
DataMatrix exact_linear_matrix(std::size_t n = 12) {
    std::vector<FeatureVector> rows;
    std::vector<double> y;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = 0.1 * static_cast<double>(i);
        rows.push_back({x, 5.0, 7.0});
        y.push_back(2.0 * x + 1.0);
    }
    return matrix_of(rows, y);
}

} // namespace

TEST_CASE("zero_r predicts the training mean") {
    DataMatrix m = matrix_of({{0.0}, {1.0}, {2.0}}, {1, 2, 3});
    ZeroRModel z;
    z.fit(m);
    CHECK(z.predict({99.0}) == 2.0);
    CHECK(z.predict({-1.0}) == 2.0);

    ZeroRModel singleton;
    singleton.fit(matrix_of({{0.0}}, {5}));
    CHECK(singleton.predict({0.0}) == 5.0);

    CHECK_THROWS_AS(z.fit(DataMatrix{}), EmptyDatasetError);
}

TEST_CASE("zero_r on the experimental set predicts the grand mean") {
    double sum = 0.0;
    for (const auto& run : experimental_runs()) {
        for (double ra : run.ra) sum += ra;
    }
    const double grand_mean = sum / 128.0;

    auto model = fit_zero_r(build_experimental_dataset());
    CHECK(model->mean() == doctest::Approx(grand_mean).epsilon(1e-12));
}

TEST_CASE("zero_r residuals sum to zero on its own training data") {
    SplitMix64 rng(3);
    const DataMatrix m = test::random_matrix(37, 4, rng);
    ZeroRModel z;
    z.fit(m);
    double sum = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) sum += m.targets[i] - z.predict(m.rows[i]);
    CHECK(sum == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("linear recovers exact coefficients") {
    LinearAicModel lr;
    lr.fit(exact_linear_matrix());
    REQUIRE(lr.selected_features() == std::vector<std::size_t>{0});
    CHECK(lr.coefficients()[0] == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(lr.intercept() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(lr.predict({0.55, 5.0, 7.0}) == doctest::Approx(2.1).epsilon(1e-9));
}

TEST_CASE("linear backward AIC drops a pure-noise column") {
    SplitMix64 rng(21);
    std::vector<FeatureVector> rows;
    std::vector<double> y;
    for (std::size_t i = 0; i < 40; ++i) {
        const double x = rng.next_unit();
        const double noise_col = rng.next_unit();
        rows.push_back({x, noise_col});
        y.push_back(2.0 * x + 0.05 * (rng.next_unit() - 0.5));
    }
    LinearAicModel lr;
    lr.fit(matrix_of(rows, y));
    const auto& sel = lr.selected_features();
    CHECK(std::find(sel.begin(), sel.end(), std::size_t{0}) != sel.end());
    CHECK(std::find(sel.begin(), sel.end(), std::size_t{1}) == sel.end());
}

TEST_CASE("linear solution satisfies the normal equations") {
    SplitMix64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t p = 1 + rng.next_below(5);
        const DataMatrix m = test::random_matrix(p + 5 + rng.next_below(40), p, rng);
        LinearAicModel lr;
        lr.fit(m);
        // gradient of SSE over the selected columns plus intercept
        const auto& sel = lr.selected_features();
        std::vector<double> grad(sel.size() + 1, 0.0);
        for (std::size_t i = 0; i < m.size(); ++i) {
            const double resid = lr.predict(m.rows[i]) - m.targets[i];
            for (std::size_t c = 0; c < sel.size(); ++c) {
                grad[c] += 2.0 * resid * m.rows[i][sel[c]];
            }
            grad[sel.size()] += 2.0 * resid;
        }
        for (double g : grad) CHECK(std::abs(g) < 1e-8);
    }
}

TEST_CASE("linear singularity names the colinear column") {
    std::vector<FeatureVector> rows;
    std::vector<double> y;
    for (std::size_t i = 0; i < 10; ++i) {
        const double x = 0.3 * static_cast<double>(i);
        rows.push_back({x, 2.0 * x});  // f1 duplicates f0
        y.push_back(x + 0.1 * static_cast<double>(i % 3));
    }
    LinearAicModel lr;
    CHECK_THROWS_AS(lr.fit(matrix_of(rows, y)), SingularityError);
}

TEST_CASE("linear requires p+2 samples") {
    LinearAicModel lr;
    CHECK_THROWS_AS(lr.fit(matrix_of({{1, 2, 3}, {2, 3, 4}}, {1, 2})), ParameterError);
}

TEST_CASE("smo_reg fits a constant target with zero duals") {
    DataMatrix m = matrix_of({{0.1}, {0.4}, {0.9}}, {4.2, 4.2, 4.2});
    SmoRegModel svr;
    svr.fit(m);
    CHECK(svr.predict({0.5}) == doctest::Approx(4.2).epsilon(1e-12));
    CHECK(svr.bias() == doctest::Approx(4.2).epsilon(1e-12));
    for (const auto& [up, dn] : svr.alphas()) {
        CHECK(up == 0.0);
        CHECK(dn == 0.0);
    }
}

TEST_CASE("smo_reg tracks exact linear data within the tube") {
    const DataMatrix m = exact_linear_matrix();
    SmoRegModel svr;
    svr.fit(m);
    LinearAicModel lr;
    lr.fit(m);
    // KKT violations up to the stopping tolerance widen the tube by that much
    const double bound = svr.config().epsilon + svr.config().tolerance + 1e-6;
    for (std::size_t i = 0; i < m.size(); ++i) {
        const double pred = svr.predict(m.rows[i]);
        CHECK(std::abs(pred - m.targets[i]) <= bound);
        CHECK(std::abs(pred - lr.predict(m.rows[i])) <= bound);
    }
}

TEST_CASE("smo_reg satisfies KKT, box and complementarity at convergence") {
    SplitMix64 rng(17);
    for (int trial = 0; trial < 25; ++trial) {
        const DataMatrix m = test::random_matrix(3 + rng.next_below(30), 1 + rng.next_below(3),
                                                 rng);
        SvrConfig cfg;
        cfg.complexity = 0.5 + 2.0 * rng.next_unit();
        SmoRegModel svr(cfg);
        svr.fit(m);

        CHECK(svr.converged_kkt_gap() <= cfg.tolerance);
        const auto& alphas = svr.alphas();
        REQUIRE(alphas.size() == m.size());
        const double tol = cfg.tolerance + 1e-9;
        for (std::size_t i = 0; i < m.size(); ++i) {
            const auto [up, dn] = alphas[i];
            CHECK(up >= 0.0);
            CHECK(up <= cfg.complexity);
            CHECK(dn >= 0.0);
            CHECK(dn <= cfg.complexity);
            CHECK(up * dn == 0.0);

            // independent KKT re-check from predictions
            const double under = m.targets[i] - svr.predict(m.rows[i]);  // y - f
            if (up > 0.0) CHECK(under >= cfg.epsilon - tol);
            if (up < cfg.complexity) CHECK(under <= cfg.epsilon + tol);
            if (dn > 0.0) CHECK(-under >= cfg.epsilon - tol);
            if (dn < cfg.complexity) CHECK(-under <= cfg.epsilon + tol);
        }
    }
}

TEST_CASE("smo_reg reports non-convergence with the KKT violation") {
    SplitMix64 rng(23);
    const DataMatrix m = test::random_matrix(40, 3, rng);
    SvrConfig cfg;
    cfg.max_pair_updates = 2;  // force the cap
    SmoRegModel svr(cfg);
    try {
        svr.fit(m);
        FAIL("expected ConvergenceError");
    } catch (const ConvergenceError& e) {
        CHECK(e.max_kkt_violation > cfg.tolerance);
    }
}

TEST_CASE("decision stump") {
    SUBCASE("perfectly separable pair of leaves") {
        DecisionStumpModel stump;
        stump.fit(matrix_of({{0.1}, {0.1}, {0.3}, {0.3}}, {1, 1, 9, 9}));
        REQUIRE(stump.has_split());
        CHECK(stump.split_feature() == 0);
        CHECK(stump.threshold() == doctest::Approx(0.2).epsilon(1e-12));
        CHECK(stump.predict({0.15}) == 1.0);
        CHECK(stump.predict({0.25}) == 9.0);
    }
    SUBCASE("all-constant features degenerate to the mean rule") {
        DecisionStumpModel stump;
        stump.fit(matrix_of({{1.0, 2.0}, {1.0, 2.0}, {1.0, 2.0}}, {1, 2, 6}));
        CHECK_FALSE(stump.has_split());
        CHECK(stump.predict({1.0, 2.0}) == 3.0);
    }
}

TEST_CASE("stump split is globally optimal vs exhaustive oracle") {
    SplitMix64 rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 + rng.next_below(49);
        const std::size_t p = 1 + rng.next_below(4);
        DataMatrix m = test::random_matrix(n, p, rng);
        // quantize some columns to force ties and duplicate values
        for (auto& row : m.rows) {
            for (auto& v : row) {
                if (rng.next_below(2) == 0) v = std::floor(v * 4.0) / 4.0;
            }
        }
        DecisionStumpModel stump;
        stump.fit(m);

        // oracle: enumerate every (feature, midpoint) split and recompute
        // leaf SSE from scratch
        double root_sse = 0.0, mean = 0.0;
        for (double y : m.targets) mean += y;
        mean /= static_cast<double>(n);
        for (double y : m.targets) root_sse += (y - mean) * (y - mean);
        double best_sse = root_sse;
        for (std::size_t j = 0; j < p; ++j) {
            std::vector<double> values;
            for (const auto& r : m.rows) values.push_back(r[j]);
            std::sort(values.begin(), values.end());
            values.erase(std::unique(values.begin(), values.end()), values.end());
            for (std::size_t v = 0; v + 1 < values.size(); ++v) {
                const double thr = values[v] + (values[v + 1] - values[v]) / 2.0;
                double ls = 0.0, rs = 0.0;
                std::size_t ln = 0, rn = 0;
                for (std::size_t i = 0; i < n; ++i) {
                    if (m.rows[i][j] < thr) {
                        ls += m.targets[i];
                        ++ln;
                    } else {
                        rs += m.targets[i];
                        ++rn;
                    }
                }
                double sse = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    const double leaf = m.rows[i][j] < thr ? ls / static_cast<double>(ln)
                                                           : rs / static_cast<double>(rn);
                    sse += (m.targets[i] - leaf) * (m.targets[i] - leaf);
                }
                best_sse = std::min(best_sse, sse);
            }
        }

        double fit_sse = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double e = m.targets[i] - stump.predict(m.rows[i]);
            fit_sse += e * e;
        }
        CHECK(fit_sse == doctest::Approx(best_sse).epsilon(1e-9));
    }
}

TEST_CASE("random forest") {
    SplitMix64 rng(41);

    SUBCASE("single full tree without bootstrap memorizes separable data") {
        DataMatrix m = test::random_matrix(10, 2, rng);
        ForestConfig cfg;
        cfg.n_trees = 1;
        cfg.feature_subset_size = 2;
        cfg.bootstrap = false;
        RandomForestModel rf(cfg);
        rf.fit(m);
        for (std::size_t i = 0; i < m.size(); ++i) {
            CHECK(rf.predict(m.rows[i]) == doctest::Approx(m.targets[i]).epsilon(1e-12));
        }
    }

    SUBCASE("prediction is the mean of the trees") {
        const DataMatrix m = test::random_matrix(30, 3, rng);
        ForestConfig cfg;
        cfg.n_trees = 25;
        RandomForestModel rf(cfg);
        rf.fit(m);
        for (int i = 0; i < 10; ++i) {
            FeatureVector x = {rng.next_unit(), rng.next_unit(), rng.next_unit()};
            const auto per_tree = rf.predict_per_tree(x);
            REQUIRE(per_tree.size() == 25);
            double sum = 0.0;
            for (double v : per_tree) sum += v;
            CHECK(rf.predict(x) == sum / 25.0);
        }
    }

    SUBCASE("seeded determinism is bitwise") {
        const DataMatrix m = test::random_matrix(40, 5, rng);
        ForestConfig cfg;
        cfg.n_trees = 20;
        cfg.seed = 777;
        RandomForestModel a(cfg), b(cfg);
        a.fit(m);
        b.fit(m);
        ForestConfig other = cfg;
        other.seed = 778;
        RandomForestModel c(other);
        c.fit(m);
        bool any_diff = false;
        for (int i = 0; i < 50; ++i) {
            FeatureVector x(5);
            for (auto& v : x) v = rng.next_unit();
            CHECK(a.predict(x) == b.predict(x));
            any_diff = any_diff || a.predict(x) != c.predict(x);
        }
        CHECK(any_diff);
    }

    SUBCASE("config validation") {
        const DataMatrix m = test::random_matrix(10, 3, rng);
        ForestConfig cfg;
        cfg.feature_subset_size = 4;  // > p
        RandomForestModel rf(cfg);
        CHECK_THROWS_AS(rf.fit(m), ParameterError);
    }
}

TEST_CASE("predict lifecycle errors") {
    RandomForestModel rf;
    CHECK_THROWS_AS(rf.predict({1, 2, 3}), StateError);

    SplitMix64 rng(1);
    const DataMatrix m = test::random_matrix(10, 3, rng);
    ZeroRModel z;
    z.fit(m);
    CHECK_THROWS_AS(z.predict({1, 2}), SchemaError);  // arity mismatch
    CHECK_THROWS_AS(z.predict({1, 2, std::numeric_limits<double>::quiet_NaN()}), SchemaError);
}

TEST_CASE("model save/load round-trips predictions exactly") {
    SplitMix64 rng(53);
    const DataMatrix m = test::random_matrix(30, 4, rng);
    const ModelKind kinds[] = {ModelKind::zero_r, ModelKind::linear, ModelKind::smo_reg,
                               ModelKind::decision_stump, ModelKind::random_forest};
    for (ModelKind kind : kinds) {
        ModelSpec spec;
        spec.kind = kind;
        spec.forest.n_trees = 10;
        auto model = make_model(spec);
        model->fit(m);

        TempFile file("", ".json");
        save_model(*model, file.path());
        const auto loaded = load_model(file.path());
        REQUIRE(loaded->kind() == kind);
        for (int i = 0; i < 100; ++i) {
            FeatureVector x(4);
            for (auto& v : x) v = 2.0 * rng.next_unit() - 0.5;
            CAPTURE(to_string(kind));
            CHECK(model->predict(x) == loaded->predict(x));
        }
    }
}

TEST_CASE("model file format errors") {
    SUBCASE("truncated file") {
        TempFile file("{\"magic\": \"printra-model\", \"form", ".json");
        CHECK_THROWS_AS(load_model(file.path()), FormatError);
    }
    SUBCASE("newer format version names both versions") {
        TempFile file(
            "{\"magic\":\"printra-model\",\"format_version\":99,\"kind\":\"zeror\","
            "\"arity\":7,\"config\":{},\"params\":{\"mean\":1.0,\"arity\":7}}",
            ".json");
        CHECK_THROWS_WITH_AS(load_model(file.path()), doctest::Contains("99"), FormatError);
    }
    SUBCASE("not a model file at all") {
        TempFile file("layer_height_mm\n0.2\n", ".json");
        CHECK_THROWS_AS(load_model(file.path()), FormatError);
    }
}
