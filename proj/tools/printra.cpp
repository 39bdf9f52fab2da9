// printra - surface roughness prediction pipeline for material extrusion.
//
// Exit codes: 0 success, 2 I/O error, 3 schema/data error, 4 convergence
// error, 5 parameter error, 1 anything else.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "printra/builtin_data.hpp"
#include "printra/csv.hpp"
#include "printra/eval.hpp"
#include "printra/metrics.hpp"
#include "printra/models.hpp"

namespace fs = std::filesystem;
using namespace printra;

namespace {

constexpr int kExitIo = 2;
constexpr int kExitSchema = 3;
constexpr int kExitConvergence = 4;
constexpr int kExitParameter = 5;

std::string data_dir() {
    const char* env = std::getenv("PRINTRA_DATA_DIR");
    return env != nullptr ? std::string(env) : std::string("data");
}

struct ModelFlags {
    std::string model = "rf";
    std::uint64_t seed = kDefaultSeed;
    std::size_t trees = 100;
    std::size_t feature_subset = 0;
    std::size_t min_leaf = 1;
    bool no_bootstrap = false;
    double svr_c = 1.0;
    double svr_epsilon = 1e-3;
    double svr_tolerance = 1e-3;

    void attach(CLI::App* cmd, bool with_model = true) {
        if (with_model) {
            cmd->add_option("--model", model, "Model: zeror|lr|smoreg|stump|rf")
                ->capture_default_str();
        }
        cmd->add_option("--seed", seed, "Seed for all stochastic steps")->capture_default_str();
        cmd->add_option("--trees", trees, "Forest: number of trees")->capture_default_str();
        cmd->add_option("--feature-subset", feature_subset,
                        "Forest: features tried per node (0 = floor(log2 p)+1)")
            ->capture_default_str();
        cmd->add_option("--min-leaf", min_leaf, "Forest: minimum samples per leaf")
            ->capture_default_str();
        cmd->add_flag("--no-bootstrap", no_bootstrap,
                      "Forest: train each tree on the full sample (testing hook)");
        cmd->add_option("--svr-c", svr_c, "SVR: complexity C")->capture_default_str();
        cmd->add_option("--svr-epsilon", svr_epsilon, "SVR: tube epsilon")
            ->capture_default_str();
        cmd->add_option("--svr-tolerance", svr_tolerance, "SVR: KKT stopping tolerance")
            ->capture_default_str();
    }

    ModelSpec spec() const {
        ModelSpec s;
        s.kind = model_kind_from_string(model);
        s.forest.n_trees = trees;
        s.forest.feature_subset_size = feature_subset;
        s.forest.min_leaf = min_leaf;
        s.forest.seed = seed;
        s.forest.bootstrap = !no_bootstrap;
        s.svr.complexity = svr_c;
        s.svr.epsilon = svr_epsilon;
        s.svr.tolerance = svr_tolerance;
        return s;
    }
};

Dataset load_or_builtin(const std::string& path, Provenance provenance) {
    if (path == "builtin:experimental") {
        return build_experimental_dataset();
    }
    return load_csv(path, provenance).first;
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw IoError("cannot create output directory '" + dir + "': " + ec.message());
    }
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    return out;
}

void print_metrics_table(std::ostream& os, const std::string& format,
                         const std::vector<std::pair<std::string, MetricSet>>& rows) {
    char buf[128];
    if (format == "markdown") {
        os << "| model | correlation | RAE (%) | MAPE (%) |\n|---|---|---|---|\n";
        for (const auto& [name, m] : rows) {
            std::snprintf(buf, sizeof buf, "| %s | %.2f | %.2f | %.2f |\n", name.c_str(),
                          m.correlation, m.rae_pct, m.mape_pct);
            os << buf;
        }
    } else {
        os << "model,correlation,rae_pct,mape_pct\n";
        for (const auto& [name, m] : rows) {
            std::snprintf(buf, sizeof buf, "%s,%.2f,%.2f,%.2f\n", name.c_str(), m.correlation,
                          m.rae_pct, m.mape_pct);
            os << buf;
        }
    }
}

void write_records(const std::string& path, const std::vector<PredictionRecord>& records) {
    auto out = open_out(path);
    out << "sample_index,actual_um,forecast_um\n";
    char buf[128];
    for (const auto& r : records) {
        std::snprintf(buf, sizeof buf, "%zu,%.10g,%.10g\n", r.sample_index, r.actual,
                      r.forecast);
        out << buf;
    }
}

void write_histogram(const std::string& path, const ErrorHistogram& h) {
    auto out = open_out(path);
    char buf[64];
    for (const auto& [edge, count] : h.bins) {
        std::snprintf(buf, sizeof buf, "%.10g %zu\n", edge, count);
        out << buf;
    }
}

void print_ranking(std::ostream& os, const std::string& format,
                   const SignificanceRanking& ranking) {
    char buf[128];
    if (format == "markdown") {
        os << "| printing parameter | significance |\n|---|---|\n";
        for (const auto& e : ranking.entries) {
            std::snprintf(buf, sizeof buf, "| %s | %.4f%s |\n", e.feature.c_str(), e.score,
                          e.constant_feature ? " (constant)" : "");
            os << buf;
        }
    } else {
        os << "feature,score,constant\n";
        for (const auto& e : ranking.entries) {
            std::snprintf(buf, sizeof buf, "%s,%.4f,%d\n", e.feature.c_str(), e.score,
                          e.constant_feature ? 1 : 0);
            os << buf;
        }
    }
}

// --- subcommand bodies ------------------------------------------------

int run_validate(const std::vector<std::string>& paths) {
    bool clean = true;
    for (const auto& path : paths) {
        try {
            const auto [ds, report] = load_csv(path, Provenance::literature);
            std::printf("%s: %zu accepted, %zu rejected\n", path.c_str(), report.accepted_rows,
                        report.rejected_rows.size());
            for (const auto& [line, reason] : report.rejected_rows) {
                std::printf("  line %zu: %s\n", line, reason.c_str());
                clean = false;
            }
        } catch (const EmptyDatasetError& e) {
            std::printf("%s: %s\n", path.c_str(), e.what());
            clean = false;
        }
    }
    return clean ? 0 : kExitSchema;
}

struct EvalArgs {
    std::string train;
    std::string test = "builtin:experimental";
    ModelFlags flags;
    std::size_t k = 10;
    std::string out_dir;
    std::string format = "csv";
    double bin_width = 1.0;
};

void emit_eval_outputs(const EvalArgs& a, const std::string& stem, const CvResult& result) {
    print_metrics_table(std::cout, a.format, {{a.flags.model, result.metrics}});
    if (!a.out_dir.empty()) {
        ensure_dir(a.out_dir);
        const std::string ext = a.format == "markdown" ? ".md" : ".csv";
        auto out = open_out(a.out_dir + "/" + stem + "_metrics" + ext);
        print_metrics_table(out, a.format, {{a.flags.model, result.metrics}});
        write_records(a.out_dir + "/" + stem + "_records.csv", result.records);
        write_histogram(a.out_dir + "/" + stem + "_histogram.txt",
                        error_histogram(result.records, a.bin_width));
    }
}

int run_cv(const EvalArgs& a) {
    const Dataset train = load_or_builtin(a.train, Provenance::literature);
    const CvResult result = cross_validate(train, a.flags.spec(), a.k, a.flags.seed);
    emit_eval_outputs(a, "cv", result);
    return 0;
}

int run_holdout(const EvalArgs& a) {
    const Dataset train = load_or_builtin(a.train, Provenance::literature);
    const Dataset test = load_or_builtin(a.test, Provenance::experimental);
    const CvResult result = holdout_evaluate(train, test, a.flags.spec());
    emit_eval_outputs(a, "holdout", result);
    return 0;
}

int run_rank(const std::string& train_path, const std::string& method, const ModelFlags& flags,
             std::size_t k, const std::string& format) {
    const Dataset train = load_or_builtin(train_path, Provenance::literature);
    SignificanceRanking ranking;
    if (method == "pearson") {
        ranking = rank_by_correlation(train);
    } else if (method == "wrapper") {
        ranking = rank_by_wrapper(train, flags.spec(), flags.seed, k);
    } else {
        throw ParameterError("unknown ranking method '" + method +
                             "' (expected pearson|wrapper)");
    }
    print_ranking(std::cout, format, ranking);
    return 0;
}

int run_fit(const std::string& train_path, const ModelFlags& flags,
            const std::string& out_path) {
    const Dataset train = load_or_builtin(train_path, Provenance::literature);
    auto model = make_model(flags.spec());
    model->fit(train);
    save_model(*model, out_path);
    std::printf("saved %s model to %s\n", to_string(model->kind()), out_path.c_str());
    return 0;
}

int run_predict(const std::string& model_path, const std::string& input_path,
                const std::string& out_path) {
    const auto model = load_model(model_path);
    const auto samples = load_feature_csv(input_path);
    std::ofstream file;
    std::ostream* os = &std::cout;
    if (!out_path.empty()) {
        file = open_out(out_path);
        os = &file;
    }
    *os << "row,ra_pred_um\n";
    char buf[64];
    for (std::size_t i = 0; i < samples.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%zu,%.10g\n", i + 1, model->predict(encode(samples[i])));
        *os << buf;
    }
    return 0;
}

// Grid spec: JSON object mapping every schema feature either to a number or
// to {"min": .., "max": .., "step": ..}.
int run_optimize(const std::string& model_path, const std::string& grid_path) {
    const auto model = load_model(model_path);
    std::ifstream in(grid_path);
    if (!in) {
        throw IoError("cannot open '" + grid_path + "' for reading");
    }
    nlohmann::json grid;
    try {
        in >> grid;
    } catch (const nlohmann::json::exception& e) {
        throw ParameterError("grid spec '" + grid_path + "' is not valid JSON: " + e.what());
    }

    std::vector<std::vector<double>> levels(kFeatureCount);
    for (std::size_t j = 0; j < kFeatureCount; ++j) {
        if (!grid.contains(kFeatureNames[j])) {
            throw ParameterError(std::string("grid spec is missing feature '") +
                                 kFeatureNames[j] + "'");
        }
        const auto& g = grid.at(kFeatureNames[j]);
        if (g.is_number()) {
            levels[j] = {g.get<double>()};
            continue;
        }
        const double lo = g.at("min").get<double>();
        const double hi = g.at("max").get<double>();
        const double step = g.at("step").get<double>();
        if (step <= 0.0 || hi < lo) {
            throw ParameterError(std::string("grid for '") + kFeatureNames[j] +
                                 "' must have step > 0 and max >= min");
        }
        for (double v = lo; v <= hi + step * 1e-9; v += step) levels[j].push_back(v);
    }

    // Exhaustive scan, lexicographic in schema order; strict < keeps the
    // first (lexicographically smallest) argmin on ties.
    FeatureVector point(kFeatureCount), best_point;
    double best_ra = 0.0;
    bool have_best = false;
    std::vector<std::size_t> at(kFeatureCount, 0);
    while (true) {
        for (std::size_t j = 0; j < kFeatureCount; ++j) point[j] = levels[j][at[j]];
        PrintSample s;
        s.layer_height = point[0];
        s.printing_speed = point[1];
        s.printing_temperature = point[2];
        s.wall_thickness = point[3];
        s.infill_density = point[4];
        s.nozzle_diameter = point[5];
        s.shape = static_cast<int>(point[6]);
        const double ra = model->predict(encode(s));
        if (!have_best || ra < best_ra) {
            best_ra = ra;
            best_point = point;
            have_best = true;
        }
        std::size_t j = kFeatureCount;
        while (j-- > 0) {
            if (++at[j] < levels[j].size()) break;
            at[j] = 0;
            if (j == 0) {
                char buf[64];
                std::printf("feature,value\n");
                for (std::size_t d = 0; d < kFeatureCount; ++d) {
                    std::snprintf(buf, sizeof buf, "%s,%.10g\n", kFeatureNames[d],
                                  best_point[d]);
                    std::fputs(buf, stdout);
                }
                std::printf("predicted_ra_um,%.10g\n", best_ra);
                return 0;
            }
        }
    }
}

int run_reproduce(const std::string& train_path, const ModelFlags& flags,
                  const std::string& out_dir, const std::string& format, double bin_width) {
    const Dataset literature = load_or_builtin(train_path, Provenance::literature);
    const Dataset experimental = build_experimental_dataset();
    ensure_dir(out_dir);
    const std::string ext = format == "markdown" ? ".md" : ".csv";

    const auto pearson_ranking = rank_by_correlation(literature);
    {
        auto out = open_out(out_dir + "/feature_correlations" + ext);
        print_ranking(out, format, pearson_ranking);
    }
    ModelFlags rf_flags = flags;
    rf_flags.model = "rf";
    const auto wrapper_ranking = rank_by_wrapper(literature, rf_flags.spec(), flags.seed);
    {
        auto out = open_out(out_dir + "/feature_significance" + ext);
        print_ranking(out, format, wrapper_ranking);
    }

    const std::vector<std::string> model_names = {"zeror", "lr", "smoreg", "stump", "rf"};
    std::vector<std::pair<std::string, MetricSet>> cv_rows, holdout_rows;
    for (const auto& name : model_names) {
        ModelFlags f = flags;
        f.model = name;
        const auto cv = cross_validate(literature, f.spec(), 10, flags.seed);
        cv_rows.emplace_back(name, cv.metrics);
        const auto ho = holdout_evaluate(literature, experimental, f.spec());
        holdout_rows.emplace_back(name, ho.metrics);
        if (name == "rf") {
            write_histogram(out_dir + "/cv_error_histogram.txt",
                            error_histogram(cv.records, bin_width));
            write_histogram(out_dir + "/holdout_error_histogram.txt",
                            error_histogram(ho.records, bin_width));
            write_records(out_dir + "/cv_records.csv", cv.records);
            write_records(out_dir + "/holdout_records.csv", ho.records);
        }
    }
    {
        auto out = open_out(out_dir + "/cv_metrics" + ext);
        print_metrics_table(out, format, cv_rows);
    }
    {
        auto out = open_out(out_dir + "/holdout_metrics" + ext);
        print_metrics_table(out, format, holdout_rows);
    }

    std::cout << "== feature correlations (literature) ==\n";
    print_ranking(std::cout, format, pearson_ranking);
    std::cout << "== wrapper significance (literature, rf) ==\n";
    print_ranking(std::cout, format, wrapper_ranking);
    std::cout << "== 10-fold cross-validation (literature) ==\n";
    print_metrics_table(std::cout, format, cv_rows);
    std::cout << "== holdout (train literature, test experimental) ==\n";
    print_metrics_table(std::cout, format, holdout_rows);
    std::cout << "report written to " << out_dir << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "printra - predicts surface roughness (Ra) of material-extrusion printed parts\n"
        "Exit codes: 0 ok, 2 I/O, 3 schema/data, 4 convergence, 5 parameter."};
    app.require_subcommand(1);
    app.set_config("--config", "", "Read defaults from an INI/TOML file (flags win)");
    app.get_config_formatter_base()->section("printra");

    const std::string default_train = data_dir() + "/literature.csv";
    const std::string default_test = "builtin:experimental";

    auto* validate = app.add_subcommand("validate", "Validate CSV datasets, list rejects");
    std::vector<std::string> validate_paths;
    validate->add_option("paths", validate_paths, "CSV files to validate")->required();

    EvalArgs cv_args;
    cv_args.train = default_train;
    auto* cv = app.add_subcommand("cv", "k-fold cross-validation on a training CSV");
    cv->add_option("--train", cv_args.train, "Training CSV")->capture_default_str();
    cv->add_option("--k", cv_args.k, "Fold count")->capture_default_str();
    cv->add_option("--out", cv_args.out_dir, "Directory for metrics/records/histogram files");
    cv->add_option("--format", cv_args.format, "Report format: csv|markdown")
        ->capture_default_str();
    cv->add_option("--bin-width", cv_args.bin_width, "Histogram bin width (um)")
        ->capture_default_str();
    cv_args.flags.attach(cv);

    EvalArgs ho_args;
    ho_args.train = default_train;
    auto* holdout = app.add_subcommand("holdout", "Train on one dataset, test on another");
    holdout->add_option("--train", ho_args.train, "Training CSV")->capture_default_str();
    holdout->add_option("--test", ho_args.test,
                        "Test CSV ('builtin:experimental' = bundled 128-row set)")
        ->capture_default_str();
    holdout->add_option("--out", ho_args.out_dir, "Directory for output files");
    holdout->add_option("--format", ho_args.format, "Report format: csv|markdown")
        ->capture_default_str();
    holdout->add_option("--bin-width", ho_args.bin_width, "Histogram bin width (um)")
        ->capture_default_str();
    ho_args.flags.attach(holdout);

    auto* rank = app.add_subcommand("rank", "Feature significance ranking");
    std::string rank_train = default_train, rank_method = "pearson", rank_format = "csv";
    std::size_t rank_k = 10;
    ModelFlags rank_flags;
    rank->add_option("--train", rank_train, "Training CSV")->capture_default_str();
    rank->add_option("--method", rank_method, "pearson|wrapper")->capture_default_str();
    rank->add_option("--k", rank_k, "CV folds for the wrapper method")->capture_default_str();
    rank->add_option("--format", rank_format, "csv|markdown")->capture_default_str();
    rank_flags.attach(rank);

    auto* fit = app.add_subcommand("fit", "Fit a model and save it to a model file");
    std::string fit_train = default_train, fit_out = "model.json";
    ModelFlags fit_flags;
    fit->add_option("--train", fit_train, "Training CSV")->capture_default_str();
    fit->add_option("--out", fit_out, "Model file path")->capture_default_str();
    fit_flags.attach(fit);

    auto* predict = app.add_subcommand("predict", "Predict Ra for a feature CSV (no ra_um)");
    std::string predict_model, predict_input, predict_out;
    predict->add_option("--model-file", predict_model, "Saved model file")->required();
    predict->add_option("--input", predict_input, "Feature CSV")->required();
    predict->add_option("--out", predict_out, "Output CSV (default stdout)");

    auto* optimize = app.add_subcommand(
        "optimize", "Search a parameter grid for the lowest predicted Ra");
    std::string optimize_model, optimize_grid;
    optimize->add_option("--model-file", optimize_model, "Saved model file")->required();
    optimize->add_option("--grid", optimize_grid,
                         "JSON grid spec: each feature is a number or {min,max,step}")
        ->required();

    auto* reproduce = app.add_subcommand(
        "reproduce", "Full pipeline: correlations, significance, CV and holdout tables");
    std::string rep_train = default_train, rep_out = "report", rep_format = "markdown";
    double rep_bin_width = 1.0;
    ModelFlags rep_flags;
    reproduce->add_option("--train", rep_train, "Literature training CSV")
        ->capture_default_str();
    reproduce->add_option("--out", rep_out, "Report directory")->capture_default_str();
    reproduce->add_option("--format", rep_format, "csv|markdown")->capture_default_str();
    reproduce->add_option("--bin-width", rep_bin_width, "Histogram bin width (um)")
        ->capture_default_str();
    rep_flags.attach(reproduce, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate->parsed()) return run_validate(validate_paths);
        if (cv->parsed()) return run_cv(cv_args);
        if (holdout->parsed()) return run_holdout(ho_args);
        if (rank->parsed()) return run_rank(rank_train, rank_method, rank_flags, rank_k,
                                            rank_format);
        if (fit->parsed()) return run_fit(fit_train, fit_flags, fit_out);
        if (predict->parsed()) return run_predict(predict_model, predict_input, predict_out);
        if (optimize->parsed()) return run_optimize(optimize_model, optimize_grid);
        if (reproduce->parsed())
            return run_reproduce(rep_train, rep_flags, rep_out, rep_format, rep_bin_width);
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return kExitIo;
    } catch (const ConvergenceError& e) {
        std::cerr << "convergence error: " << e.what() << "\n";
        return kExitConvergence;
    } catch (const ParameterError& e) {
        std::cerr << "parameter error: " << e.what() << "\n";
        return kExitParameter;
    } catch (const Error& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitSchema;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
