// malc: train and evaluate linear competitors that defer to a black-box.

#include "malc/blackbox.hpp"
#include "malc/data.hpp"
#include "malc/frontier.hpp"
#include "malc/gradcheck.hpp"
#include "malc/loss.hpp"
#include "malc/model.hpp"
#include "malc/optimizer.hpp"
#include "malc/synth.hpp"
#include "malc/text_io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace fs = std::filesystem;
using namespace malc;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

struct DataFlags {
    std::string data;
    std::string format = "csv";
    std::string label_column;
    std::string bb;
    std::string bb_provenance = "unspecified";
};

struct FitFlags {
    double c1 = 0.1;
    double c2 = 0.05;
    std::string phi = "smooth_hinge";
    bool scale = false;
    bool bias = false;
    bool penalize_bias = false;
    int max_iters = 10000;
    double rel_tol = 1e-3;
    int tol_window = 5;
    double lipschitz = 1.0;
    bool no_restart = false;
};

struct Options {
    std::uint64_t seed = 0;
    int verbosity = 0;

    DataFlags data;
    FitFlags fit;

    // synth
    int blobs = 3;
    long long n = 3000;
    long long d = 2;
    double separation = 4.0;
    std::string out;
    std::string labels_out;
    std::string out_format = "csv";

    // blackbox
    std::string bb_kind = "oracle";
    double error_rate = 0.1;
    long long knn_k = 5;
    std::string query;

    // train
    std::string model_out;
    std::string metrics_out;
    std::string trace;
    bool theta_max_init = false;
    bool strict = false;

    // predict / evaluate
    std::string model;

    // frontier
    std::vector<double> c1_values;
    std::vector<double> c2_values;
    double c1_min = 0.005, c1_max = 0.95;
    int c1_count = 12;
    double c2_min = 0.03, c2_max = 0.25;
    int c2_count = 4;
    std::string spacing = "log";
    int jobs = 1;
    double holdout = 0.2;
    bool stratified = false;
    bool warm_start = false;
    std::string models_dir;
    std::string eval_data;
    std::string eval_bb;

    // gradcheck
    int instances = 100;
};

void add_data_flags(CLI::App* cmd, DataFlags& f, bool bb_required) {
    cmd->add_option("--data", f.data, "Dataset file")->required()->check(CLI::ExistingFile);
    cmd->add_option("--format", f.format, "Dataset format")->check(CLI::IsMember({"csv", "svmlight", "libsvm"}));
    cmd->add_option("--label-column", f.label_column, "CSV label column (name or 0-based index; default last)");
    auto* bb = cmd->add_option("--bb", f.bb, "Black-box prediction file (one label per line)");
    if (bb_required) bb->required();
    cmd->add_option("--bb-provenance", f.bb_provenance,
                    "How the black-box predictions were produced (recorded in metadata)");
}

void add_fit_flags(CLI::App* cmd, FitFlags& f, bool with_weights = true) {
    if (with_weights) {
        cmd->add_option("--c1", f.c1, "Weight on the threshold sum")->check(CLI::NonNegativeNumber);
        cmd->add_option("--c2", f.c2, "Weight on the L1 norm of w")->check(CLI::NonNegativeNumber);
    }
    cmd->add_option("--phi", f.phi, "Margin loss")->check(CLI::IsMember({"hinge", "smooth_hinge", "logistic"}));
    cmd->add_flag("--scale", f.scale, "Min-max scale features to [0,1] using training data");
    cmd->add_flag("--bias", f.bias, "Append a constant-1 intercept feature");
    cmd->add_flag("--penalize-bias", f.penalize_bias, "Include the intercept in the L1 penalty");
    cmd->add_option("--max-iters", f.max_iters, "Iteration cap")->check(CLI::PositiveNumber);
    cmd->add_option("--rel-tol", f.rel_tol, "Relative objective change threshold")->check(CLI::Range(1e-16, 0.999999));
    cmd->add_option("--tol-window", f.tol_window, "Consecutive iterations under --rel-tol")->check(CLI::PositiveNumber);
    cmd->add_option("--lipschitz", f.lipschitz, "Initial Lipschitz estimate")->check(CLI::PositiveNumber);
    cmd->add_flag("--no-restart", f.no_restart, "Disable adaptive momentum restart");
}

struct LoadedData {
    Dataset ds;
    BlackboxPredictions bb;
    bool has_bb = false;
    std::string data_hash;
    std::string bb_hash;
};

LoadedData load_inputs(const DataFlags& f, Index min_dims = 0) {
    LoadedData out;
    LoadOptions opts;
    opts.format = parse_data_format(f.format);
    opts.label_column = f.label_column;
    opts.min_dims = min_dims;
    out.ds = load_dataset(f.data, opts);
    out.data_hash = file_hash(f.data);
    if (!f.bb.empty()) {
        out.bb = load_blackbox_predictions(f.bb, out.ds.rows());
        out.bb_hash = file_hash(f.bb);
        out.has_bb = true;
        reconcile_num_classes(out.ds, out.bb);
    }
    return out;
}

ObjectiveConfig objective_from(const FitFlags& f) {
    ObjectiveConfig cfg;
    cfg.c1 = f.c1;
    cfg.c2 = f.c2;
    cfg.phi = parse_phi(f.phi);
    cfg.penalize_bias = f.penalize_bias;
    return cfg;
}

SolverConfig solver_from(const FitFlags& f, std::uint64_t seed) {
    SolverConfig s;
    s.max_iters = f.max_iters;
    s.rel_tol = f.rel_tol;
    s.tol_window = f.tol_window;
    s.initial_lipschitz_guess = f.lipschitz;
    s.restart = !f.no_restart;
    s.seed = seed;
    return s;
}

/// Scaling then intercept, in that order; mirrored by prepare_features at predict time.
std::optional<ScalingParams> preprocess(Dataset& ds, const FitFlags& f) {
    std::optional<ScalingParams> scaling;
    if (f.scale) {
        auto [scaled, params] = minmax_scale(ds);
        ds = std::move(scaled);
        scaling = std::move(params);
    }
    if (f.bias) ds = append_bias(ds);
    return scaling;
}

std::string source_name(Source s) { return s == Source::agent ? "agent" : "blackbox"; }

void print_metrics(const Metrics& m) {
    std::cout << "accuracy:             " << format_double(m.accuracy) << '\n'
              << "transparency:         " << format_double(m.transparency) << '\n'
              << "accuracy_on_claimed:  " << format_double(m.accuracy_on_claimed) << '\n'
              << "accuracy_on_deferred: " << format_double(m.accuracy_on_deferred) << '\n'
              << "avg_nonzeros:         " << format_double(m.avg_nonzeros) << '\n';
}

nlohmann::json metrics_json(const Metrics& m) {
    std::vector<double> claim(m.per_class_claim_rate.data(), m.per_class_claim_rate.data() + m.per_class_claim_rate.size());
    return {{"accuracy", m.accuracy},
            {"transparency", m.transparency},
            {"accuracy_on_claimed", m.accuracy_on_claimed},
            {"accuracy_on_deferred", m.accuracy_on_deferred},
            {"avg_nonzeros", m.avg_nonzeros},
            {"per_class_claim_rate", claim},
            {"rows", m.rows},
            {"claimed", m.claimed}};
}

int cmd_synth(const Options& o) {
    BlobConfig cfg;
    cfg.blobs = o.blobs;
    cfg.n = o.n;
    cfg.d = o.d;
    cfg.separation = o.separation;
    cfg.seed = o.seed;
    const Dataset ds = make_blobs(cfg);
    if (o.out_format == "csv")
        save_dataset_csv(ds, o.out);
    else
        save_dataset_svmlight(ds, o.out);
    if (!o.labels_out.empty()) save_blackbox_predictions(BlackboxPredictions{ds.labels}, o.labels_out);
    std::cout << "wrote " << ds.rows() << " rows, d=" << ds.dims() << ", K=" << ds.num_classes << " to " << o.out << '\n';
    return kExitOk;
}

int cmd_blackbox(const Options& o) {
    DataFlags f = o.data;
    f.bb.clear();
    const LoadedData in = load_inputs(f);
    BlackboxPredictions preds;
    if (o.bb_kind == "oracle") {
        if (!o.query.empty()) throw Error("--query applies to the knn black-box only");
        preds = noisy_oracle(in.ds.labels, in.ds.num_classes, {o.error_rate, o.seed});
    } else {
        const KnnModel knn = knn_fit(in.ds, o.knn_k);
        if (o.query.empty()) {
            preds = knn_predict_batch(knn, in.ds.features);
        } else {
            DataFlags q = f;
            q.data = o.query;
            const LoadedData query = load_inputs(q, in.ds.dims());
            preds = knn_predict_batch(knn, query.ds.features);
        }
    }
    save_blackbox_predictions(preds, o.out);
    std::cout << "wrote " << preds.size() << " " << o.bb_kind << " predictions to " << o.out << '\n';
    return kExitOk;
}

int cmd_train(const Options& o) {
    LoadedData in = load_inputs(o.data);
    const ObjectiveConfig cfg = objective_from(o.fit);
    if (!is_smooth(cfg.phi)) throw NonSmoothError();
    Dataset ds = in.ds;
    auto scaling = preprocess(ds, o.fit);
    const ClassPartition part = partition_indices(ds.labels, in.bb, ds.num_classes);
    SolverConfig solver = solver_from(o.fit, o.seed);
    if (!o.trace.empty()) solver.trace_path = o.trace;

    std::optional<ModelParams> init;
    if (o.theta_max_init) {
        init = ModelParams::Zero(ds.num_classes, ds.dims());
        init->theta.setOnes();
    }
    const FitResult fit = apg_fit(ds, part, cfg, solver, init);

    HybridModel model;
    model.params = fit.params;
    model.feature_names = ds.feature_names;
    model.scaling = scaling;
    model.bias_column = ds.bias_column;
    model.phi = cfg.phi;
    model.c1 = cfg.c1;
    model.c2 = cfg.c2;
    model.provenance = {{"dataset_hash", in.data_hash},
                        {"blackbox_hash", in.bb_hash},
                        {"blackbox_provenance", o.data.bb_provenance},
                        {"seed", std::to_string(o.seed)}};
    save_model(model, o.model_out);

    const Metrics m = evaluate(model.params, ds, in.bb);
    print_metrics(m);
    std::cout << "iterations:           " << fit.iterations_run << '\n'
              << "converged:            " << (fit.converged ? "true" : "false") << '\n'
              << "objective:            " << format_double(fit.objective()) << '\n';
    if (!o.metrics_out.empty()) {
        auto doc = metrics_json(m);
        doc["iterations"] = fit.iterations_run;
        doc["converged"] = fit.converged;
        doc["objective"] = fit.objective();
        std::ofstream(o.metrics_out) << doc.dump(2) << '\n';
    }
    if (!fit.converged) {
        std::cerr << "warning: solver stopped at max_iters without meeting the relative-change test\n";
        if (o.strict) return kExitCheckFailed;
    }
    return kExitOk;
}

int cmd_predict(const Options& o) {
    const HybridModel model = load_model(o.model);
    const Index raw_dims = model.bias_column ? model.dims() - 1 : model.dims();
    LoadedData in = load_inputs(o.data, raw_dims);
    const Dataset ds = prepare_features(model, in.ds);
    std::ofstream out(o.out);
    if (!out) throw Error("cannot write " + o.out);
    out << "row,label,source,margin\n";
    for (Index i = 0; i < ds.rows(); ++i) {
        const auto x = ds.features.row(i).transpose();
        if (in.has_bb) {
            const PredictionOutcome p = predict_hybrid(model, x, in.bb.preds(i));
            out << i << ',' << p.label + 1 << ',' << source_name(p.source) << ',' << format_double(p.margins.maxCoeff())
                << '\n';
        } else {
            const Eigen::VectorXd scores = predict_scores(model.params, x);
            const int agent = claiming_agent(model.params, scores);
            const double margin = class_margins(scores).maxCoeff();
            if (agent >= 0)
                out << i << ',' << agent + 1 << ",agent," << format_double(margin) << '\n';
            else
                out << i << ",,deferred," << format_double(margin) << '\n';
        }
    }
    std::cout << "wrote " << ds.rows() << " predictions to " << o.out << '\n';
    return kExitOk;
}

int cmd_evaluate(const Options& o) {
    const HybridModel model = load_model(o.model);
    const Index raw_dims = model.bias_column ? model.dims() - 1 : model.dims();
    LoadedData in = load_inputs(o.data, raw_dims);
    const Dataset ds = prepare_features(model, in.ds);
    const Metrics m = evaluate(model, ds, in.bb);
    print_metrics(m);
    if (!o.metrics_out.empty()) std::ofstream(o.metrics_out) << metrics_json(m).dump(2) << '\n';
    return kExitOk;
}

int cmd_frontier(const Options& o) {
    LoadedData in = load_inputs(o.data);
    const ObjectiveConfig cfg = objective_from(o.fit);
    if (!is_smooth(cfg.phi)) throw NonSmoothError();
    Dataset ds = in.ds;
    auto scaling = preprocess(ds, o.fit);

    const Spacing spacing = o.spacing == "log" ? Spacing::log : Spacing::linear;
    SweepGrid grid;
    grid.spacing = spacing;
    grid.c1_values = o.c1_values.empty() ? grid_values(o.c1_min, o.c1_max, o.c1_count, spacing) : o.c1_values;
    grid.c2_candidates = o.c2_values.empty() ? grid_values(o.c2_min, o.c2_max, o.c2_count, spacing) : o.c2_values;
    std::sort(grid.c1_values.begin(), grid.c1_values.end());

    SweepOptions opts;
    opts.holdout_fraction = o.holdout;
    opts.seed = o.seed;
    opts.stratified = o.stratified;
    opts.jobs = o.jobs;
    opts.warm_start = o.warm_start;

    std::optional<Dataset> eval_ds;
    std::optional<BlackboxPredictions> eval_bb;
    std::string split_label = "train";
    if (!o.eval_data.empty()) {
        if (o.eval_bb.empty()) throw Error("--eval-data needs --eval-bb");
        DataFlags f = o.data;
        f.data = o.eval_data;
        f.bb = o.eval_bb;
        LoadedData ev = load_inputs(f, in.ds.dims());
        Dataset e = ev.ds;
        if (scaling) e = apply_scale(e, *scaling);
        if (o.fit.bias) e = append_bias(e);
        if (e.num_classes > ds.num_classes) throw Error("evaluation data has more classes than training data");
        e.num_classes = ds.num_classes;
        eval_ds = std::move(e);
        eval_bb = std::move(ev.bb);
        split_label = "eval:" + o.eval_data;
    }

    Frontier frontier = sweep(ds, in.bb, grid, cfg, solver_from(o.fit, o.seed), opts, eval_ds ? &*eval_ds : nullptr,
                              eval_bb ? &*eval_bb : nullptr);
    frontier.provenance = {{"dataset_hash", in.data_hash},
                           {"blackbox_hash", in.bb_hash},
                           {"blackbox_provenance", o.data.bb_provenance},
                           {"metrics_split", split_label},
                           {"seed", std::to_string(o.seed)}};
    export_frontier(frontier, o.out);

    nlohmann::json meta;
    meta["provenance"] = frontier.provenance;
    meta["points"] = nlohmann::json::array();
    int failures = 0;
    for (const auto& p : frontier.points) {
        nlohmann::json point = {{"c1", p.c1},          {"c2", p.c2_selected},       {"iterations", p.iterations},
                                {"converged", p.converged}, {"objective", p.objective}, {"error", p.error}};
        meta["points"].push_back(point);
        if (!p.ok()) {
            ++failures;
            std::cerr << "warning: point c1=" << format_double(p.c1) << " failed: " << p.error << '\n';
        }
    }
    std::ofstream(o.out + ".meta.json") << meta.dump(2) << '\n';

    if (!o.models_dir.empty()) {
        fs::create_directories(o.models_dir);
        for (const auto& p : frontier.points) {
            if (!p.ok()) continue;
            HybridModel model;
            model.params = p.params;
            model.feature_names = ds.feature_names;
            model.scaling = scaling;
            model.bias_column = ds.bias_column;
            model.phi = cfg.phi;
            model.c1 = p.c1;
            model.c2 = p.c2_selected;
            model.provenance = frontier.provenance;
            save_model(model, fs::path(o.models_dir) /
                                  ("model_c1_" + format_double(p.c1) + "_c2_" + format_double(p.c2_selected) + ".json"));
        }
    }

    std::cout << "c1,c2,transparency,accuracy,avg_nonzeros\n";
    for (const auto& p : frontier.points)
        if (p.ok())
            std::cout << format_double(p.c1) << ',' << format_double(p.c2_selected) << ','
                      << format_double(p.metrics.transparency) << ',' << format_double(p.metrics.accuracy) << ','
                      << format_double(p.metrics.avg_nonzeros) << '\n';
    const Dataset& shown = eval_ds ? *eval_ds : ds;
    const BlackboxPredictions& shown_bb = eval_bb ? *eval_bb : in.bb;
    const double bb_acc = static_cast<double>((shown.labels.array() == shown_bb.preds.array()).count()) /
                          static_cast<double>(shown.rows());
    std::cout << "black-box accuracy: " << format_double(bb_acc) << '\n';
    return failures == static_cast<int>(frontier.points.size()) ? kExitCheckFailed : kExitOk;
}

int cmd_gradcheck(const Options& o) {
    GradcheckConfig cfg;
    cfg.phi = parse_phi(o.fit.phi);
    cfg.instances = o.instances;
    cfg.seed = o.seed == 0 ? 1 : o.seed;
    if (!is_smooth(cfg.phi)) throw NonSmoothError();
    const GradcheckReport r = run_gradcheck(cfg);
    std::cout << "phi: " << to_string(cfg.phi) << "\ninstances: " << r.instances
              << "\nmax relative error: " << format_double(r.max_rel_error) << '\n';
    if (!r.passed) {
        std::cout << "FAILED: tolerance " << format_double(cfg.tolerance) << " exceeded; instance seed " << r.worst_seed
                  << '\n';
        return kExitCheckFailed;
    }
    std::cout << "ok\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"malc: linear competitors that claim confident regions and defer the rest to a black-box"};
    app.set_config("--config", "", "TOML/INI file with the same keys as the flags (flags win)");
    app.require_subcommand(1);
    Options o;
    app.add_option("--seed", o.seed, "Seed for every stochastic step (splits, synth, oracle)");
    app.add_flag("-v,--verbose", o.verbosity, "More output");

    auto* synth = app.add_subcommand("synth", "Generate gaussian blobs");
    synth->add_option("--blobs", o.blobs, "Number of classes")->check(CLI::Range(2, 1000));
    synth->add_option("--n", o.n, "Rows")->check(CLI::PositiveNumber);
    synth->add_option("--d", o.d, "Dimensions")->check(CLI::PositiveNumber);
    synth->add_option("--separation", o.separation, "Pairwise distance between blob centres")
        ->check(CLI::NonNegativeNumber);
    synth->add_option("--out", o.out, "Dataset output file")->required();
    synth->add_option("--labels-out", o.labels_out, "Also write the labels, one per line");
    synth->add_option("--out-format", o.out_format, "Dataset format")->check(CLI::IsMember({"csv", "svmlight"}));

    auto* bbcmd = app.add_subcommand("blackbox", "Produce stand-in black-box predictions");
    bbcmd->add_option("kind", o.bb_kind, "oracle or knn")->check(CLI::IsMember({"oracle", "knn"}));
    add_data_flags(bbcmd, o.data, false);
    bbcmd->add_option("--error-rate", o.error_rate, "Oracle flip probability")->check(CLI::Range(0.0, 1.0));
    bbcmd->add_option("--k", o.knn_k, "Neighbours for knn")->check(CLI::PositiveNumber);
    bbcmd->add_option("--query", o.query, "Predict these rows instead of the training rows (knn)");
    bbcmd->add_option("--out", o.out, "Prediction file")->required();

    auto* train = app.add_subcommand("train", "Fit a model");
    add_data_flags(train, o.data, true);
    add_fit_flags(train, o.fit);
    train->add_option("--model-out", o.model_out, "Model file")->required();
    train->add_option("--metrics-out", o.metrics_out, "Write training metrics as JSON");
    train->add_option("--trace", o.trace, "Per-iteration CSV trace");
    train->add_flag("--theta-max-init", o.theta_max_init, "Start thresholds at 1 (everything deferred) instead of 0");
    train->add_flag("--strict", o.strict, "Exit 1 when the solver hits max_iters");

    auto* predict = app.add_subcommand("predict", "Apply a model");
    predict->add_option("--model", o.model, "Model file")->required()->check(CLI::ExistingFile);
    add_data_flags(predict, o.data, false);
    predict->add_option("--out", o.out, "Prediction CSV")->required();

    auto* evalcmd = app.add_subcommand("evaluate", "Metrics of a model on labelled data");
    evalcmd->add_option("--model", o.model, "Model file")->required()->check(CLI::ExistingFile);
    add_data_flags(evalcmd, o.data, true);
    evalcmd->add_option("--metrics-out", o.metrics_out, "Write metrics as JSON");

    auto* frontier = app.add_subcommand("frontier", "Sweep c1 (c2 tuned per point) into an accuracy-transparency frontier");
    add_data_flags(frontier, o.data, true);
    add_fit_flags(frontier, o.fit, false);
    frontier->add_option("--c1", o.c1_values, "Explicit c1 values (overrides the range flags)")
        ->check(CLI::NonNegativeNumber);
    frontier->add_option("--c2", o.c2_values, "Explicit c2 candidates (overrides the range flags)")
        ->check(CLI::NonNegativeNumber);
    frontier->add_option("--c1-min", o.c1_min, "Smallest c1 (default 0.005)")->check(CLI::NonNegativeNumber);
    frontier->add_option("--c1-max", o.c1_max, "Largest c1 (default 0.95)")->check(CLI::NonNegativeNumber);
    frontier->add_option("--c1-count", o.c1_count, "Number of c1 values (default 12)")->check(CLI::PositiveNumber);
    frontier->add_option("--c2-min", o.c2_min, "Smallest c2 candidate (default 0.03)")->check(CLI::NonNegativeNumber);
    frontier->add_option("--c2-max", o.c2_max, "Largest c2 candidate (default 0.25)")->check(CLI::NonNegativeNumber);
    frontier->add_option("--c2-count", o.c2_count, "Number of c2 candidates (default 4)")->check(CLI::PositiveNumber);
    frontier->add_option("--spacing", o.spacing, "Grid spacing (default log)")->check(CLI::IsMember({"log", "linear"}));
    frontier->add_option("--jobs", o.jobs, "Concurrent fits")->envname("MALC_JOBS")->check(CLI::PositiveNumber);
    frontier->add_option("--holdout", o.holdout, "Validation share for c2 selection")->check(CLI::Range(0.0, 1.0));
    frontier->add_flag("--stratified", o.stratified, "Stratify the holdout split by class");
    frontier->add_flag("--warm-start", o.warm_start, "Start each point from the previous solution (sequential)");
    frontier->add_option("--models-dir", o.models_dir, "Write one model file per point here");
    frontier->add_option("--eval-data", o.eval_data, "Report metrics on this dataset instead of the training data");
    frontier->add_option("--eval-bb", o.eval_bb, "Black-box predictions for --eval-data");
    frontier->add_option("--out", o.out, "Frontier CSV")->required();

    auto* gradcheck = app.add_subcommand("gradcheck", "Check the analytic loss gradient against finite differences");
    gradcheck->add_option("--phi", o.fit.phi, "Margin loss")->check(CLI::IsMember({"hinge", "smooth_hinge", "logistic"}));
    gradcheck->add_option("--instances", o.instances, "Random instances")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*synth) return cmd_synth(o);
        if (*bbcmd) return cmd_blackbox(o);
        if (*train) return cmd_train(o);
        if (*predict) return cmd_predict(o);
        if (*evalcmd) return cmd_evaluate(o);
        if (*frontier) return cmd_frontier(o);
        if (*gradcheck) return cmd_gradcheck(o);
    } catch (const NonSmoothError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const DivergenceError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitCheckFailed;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
