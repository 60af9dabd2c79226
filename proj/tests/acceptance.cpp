// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include "malc/blackbox.hpp"
#include "malc/data.hpp"
#include "malc/frontier.hpp"
#include "malc/gradcheck.hpp"
#include "malc/model.hpp"
#include "malc/optimizer.hpp"
#include "malc/prox.hpp"
#include "malc/synth.hpp"
#include "malc/text_io.hpp"
#include "oracles.hpp"

#include <sys/wait.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

using namespace malc;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& title, const std::string& detail) {
    if (!ok) ++failures;
    std::cout << (ok ? "PASS" : "FAIL") << "  [" << id << "] " << title << " :: " << detail << std::endl;
}

void note(const std::string& text) { std::cout << "      info: " << text << std::endl; }

std::string fmt(double v) {
    std::ostringstream out;
    out.precision(4);
    out << v;
    return out.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const fs::path kWork = fs::temp_directory_path() / "malc_acceptance";

int cli(const std::string& args) {
    const std::string cmd =
        "cd '" + kWork.string() + "' && '" + std::string(MALC_CLI_PATH) + "' " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void gradient_correctness() {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;
    for (PhiKind kind : {PhiKind::smooth_hinge, PhiKind::logistic}) {
        GradcheckConfig cfg;
        cfg.phi = kind;
        cfg.instances = 100;
        const GradcheckReport r = run_gradcheck(cfg);
        const int exit_code = cli("gradcheck --phi " + to_string(kind) + " --instances 100");
        ok = ok && r.passed && r.max_rel_error <= 1e-5 && exit_code == 0;
        detail += to_string(kind) + " max rel err " + fmt(r.max_rel_error) + " (cli exit " +
                  std::to_string(exit_code) + "); ";
    }
    const double secs = seconds_since(t0);
    ok = ok && secs < 30.0;
    report(1, ok, "gradient vs central differences", detail + fmt(secs) + " s");
}

void loss_oracle_equivalence() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(101);
    double worst = 0.0;
    for (int t = 0; t < 50; ++t) {
        auto inst = oracle::random_instance(rng, 40, 6, {2, 3, 5});
        for (PhiKind kind : {PhiKind::hinge, PhiKind::smooth_hinge, PhiKind::logistic})
            worst = std::max(worst, std::abs(loss_eval(inst.params, inst.ds, inst.part, kind) -
                                             oracle::loss(inst.params, inst.ds, inst.part, kind)));
    }
    const double secs = seconds_since(t0);
    report(2, worst <= 1e-10 && secs < 10.0, "vectorized loss equals triple loop",
           "max abs diff " + fmt(worst) + " over 50 instances x 3 phi; " + fmt(secs) + " s");
}

void prox_correctness() {
    std::mt19937_64 rng(103);
    std::uniform_real_distribution<double> value(-4.0, 4.0), positive(0.01, 2.0);
    double worst_w = 0.0, worst_t = 0.0;
    for (int t = 0; t < 20; ++t) {
        const Index K = 2 + t % 4, d = 1 + t % 5;
        Eigen::MatrixXd v(K, d);
        Eigen::VectorXd tv(K);
        for (Index i = 0; i < v.size(); ++i) v(i) = value(rng);
        for (Index k = 0; k < K; ++k) tv(k) = value(rng);
        const double step = positive(rng), c = positive(rng);
        const Eigen::MatrixXd pw = prox_w(v, step, c);
        const Eigen::VectorXd pt = prox_theta(tv, step, c);
        for (Index i = 0; i < v.size(); ++i) {
            const double vi = v(i);
            const double u = oracle::golden_min(
                [&](double x) { return 0.5 * (x - vi) * (x - vi) + step * c * std::abs(x); }, -10.0, 10.0);
            worst_w = std::max(worst_w, std::abs(pw(i) - u));
        }
        for (Index k = 0; k < K; ++k) {
            const double vk = tv(k);
            const double u =
                oracle::golden_min([&](double x) { return 0.5 * (x - vk) * (x - vk) + step * c * x; }, 0.0, 10.0);
            worst_t = std::max(worst_t, std::abs(pt(k) - u));
        }
    }
    report(3, worst_w <= 1e-6 && worst_t <= 1e-6, "prox matches numerical minimisation",
           "prox_w max diff " + fmt(worst_w) + ", prox_theta max diff " + fmt(worst_t) + " on 20 random inputs");
}

void solver_optimality() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(107);
    std::uniform_real_distribution<double> c1s(0.01, 0.1), c2s(0.005, 0.05);
    SolverConfig tight;
    tight.rel_tol = 1e-12;
    tight.tol_window = 10;
    tight.max_iters = 100000;
    double worst_rel = 0.0, worst_default = 0.0, worst_residual = 0.0;
    bool monotone = true;
    for (int t = 0; t < 30; ++t) {
        auto inst = oracle::random_instance(rng, 20, 5, {2, 3, 5});
        ObjectiveConfig cfg;
        cfg.c1 = c1s(rng);
        cfg.c2 = c2s(rng);
        cfg.phi = t % 2 == 0 ? PhiKind::smooth_hinge : PhiKind::logistic;
        const LossProblem<double> loss(inst.ds, inst.part, cfg.phi);
        const CompositeObjective<double> problem(loss, cfg);
        const FitResult fit = apg_fit(problem, tight);
        const FitResult quick = apg_fit(problem, SolverConfig{});
        const ModelParams ref = oracle::slow_reference_solve(inst.ds, inst.part, cfg.phi, cfg.c1, cfg.c2, 200000);
        const double f_ref = oracle::objective(ref, inst.ds, inst.part, cfg.phi, cfg.c1, cfg.c2);
        const double f_fit = oracle::objective(fit.params, inst.ds, inst.part, cfg.phi, cfg.c1, cfg.c2);
        const double f_quick = oracle::objective(quick.params, inst.ds, inst.part, cfg.phi, cfg.c1, cfg.c2);
        worst_rel = std::max(worst_rel, std::abs(f_fit - f_ref) / std::max(std::abs(f_ref), 1e-12));
        worst_default = std::max(worst_default, std::abs(f_quick - f_ref) / std::max(std::abs(f_ref), 1e-12));
        worst_residual = std::max(worst_residual, prox_grad_residual(problem, fit.params, fit.lipschitz));
        for (const FitResult* r : {&fit, &quick})
            for (std::size_t i = 1; i < r->objective_trace.size(); ++i)
                monotone = monotone && r->objective_trace[i] <= r->objective_trace[i - 1];
    }
    report(4, worst_rel <= 1e-4 && worst_residual <= 1e-3 && monotone, "APG agrees with slow reference",
           "max rel gap " + fmt(worst_rel) + ", max residual " + fmt(worst_residual) + ", trace monotone " +
               (monotone ? "yes" : "no") + "; " + fmt(seconds_since(t0)) + " s");
    note("with the default stopping rule (rel_tol 1e-3) the max rel gap is " + fmt(worst_default));
}

void predictor_structure() {
    std::mt19937_64 rng(109);
    std::normal_distribution<double> normal(0.0, 1.5);
    std::uniform_real_distribution<double> unit(0.001, 1.5), scale(0.1, 10.0);
    std::uniform_int_distribution<int> classes(2, 6), dims(1, 5);
    bool exclusive = true, faithful = true, decomposes = true, invariant = true;
    int pairs = 0;
    for (int m = 0; m < 100; ++m) {
        const int K = classes(rng);
        const Index d = dims(rng);
        HybridModel model;
        model.params = ModelParams::Zero(K, d);
        for (Index i = 0; i < model.params.w.size(); ++i) model.params.w(i) = normal(rng);
        for (Index k = 0; k < K; ++k) model.params.theta(k) = unit(rng);
        for (Index j = 0; j < d; ++j) model.feature_names.push_back("x" + std::to_string(j));
        HybridModel scaled = model;
        const double c = scale(rng);
        scaled.params = c * model.params;

        Dataset ds;
        ds.features.resize(100, d);
        ds.labels.resize(100);
        ds.num_classes = K;
        ds.feature_names = model.feature_names;
        BlackboxPredictions bb{Labels(100)};
        std::uniform_int_distribution<int> label(0, K - 1);
        Index correct = 0;
        for (Index i = 0; i < 100; ++i, ++pairs) {
            for (Index j = 0; j < d; ++j) ds.features(i, j) = normal(rng);
            ds.labels(i) = label(rng);
            bb.preds(i) = label(rng);
            const Eigen::VectorXd x = ds.features.row(i).transpose();
            const Eigen::VectorXd s = predict_scores(model.params, x);
            exclusive = exclusive && claimant_count(model.params, s) <= 1;
            const PredictionOutcome a = predict_hybrid(model, x, bb.preds(i));
            const PredictionOutcome b = predict_hybrid(scaled, x, bb.preds(i));
            if (a.source == Source::blackbox) faithful = faithful && a.label == bb.preds(i);
            invariant = invariant && a.label == b.label && a.source == b.source;
            if (a.label == ds.labels(i)) ++correct;
        }
        const Metrics met = evaluate(model, ds, bb);
        decomposes = decomposes && met.claimed_correct + met.deferred_correct == correct && met.rows == 100 &&
                     met.accuracy == static_cast<double>(correct) / 100.0;
    }
    report(5, exclusive && faithful && decomposes && invariant, "predictor structure",
           std::to_string(pairs) + " pairs; exclusive " + (exclusive ? "yes" : "no") + ", deferral exact " +
               (faithful ? "yes" : "no") + ", count identity " + (decomposes ? "yes" : "no") +
               ", scale invariant " + (invariant ? "yes" : "no"));
}

void reduction_endpoints() {
    std::mt19937_64 rng(113);
    bool ova = true, deferral = true;
    for (int t = 0; t < 50; ++t) {
        auto inst = oracle::random_instance(rng, 80, 4, {2, 3, 5});
        HybridModel model;
        model.params = inst.params;
        if (t % 5 == 0) model.params.w.row(1) = model.params.w.row(0);  // forces exact score ties
        model.feature_names = inst.ds.feature_names;

        model.params.theta.setZero();
        const Metrics zero = evaluate(model, inst.ds, inst.bb);
        ova = ova && zero.transparency == 1.0;
        for (Index i = 0; i < inst.ds.rows(); ++i) {
            const Eigen::VectorXd s = model.params.w * inst.ds.features.row(i).transpose();
            Index best = 0;
            for (Index k = 1; k < s.size(); ++k)
                if (s(k) > s(best)) best = k;
            const PredictionOutcome o = predict_hybrid(model, inst.ds.features.row(i).transpose(), inst.bb.preds(i));
            ova = ova && o.label == best && o.source == Source::agent;
        }

        double max_margin = 0.0;
        for (Index i = 0; i < inst.ds.rows(); ++i)
            max_margin = std::max(max_margin, class_margins(predict_scores(model.params,
                                                                           inst.ds.features.row(i).transpose()))
                                                  .maxCoeff());
        model.params.theta.setConstant(max_margin + 1.0);
        const Metrics high = evaluate(model, inst.ds, inst.bb);
        const double bb_acc = static_cast<double>((inst.bb.preds.array() == inst.ds.labels.array()).count()) /
                              static_cast<double>(inst.ds.rows());
        deferral = deferral && high.transparency == 0.0 && high.accuracy == bb_acc;
    }
    report(6, ova && deferral, "reduction endpoints",
           std::string("theta=0 gives one-vs-all argmax: ") + (ova ? "yes" : "no") +
               "; theta above max margin gives pure black-box: " + (deferral ? "yes" : "no"));
}

struct SynthSetup {
    Dataset ds;
    BlackboxPredictions bb;
};

SynthSetup synthetic_problem(std::uint64_t seed) {
    BlobConfig bc;
    bc.blobs = 3;
    bc.n = 3000;
    bc.d = 2;
    bc.separation = 4.0;
    bc.seed = seed;
    SynthSetup s{make_blobs(bc), {}};
    s.bb = noisy_oracle(s.ds.labels, 3, {0.1, seed});
    return s;
}

struct FrontierSummary {
    double t_min = 0, t_max = 0, rho = 0, acc_at_max = 0, acc_at_min = 0, ova_acc = 0, bb_acc = 0;
    bool all_ok = true;
};

FrontierSummary summarise(const Dataset& ds, const BlackboxPredictions& bb, const ObjectiveConfig& cfg,
                          std::uint64_t seed) {
    SweepOptions opts;
    opts.seed = seed;
    const SweepGrid grid = default_grid();
    const Frontier f = sweep(ds, bb, grid, cfg, SolverConfig{}, opts);
    FrontierSummary out;
    std::vector<double> c1, tr;
    const FrontierPoint* lo = nullptr;
    const FrontierPoint* hi = nullptr;
    for (const auto& p : f.points) {
        if (!p.ok()) {
            out.all_ok = false;
            continue;
        }
        c1.push_back(p.c1);
        tr.push_back(p.metrics.transparency);
        if (!lo || p.metrics.transparency < lo->metrics.transparency) lo = &p;
        if (!hi || p.metrics.transparency > hi->metrics.transparency) hi = &p;
    }
    if (!lo) {
        out.all_ok = false;
        return out;
    }
    out.t_min = lo->metrics.transparency;
    out.t_max = hi->metrics.transparency;
    out.rho = c1.size() >= 2 ? spearman(c1, tr) : 0.0;
    out.acc_at_min = lo->metrics.accuracy;
    out.acc_at_max = hi->metrics.accuracy;

    ObjectiveConfig ova = cfg;
    ova.fix_theta_zero = true;
    ova.c1 = 0.0;
    ova.c2 = hi->c2_selected;
    const ClassPartition part = partition_indices(ds.labels, bb, ds.num_classes);
    out.ova_acc = evaluate(apg_fit(ds, part, ova, SolverConfig{}).params, ds, bb).accuracy;
    out.bb_acc = static_cast<double>((bb.preds.array() == ds.labels.array()).count()) / static_cast<double>(ds.rows());
    return out;
}

void synthetic_frontier() {
    const auto t0 = std::chrono::steady_clock::now();
    const std::uint64_t seed = 7;
    const SynthSetup s = synthetic_problem(seed);
    const FrontierSummary r = summarise(s.ds, s.bb, ObjectiveConfig{}, seed);
    const double secs = seconds_since(t0);
    const bool span = r.t_min <= 0.1 && r.t_max >= 0.95;
    const bool rank = r.rho >= 0.8;
    const bool top = std::abs(r.acc_at_max - r.ova_acc) <= 0.02;
    const bool bottom = std::abs(r.acc_at_min - 0.9) <= 0.01;
    report(7, r.all_ok && span && rank && top && bottom && secs < 300.0, "synthetic frontier shape",
           "transparency [" + fmt(r.t_min) + ", " + fmt(r.t_max) + "] (need <=0.1 and >=0.95): " +
               (span ? "ok" : "no") + "; spearman " + fmt(r.rho) + ": " + (rank ? "ok" : "no") +
               "; acc@max-T " + fmt(r.acc_at_max) + " vs one-vs-all " + fmt(r.ova_acc) + ": " + (top ? "ok" : "no") +
               "; acc@min-T " + fmt(r.acc_at_min) + " vs 0.9: " + (bottom ? "ok" : "no") + "; " + fmt(secs) + " s");
    note("realised oracle accuracy on these rows is " + fmt(r.bb_acc));

    // Non-gating context: the same harness under the optional preprocessing flags.
    struct Variant {
        const char* name;
        bool scale, bias;
    };
    for (const Variant& v : {Variant{"--scale --bias", true, true}, Variant{"--scale", true, false},
                             Variant{"--bias", false, true}}) {
        Dataset ds = s.ds;
        if (v.scale) ds = minmax_scale(ds).first;
        if (v.bias) ds = append_bias(ds);
        const FrontierSummary alt = summarise(ds, s.bb, ObjectiveConfig{}, seed);
        note(std::string(v.name) + ": transparency [" + fmt(alt.t_min) + ", " + fmt(alt.t_max) + "], spearman " +
             fmt(alt.rho) + ", acc@max-T " + fmt(alt.acc_at_max) + " vs one-vs-all " + fmt(alt.ova_acc) +
             ", acc@min-T " + fmt(alt.acc_at_min));
    }
}

void sparsity_extreme() {
    BlobConfig bc;
    bc.n = 600;
    bc.d = 4;
    bc.blobs = 3;
    bc.seed = 127;
    const Dataset ds = minmax_scale(make_blobs(bc)).first;
    const BlackboxPredictions bb = noisy_oracle(ds.labels, 3, {0.1, 127});
    ObjectiveConfig cfg;
    cfg.c1 = 0.05;
    cfg.c2 = 1e6;
    const FitResult fit = apg_fit(ds, partition_indices(ds.labels, bb, 3), cfg, SolverConfig{});
    const bool zero = (fit.params.w.array() == 0.0).all();
    const double nz = avg_nonzeros(fit.params);
    report(8, zero && nz == 0.0, "L1 extreme zeroes the agents",
           std::string("w identically zero: ") + (zero ? "yes" : "no") + ", avg_nonzeros " + fmt(nz));
}

void determinism() {
    bool ok = cli("--seed 11 synth --blobs 3 --n 1500 --out det.csv") == 0 &&
              cli("--seed 11 blackbox oracle --data det.csv --error-rate 0.1 --out det_bb.txt") == 0;
    ok = ok && cli("--seed 11 train --data det.csv --bb det_bb.txt --c1 0.05 --c2 0.05 --model-out a.json") == 0 &&
         cli("--seed 11 train --data det.csv --bb det_bb.txt --c1 0.05 --c2 0.05 --model-out b.json") == 0;
    const bool models = ok && slurp(kWork / "a.json") == slurp(kWork / "b.json");
    const std::string base = "--seed 11 frontier --data det.csv --bb det_bb.txt --c1-count 6 ";
    ok = ok && cli(base + "--jobs 1 --out f1.csv --models-dir fm1") == 0 &&
         cli(base + "--jobs 1 --out f1b.csv --models-dir fm1b") == 0 &&
         cli(base + "--jobs 4 --out f4.csv --models-dir fm4") == 0;
    const std::string f1 = slurp(kWork / "f1.csv");
    const bool csvs = ok && !f1.empty() && f1 == slurp(kWork / "f1b.csv") && f1 == slurp(kWork / "f4.csv");
    bool dirs = ok;
    std::size_t count = 0;
    if (ok) {
        for (const auto& e : fs::directory_iterator(kWork / "fm1")) {
            ++count;
            const std::string a = slurp(e.path());
            dirs = dirs && a == slurp(kWork / "fm1b" / e.path().filename()) &&
                   a == slurp(kWork / "fm4" / e.path().filename());
        }
    }
    dirs = dirs && count == 6;
    report(9, ok && models && csvs && dirs, "bit-identical reruns",
           std::string("train model files: ") + (models ? "same" : "differ") + "; frontier CSVs (jobs 1, 1, 4): " +
               (csvs ? "same" : "differ") + "; per-point models: " + (dirs ? "same" : "differ"));
}

void svmlight_smoke() {
    std::string data, bb;
    const char* user_data = std::getenv("MALC_SMOKE_DATA");
    const char* user_bb = std::getenv("MALC_SMOKE_BB");
    if (user_data && user_bb) {
        data = fs::absolute(user_data).string();
        bb = fs::absolute(user_bb).string();
    } else {
        data = "smoke.svm";
        bb = "smoke_bb.txt";
        if (cli("--seed 13 synth --blobs 4 --n 800 --d 6 --out smoke.svm --out-format svmlight") != 0 ||
            cli("--seed 13 blackbox knn --data smoke.svm --format svmlight --k 7 --out smoke_bb.txt") != 0) {
            report(10, false, "svmlight end-to-end", "could not generate the smoke inputs");
            return;
        }
    }
    const int code = cli("frontier --data '" + data + "' --format svmlight --bb '" + bb + "' --out smoke_frontier.csv");
    bool ok = code == 0;
    std::string detail = "frontier exit " + std::to_string(code);
    if (ok) {
        try {
            const auto rows = read_frontier_csv(kWork / "smoke_frontier.csv");
            ok = rows.size() == 12;
            for (const auto& r : rows)
                ok = ok && r.transparency >= 0.0 && r.transparency <= 1.0 && r.accuracy >= 0.0 && r.accuracy <= 1.0 &&
                     r.avg_nonzeros >= 0.0;
            detail += ", " + std::to_string(rows.size()) + " well-formed rows";
        } catch (const std::exception& e) {
            ok = false;
            detail += std::string(", schema error: ") + e.what();
        }
    }
    report(10, ok, "svmlight end-to-end", detail + (user_data && user_bb ? " (user data)" : " (generated data)"));
}

}  // namespace

int main() {
    fs::remove_all(kWork);
    fs::create_directories(kWork);
    gradient_correctness();
    loss_oracle_equivalence();
    prox_correctness();
    solver_optimality();
    predictor_structure();
    reduction_endpoints();
    synthetic_frontier();
    sparsity_extreme();
    determinism();
    svmlight_smoke();
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criterion(s) failed")
              << std::endl;
    return failures == 0 ? 0 : 1;
}
