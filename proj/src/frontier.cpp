#include "malc/frontier.hpp"

#include "malc/data.hpp"
#include "malc/text_io.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <thread>

namespace malc {

void SweepGrid::validate() const {
    if (c1_values.empty() || c2_candidates.empty()) throw Error("sweep grid needs at least one c1 and one c2 value");
    for (double v : c1_values)
        if (!(v >= 0.0)) throw Error("c1 values must be nonnegative");
    for (double v : c2_candidates)
        if (!(v >= 0.0)) throw Error("c2 candidates must be nonnegative");
    if (!std::is_sorted(c1_values.begin(), c1_values.end())) throw Error("c1 values must be sorted ascending");
}

std::vector<double> grid_values(double lo, double hi, int count, Spacing spacing) {
    if (count < 1) throw Error("grid needs at least one value");
    if (hi < lo) throw Error("grid upper bound below lower bound");
    if (spacing == Spacing::log && !(lo > 0.0)) throw Error("log spacing needs a positive lower bound");
    if (count == 1) return {lo};
    std::vector<double> out(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const double t = static_cast<double>(i) / (count - 1);
        out[static_cast<std::size_t>(i)] =
            spacing == Spacing::log ? std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo))) : lo + t * (hi - lo);
    }
    out.front() = lo;
    out.back() = hi;
    return out;
}

SweepGrid default_grid(Spacing spacing) {
    return {grid_values(0.005, 0.95, 12, spacing), grid_values(0.03, 0.25, 4, spacing), spacing};
}

C2Selection select_c2(const Dataset& ds, const BlackboxPredictions& bb, double c1,
                      const std::vector<double>& c2_candidates, const ObjectiveConfig& cfg, const SolverConfig& solver,
                      const SweepOptions& opts) {
    if (c2_candidates.empty()) throw Error("no c2 candidates");
    const Split split = holdout_split(ds, bb, opts.holdout_fraction, opts.seed, opts.stratified);
    const ClassPartition part = partition_indices(split.train.labels, split.train_bb, split.train.num_classes);

    C2Selection best;
    bool found = false;
    for (double c2 : c2_candidates) {
        ObjectiveConfig objective = cfg;
        objective.c1 = c1;
        objective.c2 = c2;
        try {
            const FitResult fit = apg_fit(split.train, part, objective, solver);
            const double acc = evaluate(fit.params, split.validation, split.validation_bb).accuracy;
            if (!found || acc > best.validation_accuracy || (acc == best.validation_accuracy && c2 > best.c2)) {
                best.c2 = c2;
                best.validation_accuracy = acc;
                found = true;
            }
        } catch (const DivergenceError& e) {
            best.skipped.push_back("c2=" + format_double(c2) + ": " + e.what());
        }
    }
    if (!found) throw DivergenceError("every c2 candidate failed for c1=" + format_double(c1));
    return best;
}

namespace {

FrontierPoint run_point(const Dataset& ds, const BlackboxPredictions& bb, const ClassPartition& part, double c1,
                        const SweepGrid& grid, const ObjectiveConfig& cfg, const SolverConfig& solver,
                        const SweepOptions& opts, const Dataset& eval_ds, const BlackboxPredictions& eval_bb,
                        const std::optional<ModelParams>& init) {
    FrontierPoint point;
    point.c1 = c1;
    try {
        const C2Selection sel = select_c2(ds, bb, c1, grid.c2_candidates, cfg, solver, opts);
        point.c2_selected = sel.c2;
        point.validation_accuracy = sel.validation_accuracy;
        ObjectiveConfig objective = cfg;
        objective.c1 = c1;
        objective.c2 = sel.c2;
        const FitResult fit = apg_fit(ds, part, objective, solver, init);
        point.iterations = fit.iterations_run;
        point.converged = fit.converged;
        point.objective = fit.objective();
        point.metrics = evaluate(fit.params, eval_ds, eval_bb);
        point.params = fit.params;
    } catch (const Error& e) {
        point.error = e.what();
    }
    return point;
}

}  // namespace

Frontier sweep(const Dataset& ds, const BlackboxPredictions& bb, const SweepGrid& grid, const ObjectiveConfig& cfg,
               const SolverConfig& solver, const SweepOptions& opts, const Dataset* eval_ds,
               const BlackboxPredictions* eval_bb) {
    grid.validate();
    solver.validate();
    if ((eval_ds == nullptr) != (eval_bb == nullptr)) throw Error("evaluation data and predictions go together");
    const Dataset& eds = eval_ds ? *eval_ds : ds;
    const BlackboxPredictions& ebb = eval_bb ? *eval_bb : bb;
    const ClassPartition part = partition_indices(ds.labels, bb, ds.num_classes);

    Frontier frontier;
    const std::size_t count = grid.c1_values.size();
    frontier.points.resize(count);

    if (opts.warm_start) {
        std::optional<ModelParams> init;
        for (std::size_t i = 0; i < count; ++i) {
            frontier.points[i] = run_point(ds, bb, part, grid.c1_values[i], grid, cfg, solver, opts, eds, ebb, init);
            if (frontier.points[i].ok()) init = frontier.points[i].params;
        }
        return frontier;
    }

    const auto workers = static_cast<std::size_t>(std::clamp(opts.jobs, 1, static_cast<int>(count)));
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < count; i = next++)
            frontier.points[i] = run_point(ds, bb, part, grid.c1_values[i], grid, cfg, solver, opts, eds, ebb, {});
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    return frontier;
}

std::string frontier_csv(const Frontier& frontier) {
    std::ostringstream out;
    out << kFrontierHeader << '\n';
    for (const auto& p : frontier.points) {
        if (!p.ok()) {
            // Failed points keep their grid slot with empty metrics.
            out << format_double(p.c1) << ",,,,,,0\n";
            continue;
        }
        out << format_double(p.c1) << ',' << format_double(p.c2_selected) << ','
            << format_double(p.metrics.transparency) << ',' << format_double(p.metrics.accuracy) << ','
            << format_double(p.metrics.avg_nonzeros) << ',' << format_double(p.validation_accuracy) << ','
            << (p.converged ? 1 : 0) << '\n';
    }
    return out.str();
}

void export_frontier(const Frontier& frontier, const std::filesystem::path& path) {
    if (frontier.points.empty()) throw Error("cannot export an empty frontier");
    std::ofstream out(path);
    if (!out) throw Error("cannot write frontier " + path.string());
    out << frontier_csv(frontier);
}

std::vector<FrontierRow> read_frontier_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open frontier " + path.string());
    std::string line;
    if (!std::getline(in, line) || trim(line) != kFrontierHeader)
        throw ParseError("frontier header mismatch", 1);
    std::vector<FrontierRow> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const auto f = split(line, ',');
        if (f.size() != 7) throw ParseError("frontier row needs 7 fields", lineno);
        std::array<double, 6> v{};
        for (std::size_t c = 0; c < 6; ++c) {
            if (c > 0 && trim(f[c]).empty()) {
                v[c] = std::numeric_limits<double>::quiet_NaN();
                continue;
            }
            auto d = parse_double(f[c]);
            if (!d) throw ParseError("frontier field " + std::to_string(c + 1) + " is not a number", lineno);
            v[c] = *d;
        }
        const auto conv = trim(f[6]);
        if (conv != "0" && conv != "1") throw ParseError("converged column must be 0 or 1", lineno);
        rows.push_back({v[0], v[1], v[2], v[3], v[4], v[5], conv == "1"});
    }
    return rows;
}

namespace {

std::vector<double> average_ranks(const std::vector<double>& v) {
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(v.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
        const double r = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = r;
        i = j + 1;
    }
    return ranks;
}

}  // namespace

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size() || a.size() < 2) throw Error("spearman needs two equal-length series of size >= 2");
    const auto ra = average_ranks(a);
    const auto rb = average_ranks(b);
    const Eigen::Map<const Eigen::VectorXd> x(ra.data(), static_cast<Index>(ra.size()));
    const Eigen::Map<const Eigen::VectorXd> y(rb.data(), static_cast<Index>(rb.size()));
    const Eigen::VectorXd xc = x.array() - x.mean();
    const Eigen::VectorXd yc = y.array() - y.mean();
    const double denom = std::sqrt(xc.squaredNorm() * yc.squaredNorm());
    return denom > 0.0 ? xc.dot(yc) / denom : 0.0;
}

}  // namespace malc
