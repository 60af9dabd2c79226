#pragma once

#include "malc/loss.hpp"
#include "malc/model.hpp"
#include "malc/optimizer.hpp"
#include "malc/types.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace malc {

enum class Spacing { log, linear };

struct SweepGrid {
    std::vector<double> c1_values;
    std::vector<double> c2_candidates;
    Spacing spacing = Spacing::log;

    void validate() const;
};

/// `count` values from lo to hi inclusive.
std::vector<double> grid_values(double lo, double hi, int count, Spacing spacing);

/// 12 log-spaced c1 in [0.005, 0.95]; 4 c2 candidates in [0.03, 0.25].
SweepGrid default_grid(Spacing spacing = Spacing::log);

struct SweepOptions {
    double holdout_fraction = 0.2;
    std::uint64_t seed = 0;
    bool stratified = false;
    int jobs = 1;
    // Start each point from the previous point's solution; forces sequential order.
    bool warm_start = false;
};

struct C2Selection {
    double c2 = 0.0;
    double validation_accuracy = 0.0;
    std::vector<std::string> skipped;  // candidates whose fit failed
};

struct FrontierPoint {
    double c1 = 0.0;
    double c2_selected = 0.0;
    double validation_accuracy = 0.0;
    Metrics metrics;
    int iterations = 0;
    bool converged = false;
    double objective = 0.0;
    ModelParams params;
    std::string error;  // non-empty when this point failed

    bool ok() const { return error.empty(); }
};

struct Frontier {
    std::vector<FrontierPoint> points;  // ordered by c1
    std::map<std::string, std::string> provenance;
};

/// Fits one model per candidate on the training share of a holdout split and keeps the
/// one with the best hybrid validation accuracy; ties go to the larger c2.
C2Selection select_c2(const Dataset& ds, const BlackboxPredictions& bb, double c1,
                      const std::vector<double>& c2_candidates, const ObjectiveConfig& cfg, const SolverConfig& solver,
                      const SweepOptions& opts);

/// For each c1: select c2, refit on all of `ds`, evaluate on `eval` (defaults to `ds`).
Frontier sweep(const Dataset& ds, const BlackboxPredictions& bb, const SweepGrid& grid, const ObjectiveConfig& cfg,
               const SolverConfig& solver, const SweepOptions& opts, const Dataset* eval_ds = nullptr,
               const BlackboxPredictions* eval_bb = nullptr);

inline constexpr const char* kFrontierHeader = "c1,c2,transparency,accuracy,avg_nonzeros,validation_accuracy,converged";

void export_frontier(const Frontier& frontier, const std::filesystem::path& path);
std::string frontier_csv(const Frontier& frontier);

struct FrontierRow {
    double c1, c2, transparency, accuracy, avg_nonzeros, validation_accuracy;
    bool converged;
};
/// Failed points come back with NaN in every metric column.
std::vector<FrontierRow> read_frontier_csv(const std::filesystem::path& path);

/// Spearman rank correlation with average ranks for ties.
double spearman(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace malc
