#pragma once

#include "malc/loss.hpp"
#include "malc/prox.hpp"
#include "malc/types.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <vector>

namespace malc {

struct SolverConfig {
    int max_iters = 10000;
    double rel_tol = 1e-3;  // 0.1% relative objective change
    int tol_window = 5;     // consecutive iterations the change test must hold
    double initial_lipschitz_guess = 1.0;
    double backtrack_factor = 2.0;
    bool restart = true;
    bool adaptive_decrease = true;  // halve L after each accepted step
    int max_doublings = 60;
    std::uint64_t seed = 0;
    std::optional<std::filesystem::path> trace_path;

    void validate() const {
        if (max_iters < 1) throw Error("max_iters must be >= 1");
        if (!(rel_tol > 0.0 && rel_tol < 1.0)) throw Error("rel_tol must lie in (0, 1)");
        if (tol_window < 1) throw Error("tol_window must be >= 1");
        if (!(initial_lipschitz_guess > 0.0)) throw Error("initial Lipschitz guess must be positive");
        if (!(backtrack_factor > 1.0)) throw Error("backtrack factor must exceed 1");
    }
};

template <typename Scalar>
struct FitResultT {
    ModelParamsT<Scalar> params;
    std::vector<Scalar> objective_trace;  // trace[0] is the objective at the initial point
    int iterations_run = 0;
    bool converged = false;
    double wall_time = 0.0;  // seconds
    Scalar lipschitz{};      // last accepted local Lipschitz estimate
    int restarts = 0;

    Scalar objective() const { return objective_trace.back(); }
};
using FitResult = FitResultT<double>;

/// Smooth loss plus c1*sum(theta) + c2*||w||_1 over theta >= 0.
template <typename Scalar>
class CompositeObjective {
   public:
    using Params = ModelParamsT<Scalar>;

    CompositeObjective(const LossProblem<Scalar>& loss, ObjectiveConfig cfg) : loss_(loss), cfg_(std::move(cfg)) {
        cfg_.validate();
        if (!is_smooth(loss_.phi())) throw NonSmoothError();
    }

    const LossProblem<Scalar>& loss() const { return loss_; }
    const ObjectiveConfig& config() const { return cfg_; }

    Scalar smooth_value(const Params& p) const { return loss_.value(p); }
    Scalar smooth_value_and_gradient(const Params& p, Params& grad) const { return loss_.value_and_gradient(p, grad); }
    Scalar penalty(const Params& p) const { return penalty_eval(p, cfg_); }
    Scalar value(const Params& p) const { return smooth_value(p) + penalty(p); }

    Params prox(const Params& v, Scalar step) const {
        Params out;
        out.w = prox_w(v.w, step, Scalar(cfg_.c2), cfg_.penalize_bias, cfg_.bias_column);
        if (cfg_.fix_theta_zero)
            out.theta = VectorX<Scalar>::Zero(v.theta.size());
        else
            out.theta = prox_theta(v.theta, step, Scalar(cfg_.c1));
        return out;
    }

   private:
    const LossProblem<Scalar>& loss_;
    ObjectiveConfig cfg_;
};

template <typename Params, typename Scalar>
struct LineSearchResult {
    Scalar lipschitz;
    Params candidate;
    Scalar smooth_value;  // smooth part at the candidate
    int doublings;
};

/// Backtracking on the local Lipschitz estimate: grows L by `factor` until the quadratic
/// upper bound holds at the prox point. `Problem` supplies smooth_value and prox.
template <typename Problem, typename Params, typename Scalar>
LineSearchResult<Params, Scalar> line_search(const Problem& problem, const Params& y, Scalar smooth_at_y,
                                             const Params& grad_at_y, Scalar lipschitz, double factor = 2.0,
                                             int max_doublings = 60) {
    if (!(lipschitz > Scalar(0))) throw Error("line search needs a positive Lipschitz estimate");
    const Scalar slack = Scalar(16) * std::numeric_limits<Scalar>::epsilon() * std::max(Scalar(1), std::abs(smooth_at_y));
    for (int m = 0; m <= max_doublings; ++m) {
        const Scalar step = Scalar(1) / lipschitz;
        Params cand = problem.prox(y - step * grad_at_y, step);
        const Params diff = cand - y;
        const Scalar f_cand = problem.smooth_value(cand);
        const Scalar bound = smooth_at_y + grad_at_y.dot(diff) + Scalar(0.5) * lipschitz * diff.squared_norm();
        if (std::isfinite(static_cast<double>(f_cand)) && f_cand <= bound + slack)
            return {lipschitz, std::move(cand), f_cand, m};
        lipschitz *= Scalar(factor);
    }
    throw DivergenceError("line search exceeded " + std::to_string(max_doublings) + " doublings");
}

/// Proximal-gradient residual ||x - prox(x - eta grad f(x))|| / eta with eta = 1/L.
template <typename Scalar>
Scalar prox_grad_residual(const CompositeObjective<Scalar>& problem, const ModelParamsT<Scalar>& x, Scalar lipschitz) {
    ModelParamsT<Scalar> grad;
    problem.smooth_value_and_gradient(x, grad);
    const Scalar eta = Scalar(1) / lipschitz;
    const ModelParamsT<Scalar> moved = problem.prox(x - eta * grad, eta);
    return std::sqrt((x - moved).squared_norm()) / eta;
}

/// Accelerated proximal gradient with (t-1)/(t+2) momentum, backtracking, and
/// function-value restart. Stops once the relative objective change stays below
/// rel_tol for tol_window consecutive iterations, or at max_iters.
template <typename Scalar>
FitResultT<Scalar> apg_fit(const CompositeObjective<Scalar>& problem, const SolverConfig& solver,
                           const std::optional<ModelParamsT<Scalar>>& init = std::nullopt) {
    using Params = ModelParamsT<Scalar>;
    solver.validate();
    const auto started = std::chrono::steady_clock::now();
    const LossProblem<Scalar>& loss = problem.loss();

    Params x = init ? *init : Params::Zero(loss.classes(), loss.dims());
    loss.check_shape(x);
    // An initial point outside the feasible set is projected first.
    x.theta = x.theta.cwiseMax(Scalar(0));
    if (problem.config().fix_theta_zero) x.theta.setZero();

    std::optional<std::ofstream> trace;
    if (solver.trace_path) {
        trace.emplace(*solver.trace_path);
        if (!*trace) throw Error("cannot write trace file " + solver.trace_path->string());
        *trace << "iter,objective,L,restart\n";
        trace->precision(17);
    }

    FitResultT<Scalar> result;
    Scalar f_x = problem.value(x);
    if (!std::isfinite(static_cast<double>(f_x))) throw DivergenceError("non-finite objective at the initial point");
    result.objective_trace.push_back(f_x);
    if (trace) *trace << 0 << ',' << f_x << ',' << solver.initial_lipschitz_guess << ",0\n";

    const Scalar lipschitz_floor = Scalar(solver.initial_lipschitz_guess) / std::pow(Scalar(2), Scalar(60));
    Scalar lipschitz = Scalar(solver.initial_lipschitz_guess);
    Params x_prev = x;
    Params grad;
    long momentum_age = 1;
    int quiet_streak = 0;

    for (int iter = 1; iter <= solver.max_iters; ++iter) {
        const Scalar beta = Scalar(momentum_age - 1) / Scalar(momentum_age + 2);
        Params y = x + beta * (x - x_prev);
        Scalar f_y = problem.smooth_value_and_gradient(y, grad);
        auto step = line_search(problem, y, f_y, grad, lipschitz, solver.backtrack_factor, solver.max_doublings);
        Scalar f_new = step.smooth_value + problem.penalty(step.candidate);
        bool restarted = false;

        if (solver.restart && f_new > f_x && momentum_age > 1) {
            // Momentum overshot: drop it and take a plain proximal step from x.
            restarted = true;
            ++result.restarts;
            momentum_age = 1;
            x_prev = x;
            f_y = problem.smooth_value_and_gradient(x, grad);
            step = line_search(problem, x, f_y, grad, lipschitz, solver.backtrack_factor, solver.max_doublings);
            f_new = step.smooth_value + problem.penalty(step.candidate);
        }
        if (!std::isfinite(static_cast<double>(f_new)))
            throw DivergenceError("non-finite objective at iteration " + std::to_string(iter));

        lipschitz = step.lipschitz;
        result.lipschitz = lipschitz;
        if (solver.restart && f_new > f_x) {
            // A plain step cannot decrease F beyond rounding; stay put.
            x_prev = x;
            f_new = f_x;
        } else {
            x_prev = std::move(x);
            x = std::move(step.candidate);
            ++momentum_age;
        }

        const Scalar change = std::abs(f_new - f_x) / std::max(std::abs(f_x), Scalar(1e-12));
        f_x = f_new;
        result.objective_trace.push_back(f_x);
        result.iterations_run = iter;
        if (trace) *trace << iter << ',' << f_x << ',' << lipschitz << ',' << (restarted ? 1 : 0) << '\n';

        quiet_streak = change < Scalar(solver.rel_tol) ? quiet_streak + 1 : 0;
        if (quiet_streak >= solver.tol_window) {
            result.converged = true;
            break;
        }
        if (solver.adaptive_decrease) lipschitz = std::max(lipschitz / Scalar(2), lipschitz_floor);
    }

    result.params = std::move(x);
    result.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return result;
}

/// Builds the problem from a dataset and partition, then runs apg_fit.
inline FitResult apg_fit(const Dataset& ds, const ClassPartition& part, const ObjectiveConfig& cfg,
                         const SolverConfig& solver, const std::optional<ModelParams>& init = std::nullopt) {
    const LossProblem<double> loss(ds, part, cfg.phi);
    ObjectiveConfig objective = cfg;
    if (!objective.bias_column) objective.bias_column = ds.bias_column;
    return apg_fit(CompositeObjective<double>(loss, objective), solver, init);
}

}  // namespace malc
