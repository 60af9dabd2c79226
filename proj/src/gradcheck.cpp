#include "malc/gradcheck.hpp"

#include "malc/data.hpp"

#include <algorithm>
#include <random>

namespace malc {

GradcheckInstance make_gradcheck_instance(std::uint64_t seed, Index max_rows, Index max_dims) {
    static constexpr int kClassChoices[] = {2, 3, 5};
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<Index> rows(1, max_rows);
    std::uniform_int_distribution<Index> dims(1, max_dims);
    std::uniform_int_distribution<int> pick(0, 2);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    GradcheckInstance inst;
    const Index n = rows(rng);
    const Index d = dims(rng);
    const int k = kClassChoices[pick(rng)];
    std::uniform_int_distribution<int> label(0, k - 1);

    inst.ds.features.resize(n, d);
    inst.ds.labels.resize(n);
    inst.bb.preds.resize(n);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < d; ++j) inst.ds.features(i, j) = normal(rng);
        inst.ds.labels(i) = label(rng);
        inst.bb.preds(i) = unit(rng) < 0.6 ? inst.ds.labels(i) : label(rng);
    }
    for (Index j = 0; j < d; ++j) inst.ds.feature_names.push_back("x" + std::to_string(j + 1));
    inst.ds.num_classes = k;
    inst.part = partition_indices(inst.ds.labels, inst.bb, k);
    inst.params = ModelParams::Zero(k, d);
    for (Index r = 0; r < k; ++r) {
        for (Index j = 0; j < d; ++j) inst.params.w(r, j) = normal(rng);
        inst.params.theta(r) = unit(rng);
    }
    return inst;
}

double gradcheck_instance(const GradcheckInstance& inst, PhiKind phi, double step) {
    const LossProblem<double> loss(inst.ds, inst.part, phi);
    const Gradient analytic = loss.gradient(inst.params);
    ModelParams probe = inst.params;
    double worst = 0.0;
    auto check = [&](double& coord, double exact) {
        const double saved = coord;
        coord = saved + step;
        const double up = loss.value(probe);
        coord = saved - step;
        const double down = loss.value(probe);
        coord = saved;
        const double fd = (up - down) / (2.0 * step);
        worst = std::max(worst, std::abs(exact - fd) / std::max({1.0, std::abs(exact), std::abs(fd)}));
    };
    for (Index r = 0; r < probe.w.rows(); ++r)
        for (Index j = 0; j < probe.w.cols(); ++j) check(probe.w(r, j), analytic.w(r, j));
    for (Index r = 0; r < probe.theta.size(); ++r) check(probe.theta(r), analytic.theta(r));
    return worst;
}

GradcheckReport run_gradcheck(const GradcheckConfig& cfg) {
    if (!is_smooth(cfg.phi)) throw NonSmoothError();
    GradcheckReport report;
    for (int t = 0; t < cfg.instances; ++t) {
        const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(t);
        const double err = gradcheck_instance(make_gradcheck_instance(seed, cfg.max_rows, cfg.max_dims), cfg.phi, cfg.step);
        if (t == 0 || err > report.max_rel_error) {
            report.max_rel_error = err;
            report.worst_seed = seed;
        }
        ++report.instances;
    }
    report.passed = report.max_rel_error <= cfg.tolerance;
    return report;
}

}  // namespace malc
