#pragma once

#include "malc/loss.hpp"
#include "malc/types.hpp"

#include <cstdint>

namespace malc {

struct GradcheckConfig {
    PhiKind phi = PhiKind::smooth_hinge;
    int instances = 100;
    Index max_rows = 20;
    Index max_dims = 5;
    double step = 1e-5;       // central difference step
    double tolerance = 1e-5;  // on the per-coordinate relative error
    std::uint64_t seed = 1;
};

struct GradcheckReport {
    double max_rel_error = 0.0;
    std::uint64_t worst_seed = 0;  // instance seed with the largest error
    int instances = 0;
    bool passed = false;
};

/// Random loss instance drawn from `seed`: n <= max_rows, d <= max_dims, K in {2,3,5}.
struct GradcheckInstance {
    Dataset ds;
    BlackboxPredictions bb;
    ClassPartition part;
    ModelParams params;
};
GradcheckInstance make_gradcheck_instance(std::uint64_t seed, Index max_rows, Index max_dims);

/// |analytic - fd| / max(1, |analytic|, |fd|), maximised over coordinates.
double gradcheck_instance(const GradcheckInstance& inst, PhiKind phi, double step);

/// Compares the analytic loss gradient with central finite differences.
GradcheckReport run_gradcheck(const GradcheckConfig& cfg);

}  // namespace malc
