#pragma once

#include "malc/types.hpp"

#include <cstdint>

namespace malc {

struct BlobConfig {
    int blobs = 3;
    Index n = 3000;
    Index d = 2;
    double separation = 4.0;  // pairwise distance between blob centres
    std::uint64_t seed = 0;
};

/// Centres of `blobs` points at equal pairwise distance, centred on the origin, in R^d.
/// Needs d >= blobs - 1.
Eigen::MatrixXd simplex_centres(int blobs, Index d, double separation);

/// Unit-variance gaussian blobs; row i belongs to blob i mod blobs.
Dataset make_blobs(const BlobConfig& cfg);

}  // namespace malc
