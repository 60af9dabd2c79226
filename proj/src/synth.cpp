#include "malc/synth.hpp"

#include <Eigen/Eigenvalues>

#include <random>

namespace malc {

Eigen::MatrixXd simplex_centres(int blobs, Index d, double separation) {
    if (blobs < 2) throw Error("need at least two blobs");
    if (d < blobs - 1)
        throw Error(std::to_string(blobs) + " equidistant blobs need d >= " + std::to_string(blobs - 1));
    // Scaled basis vectors are pairwise `separation` apart; centre them and take
    // coordinates in the (blobs-1)-dimensional span from the Gram matrix.
    const Eigen::MatrixXd basis = (separation / std::sqrt(2.0)) *
        (Eigen::MatrixXd::Identity(blobs, blobs) - Eigen::MatrixXd::Constant(blobs, blobs, 1.0 / blobs));
    const Eigen::MatrixXd gram = basis * basis.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
    Eigen::MatrixXd centres = Eigen::MatrixXd::Zero(blobs, d);
    // Eigenvalues ascend; the smallest is the null direction along the all-ones vector.
    for (int c = 0; c < blobs - 1; ++c) {
        const Index src = blobs - 1 - c;
        const double lambda = std::max(eig.eigenvalues()(src), 0.0);
        Eigen::VectorXd col = eig.eigenvectors().col(src) * std::sqrt(lambda);
        // Fix the eigenvector sign so output does not depend on the solver's choice.
        Index pivot = 0;
        col.cwiseAbs().maxCoeff(&pivot);
        if (col(pivot) < 0) col = -col;
        centres.col(c) = col;
    }
    return centres;
}

Dataset make_blobs(const BlobConfig& cfg) {
    if (cfg.n < cfg.blobs) throw Error("n must be at least the number of blobs");
    if (cfg.d < 1) throw Error("d must be >= 1");
    if (!(cfg.separation >= 0.0)) throw Error("separation must be nonnegative");
    const Eigen::MatrixXd centres = simplex_centres(cfg.blobs, cfg.d, cfg.separation);
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> noise(0.0, 1.0);
    Dataset ds;
    ds.features.resize(cfg.n, cfg.d);
    ds.labels.resize(cfg.n);
    for (Index i = 0; i < cfg.n; ++i) {
        const int k = static_cast<int>(i % cfg.blobs);
        ds.labels(i) = k;
        for (Index j = 0; j < cfg.d; ++j) ds.features(i, j) = centres(k, j) + noise(rng);
    }
    for (Index j = 0; j < cfg.d; ++j) ds.feature_names.push_back("x" + std::to_string(j + 1));
    ds.num_classes = cfg.blobs;
    return ds;
}

}  // namespace malc
