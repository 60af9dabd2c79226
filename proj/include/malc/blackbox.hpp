#pragma once

#include "malc/types.hpp"

#include <cstdint>

namespace malc {

/// Brute-force euclidean k-nearest-neighbour classifier.
struct KnnModel {
    Eigen::MatrixXd features;
    Labels labels;
    int num_classes = 0;
    Index k = 1;
};

KnnModel knn_fit(const Dataset& ds, Index k);

/// Majority label among the k nearest rows. Distance ties go to the lower row index,
/// vote ties to the smaller class id.
int knn_predict(const KnnModel& model, const Eigen::Ref<const Eigen::VectorXd>& x);
BlackboxPredictions knn_predict_batch(const KnnModel& model, const Eigen::Ref<const Eigen::MatrixXd>& features);

struct NoisyOracleConfig {
    double error_rate = 0.1;
    std::uint64_t seed = 0;
};

/// Each label flips with probability error_rate to a uniformly chosen different class.
BlackboxPredictions noisy_oracle(const Labels& labels, int num_classes, const NoisyOracleConfig& cfg);

}  // namespace malc
