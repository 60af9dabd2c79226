#include "malc/blackbox.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

namespace malc {

KnnModel knn_fit(const Dataset& ds, Index k) {
    if (k < 1 || k > ds.rows())
        throw Error("k = " + std::to_string(k) + " outside [1, " + std::to_string(ds.rows()) + "]");
    return {ds.features, ds.labels, ds.num_classes, k};
}

int knn_predict(const KnnModel& model, const Eigen::Ref<const Eigen::VectorXd>& x) {
    if (x.size() != model.features.cols())
        throw ShapeError("query has " + std::to_string(x.size()) + " features, model has " +
                         std::to_string(model.features.cols()));
    const Eigen::VectorXd dist = (model.features.rowwise() - x.transpose()).rowwise().squaredNorm();
    std::vector<Index> order(static_cast<std::size_t>(dist.size()));
    std::iota(order.begin(), order.end(), Index{0});
    const auto kth = order.begin() + model.k;
    std::partial_sort(order.begin(), kth, order.end(), [&](Index a, Index b) {
        return dist(a) < dist(b) || (dist(a) == dist(b) && a < b);
    });
    std::vector<int> votes(static_cast<std::size_t>(model.num_classes), 0);
    for (auto it = order.begin(); it != kth; ++it) ++votes[static_cast<std::size_t>(model.labels(*it))];
    return static_cast<int>(std::max_element(votes.begin(), votes.end()) - votes.begin());
}

BlackboxPredictions knn_predict_batch(const KnnModel& model, const Eigen::Ref<const Eigen::MatrixXd>& features) {
    BlackboxPredictions out;
    out.preds.resize(features.rows());
    for (Index i = 0; i < features.rows(); ++i) out.preds(i) = knn_predict(model, features.row(i).transpose());
    return out;
}

BlackboxPredictions noisy_oracle(const Labels& labels, int num_classes, const NoisyOracleConfig& cfg) {
    if (num_classes < 2) throw Error("noisy oracle needs at least two classes");
    if (!(cfg.error_rate >= 0.0 && cfg.error_rate <= 1.0)) throw Error("error_rate must lie in [0, 1]");
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::uniform_int_distribution<int> other(0, num_classes - 2);
    BlackboxPredictions out{labels};
    for (Index i = 0; i < labels.size(); ++i) {
        // Draw both every row so the stream does not depend on earlier outcomes.
        const bool flip = coin(rng) < cfg.error_rate;
        int alt = other(rng);
        if (flip) out.preds(i) = alt >= labels(i) ? alt + 1 : alt;
    }
    return out;
}

}  // namespace malc
