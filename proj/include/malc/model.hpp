#pragma once

#include "malc/loss.hpp"
#include "malc/types.hpp"

#include <filesystem>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace malc {

inline constexpr int kModelSchemaVersion = 1;
inline constexpr double kZeroTol = 1e-8;

enum class TieBreak { smallest_index };

std::string to_string(TieBreak rule);
TieBreak parse_tie_break(const std::string& name);

struct HybridModel {
    ModelParams params;
    std::vector<std::string> feature_names;
    std::optional<ScalingParams> scaling;
    std::optional<Index> bias_column;
    PhiKind phi = PhiKind::smooth_hinge;
    double c1 = 0.0;
    double c2 = 0.0;
    TieBreak tie_break = TieBreak::smallest_index;
    std::map<std::string, std::string> provenance;

    int num_classes() const { return static_cast<int>(params.num_classes()); }
    Index dims() const { return params.dims(); }
};

enum class Source { agent, blackbox };

struct PredictionOutcome {
    int label = 0;  // 0-based
    Source source = Source::blackbox;
    Eigen::VectorXd scores;   // w_k . x
    Eigen::VectorXd margins;  // score_k - max_{j != k} score_j
};

struct Metrics {
    double accuracy = 0.0;
    double transparency = 0.0;
    double accuracy_on_claimed = 0.0;   // 0 when nothing is claimed
    double accuracy_on_deferred = 0.0;  // 0 when nothing is deferred
    double avg_nonzeros = 0.0;
    Eigen::VectorXd per_class_claim_rate;  // share of rows claimed by each agent
    Index rows = 0;
    Index claimed = 0;
    Index claimed_correct = 0;
    Index deferred_correct = 0;
};

/// score_k = w_k . x for every class.
template <typename Scalar, typename Derived>
VectorX<Scalar> predict_scores(const ModelParamsT<Scalar>& params, const Eigen::MatrixBase<Derived>& x) {
    if (x.size() != params.dims())
        throw ShapeError("point has " + std::to_string(x.size()) + " features, model expects " +
                         std::to_string(params.dims()));
    return params.w * x.derived().template cast<Scalar>();
}

/// Margin of each class over its strongest competitor.
template <typename Derived>
VectorX<typename Derived::Scalar> class_margins(const Eigen::MatrixBase<Derived>& scores) {
    using Scalar = typename Derived::Scalar;
    const Index k = scores.size();
    VectorX<Scalar> m(k);
    for (Index c = 0; c < k; ++c) {
        Scalar best = -std::numeric_limits<Scalar>::infinity();
        for (Index j = 0; j < k; ++j)
            if (j != c) best = std::max(best, scores(j));
        m(c) = scores(c) - best;
    }
    return m;
}

/// Agent index that claims the point, or -1 when every agent abstains.
/// Claim k iff w_k.x - w_j.x >= theta_k for all j != k; ties go to the smallest index.
template <typename Scalar, typename Derived>
int claiming_agent(const ModelParamsT<Scalar>& params, const Eigen::MatrixBase<Derived>& scores) {
    const VectorX<Scalar> m = class_margins(scores);
    for (Index k = 0; k < m.size(); ++k)
        if (m(k) >= params.theta(k)) return static_cast<int>(k);
    return -1;
}

/// Number of agents whose claim condition holds (ignores the tie-break).
template <typename Scalar, typename Derived>
int claimant_count(const ModelParamsT<Scalar>& params, const Eigen::MatrixBase<Derived>& scores) {
    const VectorX<Scalar> m = class_margins(scores);
    return static_cast<int>((m.array() >= params.theta.array()).count());
}

/// `x` must already be in the model's feature space (scaled, bias appended).
PredictionOutcome predict_hybrid(const HybridModel& model, const Eigen::Ref<const Eigen::VectorXd>& x, int bb_label);

/// Claiming agent per row (-1 = deferred) for a batch already in model space.
Eigen::VectorXi claim_rows(const ModelParams& params, const Eigen::Ref<const Eigen::MatrixXd>& features);

double transparency(const HybridModel& model, const Eigen::Ref<const Eigen::MatrixXd>& features);

/// Count of |w_kj| > kZeroTol divided by K.
double avg_nonzeros(const ModelParams& params, double zero_tol = kZeroTol);

Metrics evaluate(const HybridModel& model, const Dataset& ds, const BlackboxPredictions& bb);
Metrics evaluate(const ModelParams& params, const Dataset& ds, const BlackboxPredictions& bb);

/// Maps raw input rows into the model's training feature space.
Dataset prepare_features(const HybridModel& model, const Dataset& raw);

void save_model(const HybridModel& model, const std::filesystem::path& path);
HybridModel load_model(const std::filesystem::path& path);
std::string model_to_json(const HybridModel& model);
HybridModel model_from_json(const std::string& text);

}  // namespace malc
