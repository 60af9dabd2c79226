#pragma once

#include "malc/types.hpp"

#include <cmath>
#include <optional>
#include <string>

namespace malc {

enum class PhiKind { hinge, smooth_hinge, logistic };

PhiKind parse_phi(const std::string& name);
std::string to_string(PhiKind kind);

inline bool is_smooth(PhiKind kind) { return kind != PhiKind::hinge; }

/// Margin loss: hinge (1-z)+, smooth hinge (1-z)+^2/2, logistic log(1+e^-z).
template <typename Scalar>
Scalar phi_eval(PhiKind kind, Scalar z) {
    using std::exp;
    using std::log1p;
    const Scalar slack = Scalar(1) - z;
    switch (kind) {
        case PhiKind::hinge:
            return slack > 0 ? slack : Scalar(0);
        case PhiKind::smooth_hinge:
            return slack > 0 ? Scalar(0.5) * slack * slack : Scalar(0);
        case PhiKind::logistic:
            // log(1 + e^-z) = max(-z, 0) + log1p(e^-|z|)
            return (z < 0 ? -z : Scalar(0)) + log1p(exp(-(z < 0 ? -z : z)));
    }
    return Scalar(0);
}

template <typename Scalar>
Scalar phi_grad(PhiKind kind, Scalar z) {
    using std::exp;
    switch (kind) {
        case PhiKind::hinge:
            throw NonSmoothError();
        case PhiKind::smooth_hinge:
            return z < 1 ? z - Scalar(1) : Scalar(0);
        case PhiKind::logistic:
            if (z >= 0) {
                const Scalar e = exp(-z);
                return -e / (Scalar(1) + e);
            }
            return Scalar(-1) / (Scalar(1) + exp(z));
    }
    return Scalar(0);
}

/// Upper bound on phi''; used to size safe fixed steps.
inline double phi_curvature_bound(PhiKind kind) { return kind == PhiKind::logistic ? 0.25 : 1.0; }

struct ObjectiveConfig {
    double c1 = 0.0;  // weight on sum(theta)
    double c2 = 0.0;  // weight on ||w||_1
    PhiKind phi = PhiKind::smooth_hinge;
    bool penalize_bias = false;
    // Intercept column excluded from the L1 term unless penalize_bias is set.
    std::optional<Index> bias_column;
    // Hold theta at zero (pure one-vs-all fit).
    bool fix_theta_zero = false;

    void validate() const {
        if (!(c1 >= 0.0) || !(c2 >= 0.0)) throw Error("c1 and c2 must be nonnegative");
    }
};

/// Dataset laid out for evaluating the two-branch loss with dense matrix products.
///
/// Row i with label k contributes, for every j != k, phi(s_ik - s_ij + theta_j) when the
/// black-box gets it right and phi(s_ik - s_ij - theta_k) when it does not, where
/// s = X w^T. Everything is divided by n.
template <typename Scalar>
class LossProblem {
   public:
    LossProblem(const Dataset& ds, const ClassPartition& part, PhiKind phi)
        : features_(ds.features.template cast<Scalar>()),
          labels_(ds.labels),
          classes_(static_cast<Index>(part.pos.size())),
          phi_(phi) {
        const Index n = features_.rows();
        if (n == 0) throw ShapeError("empty dataset");
        if (labels_.size() != n) throw ShapeError("labels not aligned with features");
        if (classes_ < 2) throw ShapeError("need at least two classes");
        if (static_cast<Index>(part.neg.size()) != classes_) throw ShapeError("partition pos/neg class count mismatch");
        own_.setZero(n, classes_);
        correct_.setZero(n);
        Index covered = 0;
        for (Index k = 0; k < classes_; ++k) {
            for (Index i : part.pos[static_cast<std::size_t>(k)]) {
                check_row(i, k);
                correct_(i) = Scalar(1);
                own_(i, k) = Scalar(1);
                ++covered;
            }
            for (Index i : part.neg[static_cast<std::size_t>(k)]) {
                check_row(i, k);
                own_(i, k) = Scalar(1);
                ++covered;
            }
        }
        if (covered != n || (own_.rowwise().sum().array() != Scalar(1)).any())
            throw ShapeError("partition does not cover every row exactly once");
        others_ = MatrixX<Scalar>::Ones(n, classes_) - own_;
    }

    Index rows() const { return features_.rows(); }
    Index dims() const { return features_.cols(); }
    Index classes() const { return classes_; }
    PhiKind phi() const { return phi_; }
    const MatrixX<Scalar>& features() const { return features_; }
    const Labels& labels() const { return labels_; }

    /// Margin of every (row, competitor) term; own-class entries are meaningless and masked.
    MatrixX<Scalar> margins(const ModelParamsT<Scalar>& p) const {
        check_shape(p);
        const MatrixX<Scalar> scores = features_ * p.w.transpose();
        const VectorX<Scalar> own_score = (scores.array() * own_.array()).rowwise().sum();
        const VectorX<Scalar> own_theta = own_ * p.theta;
        // correct rows: + theta_j ; wrong rows: - theta_k
        const VectorX<Scalar> wrong = VectorX<Scalar>::Ones(rows()) - correct_;
        MatrixX<Scalar> z = (-scores).colwise() + (own_score - wrong.cwiseProduct(own_theta));
        z.noalias() += correct_ * p.theta.transpose();
        return z;
    }

    Scalar value(const ModelParamsT<Scalar>& p) const {
        const MatrixX<Scalar> z = margins(p);
        Scalar total(0);
        for (Index j = 0; j < classes_; ++j)
            for (Index i = 0; i < rows(); ++i)
                if (others_(i, j) != Scalar(0)) total += phi_eval(phi_, z(i, j));
        return total / Scalar(rows());
    }

    Scalar value_and_gradient(const ModelParamsT<Scalar>& p, GradientT<Scalar>& grad) const {
        if (!is_smooth(phi_)) throw NonSmoothError();
        const MatrixX<Scalar> z = margins(p);
        const Scalar inv_n = Scalar(1) / Scalar(rows());
        MatrixX<Scalar> g(rows(), classes_);
        Scalar total(0);
        for (Index j = 0; j < classes_; ++j)
            for (Index i = 0; i < rows(); ++i) {
                if (others_(i, j) != Scalar(0)) {
                    total += phi_eval(phi_, z(i, j));
                    g(i, j) = phi_grad(phi_, z(i, j)) * inv_n;
                } else {
                    g(i, j) = Scalar(0);
                }
            }
        const VectorX<Scalar> row_sum = g.rowwise().sum();
        // d/ds_ik collects +g for every competitor; d/ds_ij gets -g.
        const MatrixX<Scalar> d_scores = own_.array().colwise() * row_sum.array() - g.array();
        grad.w.noalias() = d_scores.transpose() * features_;
        const VectorX<Scalar> wrong = VectorX<Scalar>::Ones(rows()) - correct_;
        grad.theta.noalias() = g.transpose() * correct_;
        grad.theta.noalias() -= own_.transpose() * wrong.cwiseProduct(row_sum);
        return total * inv_n;
    }

    GradientT<Scalar> gradient(const ModelParamsT<Scalar>& p) const {
        GradientT<Scalar> grad;
        value_and_gradient(p, grad);
        return grad;
    }

    void check_shape(const ModelParamsT<Scalar>& p) const {
        if (p.w.rows() != classes_ || p.w.cols() != dims() || p.theta.size() != classes_)
            throw ShapeError("parameters are " + std::to_string(p.w.rows()) + "x" + std::to_string(p.w.cols()) +
                             " / " + std::to_string(p.theta.size()) + ", problem expects " +
                             std::to_string(classes_) + "x" + std::to_string(dims()) + " / " +
                             std::to_string(classes_));
    }

   private:
    void check_row(Index i, Index k) const {
        if (i < 0 || i >= rows()) throw ShapeError("partition index out of range");
        if (labels_(i) != k) throw ShapeError("partition places row " + std::to_string(i) + " under the wrong class");
    }

    MatrixX<Scalar> features_;
    Labels labels_;
    Index classes_;
    PhiKind phi_;
    MatrixX<Scalar> own_;      // one-hot of the true label
    MatrixX<Scalar> others_;   // 1 - own_
    VectorX<Scalar> correct_;  // 1 where the black-box agrees with the label
};

template <typename Scalar>
Scalar loss_eval(const ModelParamsT<Scalar>& params, const Dataset& ds, const ClassPartition& part, PhiKind phi) {
    return LossProblem<Scalar>(ds, part, phi).value(params);
}

template <typename Scalar>
GradientT<Scalar> loss_grad(const ModelParamsT<Scalar>& params, const Dataset& ds, const ClassPartition& part,
                            PhiKind phi) {
    if (!is_smooth(phi)) throw NonSmoothError();
    return LossProblem<Scalar>(ds, part, phi).gradient(params);
}

/// c1 * sum(theta) + c2 * ||w||_1 with the bias column skipped unless penalized.
template <typename Scalar>
Scalar penalty_eval(const ModelParamsT<Scalar>& params, const ObjectiveConfig& cfg) {
    Scalar l1 = params.w.cwiseAbs().sum();
    if (cfg.bias_column && !cfg.penalize_bias && *cfg.bias_column < params.w.cols())
        l1 -= params.w.col(*cfg.bias_column).cwiseAbs().sum();
    return Scalar(cfg.c1) * params.theta.sum() + Scalar(cfg.c2) * l1;
}

template <typename Scalar>
Scalar objective_eval(const LossProblem<Scalar>& problem, const ModelParamsT<Scalar>& params,
                      const ObjectiveConfig& cfg) {
    if (params.theta.size() > 0 && params.theta.minCoeff() < Scalar(0))
        throw Error("objective requires theta >= 0");
    return problem.value(params) + penalty_eval(params, cfg);
}

template <typename Scalar>
Scalar objective_eval(const ModelParamsT<Scalar>& params, const Dataset& ds, const ClassPartition& part,
                      const ObjectiveConfig& cfg) {
    return objective_eval(LossProblem<Scalar>(ds, part, cfg.phi), params, cfg);
}

}  // namespace malc
