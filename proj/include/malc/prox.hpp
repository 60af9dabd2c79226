#pragma once

#include "malc/types.hpp"

#include <optional>

namespace malc {

/// Soft-thresholding: prox of step*c2*||.||_1. An unpenalized column passes through.
template <typename Derived>
MatrixX<typename Derived::Scalar> prox_w(const Eigen::MatrixBase<Derived>& v, typename Derived::Scalar step,
                                         typename Derived::Scalar c2, bool penalize_bias = true,
                                         std::optional<Index> bias_column = std::nullopt) {
    using Scalar = typename Derived::Scalar;
    const Scalar tau = step * c2;
    MatrixX<Scalar> out = (v.array().abs() - tau).max(Scalar(0)) * v.array().sign();
    if (!penalize_bias && bias_column && *bias_column < v.cols()) out.col(*bias_column) = v.col(*bias_column);
    return out;
}

/// Prox of step*c1*sum(theta) plus the indicator of theta >= 0.
template <typename Derived>
VectorX<typename Derived::Scalar> prox_theta(const Eigen::MatrixBase<Derived>& v, typename Derived::Scalar step,
                                             typename Derived::Scalar c1) {
    using Scalar = typename Derived::Scalar;
    return (v.array() - step * c1).max(Scalar(0)).matrix();
}

}  // namespace malc
