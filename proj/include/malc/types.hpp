#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace malc {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Index = Eigen::Index;
using Labels = Eigen::VectorXi;  // 0-based class ids internally

/// Base for every error raised by the library.
class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Malformed input file; carries the offending line when known (1-based, 0 = n/a).
class ParseError : public Error {
   public:
    ParseError(const std::string& what, std::size_t line = 0)
        : Error(line ? what + " (line " + std::to_string(line) + ")" : what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

   private:
    std::size_t line_;
};

class ShapeError : public Error {
    using Error::Error;
};

class NonSmoothError : public Error {
   public:
    NonSmoothError() : Error("non-smooth phi not trainable") {}
};

class DivergenceError : public Error {
    using Error::Error;
};

/// Feature matrix plus labels. Labels are 0-based here; files use {1..K}.
struct Dataset {
    Eigen::MatrixXd features;  // n x d
    Labels labels;             // length n, values in [0, K)
    std::vector<std::string> feature_names;
    int num_classes = 0;
    // Column holding the constant-1 intercept feature, when one was appended.
    std::optional<Index> bias_column;

    Index rows() const { return features.rows(); }
    Index dims() const { return features.cols(); }
};

/// Black-box predictions, 0-based, row-aligned with a Dataset.
struct BlackboxPredictions {
    Labels preds;
    Index size() const { return preds.size(); }
};

/// Rows split by class and by whether the black-box gets them right.
struct ClassPartition {
    std::vector<std::vector<Index>> pos;  // label k, black-box says k
    std::vector<std::vector<Index>> neg;  // label k, black-box says something else
};

struct ScalingParams {
    Eigen::VectorXd min;
    Eigen::VectorXd max;
};

/// Optimization variable: one linear agent per row of `w` plus per-class thresholds.
template <typename Scalar>
struct ModelParamsT {
    MatrixX<Scalar> w;      // K x d
    VectorX<Scalar> theta;  // K

    ModelParamsT() = default;
    ModelParamsT(MatrixX<Scalar> w_, VectorX<Scalar> theta_) : w(std::move(w_)), theta(std::move(theta_)) {}

    static ModelParamsT Zero(Index k, Index d) { return {MatrixX<Scalar>::Zero(k, d), VectorX<Scalar>::Zero(k)}; }

    Index num_classes() const { return w.rows(); }
    Index dims() const { return w.cols(); }

    ModelParamsT& operator+=(const ModelParamsT& o) {
        w += o.w;
        theta += o.theta;
        return *this;
    }
    ModelParamsT& operator-=(const ModelParamsT& o) {
        w -= o.w;
        theta -= o.theta;
        return *this;
    }
    ModelParamsT& operator*=(Scalar s) {
        w *= s;
        theta *= s;
        return *this;
    }
    friend ModelParamsT operator+(ModelParamsT a, const ModelParamsT& b) { return a += b; }
    friend ModelParamsT operator-(ModelParamsT a, const ModelParamsT& b) { return a -= b; }
    friend ModelParamsT operator*(Scalar s, ModelParamsT a) { return a *= s; }

    Scalar dot(const ModelParamsT& o) const { return (w.array() * o.w.array()).sum() + theta.dot(o.theta); }
    Scalar squared_norm() const { return w.squaredNorm() + theta.squaredNorm(); }

    template <typename Other>
    ModelParamsT<Other> cast() const {
        return {w.template cast<Other>(), theta.template cast<Other>()};
    }
};

using ModelParams = ModelParamsT<double>;

/// Same layout as ModelParams; kept as a distinct name where a gradient is meant.
template <typename Scalar>
using GradientT = ModelParamsT<Scalar>;
using Gradient = GradientT<double>;

}  // namespace malc
