#pragma once

#include <Eigen/Dense>

#include <cstdint>

namespace osaplan {

/// Scalar type used throughout. Probabilities, rewards and values are doubles.
using Scalar = double;
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Tolerance applied by every probability-normalization and consistency check.
inline constexpr Scalar kProbTol = 1e-9;

}  // namespace osaplan
