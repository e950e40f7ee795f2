#pragma once

#include <Eigen/Core>

namespace azlab {

/// Largest state dimension supported. Vectors and matrices use fixed-capacity
/// storage up to this size so iteration never touches the heap.
inline constexpr int kMaxDim = 8;

using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, kMaxDim, kMaxDim>;

inline constexpr double kPi = 3.14159265358979323846;

/// (1 + sqrt 5) / 2
inline constexpr double kGoldenMean = 1.61803398874989484820;

/// Euler's number.
inline constexpr double kEuler = 2.71828182845904523536;

inline bool all_finite(const Vec& x) { return x.allFinite(); }

}  // namespace azlab
