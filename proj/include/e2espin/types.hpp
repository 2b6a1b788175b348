#pragma once

#include <complex>

#include <Eigen/Dense>

namespace e2espin {

using Complex = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kSqrt2 = 1.414213562373095048801688724209698079;

} // namespace e2espin
