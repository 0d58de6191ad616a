#pragma once

#include <complex>
#include <cstdint>

#include <Eigen/Dense>

namespace gramint {

using cdouble = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr double kPi = 3.14159265358979323846;

}  // namespace gramint
