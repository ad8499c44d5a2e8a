#pragma once

#include <complex>

#include <Eigen/Dense>

namespace fcoord {

using Complex = std::complex<double>;

using RealVector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;

inline constexpr double kPi = 3.14159265358979323846;

}  // namespace fcoord
