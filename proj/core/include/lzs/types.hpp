#pragma once

#include <complex>
#include <Eigen/Dense>

namespace lzs {

using cx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RealVec = Eigen::VectorXd;
using RealMat = Eigen::MatrixXd;

inline constexpr double pi = 3.14159265358979323846;

inline constexpr const char* version_string = "1.0.0";

}  // namespace lzs
