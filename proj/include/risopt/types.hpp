#pragma once

#include <complex>

#include <Eigen/Dense>

namespace risopt {

using Complex = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;

}  // namespace risopt
