#pragma once

#include <complex>

#include <Eigen/Dense>

namespace polarisac {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// Polarization combiners are stored column-wise: column m is the unit 2-vector of element m.
using PolarizationSet = Eigen::Matrix<double, 2, Eigen::Dynamic>;

inline double DbToLinear(double db) { return std::pow(10.0, db / 10.0); }
inline double LinearToDb(double linear) { return 10.0 * std::log10(linear); }
/// dBm to watts.
inline double DbmToWatts(double dbm) { return DbToLinear(dbm - 30.0); }

}  // namespace polarisac
