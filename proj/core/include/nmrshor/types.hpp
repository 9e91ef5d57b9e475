// Copyright 2026 The nmrshor Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>

#include <Eigen/Dense>

namespace nmrshor {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Mat2 = Eigen::Matrix2cd;
using Vec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kDegToRad = kPi / 180.0;

// CODATA 2018 exact values.
inline constexpr double kHbarJs = 1.054571817e-34;     // reduced Planck constant, J*s
inline constexpr double kBoltzmannJperK = 1.380649e-23; // Boltzmann constant, J/K

inline constexpr Complex kI{0.0, 1.0};

}  // namespace nmrshor
