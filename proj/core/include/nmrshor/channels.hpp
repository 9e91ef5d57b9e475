// Copyright 2026 The nmrshor Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "nmrshor/molecule.hpp"
#include "nmrshor/types.hpp"

namespace nmrshor {

// One single-spin channel in operator-sum form: rho -> sum_k E_k rho E_k^dag.
struct KrausSet {
  std::vector<Mat2> ops;
  double duration_s = 0.0;
};

// Thermal polarization parameter entering generalized amplitude damping:
// p = 1/2 + hbar*omega / (4 kB T), omega = 2*pi*larmor_hz.
double gad_p(double larmor_hz, double temperature_k);

// Generalized amplitude damping (T1).  gamma = 1 - exp(-t/t1);
//   E0 = sqrt(p)   [[1, 0], [0, sqrt(1-gamma)]]
//   E1 = sqrt(p)   [[0, sqrt(gamma)], [0, 0]]
//   E2 = sqrt(1-p) [[sqrt(1-gamma), 0], [0, 1]]
//   E3 = sqrt(1-p) [[0, 0], [sqrt(gamma), 0]]
// Fixed point diag(p, 1-p).  Requires t >= 0, t1 > 0, 0 <= p <= 1.
KrausSet gad_kraus(double t, double t1, double p);

// Phase damping (T2).  lambda = (1 + exp(-t/t2))/2;
//   E0 = sqrt(lambda) I,   E1 = sqrt(1-lambda) diag(1, -1)
// so off-diagonals shrink by exactly 2*lambda - 1 = exp(-t/t2).
KrausSet pd_kraus(double t, double t2);

// rho -> sum_k (I x E_k x I) rho (I x E_k x I)^dag on one spin (1-based).
// The spin count is inferred from the dimension of rho.
Mat apply_channel_on_spin(const Mat& rho, const KrausSet& k, int spin);

// Serial GAD on spins 1..n then PD on spins 1..n, each for duration t, with
// per-spin p from larmor_hz[i] and the sample temperature.  Uses a fused
// per-spin elementwise update that is algebraically identical to the
// operator-sum form above (asserted by tests).
void relaxation_step_inplace(Mat& rho, const MoleculeSpec& mol, double t);
Mat relaxation_step(const Mat& rho, const MoleculeSpec& mol, double t);

// Free evolution exp(-i h t) under the full diagonal Hamiltonian, then
// relaxation_step: the serialized decoherence model for a delay.
Mat simulate_delay(const Mat& rho, const MoleculeSpec& mol, const RVec& h, double t);
void simulate_delay_inplace(Mat& rho, const MoleculeSpec& mol, const RVec& h, double t);

// A shaped pulse of duration t_p modeled as: evolution under H0 only (no J)
// for t_p, relaxation_step for t_p, then the exact instantaneous rotation on
// `spin` by angle_deg about the in-plane axis at azimuth axis_deg.
Mat simulate_pulse(const Mat& rho, const MoleculeSpec& mol, int spin, double angle_deg,
                   double axis_deg, double duration_s);

}  // namespace nmrshor
