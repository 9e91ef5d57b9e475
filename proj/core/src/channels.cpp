// Copyright 2026 The nmrshor Authors
// SPDX-License-Identifier: Apache-2.0
#include "nmrshor/channels.hpp"

#include <cmath>
#include <stdexcept>

#include "nmrshor/spinsys.hpp"

namespace nmrshor {

double gad_p(double larmor_hz, double temperature_k) {
  if (temperature_k <= 0.0) throw std::invalid_argument("gad_p: temperature must be positive");
  const double omega = 2.0 * kPi * larmor_hz;
  return 0.5 + kHbarJs * omega / (4.0 * kBoltzmannJperK * temperature_k);
}

KrausSet gad_kraus(double t, double t1, double p) {
  if (t < 0.0) throw std::invalid_argument("gad_kraus: negative time");
  if (t1 <= 0.0) throw std::invalid_argument("gad_kraus: t1 must be positive");
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("gad_kraus: p out of [0, 1]");
  const double gamma = 1.0 - std::exp(-t / t1);
  const double sp = std::sqrt(p), sq = std::sqrt(1.0 - p);
  const double sg = std::sqrt(gamma), s1g = std::sqrt(1.0 - gamma);
  KrausSet k;
  k.duration_s = t;
  k.ops.resize(4, Mat2::Zero());
  k.ops[0](0, 0) = sp;
  k.ops[0](1, 1) = sp * s1g;
  k.ops[1](0, 1) = sp * sg;
  k.ops[2](0, 0) = sq * s1g;
  k.ops[2](1, 1) = sq;
  k.ops[3](1, 0) = sq * sg;
  return k;
}

KrausSet pd_kraus(double t, double t2) {
  if (t < 0.0) throw std::invalid_argument("pd_kraus: negative time");
  if (t2 <= 0.0) throw std::invalid_argument("pd_kraus: t2 must be positive");
  const double lambda = (1.0 + std::exp(-t / t2)) / 2.0;
  KrausSet k;
  k.duration_s = t;
  k.ops.resize(2, Mat2::Zero());
  k.ops[0](0, 0) = std::sqrt(lambda);
  k.ops[0](1, 1) = std::sqrt(lambda);
  k.ops[1](0, 0) = std::sqrt(1.0 - lambda);
  k.ops[1](1, 1) = -std::sqrt(1.0 - lambda);
  return k;
}

Mat apply_channel_on_spin(const Mat& rho, const KrausSet& k, int spin) {
  if (rho.rows() != rho.cols() || rho.rows() < 2)
    throw std::invalid_argument("apply_channel_on_spin: dimension mismatch");
  int n_spins = 0;
  while ((Eigen::Index{1} << n_spins) < rho.rows()) ++n_spins;
  if ((Eigen::Index{1} << n_spins) != rho.rows())
    throw std::invalid_argument("apply_channel_on_spin: dimension mismatch");
  Mat out = Mat::Zero(rho.rows(), rho.cols());
  for (const Mat2& e : k.ops) {
    Mat term = rho;
    apply_single_spin_unitary(term, e, spin, n_spins);  // E rho E^dag (E need not be unitary)
    out += term;
  }
  return out;
}

namespace {

// Fused generalized amplitude damping on one spin: populations within the
// spin's (0,0)/(1,1) blocks mix pairwise, coherences scale by sqrt(1-gamma).
void gad_on_spin(Mat& rho, int spin, int n_spins, double gamma, double p) {
  const int dim = dim_for(n_spins);
  const int m = spin_mask(spin, n_spins);
  const double c00 = p + (1.0 - p) * (1.0 - gamma);   // weight of old 00 block in new 00
  const double c01 = p * gamma;                       // weight of old 11 block in new 00
  const double c10 = (1.0 - p) * gamma;               // weight of old 00 block in new 11
  const double c11 = (1.0 - p) + p * (1.0 - gamma);   // weight of old 11 block in new 11
  const double coh = std::sqrt(1.0 - gamma);
  for (int a = 0; a < dim; ++a) {
    const bool a1 = (a & m) != 0;
    for (int b = 0; b < dim; ++b) {
      const bool b1 = (b & m) != 0;
      if (a1 != b1) {
        rho(a, b) *= coh;
      } else if (!a1) {  // handle each 00/11 pair once, from its 00 member
        const Complex x = rho(a, b), y = rho(a | m, b | m);
        rho(a, b) = c00 * x + c01 * y;
        rho(a | m, b | m) = c10 * x + c11 * y;
      }
    }
  }
}

}  // namespace

void relaxation_step_inplace(Mat& rho, const MoleculeSpec& mol, double t) {
  if (t < 0.0) throw std::invalid_argument("relaxation_step: negative time");
  if (t == 0.0) return;
  const int n = mol.n_spins;
  for (int s = 1; s <= n; ++s) {
    const double gamma = 1.0 - std::exp(-t / mol.t1_s[s - 1]);
    const double p = gad_p(mol.larmor_hz[s - 1], mol.temperature_k);
    gad_on_spin(rho, s, n, gamma, p);
  }
  // Phase damping on every spin: element (a,b) shrinks by exp(-t/T2_j) for
  // each spin j whose bits differ between a and b.  One pass over rho.
  const int dim = dim_for(n);
  std::vector<double> decay(static_cast<size_t>(dim), 1.0);
  for (int x = 1; x < dim; ++x) {
    double f = 1.0;
    for (int s = 1; s <= n; ++s)
      if (x & spin_mask(s, n)) f *= std::exp(-t / mol.t2_s[s - 1]);
    decay[static_cast<size_t>(x)] = f;
  }
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b) rho(a, b) *= decay[static_cast<size_t>(a ^ b)];
}

Mat relaxation_step(const Mat& rho, const MoleculeSpec& mol, double t) {
  Mat out = rho;
  relaxation_step_inplace(out, mol, t);
  return out;
}

void simulate_delay_inplace(Mat& rho, const MoleculeSpec& mol, const RVec& h, double t) {
  free_evolution_inplace(rho, h, t);
  relaxation_step_inplace(rho, mol, t);
}

Mat simulate_delay(const Mat& rho, const MoleculeSpec& mol, const RVec& h, double t) {
  Mat out = rho;
  simulate_delay_inplace(out, mol, h, t);
  return out;
}

Mat simulate_pulse(const Mat& rho, const MoleculeSpec& mol, int spin, double angle_deg,
                   double axis_deg, double duration_s) {
  Mat out = rho;
  if (duration_s > 0.0) {
    // During the pulse the couplings are neglected: chemical shifts only.
    const RVec h0 = build_h0(mol);
    free_evolution_inplace(out, h0, duration_s);
    relaxation_step_inplace(out, mol, duration_s);
  } else if (duration_s < 0.0) {
    throw std::invalid_argument("simulate_pulse: negative duration");
  }
  apply_single_spin_unitary(out, rotation2(angle_deg, axis_deg), spin, mol.n_spins);
  return out;
}

}  // namespace nmrshor
