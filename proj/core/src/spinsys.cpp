// Copyright 2026 The nmrshor Authors
// SPDX-License-Identifier: Apache-2.0
#include "nmrshor/spinsys.hpp"

#include <cmath>
#include <stdexcept>

namespace nmrshor {

namespace {

void check_spin(int spin, int n_spins) {
  if (spin < 1 || spin > n_spins)
    throw std::invalid_argument("spin index " + std::to_string(spin) + " outside 1.." +
                                std::to_string(n_spins));
}

}  // namespace

Mat embed_single_spin(const Mat2& op, int spin, int n_spins) {
  check_spin(spin, n_spins);
  const int dim = dim_for(n_spins);
  const int m = spin_mask(spin, n_spins);
  Mat out = Mat::Zero(dim, dim);
  for (int a = 0; a < dim; ++a) {
    const int ab = (a & m) ? 1 : 0;
    for (int bb = 0; bb < 2; ++bb) {
      const int b = (a & ~m) | (bb ? m : 0);
      out(a, b) = op(ab, bb);
    }
  }
  return out;
}

void apply_single_spin_unitary(Vec& psi, const Mat2& u, int spin, int n_spins) {
  check_spin(spin, n_spins);
  const int dim = dim_for(n_spins);
  const int m = spin_mask(spin, n_spins);
  for (int a = 0; a < dim; ++a) {
    if (a & m) continue;
    const Complex v0 = psi(a), v1 = psi(a | m);
    psi(a) = u(0, 0) * v0 + u(0, 1) * v1;
    psi(a | m) = u(1, 0) * v0 + u(1, 1) * v1;
  }
}

void apply_single_spin_unitary(Mat& rho, const Mat2& u, int spin, int n_spins) {
  check_spin(spin, n_spins);
  const int dim = dim_for(n_spins);
  const int m = spin_mask(spin, n_spins);
  // Rows: rho <- U rho.
  for (int r = 0; r < dim; ++r) {
    if (r & m) continue;
    for (int c = 0; c < dim; ++c) {
      const Complex v0 = rho(r, c), v1 = rho(r | m, c);
      rho(r, c) = u(0, 0) * v0 + u(0, 1) * v1;
      rho(r | m, c) = u(1, 0) * v0 + u(1, 1) * v1;
    }
  }
  // Columns: rho <- rho U^dagger.
  for (int c = 0; c < dim; ++c) {
    if (c & m) continue;
    for (int r = 0; r < dim; ++r) {
      const Complex v0 = rho(r, c), v1 = rho(r, c | m);
      rho(r, c) = v0 * std::conj(u(0, 0)) + v1 * std::conj(u(0, 1));
      rho(r, c | m) = v0 * std::conj(u(1, 0)) + v1 * std::conj(u(1, 1));
    }
  }
}

Mat2 rotation2(double angle_deg, double axis_deg) {
  const double theta = angle_deg * kDegToRad;
  const double phi = axis_deg * kDegToRad;
  const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
  // exp(-i theta (cos(phi) Ix + sin(phi) Iy)) with I = sigma/2.
  Mat2 r;
  r(0, 0) = c;
  r(0, 1) = Complex(-s * std::sin(phi), -s * std::cos(phi));
  r(1, 0) = Complex(s * std::sin(phi), -s * std::cos(phi));
  r(1, 1) = c;
  return r;
}

Mat2 z_rotation2(double angle_deg) {
  const double half = angle_deg * kDegToRad / 2.0;
  Mat2 r = Mat2::Zero();
  r(0, 0) = std::polar(1.0, -half);
  r(1, 1) = std::polar(1.0, +half);
  return r;
}

RVec build_diagonal_hamiltonian(const std::vector<double>& freq_hz, const Eigen::MatrixXd* j_hz) {
  const int n = static_cast<int>(freq_hz.size());
  const int dim = dim_for(n);
  RVec h = RVec::Zero(dim);
  for (int b = 0; b < dim; ++b) {
    double v = 0.0;
    for (int i = 1; i <= n; ++i) {
      const double zi = spin_bit(b, i, n) ? -0.5 : 0.5;
      v += -2.0 * kPi * freq_hz[i - 1] * zi;
      if (j_hz != nullptr) {
        for (int j = i + 1; j <= n; ++j) {
          const double zj = spin_bit(b, j, n) ? -0.5 : 0.5;
          v += 2.0 * kPi * (*j_hz)(i - 1, j - 1) * zi * zj;
        }
      }
    }
    h(b) = v;
  }
  return h;
}

RVec build_h0(const MoleculeSpec& mol) { return build_diagonal_hamiltonian(mol.offset_hz, nullptr); }

RVec build_hamiltonian(const MoleculeSpec& mol) {
  return build_diagonal_hamiltonian(mol.offset_hz, &mol.j_hz);
}

void free_evolution_inplace(Mat& rho, const RVec& h, double t) {
  if (t < 0.0) throw std::invalid_argument("free_evolution: negative time");
  if (t == 0.0) return;
  const int dim = static_cast<int>(h.size());
  Vec phase(dim);
  for (int a = 0; a < dim; ++a) phase(a) = std::polar(1.0, -h(a) * t);
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b) rho(a, b) *= phase(a) * std::conj(phase(b));
}

void free_evolution_inplace(Vec& psi, const RVec& h, double t) {
  if (t < 0.0) throw std::invalid_argument("free_evolution: negative time");
  if (t == 0.0) return;
  for (int a = 0; a < psi.size(); ++a) psi(a) *= std::polar(1.0, -h(a) * t);
}

Mat free_evolution(const Mat& rho, const RVec& h, double t) {
  Mat out = rho;
  free_evolution_inplace(out, h, t);
  return out;
}

double thermal_p0(double larmor_hz, double temperature_k) {
  const double x = kHbarJs * 2.0 * kPi * larmor_hz / (2.0 * kBoltzmannJperK * temperature_k);
  const double ex = std::exp(x), emx = std::exp(-x);
  return ex / (ex + emx);
}

Mat thermal_state(const MoleculeSpec& mol) {
  if (!(mol.temperature_k > 0.0)) throw std::invalid_argument("thermal_state: non-positive temperature");
  const int dim = dim_for(mol.n_spins);
  Mat rho = Mat::Zero(dim, dim);
  for (int b = 0; b < dim; ++b) {
    double p = 1.0;
    for (int i = 1; i <= mol.n_spins; ++i) {
      const double p0 = thermal_p0(mol.larmor_hz[i - 1], mol.temperature_k);
      p *= spin_bit(b, i, mol.n_spins) ? (1.0 - p0) : p0;
    }
    rho(b, b) = p;
  }
  return rho;
}

Vec basis_state(int index, int n_spins) {
  Vec psi = Vec::Zero(dim_for(n_spins));
  psi(index) = 1.0;
  return psi;
}

Mat reduced_state(const Mat& rho, const std::vector<int>& keep, int n_spins) {
  const int nk = static_cast<int>(keep.size());
  const int out_dim = dim_for(nk);
  const int dim = dim_for(n_spins);
  std::vector<int> keep_masks(nk);
  for (int i = 0; i < nk; ++i) {
    check_spin(keep[i], n_spins);
    keep_masks[i] = spin_mask(keep[i], n_spins);
  }
  int traced_mask = dim - 1;
  for (int m : keep_masks) traced_mask &= ~m;

  auto expand = [&](int small) {  // small index -> kept-spin bits in full index
    int full = 0;
    for (int i = 0; i < nk; ++i)
      if ((small >> (nk - 1 - i)) & 1) full |= keep_masks[i];
    return full;
  };

  Mat out = Mat::Zero(out_dim, out_dim);
  for (int a = 0; a < out_dim; ++a) {
    for (int b = 0; b < out_dim; ++b) {
      const int fa = expand(a), fb = expand(b);
      Complex sum = 0.0;
      // Iterate over all values of the traced-out bits.
      for (int t = traced_mask;; t = (t - 1) & traced_mask) {
        sum += rho(fa | t, fb | t);
        if (t == 0) break;
      }
      out(a, b) = sum;
    }
  }
  return out;
}

double trace_distance(const Mat& a, const Mat& b) {
  Mat d = a - b;
  d = (d + d.adjoint().eval()) / 2.0;  // symmetrize against round-off
  Eigen::SelfAdjointEigenSolver<Mat> es(d);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double state_fidelity(const Vec& a, const Vec& b) {
  const Complex ov = a.dot(b);
  return std::norm(ov);
}

}  // namespace nmrshor
