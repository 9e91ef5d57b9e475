// Copyright 2026 The nmrshor Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "nmrshor/molecule.hpp"
#include "nmrshor/types.hpp"

namespace nmrshor {

// Conventions used throughout the library:
//  * Spins are numbered 1..n; spin 1 is the leftmost (most significant)
//    tensor factor, so in a basis-state index b the bit of spin i is
//    (b >> (n - i)) & 1.
//  * |0> is spin-up with I_z = diag(+1/2, -1/2).
//  * H0 = -sum_i 2*pi*nu_i I_zi and HJ = +sum_{i<j} 2*pi*J_ij I_zi I_zj,
//    both diagonal; a lone-spin coherence rho_01 therefore evolves as
//    exp(+i*2*pi*nu*t).

inline int dim_for(int n_spins) { return 1 << n_spins; }

// Bit mask selecting spin `spin` (1-based) inside an n-spin basis index.
inline int spin_mask(int spin, int n_spins) { return 1 << (n_spins - spin); }

inline int spin_bit(int basis_index, int spin, int n_spins) {
  return (basis_index >> (n_spins - spin)) & 1;
}

// I ⊗ ... ⊗ op ⊗ ... ⊗ I with `op` acting on `spin`.
Mat embed_single_spin(const Mat2& op, int spin, int n_spins);

// In-place rho -> (U_spin) rho (U_spin)^dagger for a 2x2 unitary on one spin.
void apply_single_spin_unitary(Mat& rho, const Mat2& u, int spin, int n_spins);
void apply_single_spin_unitary(Vec& psi, const Mat2& u, int spin, int n_spins);

// Rotation by angle_deg about the axis at azimuth axis_deg in the x-y plane:
// exp(-i * theta * (cos(phi) I_x + sin(phi) I_y)).  axis_deg 0/90/180/270
// correspond to +x/+y/-x/-y.
Mat2 rotation2(double angle_deg, double axis_deg);

// z-rotation exp(-i * theta * I_z) = diag(e^{-i theta/2}, e^{+i theta/2}).
Mat2 z_rotation2(double angle_deg);

// Diagonal of H0 (rotating-frame offsets only), rad/s.
RVec build_h0(const MoleculeSpec& mol);

// Diagonal of H = H0 + HJ, rad/s.  Entry for basis state b is
//   -sum_i 2*pi*offset_hz[i]*z_i(b) + sum_{i<j} 2*pi*J_ij*z_i(b)*z_j(b),
// z_i(b) = +1/2 for bit 0, -1/2 for bit 1.
RVec build_hamiltonian(const MoleculeSpec& mol);

// Same diagonal construction from explicit per-spin frequencies (Hz) and an
// optional coupling matrix (pass nullptr for none).
RVec build_diagonal_hamiltonian(const std::vector<double>& freq_hz, const Eigen::MatrixXd* j_hz);

// rho -> U rho U^dagger with U = exp(-i h t); h is a diagonal in rad/s.
// Rejects negative t.
Mat free_evolution(const Mat& rho, const RVec& h, double t);
void free_evolution_inplace(Mat& rho, const RVec& h, double t);
void free_evolution_inplace(Vec& psi, const RVec& h, double t);

// rho_th = exp(-H0(larmor)/kB T)/Z: diagonal product of per-spin Boltzmann
// populations p0 = e^x/(e^x + e^-x), x = hbar*omega/(2 kB T).
Mat thermal_state(const MoleculeSpec& mol);

// Per-spin ground population p0 for a transition frequency f (Hz).
double thermal_p0(double larmor_hz, double temperature_k);

// Utilities -----------------------------------------------------------------

Vec basis_state(int index, int n_spins);

// Reduced density matrix on `keep` (1-based spin list, ascending order kept).
Mat reduced_state(const Mat& rho, const std::vector<int>& keep, int n_spins);

// (1/2)*||a - b||_1 for Hermitian a, b.
double trace_distance(const Mat& a, const Mat& b);

// |<a|b>|^2.
double state_fidelity(const Vec& a, const Vec& b);

}  // namespace nmrshor
