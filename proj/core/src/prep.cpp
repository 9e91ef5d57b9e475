// Copyright 2026 The nmrshor Authors
// SPDX-License-Identifier: Apache-2.0
#include "nmrshor/prep.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

#include "nmrshor/spinsys.hpp"

namespace nmrshor {

uint8_t gf128_mulx(uint8_t v) {
  v = static_cast<uint8_t>(v << 1);
  if (v & 0x80) v = static_cast<uint8_t>((v & 0x7F) ^ 0x03);  // reduce by x^7 + x + 1
  return v;
}

uint8_t gf128_pow_alpha(int e) {
  e %= 127;
  if (e < 0) e += 127;
  uint8_t v = 1;
  for (int i = 0; i < e; ++i) v = gf128_mulx(v);
  return v;
}

int apply_linear_map(const std::array<uint8_t, 7>& rows, int x) {
  int y = 0;
  for (int i = 0; i < 7; ++i)
    y |= (std::popcount(static_cast<unsigned>(rows[static_cast<size_t>(i)] & x)) & 1) << i;
  return y;
}

namespace {

// Row operation: add row src into row dst (a transvection; self-inverse).
struct RowOp {
  int src, dst;
};

// Reduces `work` to the identity by transvections, recording them.  Row
// swaps are avoided: a zero pivot is fixed by adding a lower row first, so
// every recorded operation maps to a single CNOT.  If the recorded ops are
// L_1..L_s (in order), then L_s ... L_1 * work = I, i.e. the inverse of
// `work` equals L_s ... L_1 — realized on states by applying L_1 first.
std::vector<RowOp> reduction_ops(std::array<uint8_t, 7> work) {
  std::vector<RowOp> ops;
  auto add_row = [&](int src, int dst) {
    work[static_cast<size_t>(dst)] =
        static_cast<uint8_t>(work[static_cast<size_t>(dst)] ^ work[static_cast<size_t>(src)]);
    ops.push_back({src, dst});
  };
  for (int c = 0; c < 7; ++c) {
    const uint8_t bit = static_cast<uint8_t>(1 << c);
    if (!(work[static_cast<size_t>(c)] & bit)) {
      int r = c + 1;
      while (r < 7 && !(work[static_cast<size_t>(r)] & bit)) ++r;
      if (r == 7) throw std::logic_error("prep: singular linear map");
      add_row(r, c);
    }
    for (int r = 0; r < 7; ++r)
      if (r != c && (work[static_cast<size_t>(r)] & bit)) add_row(c, r);
  }
  return ops;
}

void check_partition(const std::vector<std::vector<int>>& partition) {
  if (partition.size() != 2 || partition[0].size() != 5 || partition[1].size() != 2)
    throw std::invalid_argument("build_prep_scheme: partition must be one 5-spin and one 2-spin group");
  std::array<bool, 8> seen{};
  for (const auto& grp : partition)
    for (int s : grp) {
      if (s < 1 || s > 7 || seen[static_cast<size_t>(s)])
        throw std::invalid_argument("build_prep_scheme: partition must cover spins 1..7 once");
      seen[static_cast<size_t>(s)] = true;
    }
}

}  // namespace

PrepScheme build_prep_scheme(const MoleculeSpec& mol,
                             const std::vector<std::vector<int>>& partition) {
  if (mol.n_spins != 7)
    throw std::invalid_argument("build_prep_scheme: requires a 7-spin molecule");
  check_partition(partition);
  PrepScheme scheme;
  scheme.experiments.reserve(36);
  scheme.weights.assign(36, 1.0 / 36.0);
  for (int k = 0; k < 36; ++k) {
    // Experiment k applies the inverse of the matrix whose row i is the
    // mask of alpha^(18 i + k), so the averaged populations spread evenly.
    std::array<uint8_t, 7> alpha_rows{};
    for (int i = 0; i < 7; ++i)
      alpha_rows[static_cast<size_t>(i)] = gf128_pow_alpha(18 * i + k);
    PrepExperiment e;
    e.block = k / 4;
    e.rep = k % 4;
    const std::vector<RowOp> ops = reduction_ops(alpha_rows);
    // Applying the recorded ops in order realizes alpha_rows^{-1}: on the
    // bitmask representation (accumulate into the identity) and on states
    // (one CNOT per op; index bit j lives on spin 7 - j).
    e.rows = {1, 2, 4, 8, 16, 32, 64};
    e.circuit = Circuit(7);
    for (const RowOp& op : ops) {
      e.rows[static_cast<size_t>(op.dst)] =
          static_cast<uint8_t>(e.rows[static_cast<size_t>(op.dst)] ^
                               e.rows[static_cast<size_t>(op.src)]);
      e.circuit.append(make_cnot(7 - op.src, 7 - op.dst));
    }
    e.circuit.append(make_not(7));
    scheme.experiments.push_back(std::move(e));
  }
  return scheme;
}

RVec prep_average_populations(const PrepScheme& scheme, const RVec& pops_in) {
  if (pops_in.size() != 128)
    throw std::invalid_argument("prep_average_populations: expected 128 populations");
  RVec out = RVec::Zero(128);
  for (size_t k = 0; k < scheme.experiments.size(); ++k) {
    const auto& rows = scheme.experiments[k].rows;
    const double w = scheme.weights[k];
    for (int x = 0; x < 128; ++x) out(apply_linear_map(rows, x) ^ 1) += w * pops_in(x);
  }
  return out;
}

Mat effective_pure_state(const MoleculeSpec& mol, const PrepScheme& scheme) {
  const Mat th = thermal_state(mol);
  RVec pops(128);
  for (int x = 0; x < 128; ++x) pops(x) = th(x, x).real();
  return prep_average_populations(scheme, pops).cast<Complex>().asDiagonal();
}

Mat effective_pure_state(const MoleculeSpec& mol) {
  return effective_pure_state(mol, build_prep_scheme(mol));
}

Vec effective_pure_ideal(int n_spins) { return basis_state(1, n_spins); }

Mat effective_pure_pulsed(const MoleculeSpec& mol, const PrepScheme& scheme, bool decoherence,
                          const LowerOptions& opt) {
  const Mat th = thermal_state(mol);
  Mat acc = Mat::Zero(th.rows(), th.cols());
  for (size_t k = 0; k < scheme.experiments.size(); ++k) {
    const PulseProgram p = lower_to_pulses(scheme.experiments[k].circuit, mol, opt);
    acc += scheme.weights[k] * run_pulses(p, mol, th, decoherence);
  }
  return acc;
}

RVec translation_average_2spin(const RVec& pops4) {
  if (pops4.size() != 4)
    throw std::invalid_argument("translation_average_2spin: expected 4 populations");
  RVec out = RVec::Zero(4);
  for (int t = 0; t < 4; ++t)
    for (int x = 0; x < 4; ++x) out(x ^ t) += pops4(x) / 4.0;
  return out;
}

PurityFit fit_effective_purity(const Mat& rho) {
  if (rho.rows() != 128 || rho.cols() != 128)
    throw std::invalid_argument("fit_effective_purity: expected a 7-spin state");
  PurityFit fit;
  fit.epsilon = (rho(1, 1).real() - 1.0 / 128.0) * 128.0 / 127.0;
  Mat model = Mat::Identity(128, 128) * ((1.0 - fit.epsilon) / 128.0);
  model(1, 1) += fit.epsilon;
  fit.residual = (rho - model).norm();
  return fit;
}

}  // namespace nmrshor
