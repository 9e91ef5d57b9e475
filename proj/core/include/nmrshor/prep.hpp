// Copyright 2026 The nmrshor Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "nmrshor/circuit.hpp"
#include "nmrshor/molecule.hpp"
#include "nmrshor/pulses.hpp"
#include "nmrshor/types.hpp"

namespace nmrshor {

// GF(2^7) with primitive polynomial x^7 + x + 1; alpha = x = 0x02.
uint8_t gf128_mulx(uint8_t v);
uint8_t gf128_pow_alpha(int e);

// One temporal-averaging experiment: an invertible GF(2)-linear permutation
// of the 128 basis states, realized by CNOTs, followed by NOT on spin 7.
// rows[i] is the mask of input index bits feeding output index bit i
// (index bit j corresponds to spin n-j).
struct PrepExperiment {
  std::array<uint8_t, 7> rows{};
  Circuit circuit;
  int block = 0;  // 0..8, display label matching the 9-sequence grouping
  int rep = 0;    // 0..3, display label matching the 4 repetitions
};

struct PrepScheme {
  std::vector<PrepExperiment> experiments;
  std::vector<double> weights;  // uniform 1/36
};

// Apply the experiment's linear map to a basis index.
int apply_linear_map(const std::array<uint8_t, 7>& rows, int x);

// 36 experiments whose uniform average sends the thermal state to
// (1-eps)/128 I + eps |0000001><0000001| up to a residual bounded by the
// prep property test.  Experiment k maps output index bit i from the input
// mask alpha^(18 i + k); the circuit realizes the inverse of that matrix as
// row-operation CNOTs (at most 29), then NOT(7).  The partition argument
// only labels the block/rep grouping; it must be two groups of sizes 5 and
// 2 covering spins 1..7.
PrepScheme build_prep_scheme(const MoleculeSpec& mol,
                             const std::vector<std::vector<int>>& partition = {{1, 2, 3, 4, 5},
                                                                               {6, 7}});

// Diagonal fast path: permute populations per experiment and average.
RVec prep_average_populations(const PrepScheme& scheme, const RVec& pops_in);

// Effective pure state via the fast path from the thermal state.
Mat effective_pure_state(const MoleculeSpec& mol, const PrepScheme& scheme);
Mat effective_pure_state(const MoleculeSpec& mol);

// The state the prep approximates: |0000001>.
Vec effective_pure_ideal(int n_spins = 7);

// Same average with every experiment lowered to pulses and executed on the
// thermal density matrix (decoherence optional).  With decoherence off this
// equals the fast path exactly.
Mat effective_pure_pulsed(const MoleculeSpec& mol, const PrepScheme& scheme, bool decoherence,
                          const LowerOptions& opt = {});

// Two-spin demonstration: averaging the four XOR translations (I, N2, N1,
// N1 N2) of a 4-level population vector equalizes all populations.
RVec translation_average_2spin(const RVec& pops4);

// Fit of rho to (1-eps)/128 I + eps |target><target| with target = index 1:
// eps from the target population, residual = Frobenius norm of the rest.
struct PurityFit {
  double epsilon = 0.0;
  double residual = 0.0;
};
PurityFit fit_effective_purity(const Mat& rho);

}  // namespace nmrshor
