// Copyright 2026 The nmrshor Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "nmrshor/circuit.hpp"

namespace nmrshor {

// Classical knowledge about one qubit at a circuit point.  K0/K1: value known
// exactly.  Basis: the qubit holds a definite (branch-classical) bit in every
// term of the superposition, though which bit is data-dependent.  Unknown:
// the qubit may be in superposition within a branch.
enum class Fact : char { K0, K1, Basis, Unknown };

struct StateFacts {
  std::vector<Fact> facts;    // facts[q-1] for qubit q
  std::vector<int> measured;  // qubits whose final reduced state matters

  Fact at(int q) const { return facts.at(static_cast<size_t>(q - 1)); }
};

// Facts for the factoring input |0000001>: qubits 1..6 known |0>, qubit 7
// known |1>, measured register {1,2,3}.
StateFacts shor_input_facts(int n_qubits = 7);

// Forward dataflow.  result[i] = facts before gate i; result[gates.size()] =
// facts after the last gate.
std::vector<std::vector<Fact>> propagate_facts(const Circuit& c, const StateFacts& input);

struct PeepholeStats {
  std::vector<std::string> dead_control;  // dropped: a control is known |0>
  std::vector<std::string> specialized;   // control known |1> folded away
  std::vector<std::string> dead_gates;    // dropped by backward liveness
  std::vector<std::string> rewritten;     // CCNOT -> CY/CRZ/CYDAG triple
};

// Four passes, in order:
//   1. drop gates with a control known |0>
//   2. specialize gates with a control known |1> (CNOT->NOT, CCNOT->CNOT,
//      CRZ->RZ); facts recomputed afterwards
//   3. backward liveness from the measured register: a gate is dead unless
//      it touches a live qubit (then all its qubits become live); barriers
//      pin every qubit live and are never dropped
//   4. rewrite each remaining CCNOT whose target is branch-classical and
//      which has at least one branch-classical control into
//      [CY(u,t), CRZ(b,t,180), CYDAG(u,t)] with b such a control (preferring
//      the second) and u the other.  Exact up to per-branch phases that
//      cannot reach the measured register's reduced state.
// Gate count never increases within passes 1-3; pass 4 trades one gate for
// three pulse-realizable ones.
Circuit peephole_optimize(const Circuit& c, const StateFacts& input,
                          PeepholeStats* stats = nullptr);

}  // namespace nmrshor
