// Copyright 2026 The nmrshor Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <string>
#include <vector>

#include "nmrshor/types.hpp"

namespace nmrshor {

// Gate alphabet.  Angles are in degrees.  Conventions:
//   RZ(theta)       = diag(1, e^{i theta}) on the target
//   CRZ(c,t,theta)  = |1><1|_c (x) diag(e^{-i theta/2}, e^{+i theta/2})_t
//   CY(c,t)         = controlled R_y(90 deg); CY_DAG its inverse
enum class GateKind { H, Not, Cnot, Cy, CyDag, Crz, Ccnot, Cswap, Rz, Barrier };

struct Gate {
  GateKind kind = GateKind::Barrier;
  int q1 = 0;  // H/NOT/RZ target; CNOT/CY/CRZ control; CCNOT control 1; CSWAP control
  int q2 = 0;  // CNOT/CY/CRZ target; CCNOT control 2; CSWAP swap operand 1
  int q3 = 0;  // CCNOT target; CSWAP swap operand 2
  double angle_deg = 0.0;
  std::string label;  // optional display label, e.g. "A".."H"
  int arity() const;
};

Gate make_h(int q);
Gate make_not(int q);
Gate make_cnot(int control, int target);
Gate make_cy(int control, int target);
Gate make_cydag(int control, int target);
Gate make_crz(int control, int target, double angle_deg);
Gate make_ccnot(int control1, int control2, int target);
Gate make_cswap(int control, int a, int b);
Gate make_rz(int q, double angle_deg);
Gate make_barrier();

// Ordered gate list over qubits 1..n_qubits.  Register map for the factoring
// circuit: first register = qubits {1,2,3} (qubit 3 = x0 and, after the
// inverse transform, the most significant result bit), second register =
// qubits {4,5,6,7} with qubit 4 = y3 (MSB) .. qubit 7 = y0.
struct Circuit {
  int n_qubits = 0;
  std::vector<Gate> gates;

  explicit Circuit(int n = 0) : n_qubits(n) {}
  void append(Gate g);  // validates indices/distinctness/angle
};

// a^x mod n by repeated squaring.
int mod_exp_oracle(int a, int x, int n);

// Controlled multiplication of the second register (initially y=1) by
// a^(2^k) mod 15: stage 1 (controlled by qubit 3 = x0) maps y: 1 -> a via
// CNOTs on the bits of a XOR 1; stage 2 (controlled by qubit 2 = x1, only
// for bases of period 4, all of which satisfy a^2 = 4 mod 15) swaps
// (y3,y1) and (y2,y0) via CNOT/CCNOT/CNOT triples.
// Valid bases: {2,4,7,8,11,14,13} less anything sharing a factor with 15.
// With named=true and a=7 the eight gates carry labels "A".."H".
Circuit build_mod_exp_circuit(int a, bool named = false);

// Inverse quantum Fourier transform on qubits 1..n, output in bit-reversed
// order (qubit n = most significant result bit).  Controlled phases are
// built from the CRZ convention above plus compensating RZ on the control.
Circuit build_inverse_qft(int n);

// H on qubits 1..3, modular exponentiation, inverse transform on 1..3,
// as a 7-qubit circuit expecting input |0000001>.
Circuit build_shor_circuit(int a, bool named = false);

// Exact unitary of one gate / a whole circuit on n qubits.
Mat gate_unitary(const Gate& g, int n_qubits);
Mat circuit_unitary(const Circuit& c);

void apply_gate(Vec& psi, const Gate& g, int n_qubits);
void apply_gate(Mat& rho, const Gate& g, int n_qubits);
void apply_circuit(Vec& psi, const Circuit& c);
void apply_circuit(Mat& rho, const Circuit& c);

// Probability distribution of the first register read MSB-corrected:
// y = 4*bit(q3) + 2*bit(q2) + bit(q1).
std::array<double, 8> register_distribution(const Vec& psi, int n_qubits);
std::array<double, 8> register_distribution(const Mat& rho, int n_qubits);

// One gate per line: `KIND q1 [q2 [q3]] [angle_deg]`, `#` starts a comment;
// serialization emits a `# qubits N` header and labels as trailing comments.
std::string serialize_circuit(const Circuit& c);
Circuit parse_circuit(const std::string& text);

}  // namespace nmrshor
