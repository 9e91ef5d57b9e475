// Copyright 2026 The nmrshor Authors
// SPDX-License-Identifier: Apache-2.0
#include "nmrshor/circuit.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "nmrshor/spinsys.hpp"

namespace nmrshor {

namespace {

void check_finite_angle(double a) {
  if (!std::isfinite(a)) throw std::invalid_argument("gate: angle must be finite");
}

void check_distinct(int a, int b) {
  if (a == b) throw std::invalid_argument("gate: operand qubits must be distinct");
}

void check_distinct(int a, int b, int c) {
  if (a == b || a == c || b == c)
    throw std::invalid_argument("gate: operand qubits must be distinct");
}

}  // namespace

int Gate::arity() const {
  switch (kind) {
    case GateKind::Barrier:
      return 0;
    case GateKind::H:
    case GateKind::Not:
    case GateKind::Rz:
      return 1;
    case GateKind::Cnot:
    case GateKind::Cy:
    case GateKind::CyDag:
    case GateKind::Crz:
      return 2;
    case GateKind::Ccnot:
    case GateKind::Cswap:
      return 3;
  }
  return 0;
}

Gate make_h(int q) { return Gate{GateKind::H, q, 0, 0, 0.0, {}}; }
Gate make_not(int q) { return Gate{GateKind::Not, q, 0, 0, 0.0, {}}; }

Gate make_cnot(int control, int target) {
  check_distinct(control, target);
  return Gate{GateKind::Cnot, control, target, 0, 0.0, {}};
}

Gate make_cy(int control, int target) {
  check_distinct(control, target);
  return Gate{GateKind::Cy, control, target, 0, 0.0, {}};
}

Gate make_cydag(int control, int target) {
  check_distinct(control, target);
  return Gate{GateKind::CyDag, control, target, 0, 0.0, {}};
}

Gate make_crz(int control, int target, double angle_deg) {
  check_distinct(control, target);
  check_finite_angle(angle_deg);
  return Gate{GateKind::Crz, control, target, 0, angle_deg, {}};
}

Gate make_ccnot(int control1, int control2, int target) {
  check_distinct(control1, control2, target);
  return Gate{GateKind::Ccnot, control1, control2, target, 0.0, {}};
}

Gate make_cswap(int control, int a, int b) {
  check_distinct(control, a, b);
  return Gate{GateKind::Cswap, control, a, b, 0.0, {}};
}

Gate make_rz(int q, double angle_deg) {
  check_finite_angle(angle_deg);
  return Gate{GateKind::Rz, q, 0, 0, angle_deg, {}};
}

Gate make_barrier() { return Gate{GateKind::Barrier, 0, 0, 0, 0.0, {}}; }

void Circuit::append(Gate g) {
  const int ar = g.arity();
  const int qs[3] = {g.q1, g.q2, g.q3};
  for (int i = 0; i < ar; ++i)
    if (qs[i] < 1 || qs[i] > n_qubits)
      throw std::invalid_argument("circuit: qubit index out of range");
  gates.push_back(std::move(g));
}

int mod_exp_oracle(int a, int x, int n) {
  if (a < 0 || n < 2) throw std::invalid_argument("mod_exp_oracle: need a >= 0, n >= 2");
  long long base = a % n, r = 1 % n;
  for (int e = x; e > 0; e >>= 1) {
    if (e & 1) r = r * base % n;
    base = base * base % n;
  }
  return static_cast<int>(r);
}

Circuit build_mod_exp_circuit(int a, bool named) {
  if (a < 2 || a > 14 || std::gcd(a, 15) != 1)
    throw std::invalid_argument("build_mod_exp_circuit: base must be in 2..14 and coprime to 15");
  Circuit c(7);
  const char* next_label = named && a == 7 ? "ABCDEFGH" : nullptr;
  auto push = [&](Gate g) {
    if (next_label && *next_label) g.label = std::string(1, *next_label++);
    c.append(std::move(g));
  };
  // Stage 1, controlled by x0 (qubit 3): y = 1 -> a, i.e. flip bits of a^1.
  // Second register bit k of y lives on qubit 7-k.
  for (int bit = 3; bit >= 0; --bit)
    if ((a ^ 1) & (1 << bit)) push(make_cnot(3, 7 - bit));
  // Stage 2, controlled by x1 (qubit 2): y *= a^2 mod 15.  Period-2 bases
  // (a^2 = 1) need nothing; period-4 bases all have a^2 = 4 mod 15, i.e.
  // swap (y3,y1) and (y2,y0).
  if (mod_exp_oracle(a, 2, 15) != 1) {
    push(make_cnot(4, 6));
    push(make_ccnot(2, 6, 4));
    push(make_cnot(4, 6));
    push(make_cnot(7, 5));
    push(make_ccnot(2, 5, 7));
    push(make_cnot(7, 5));
  }
  return c;
}

Circuit build_inverse_qft(int n) {
  if (n < 1) throw std::invalid_argument("build_inverse_qft: need n >= 1");
  Circuit c(n);
  // Standard inverse transform, output bit-reversed.  Each controlled phase
  // diag(1,1,1,e^{i phi}) is CRZ(c,t,phi) plus RZ(c,phi/2) in our convention.
  for (int k = 1; k <= n; ++k) {
    c.append(make_h(k));
    for (int j = k + 1; j <= n; ++j) {
      const double phi = -180.0 / static_cast<double>(1 << (j - k));
      c.append(make_crz(j, k, phi));
      c.append(make_rz(j, phi / 2.0));
    }
  }
  return c;
}

Circuit build_shor_circuit(int a, bool named) {
  Circuit modexp = build_mod_exp_circuit(a, named);
  Circuit c(7);
  for (int q = 1; q <= 3; ++q) c.append(make_h(q));
  for (const Gate& g : modexp.gates) c.append(g);
  for (const Gate& g : build_inverse_qft(3).gates) c.append(g);
  return c;
}

void apply_gate(Vec& psi, const Gate& g, int n_qubits) {
  const int dim = dim_for(n_qubits);
  if (psi.size() != dim) throw std::invalid_argument("apply_gate: dimension mismatch");
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  switch (g.kind) {
    case GateKind::Barrier:
      return;
    case GateKind::H: {
      Mat2 h;
      h << inv_sqrt2, inv_sqrt2, inv_sqrt2, -inv_sqrt2;
      apply_single_spin_unitary(psi, h, g.q1, n_qubits);
      return;
    }
    case GateKind::Not: {
      const int m = spin_mask(g.q1, n_qubits);
      for (int b = 0; b < dim; ++b)
        if (!(b & m)) std::swap(psi(b), psi(b | m));
      return;
    }
    case GateKind::Rz: {
      const int m = spin_mask(g.q1, n_qubits);
      const Complex ph = std::polar(1.0, g.angle_deg * kDegToRad);
      for (int b = 0; b < dim; ++b)
        if (b & m) psi(b) *= ph;
      return;
    }
    case GateKind::Crz: {
      const int mc = spin_mask(g.q1, n_qubits), mt = spin_mask(g.q2, n_qubits);
      const Complex ph0 = std::polar(1.0, -g.angle_deg * kDegToRad / 2.0);
      const Complex ph1 = std::polar(1.0, +g.angle_deg * kDegToRad / 2.0);
      for (int b = 0; b < dim; ++b)
        if (b & mc) psi(b) *= (b & mt) ? ph1 : ph0;
      return;
    }
    case GateKind::Cnot: {
      const int mc = spin_mask(g.q1, n_qubits), mt = spin_mask(g.q2, n_qubits);
      for (int b = 0; b < dim; ++b)
        if ((b & mc) && !(b & mt)) std::swap(psi(b), psi(b | mt));
      return;
    }
    case GateKind::Ccnot: {
      const int mc = spin_mask(g.q1, n_qubits) | spin_mask(g.q2, n_qubits);
      const int mt = spin_mask(g.q3, n_qubits);
      for (int b = 0; b < dim; ++b)
        if ((b & mc) == mc && !(b & mt)) std::swap(psi(b), psi(b | mt));
      return;
    }
    case GateKind::Cswap: {
      const int mc = spin_mask(g.q1, n_qubits);
      const int ma = spin_mask(g.q2, n_qubits), mb = spin_mask(g.q3, n_qubits);
      for (int b = 0; b < dim; ++b)
        if ((b & mc) && (b & ma) && !(b & mb)) std::swap(psi(b), psi((b ^ ma) | mb));
      return;
    }
    case GateKind::Cy:
    case GateKind::CyDag: {
      const int mc = spin_mask(g.q1, n_qubits), mt = spin_mask(g.q2, n_qubits);
      const double sgn = g.kind == GateKind::Cy ? 1.0 : -1.0;
      for (int b = 0; b < dim; ++b) {
        if (!(b & mc) || (b & mt)) continue;
        const Complex v0 = psi(b), v1 = psi(b | mt);
        psi(b) = inv_sqrt2 * (v0 - sgn * v1);
        psi(b | mt) = inv_sqrt2 * (sgn * v0 + v1);
      }
      return;
    }
  }
}

void apply_gate(Mat& rho, const Gate& g, int n_qubits) {
  const int dim = dim_for(n_qubits);
  if (rho.rows() != dim || rho.cols() != dim)
    throw std::invalid_argument("apply_gate: dimension mismatch");
  // rho -> U rho U^dag as two column sweeps with an adjoint in between.
  Vec col(dim);
  for (int pass = 0; pass < 2; ++pass) {
    for (int c = 0; c < dim; ++c) {
      col = rho.col(c);
      apply_gate(col, g, n_qubits);
      rho.col(c) = col;
    }
    rho = rho.adjoint().eval();
  }
}

void apply_circuit(Vec& psi, const Circuit& c) {
  for (const Gate& g : c.gates) apply_gate(psi, g, c.n_qubits);
}

void apply_circuit(Mat& rho, const Circuit& c) {
  for (const Gate& g : c.gates) apply_gate(rho, g, c.n_qubits);
}

Mat gate_unitary(const Gate& g, int n_qubits) {
  const int dim = dim_for(n_qubits);
  Mat u = Mat::Identity(dim, dim);
  Vec col(dim);
  for (int c = 0; c < dim; ++c) {
    col = u.col(c);
    apply_gate(col, g, n_qubits);
    u.col(c) = col;
  }
  return u;
}

Mat circuit_unitary(const Circuit& c) {
  const int dim = dim_for(c.n_qubits);
  Mat u = Mat::Identity(dim, dim);
  Vec col(dim);
  for (int i = 0; i < dim; ++i) {
    col = u.col(i);
    apply_circuit(col, c);
    u.col(i) = col;
  }
  return u;
}

namespace {

int register_value(int b, int n_qubits) {
  return 4 * spin_bit(b, 3, n_qubits) + 2 * spin_bit(b, 2, n_qubits) +
         spin_bit(b, 1, n_qubits);
}

}  // namespace

std::array<double, 8> register_distribution(const Vec& psi, int n_qubits) {
  std::array<double, 8> p{};
  for (int b = 0; b < psi.size(); ++b) p[register_value(b, n_qubits)] += std::norm(psi(b));
  return p;
}

std::array<double, 8> register_distribution(const Mat& rho, int n_qubits) {
  std::array<double, 8> p{};
  for (int b = 0; b < rho.rows(); ++b)
    p[register_value(b, n_qubits)] += rho(b, b).real();
  return p;
}

namespace {

const char* kind_token(GateKind k) {
  switch (k) {
    case GateKind::H: return "H";
    case GateKind::Not: return "NOT";
    case GateKind::Cnot: return "CNOT";
    case GateKind::Cy: return "CY";
    case GateKind::CyDag: return "CYDAG";
    case GateKind::Crz: return "CRZ";
    case GateKind::Ccnot: return "CCNOT";
    case GateKind::Cswap: return "CSWAP";
    case GateKind::Rz: return "RZ";
    case GateKind::Barrier: return "BARRIER";
  }
  return "?";
}

bool kind_has_angle(GateKind k) { return k == GateKind::Crz || k == GateKind::Rz; }

std::string format_angle(double a) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", a);
  return buf;
}

}  // namespace

std::string serialize_circuit(const Circuit& c) {
  std::ostringstream out;
  out << "# qubits " << c.n_qubits << "\n";
  for (const Gate& g : c.gates) {
    out << kind_token(g.kind);
    const int ar = g.arity();
    const int qs[3] = {g.q1, g.q2, g.q3};
    for (int i = 0; i < ar; ++i) out << ' ' << qs[i];
    if (kind_has_angle(g.kind)) out << ' ' << format_angle(g.angle_deg);
    if (!g.label.empty()) out << "  # " << g.label;
    out << "\n";
  }
  return out.str();
}

Circuit parse_circuit(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int n_qubits = -1;
  std::vector<Gate> staged;
  int max_q = 0;
  while (std::getline(in, line)) {
    // A "# qubits N" comment carries the qubit count; other comments drop.
    std::istringstream probe(line);
    std::string hash, word;
    int maybe_n = 0;
    if (probe >> hash >> word >> maybe_n && hash == "#" && word == "qubits") n_qubits = maybe_n;
    const size_t cut = line.find('#');
    if (cut != std::string::npos) line.erase(cut);
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    auto need_int = [&]() {
      int v;
      if (!(ls >> v)) throw std::invalid_argument("parse_circuit: missing qubit operand");
      max_q = std::max(max_q, v);
      return v;
    };
    auto need_angle = [&]() {
      double v;
      if (!(ls >> v)) throw std::invalid_argument("parse_circuit: missing angle");
      return v;
    };
    Gate g;
    if (tok == "H") g = make_h(need_int());
    else if (tok == "NOT") g = make_not(need_int());
    else if (tok == "CNOT") { int a = need_int(), b = need_int(); g = make_cnot(a, b); }
    else if (tok == "CY") { int a = need_int(), b = need_int(); g = make_cy(a, b); }
    else if (tok == "CYDAG") { int a = need_int(), b = need_int(); g = make_cydag(a, b); }
    else if (tok == "CRZ") { int a = need_int(), b = need_int(); g = make_crz(a, b, need_angle()); }
    else if (tok == "CCNOT") { int a = need_int(), b = need_int(), t = need_int(); g = make_ccnot(a, b, t); }
    else if (tok == "CSWAP") { int a = need_int(), b = need_int(), t = need_int(); g = make_cswap(a, b, t); }
    else if (tok == "RZ") { int q = need_int(); double ang = need_angle(); g = make_rz(q, ang); }
    else if (tok == "BARRIER") g = make_barrier();
    else throw std::invalid_argument("parse_circuit: unknown gate '" + tok + "'");
    std::string extra;
    if (ls >> extra) throw std::invalid_argument("parse_circuit: trailing tokens on line");
    staged.push_back(std::move(g));
  }
  Circuit c(n_qubits > 0 ? n_qubits : max_q);
  for (Gate& g : staged) c.append(std::move(g));
  return c;
}

}  // namespace nmrshor
