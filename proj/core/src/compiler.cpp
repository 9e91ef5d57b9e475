// Copyright 2026 The nmrshor Authors
// SPDX-License-Identifier: Apache-2.0
#include "nmrshor/compiler.hpp"

#include <algorithm>
#include <stdexcept>

namespace nmrshor {

namespace {

using Facts = std::vector<Fact>;

Fact flipped(Fact f) {
  if (f == Fact::K0) return Fact::K1;
  if (f == Fact::K1) return Fact::K0;
  return f;
}

bool classical(Fact f) { return f != Fact::Unknown; }

// Forward transfer of one gate over the facts vector (qubit q at index q-1).
void transfer(Facts& f, const Gate& g) {
  auto at = [&f](int q) -> Fact& { return f[static_cast<size_t>(q - 1)]; };
  switch (g.kind) {
    case GateKind::Barrier:
    case GateKind::Rz:
      return;
    case GateKind::H:
      at(g.q1) = Fact::Unknown;
      return;
    case GateKind::Not:
      at(g.q1) = flipped(at(g.q1));
      return;
    case GateKind::Cnot: {
      const Fact c = at(g.q1);
      if (c == Fact::K0) return;
      if (c == Fact::K1) {
        at(g.q2) = flipped(at(g.q2));
        return;
      }
      // Target stays branch-classical: the gate permutes basis kets.
      at(g.q2) = classical(at(g.q2)) ? Fact::Basis : Fact::Unknown;
      return;
    }
    case GateKind::Ccnot: {
      const Fact c1 = at(g.q1), c2 = at(g.q2);
      if (c1 == Fact::K0 || c2 == Fact::K0) return;
      if (c1 == Fact::K1 && c2 == Fact::K1) {
        at(g.q3) = flipped(at(g.q3));
        return;
      }
      at(g.q3) = classical(at(g.q3)) ? Fact::Basis : Fact::Unknown;
      return;
    }
    case GateKind::Crz:
      // Diagonal, but conservatively treated as fact-destroying unless both
      // operands are branch-classical (phases then factor per branch).
      if (!classical(at(g.q1)) || !classical(at(g.q2))) {
        at(g.q1) = Fact::Unknown;
        at(g.q2) = Fact::Unknown;
      }
      return;
    case GateKind::Cy:
    case GateKind::CyDag:
      if (at(g.q1) == Fact::K0) return;
      at(g.q2) = Fact::Unknown;
      return;
    case GateKind::Cswap: {
      const Fact c = at(g.q1);
      if (c == Fact::K0) return;
      if (c == Fact::K1) {
        std::swap(at(g.q2), at(g.q3));
        return;
      }
      const Fact merged =
          classical(at(g.q2)) && classical(at(g.q3)) ? Fact::Basis : Fact::Unknown;
      at(g.q2) = merged;
      at(g.q3) = merged;
      return;
    }
  }
}

std::vector<int> control_qubits(const Gate& g) {
  switch (g.kind) {
    case GateKind::Cnot:
    case GateKind::Cy:
    case GateKind::CyDag:
    case GateKind::Crz:
    case GateKind::Cswap:
      return {g.q1};
    case GateKind::Ccnot:
      return {g.q1, g.q2};
    default:
      return {};
  }
}

std::vector<int> all_qubits(const Gate& g) {
  std::vector<int> qs;
  const int ar = g.arity();
  const int raw[3] = {g.q1, g.q2, g.q3};
  for (int i = 0; i < ar; ++i) qs.push_back(raw[i]);
  return qs;
}

std::string describe(const Gate& g) {
  if (!g.label.empty()) return g.label;
  std::string s;
  switch (g.kind) {
    case GateKind::H: s = "H"; break;
    case GateKind::Not: s = "NOT"; break;
    case GateKind::Cnot: s = "CNOT"; break;
    case GateKind::Cy: s = "CY"; break;
    case GateKind::CyDag: s = "CYDAG"; break;
    case GateKind::Crz: s = "CRZ"; break;
    case GateKind::Ccnot: s = "CCNOT"; break;
    case GateKind::Cswap: s = "CSWAP"; break;
    case GateKind::Rz: s = "RZ"; break;
    case GateKind::Barrier: s = "BARRIER"; break;
  }
  for (int q : all_qubits(g)) s += " " + std::to_string(q);
  return s;
}

Facts facts_checked(const Circuit& c, const StateFacts& input) {
  if (static_cast<int>(input.facts.size()) != c.n_qubits)
    throw std::invalid_argument("peephole_optimize: facts/circuit qubit count mismatch");
  return input.facts;
}

}  // namespace

StateFacts shor_input_facts(int n_qubits) {
  StateFacts s;
  s.facts.assign(static_cast<size_t>(n_qubits), Fact::K0);
  s.facts.back() = Fact::K1;
  s.measured = {1, 2, 3};
  return s;
}

std::vector<std::vector<Fact>> propagate_facts(const Circuit& c, const StateFacts& input) {
  Facts f = facts_checked(c, input);
  std::vector<Facts> trace;
  trace.reserve(c.gates.size() + 1);
  for (const Gate& g : c.gates) {
    trace.push_back(f);
    transfer(f, g);
  }
  trace.push_back(f);
  return trace;
}

Circuit peephole_optimize(const Circuit& c, const StateFacts& input, PeepholeStats* stats) {
  PeepholeStats local;
  PeepholeStats& st = stats ? *stats : local;
  facts_checked(c, input);

  // Pass 1+2 share one facts sweep: dropping a |0>-controlled gate and
  // folding a |1>-controlled one both leave the transfer of the remaining
  // program unchanged, so facts stay valid as we go.
  Circuit cur(c.n_qubits);
  {
    Facts f = input.facts;
    for (const Gate& g : c.gates) {
      const auto controls = control_qubits(g);
      const bool dead = std::any_of(controls.begin(), controls.end(), [&](int q) {
        return f[static_cast<size_t>(q - 1)] == Fact::K0;
      });
      if (dead) {
        st.dead_control.push_back(describe(g));
        continue;  // identity on the reachable state; facts unchanged
      }
      Gate out = g;
      if (g.kind == GateKind::Cnot && f[static_cast<size_t>(g.q1 - 1)] == Fact::K1) {
        out = make_not(g.q2);
        out.label = g.label;
        st.specialized.push_back(describe(g));
      } else if (g.kind == GateKind::Ccnot) {
        const bool k1a = f[static_cast<size_t>(g.q1 - 1)] == Fact::K1;
        const bool k1b = f[static_cast<size_t>(g.q2 - 1)] == Fact::K1;
        if (k1a && k1b) {
          out = make_not(g.q3);
        } else if (k1a) {
          out = make_cnot(g.q2, g.q3);
        } else if (k1b) {
          out = make_cnot(g.q1, g.q3);
        }
        if (k1a || k1b) {
          out.label = g.label;
          st.specialized.push_back(describe(g));
        }
      } else if (g.kind == GateKind::Crz && f[static_cast<size_t>(g.q1 - 1)] == Fact::K1) {
        out = make_rz(g.q2, g.angle_deg);
        out.label = g.label;
        st.specialized.push_back(describe(g));
      }
      transfer(f, out);  // the specialization's transfer is at least as precise
      cur.append(std::move(out));
    }
  }

  // Pass 3: backward liveness from the measured register.
  {
    std::vector<bool> live(static_cast<size_t>(c.n_qubits), false);
    for (int q : input.measured) live[static_cast<size_t>(q - 1)] = true;
    std::vector<bool> keep(cur.gates.size(), false);
    for (size_t i = cur.gates.size(); i-- > 0;) {
      const Gate& g = cur.gates[i];
      if (g.kind == GateKind::Barrier) {
        keep[i] = true;
        std::fill(live.begin(), live.end(), true);
        continue;
      }
      const auto qs = all_qubits(g);
      const bool touches = std::any_of(qs.begin(), qs.end(), [&](int q) {
        return live[static_cast<size_t>(q - 1)];
      });
      if (!touches) {
        st.dead_gates.push_back(describe(g));
        continue;
      }
      keep[i] = true;
      for (int q : qs) live[static_cast<size_t>(q - 1)] = true;
    }
    Circuit pruned(cur.n_qubits);
    for (size_t i = 0; i < cur.gates.size(); ++i)
      if (keep[i]) pruned.append(std::move(cur.gates[i]));
    cur = std::move(pruned);
  }

  // Pass 4: CCNOT -> CY/CRZ/CYDAG when the target is branch-classical and a
  // branch-classical control is available to carry the conditional phase.
  {
    const auto trace = propagate_facts(cur, {input.facts, input.measured});
    Circuit out(cur.n_qubits);
    for (size_t i = 0; i < cur.gates.size(); ++i) {
      const Gate& g = cur.gates[i];
      if (g.kind == GateKind::Ccnot) {
        const Facts& f = trace[i];
        const Fact c1 = f[static_cast<size_t>(g.q1 - 1)];
        const Fact c2 = f[static_cast<size_t>(g.q2 - 1)];
        const Fact t = f[static_cast<size_t>(g.q3 - 1)];
        if (classical(t) && (classical(c1) || classical(c2))) {
          const int phase_c = classical(c2) ? g.q2 : g.q1;
          const int rot_c = phase_c == g.q2 ? g.q1 : g.q2;
          Gate cy = make_cy(rot_c, g.q3);
          cy.label = g.label;
          out.append(std::move(cy));
          out.append(make_crz(phase_c, g.q3, 180.0));
          out.append(make_cydag(rot_c, g.q3));
          st.rewritten.push_back(describe(g));
          continue;
        }
      }
      out.append(g);
    }
    cur = std::move(out);
  }
  return cur;
}

}  // namespace nmrshor
