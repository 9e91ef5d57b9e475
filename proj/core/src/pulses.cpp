// Copyright 2026 The nmrshor Authors
// SPDX-License-Identifier: Apache-2.0
#include "nmrshor/pulses.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "nmrshor/channels.hpp"
#include "nmrshor/spinsys.hpp"

namespace nmrshor {

double axis_azimuth_deg(Axis a) {
  switch (a) {
    case Axis::PlusX: return 0.0;
    case Axis::PlusY: return 90.0;
    case Axis::MinusX: return 180.0;
    case Axis::MinusY: return 270.0;
  }
  return 0.0;
}

const char* axis_token(Axis a) {
  switch (a) {
    case Axis::PlusX: return "+x";
    case Axis::PlusY: return "+y";
    case Axis::MinusX: return "-x";
    case Axis::MinusY: return "-y";
  }
  return "?";
}

PulseEvent make_pulse(int spin, double angle_deg, Axis axis, double duration_s) {
  if (duration_s < 0.0) throw std::invalid_argument("pulse: negative duration");
  PulseEvent e;
  e.kind = PulseEvent::Kind::Pulse;
  e.spin = spin;
  e.angle_deg = angle_deg;
  e.axis = axis;
  e.duration_s = duration_s;
  return e;
}

PulseEvent make_delay(double duration_s, std::vector<std::pair<int, int>> couplings) {
  if (duration_s < 0.0) throw std::invalid_argument("delay: negative duration");
  PulseEvent e;
  e.kind = PulseEvent::Kind::Delay;
  e.duration_s = duration_s;
  e.couplings = std::move(couplings);
  return e;
}

PulseEvent make_frame(int spin, double angle_deg) {
  PulseEvent e;
  e.kind = PulseEvent::Kind::Frame;
  e.spin = spin;
  e.angle_deg = angle_deg;
  return e;
}

PulseEvent make_acquire(int spin) {
  PulseEvent e;
  e.kind = PulseEvent::Kind::Acquire;
  e.spin = spin;
  return e;
}

double PulseProgram::total_duration() const {
  double t = 0.0;
  for (const PulseEvent& e : events) t += e.duration_s;
  return t;
}

int PulseProgram::pulse_count() const {
  return static_cast<int>(std::count_if(events.begin(), events.end(), [](const PulseEvent& e) {
    return e.kind == PulseEvent::Kind::Pulse;
  }));
}

namespace {

double coupling_or_throw(const MoleculeSpec& mol, int a, int b) {
  const double j = mol.j(a, b);
  if (j == 0.0)
    throw std::runtime_error("lowering: spins " + std::to_string(a) + "," + std::to_string(b) +
                             " have zero coupling");
  if (j < 0.0)
    throw std::runtime_error("lowering: negative couplings are not supported");
  return j;
}

class Lowerer {
 public:
  Lowerer(const MoleculeSpec& mol, const LowerOptions& opt) : mol_(mol), opt_(opt) {}

  std::vector<PulseEvent> take() { return std::move(events_); }

  void gate(const Gate& g) {
    switch (g.kind) {
      case GateKind::Barrier:
        return;
      case GateKind::H:
        frame(g.q1, 180.0);
        pulse(g.q1, 90.0, Axis::PlusY, opt_.t90_s);
        return;
      case GateKind::Not:
        pulse(g.q1, 180.0, Axis::PlusX, opt_.t180_s);
        return;
      case GateKind::Rz:
        frame(g.q1, g.angle_deg);
        return;
      case GateKind::Crz:
        crz(g.q1, g.q2, g.angle_deg);
        return;
      case GateKind::Cnot:
        frame(g.q2, 270.0);
        pulse(g.q2, 90.0, Axis::MinusX, opt_.t90_s);
        delay(0.5 / coupling_or_throw(mol_, g.q1, g.q2), g.q1, g.q2);
        pulse(g.q2, 90.0, Axis::PlusY, opt_.t90_s);
        frame(g.q1, -90.0);
        return;
      case GateKind::Cy:
      case GateKind::CyDag:
        pulse(g.q2, 90.0, Axis::PlusX, opt_.t90_s);
        crz(g.q1, g.q2, g.kind == GateKind::Cy ? 90.0 : -90.0);
        pulse(g.q2, 90.0, Axis::MinusX, opt_.t90_s);
        return;
      case GateKind::Ccnot:
      case GateKind::Cswap:
        throw std::runtime_error("lowering: gate not lowerable (run the optimizer first)");
    }
  }

 private:
  void pulse(int s, double ang, Axis ax, double dur) {
    events_.push_back(make_pulse(s, ang, ax, dur));
  }

  void frame(int s, double ang) {
    if (ang != 0.0) events_.push_back(make_frame(s, ang));
  }

  void delay(double dur, int a, int b) {
    PulseEvent d = make_delay(dur, {{a, b}});
    if (opt_.refocus) {
      auto sched = refocusing_schedule(d, mol_, opt_.t180_s);
      events_.insert(events_.end(), sched.begin(), sched.end());
    } else {
      events_.push_back(std::move(d));
    }
  }

  // CRZ(c,t,theta) == Frame(t, r/2) followed by scalar-coupling evolution
  // for |r|/(360 J_ct) seconds, with r = theta reduced into (-360, 0]; each
  // full turn removed contributes a 180-degree frame advance on the control
  // (and a global phase).
  void crz(int c, int t, double theta) {
    double r = theta;
    int wraps = 0;
    while (r > 0.0) {
      r -= 360.0;
      ++wraps;
    }
    if (wraps) frame(c, 180.0 * wraps);
    frame(t, r / 2.0);
    if (r < 0.0) delay(-r / (360.0 * coupling_or_throw(mol_, c, t)), c, t);
  }

  const MoleculeSpec& mol_;
  const LowerOptions& opt_;
  std::vector<PulseEvent> events_;
};

}  // namespace

PulseProgram lower_to_pulses(const Circuit& c, const MoleculeSpec& mol,
                             const LowerOptions& opt) {
  if (c.n_qubits != mol.n_spins)
    throw std::invalid_argument("lower_to_pulses: circuit/molecule spin count mismatch");
  Lowerer lw(mol, opt);
  for (const Gate& g : c.gates) lw.gate(g);
  PulseProgram p;
  p.n_spins = c.n_qubits;
  p.events = lw.take();
  return p;
}

std::vector<PulseEvent> refocusing_schedule(const PulseEvent& delay, const MoleculeSpec& mol,
                                            double t180_s) {
  if (delay.kind != PulseEvent::Kind::Delay)
    throw std::invalid_argument("refocusing_schedule: not a delay");
  std::vector<PulseEvent> out;
  if (delay.duration_s == 0.0) return out;
  const int n = mol.n_spins;

  // Row assignment: each retained pair is one group, every remaining spin a
  // singleton group.  Spins sharing a row keep their mutual coupling; all
  // inter-row couplings and all offsets average to zero over the train.
  std::vector<int> row(static_cast<size_t>(n) + 1, 0);
  int next_row = 1;
  for (const auto& [a, b] : delay.couplings) {
    if (a < 1 || a > n || b < 1 || b > n || a == b)
      throw std::invalid_argument("refocusing_schedule: bad coupling pair");
    if (row[static_cast<size_t>(a)] || row[static_cast<size_t>(b)])
      throw std::invalid_argument(
          "refocusing_schedule: retained pairs share a spin; split the delay");
    row[static_cast<size_t>(a)] = row[static_cast<size_t>(b)] = next_row++;
  }
  for (int s = 1; s <= n; ++s)
    if (!row[static_cast<size_t>(s)]) row[static_cast<size_t>(s)] = next_row++;
  const int groups = next_row - 1;

  int m = 1;
  while ((1 << m) - 1 < groups) ++m;
  const int half = 1 << m;
  const int segments = half * 2;

  // Palindromic Walsh signs: segment k uses index k' = k (first half) or
  // 2^(m+1)-1-k (second half); spin sign = parity of row & k'.
  auto sign = [&](int r, int k) {
    const int kp = k < half ? k : segments - 1 - k;
    return std::popcount(static_cast<unsigned>(r & kp)) & 1 ? -1 : 1;
  };

  std::vector<int> flips(static_cast<size_t>(n) + 1, 0);  // per-spin pulse parity
  const double seg_t = delay.duration_s / segments;
  for (int k = 0; k < segments; ++k) {
    out.push_back(make_delay(seg_t));
    if (k + 1 == segments) break;
    for (int s = 1; s <= n; ++s) {
      const int r = row[static_cast<size_t>(s)];
      if (sign(r, k) == sign(r, k + 1)) continue;
      const Axis ax = flips[static_cast<size_t>(s)]++ % 2 == 0 ? Axis::PlusX : Axis::MinusX;
      out.push_back(make_pulse(s, 180.0, ax, t180_s));
    }
  }
  return out;
}

namespace {

// Deferred-frame bookkeeping shared by both runners.
class FrameTracker {
 public:
  explicit FrameTracker(int n) : frame_deg_(static_cast<size_t>(n) + 1, 0.0) {}

  void advance(int spin, double deg) { frame_deg_[static_cast<size_t>(spin)] += deg; }

  double physical_azimuth(const PulseEvent& e) const {
    return axis_azimuth_deg(e.axis) - frame_deg_[static_cast<size_t>(e.spin)];
  }

  template <typename State>
  void materialize(State& state, int n_spins) {
    for (int s = 1; s <= n_spins; ++s) {
      double& f = frame_deg_[static_cast<size_t>(s)];
      if (f != 0.0) apply_single_spin_unitary(state, z_rotation2(f), s, n_spins);
      f = 0.0;
    }
  }

 private:
  std::vector<double> frame_deg_;
};

void check_program(const PulseProgram& p, const MoleculeSpec& mol, Eigen::Index dim) {
  if (p.n_spins != mol.n_spins)
    throw std::invalid_argument("run_pulses: program/molecule spin count mismatch");
  if (dim != Eigen::Index{1} << p.n_spins)
    throw std::invalid_argument("run_pulses: state dimension mismatch");
}

}  // namespace

Vec run_pulses(const PulseProgram& p, const MoleculeSpec& mol, Vec psi) {
  check_program(p, mol, psi.size());
  const RVec h = build_hamiltonian(mol);
  FrameTracker frames(p.n_spins);
  for (const PulseEvent& e : p.events) {
    switch (e.kind) {
      case PulseEvent::Kind::Pulse:
        apply_single_spin_unitary(psi, rotation2(e.angle_deg, frames.physical_azimuth(e)),
                                  e.spin, p.n_spins);
        break;
      case PulseEvent::Kind::Delay:
        free_evolution_inplace(psi, h, e.duration_s);
        break;
      case PulseEvent::Kind::Frame:
        frames.advance(e.spin, e.angle_deg);
        break;
      case PulseEvent::Kind::Acquire:
        frames.materialize(psi, p.n_spins);
        break;
    }
  }
  frames.materialize(psi, p.n_spins);
  return psi;
}

Mat run_pulses(const PulseProgram& p, const MoleculeSpec& mol, Mat rho, bool decoherence) {
  check_program(p, mol, rho.rows());
  const RVec h = build_hamiltonian(mol);
  const RVec h0 = build_h0(mol);
  FrameTracker frames(p.n_spins);
  for (const PulseEvent& e : p.events) {
    switch (e.kind) {
      case PulseEvent::Kind::Pulse:
        if (e.duration_s > 0.0) {
          free_evolution_inplace(rho, h0, e.duration_s);
          if (decoherence) relaxation_step_inplace(rho, mol, e.duration_s);
        }
        apply_single_spin_unitary(rho, rotation2(e.angle_deg, frames.physical_azimuth(e)),
                                  e.spin, p.n_spins);
        break;
      case PulseEvent::Kind::Delay:
        free_evolution_inplace(rho, h, e.duration_s);
        if (decoherence) relaxation_step_inplace(rho, mol, e.duration_s);
        break;
      case PulseEvent::Kind::Frame:
        frames.advance(e.spin, e.angle_deg);
        break;
      case PulseEvent::Kind::Acquire:
        frames.materialize(rho, p.n_spins);
        break;
    }
  }
  frames.materialize(rho, p.n_spins);
  return rho;
}

double verify_lowering(const PulseProgram& p, const Circuit& c, const MoleculeSpec& mol) {
  Vec ideal = basis_state(1, c.n_qubits);
  apply_circuit(ideal, c);
  const Vec lowered = run_pulses(p, mol, basis_state(1, c.n_qubits));
  return state_fidelity(ideal, lowered);
}

namespace {

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string serialize_pulses(const PulseProgram& p) {
  std::ostringstream out;
  out << "# spins " << p.n_spins << "\n";
  for (const PulseEvent& e : p.events) {
    switch (e.kind) {
      case PulseEvent::Kind::Pulse:
        out << "PULSE " << e.spin << ' ' << format_double(e.angle_deg) << ' '
            << axis_token(e.axis) << ' ' << format_double(e.duration_s) << "\n";
        break;
      case PulseEvent::Kind::Delay:
        out << "DELAY " << format_double(e.duration_s);
        for (const auto& [a, b] : e.couplings) out << ' ' << a << ':' << b;
        out << "\n";
        break;
      case PulseEvent::Kind::Frame:
        out << "FRAME " << e.spin << ' ' << format_double(e.angle_deg) << "\n";
        break;
      case PulseEvent::Kind::Acquire:
        out << "ACQUIRE " << e.spin << "\n";
        break;
    }
  }
  return out.str();
}

PulseProgram parse_pulses(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  PulseProgram p;
  int max_spin = 0;
  auto see = [&max_spin](int s) {
    max_spin = std::max(max_spin, s);
    return s;
  };
  while (std::getline(in, line)) {
    std::istringstream probe(line);
    std::string hash, word;
    int maybe_n = 0;
    if (probe >> hash >> word >> maybe_n && hash == "#" && word == "spins") p.n_spins = maybe_n;
    const size_t cut = line.find('#');
    if (cut != std::string::npos) line.erase(cut);
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    if (tok == "PULSE") {
      int spin;
      double ang, dur;
      std::string ax;
      if (!(ls >> spin >> ang >> ax >> dur))
        throw std::invalid_argument("parse_pulses: malformed PULSE line");
      Axis axis;
      if (ax == "+x") axis = Axis::PlusX;
      else if (ax == "+y") axis = Axis::PlusY;
      else if (ax == "-x") axis = Axis::MinusX;
      else if (ax == "-y") axis = Axis::MinusY;
      else throw std::invalid_argument("parse_pulses: bad axis '" + ax + "'");
      p.events.push_back(make_pulse(see(spin), ang, axis, dur));
    } else if (tok == "DELAY") {
      double dur;
      if (!(ls >> dur)) throw std::invalid_argument("parse_pulses: malformed DELAY line");
      std::vector<std::pair<int, int>> pairs;
      std::string pp;
      while (ls >> pp) {
        const size_t colon = pp.find(':');
        if (colon == std::string::npos)
          throw std::invalid_argument("parse_pulses: bad coupling pair '" + pp + "'");
        pairs.emplace_back(see(std::stoi(pp.substr(0, colon))),
                           see(std::stoi(pp.substr(colon + 1))));
      }
      p.events.push_back(make_delay(dur, std::move(pairs)));
    } else if (tok == "FRAME") {
      int spin;
      double ang;
      if (!(ls >> spin >> ang)) throw std::invalid_argument("parse_pulses: malformed FRAME line");
      p.events.push_back(make_frame(see(spin), ang));
    } else if (tok == "ACQUIRE") {
      int spin;
      if (!(ls >> spin)) throw std::invalid_argument("parse_pulses: malformed ACQUIRE line");
      p.events.push_back(make_acquire(see(spin)));
    } else {
      throw std::invalid_argument("parse_pulses: unknown event '" + tok + "'");
    }
  }
  if (p.n_spins == 0) p.n_spins = max_spin;
  return p;
}

}  // namespace nmrshor
