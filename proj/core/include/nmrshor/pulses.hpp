// Copyright 2026 The nmrshor Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "nmrshor/circuit.hpp"
#include "nmrshor/molecule.hpp"
#include "nmrshor/types.hpp"

namespace nmrshor {

// Transmitter phase of a pulse, as an azimuth in the rotating frame.
enum class Axis : char { PlusX, PlusY, MinusX, MinusY };
double axis_azimuth_deg(Axis a);
const char* axis_token(Axis a);

struct PulseEvent {
  enum class Kind : char { Pulse, Delay, Frame, Acquire };
  Kind kind = Kind::Delay;
  int spin = 0;                                  // Pulse/Frame/Acquire
  double angle_deg = 0.0;                        // Pulse rotation / Frame advance
  Axis axis = Axis::PlusX;                       // Pulse
  double duration_s = 0.0;                       // Pulse/Delay
  std::vector<std::pair<int, int>> couplings;    // Delay: couplings to retain
};

PulseEvent make_pulse(int spin, double angle_deg, Axis axis, double duration_s = 0.0);
PulseEvent make_delay(double duration_s, std::vector<std::pair<int, int>> couplings = {});
PulseEvent make_frame(int spin, double angle_deg);
PulseEvent make_acquire(int spin);

struct PulseProgram {
  int n_spins = 0;
  std::vector<PulseEvent> events;
  double total_duration() const;
  int pulse_count() const;
};

struct LowerOptions {
  bool refocus = true;   // expand each delay into a refocused segment train
  double t90_s = 0.0;    // modeled duration of 90-degree pulses
  double t180_s = 0.0;   // modeled duration of 180-degree pulses
};

// Gate-to-pulse lowering.  Alphabet: H, NOT, CNOT, CY, CYDAG, CRZ, RZ,
// BARRIER.  z-rotations become zero-duration frame advances that later
// pulses absorb into their transmitter phase; controlled z-rotations become
// a frame advance plus a J-coupling delay of |theta|/(360 J_ct) seconds;
// CNOT is a 90-degree pulse pair around a 1/(2 J_ct) delay; CY wraps a CRZ
// of +/-90 degrees in x pulses.  Equality with the gate semantics (up to
// global phase) is enforced by verify_lowering.
PulseProgram lower_to_pulses(const Circuit& c, const MoleculeSpec& mol,
                             const LowerOptions& opt = {});

// Expand one annotated delay into 2^(m+1) equal sub-delays separated by
// sign-alternated 180-degree pulses so that the net evolution keeps exactly
// the listed couplings (scalar coupling between the paired spins) and
// cancels every chemical-shift offset and every other coupling.  Throws if
// the retained pairs share a spin; callers split such delays into
// sequential disjoint matchings first (exact, since all retained terms
// commute).
std::vector<PulseEvent> refocusing_schedule(const PulseEvent& delay, const MoleculeSpec& mol,
                                            double t180_s = 0.0);

// Execution.  Frame advances are deferred: each pulse is applied about the
// azimuth (axis - accumulated frame of its spin), and accumulated frames
// are materialized as explicit z rotations at every Acquire and at the end
// of the program.  The pure path treats pulses as instantaneous and ignores
// decoherence; the density-matrix path evolves pulse durations under the
// chemical-shift Hamiltonian and applies per-spin relaxation when enabled.
Vec run_pulses(const PulseProgram& p, const MoleculeSpec& mol, Vec psi);
Mat run_pulses(const PulseProgram& p, const MoleculeSpec& mol, Mat rho, bool decoherence);

// Fidelity |<circuit psi|pulse psi>|^2 from input |00...01>, pulse path run
// decoherence-free with instantaneous pulses.
double verify_lowering(const PulseProgram& p, const Circuit& c, const MoleculeSpec& mol);

// One event per line: `PULSE spin angle axis dur`, `DELAY dur [i:j ...]`,
// `FRAME spin angle`, `ACQUIRE spin`; `#` comments; `# spins N` header.
std::string serialize_pulses(const PulseProgram& p);
PulseProgram parse_pulses(const std::string& text);

}  // namespace nmrshor
