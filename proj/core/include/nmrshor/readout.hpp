// Copyright 2026 The nmrshor Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <set>
#include <string>
#include <vector>

#include "nmrshor/molecule.hpp"
#include "nmrshor/types.hpp"

namespace nmrshor {

// Free-induction decay of one observed spin: complex <sigma_+> samples at
// k * dt_s after the readout pulse.
struct Fid {
  int spin = 0;
  double dt_s = 0.0;
  std::vector<Complex> samples;
};

// Discrete spectrum of an Fid.  freq_hz is relative to the observed spin's
// offset when ref_offset_hz was passed to spectrum(); bin_hz is the FFT bin
// width; sum(amplitudes) * bin_hz equals the t=0 FID sample exactly.
struct Spectrum {
  std::vector<double> freq_hz;
  std::vector<Complex> amplitudes;
  double bin_hz = 0.0;
  double phase_deg = 0.0;
};

enum class QubitClass { Zero, One, Mixed };
const char* qubit_class_name(QubitClass c);

struct ClassifiedQubit {
  QubitClass cls = QubitClass::Mixed;
  double s = 0.0;  // normalized integral in [-1, 1]
};

struct SpectralLine {
  double freq_hz = 0.0;
  Complex amplitude;
};

// Global sampling interval satisfying Nyquist with a 25% margin for every
// spin: dt = 1 / (2 * 1.25 * max_i(|offset_i| + sum_j |J_ij| / 2)).
double default_dt(const MoleculeSpec& mol);

// Transverse signal right after a 90-degree +y readout pulse on `spin`:
// sum of rho[b, b + mask] over the spin's (0,1) coherence pairs.  For a
// diagonal input this equals (P0 - P1) / 2 of that spin.
Complex readout_signal0(const Mat& rho, const MoleculeSpec& mol, int spin);

// Apply the readout pulse, then sample the transverse signal every dt_s
// under free evolution plus (optionally) per-spin relaxation.  Throws if
// 1/(2 dt) does not exceed the observed spin's maximum line frequency.
Fid simulate_fid(const Mat& rho, const MoleculeSpec& mol, int spin, double duration_s,
                 double dt_s, bool decoherence);

// Zero-filled FFT of the FID with an optional zero-order phase; frequencies
// reported relative to ref_offset_hz.
Spectrum spectrum(const Fid& fid, int zero_fill = 4, double phase_deg = 0.0,
                  double ref_offset_hz = 0.0);

// sum(amplitudes) * bin_hz (equals FID(0) exactly).
Complex spectrum_integral(const Spectrum& sp);

// s = Re(integral * conj(reference)) / |reference|^2; class = zero when
// s > 0.5, one when s < -0.5, else mixed.  Throws when |reference| ~ 0.
ClassifiedQubit classify_qubit(const Spectrum& sp, Complex reference_integral);

// Local maxima of |amplitude| at or above `threshold` times the global
// maximum; positions are bin centers.
std::vector<SpectralLine> detect_lines(const Spectrum& sp, double threshold = 0.5);

// Line frequencies (relative to the observed spin) predicted for a basis
// state: sum over partners of -J/2 if the partner bit is 0 else +J/2.
double expected_line_offset_hz(const MoleculeSpec& mol, int spin, int basis_index);

// Cartesian product of {0}/{1}/{0,1} per class, assembled with qubit 3 as
// the most significant bit: y = 4 b(q3) + 2 b(q2) + b(q1).
std::set<int> estimate_register(QubitClass q1, QubitClass q2, QubitClass q3);

// Delimited text: header `freq_hz,real,imag`, one row per bin.
std::string spectrum_csv(const Spectrum& sp);

}  // namespace nmrshor
