// Copyright 2026 The nmrshor Authors
// SPDX-License-Identifier: Apache-2.0
#include "nmrshor/readout.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "nmrshor/channels.hpp"
#include "nmrshor/spinsys.hpp"

namespace nmrshor {

const char* qubit_class_name(QubitClass c) {
  switch (c) {
    case QubitClass::Zero: return "zero";
    case QubitClass::One: return "one";
    case QubitClass::Mixed: return "mixed";
  }
  return "?";
}

namespace {

// Highest line frequency magnitude the observed spin can produce.
double max_line_hz(const MoleculeSpec& mol, int spin) {
  double f = std::abs(mol.offset_hz[static_cast<size_t>(spin - 1)]);
  for (int j = 1; j <= mol.n_spins; ++j)
    if (j != spin) f += std::abs(mol.j(spin, j)) / 2.0;
  return f;
}

Complex transverse_signal(const Mat& rho, int spin, int n_spins) {
  const int dim = dim_for(n_spins);
  const int m = spin_mask(spin, n_spins);
  Complex s = 0.0;
  for (int b = 0; b < dim; ++b)
    if (!(b & m)) s += rho(b, b | m);
  return s;
}

}  // namespace

double default_dt(const MoleculeSpec& mol) {
  double worst = 0.0;
  for (int s = 1; s <= mol.n_spins; ++s) worst = std::max(worst, max_line_hz(mol, s));
  if (worst <= 0.0) throw std::invalid_argument("default_dt: degenerate molecule");
  return 1.0 / (2.0 * 1.25 * worst);
}

Complex readout_signal0(const Mat& rho, const MoleculeSpec& mol, int spin) {
  const Mat pulsed = simulate_pulse(rho, mol, spin, 90.0, 90.0, 0.0);
  return transverse_signal(pulsed, spin, mol.n_spins);
}

Fid simulate_fid(const Mat& rho, const MoleculeSpec& mol, int spin, double duration_s,
                 double dt_s, bool decoherence) {
  if (dt_s <= 0.0 || duration_s <= 0.0)
    throw std::invalid_argument("simulate_fid: need positive duration and dt");
  if (1.0 / (2.0 * dt_s) <= max_line_hz(mol, spin))
    throw std::invalid_argument("simulate_fid: dt violates the Nyquist rule for this spin");
  const int n = std::max<int>(2, static_cast<int>(std::llround(duration_s / dt_s)));
  const int n_spins = mol.n_spins;
  const int dim = dim_for(n_spins);

  Mat state = simulate_pulse(rho, mol, spin, 90.0, 90.0, 0.0);  // 90 deg about +y

  // Per-step operators are time-independent, so hoist them: free-evolution
  // phases, per-spin population mixing weights, and coherence decay factors
  // combining sqrt(1-gamma) (T1) with exp(-dt/T2) per differing spin bit.
  const RVec h = build_hamiltonian(mol);
  Vec phase(dim);
  for (int a = 0; a < dim; ++a) phase(a) = std::polar(1.0, -h(a) * dt_s);

  struct GadCoef {
    double c00, c01, c10, c11;
  };
  std::vector<GadCoef> gad(static_cast<size_t>(n_spins));
  std::vector<double> coh(static_cast<size_t>(dim), 1.0);
  if (decoherence) {
    for (int s = 1; s <= n_spins; ++s) {
      const double gamma = 1.0 - std::exp(-dt_s / mol.t1_s[static_cast<size_t>(s - 1)]);
      const double p = gad_p(mol.larmor_hz[static_cast<size_t>(s - 1)], mol.temperature_k);
      gad[static_cast<size_t>(s - 1)] = {p + (1.0 - p) * (1.0 - gamma), p * gamma,
                                         (1.0 - p) * gamma, (1.0 - p) + p * (1.0 - gamma)};
    }
    for (int x = 1; x < dim; ++x) {
      double f = 1.0;
      for (int s = 1; s <= n_spins; ++s)
        if (x & spin_mask(s, n_spins)) {
          f *= std::sqrt(std::exp(-dt_s / mol.t1_s[static_cast<size_t>(s - 1)]));
          f *= std::exp(-dt_s / mol.t2_s[static_cast<size_t>(s - 1)]);
        }
      coh[static_cast<size_t>(x)] = f;
    }
  }

  Fid fid;
  fid.spin = spin;
  fid.dt_s = dt_s;
  fid.samples.reserve(static_cast<size_t>(n));
  for (int k = 0; k < n; ++k) {
    fid.samples.push_back(transverse_signal(state, spin, n_spins));
    if (k + 1 == n) break;
    for (int a = 0; a < dim; ++a)
      for (int b = 0; b < dim; ++b) state(a, b) *= phase(a) * std::conj(phase(b));
    if (decoherence) {
      // Population pairs mix per spin; coherences take the combined factor.
      for (int s = 1; s <= n_spins; ++s) {
        const int m = spin_mask(s, n_spins);
        const GadCoef& g = gad[static_cast<size_t>(s - 1)];
        for (int a = 0; a < dim; ++a) {
          if (a & m) continue;
          for (int b = 0; b < dim; ++b) {
            if (b & m) continue;
            const Complex x = state(a, b), y = state(a | m, b | m);
            state(a, b) = g.c00 * x + g.c01 * y;
            state(a | m, b | m) = g.c10 * x + g.c11 * y;
          }
        }
      }
      for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b) state(a, b) *= coh[static_cast<size_t>(a ^ b)];
    }
  }
  return fid;
}

namespace {

std::mutex& fftw_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

Spectrum spectrum(const Fid& fid, int zero_fill, double phase_deg, double ref_offset_hz) {
  if (zero_fill < 1) throw std::invalid_argument("spectrum: zero_fill must be >= 1");
  if (fid.samples.size() < 2 || fid.dt_s <= 0.0)
    throw std::invalid_argument("spectrum: malformed FID");
  int n = static_cast<int>(fid.samples.size()) * zero_fill;
  if (n % 2) ++n;

  std::vector<Complex> in(static_cast<size_t>(n), Complex{0.0, 0.0});
  std::copy(fid.samples.begin(), fid.samples.end(), in.begin());
  std::vector<Complex> out(static_cast<size_t>(n));
  {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    fftw_plan plan =
        fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(in.data()),
                         reinterpret_cast<fftw_complex*>(out.data()), FFTW_FORWARD, FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
  }

  Spectrum sp;
  sp.bin_hz = 1.0 / (n * fid.dt_s);
  sp.phase_deg = phase_deg;
  sp.freq_hz.resize(static_cast<size_t>(n));
  sp.amplitudes.resize(static_cast<size_t>(n));
  const Complex ph = std::polar(1.0, phase_deg * kDegToRad);
  // FFTW_FORWARD uses e^{-2 pi i j k / n}, so a e^{+2 pi i f t} signal lands
  // in bin f; shift so the axis runs from -n/2 to n/2-1 bins.
  for (int j = 0; j < n; ++j) {
    const int raw = (j + n / 2) % n;
    sp.freq_hz[static_cast<size_t>(j)] = (j - n / 2) * sp.bin_hz - ref_offset_hz;
    sp.amplitudes[static_cast<size_t>(j)] = out[static_cast<size_t>(raw)] * fid.dt_s * ph;
  }
  return sp;
}

Complex spectrum_integral(const Spectrum& sp) {
  Complex sum = 0.0;
  for (const Complex& a : sp.amplitudes) sum += a;
  return sum * sp.bin_hz;
}

ClassifiedQubit classify_qubit(const Spectrum& sp, Complex reference_integral) {
  if (std::abs(reference_integral) <= 1e-16)
    throw std::runtime_error("classify_qubit: reference integral is zero (uncalibrated)");
  const Complex integral = spectrum_integral(sp);
  ClassifiedQubit out;
  out.s = (integral * std::conj(reference_integral)).real() / std::norm(reference_integral);
  out.cls = out.s > 0.5 ? QubitClass::Zero : out.s < -0.5 ? QubitClass::One : QubitClass::Mixed;
  return out;
}

std::vector<SpectralLine> detect_lines(const Spectrum& sp, double threshold) {
  std::vector<SpectralLine> lines;
  const size_t n = sp.amplitudes.size();
  if (n < 3) return lines;
  double peak = 0.0;
  for (const Complex& a : sp.amplitudes) peak = std::max(peak, std::abs(a));
  const double floor_abs = threshold * peak;
  for (size_t j = 1; j + 1 < n; ++j) {
    const double v = std::abs(sp.amplitudes[j]);
    if (v < floor_abs) continue;
    if (std::abs(sp.amplitudes[j - 1]) < v && v >= std::abs(sp.amplitudes[j + 1]))
      lines.push_back({sp.freq_hz[j], sp.amplitudes[j]});
  }
  return lines;
}

double expected_line_offset_hz(const MoleculeSpec& mol, int spin, int basis_index) {
  double f = 0.0;
  for (int j = 1; j <= mol.n_spins; ++j) {
    if (j == spin) continue;
    const int bit = spin_bit(basis_index, j, mol.n_spins);
    f += (bit ? +0.5 : -0.5) * mol.j(spin, j);
  }
  return f;
}

std::set<int> estimate_register(QubitClass q1, QubitClass q2, QubitClass q3) {
  auto bits = [](QubitClass c) -> std::vector<int> {
    switch (c) {
      case QubitClass::Zero: return {0};
      case QubitClass::One: return {1};
      case QubitClass::Mixed: return {0, 1};
    }
    return {};
  };
  std::set<int> ys;
  for (int b3 : bits(q3))
    for (int b2 : bits(q2))
      for (int b1 : bits(q1)) ys.insert(4 * b3 + 2 * b2 + b1);
  return ys;
}

std::string spectrum_csv(const Spectrum& sp) {
  std::ostringstream out;
  out << "freq_hz,real,imag\n";
  char buf[96];
  for (size_t j = 0; j < sp.freq_hz.size(); ++j) {
    std::snprintf(buf, sizeof buf, "%.9g,%.12g,%.12g\n", sp.freq_hz[j], sp.amplitudes[j].real(),
                  sp.amplitudes[j].imag());
    out << buf;
  }
  return out.str();
}

}  // namespace nmrshor
