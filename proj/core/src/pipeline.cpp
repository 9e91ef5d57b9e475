// Copyright 2026 The nmrshor Authors
// SPDX-License-Identifier: Apache-2.0
#include "nmrshor/pipeline.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <sstream>
#include <stdexcept>
#include <utility>

#include <nlohmann/json.hpp>

#include "nmrshor/compiler.hpp"
#include "nmrshor/prep.hpp"
#include "nmrshor/spinsys.hpp"

namespace nmrshor {

const char* sim_level_name(SimLevel v) { return v == SimLevel::Gate ? "gate" : "pulse"; }

const char* prep_mode_name(PrepMode v) {
  switch (v) {
    case PrepMode::Ideal: return "ideal";
    case PrepMode::Simulated36: return "simulated-36";
    case PrepMode::PulseLowered: return "pulse-lowered";
  }
  return "?";
}

RunConfig resolve_config(const RunConfig& in) {
  RunConfig cfg = in;
  if (!cfg.mol_loaded) {
    if (cfg.molecule_path.empty())
      throw std::invalid_argument("molecule: no molecule given (set a path or an inline spec)");
    cfg.mol = load_molecule(cfg.molecule_path);  // errors already carry "molecule: "
    cfg.mol_loaded = true;
  } else {
    cfg.mol.validate();
  }
  if (cfg.mol.n_spins != 7)
    throw std::invalid_argument("molecule: the factoring pipeline needs a 7-spin molecule");
  if (cfg.a < 2 || cfg.a > 14 || euclid_gcd(cfg.a, 15) != 1)
    throw std::invalid_argument(
        "base: a must satisfy 1 < a < 15 and gcd(a, 15) = 1 (a = " + std::to_string(cfg.a) + ")");
  if (cfg.decoherence && cfg.level != SimLevel::Pulse)
    throw std::invalid_argument("decoherence: requires pulse-level execution (set level=pulse)");
  if (cfg.acq_duration_s <= 0.0)
    throw std::invalid_argument("acq_duration: must be positive");
  if (cfg.acq_dt_s < 0.0)
    throw std::invalid_argument("acq_dt: must be nonnegative (0 selects automatically)");
  if (cfg.zero_fill < 1) throw std::invalid_argument("zero_fill: must be at least 1");
  if (cfg.t2_scale <= 0.0) throw std::invalid_argument("t2_scale: must be positive");
  if (cfg.t2_scale != 1.0) {
    for (double& t2 : cfg.mol.t2_s) t2 *= cfg.t2_scale;
    try {
      cfg.mol.validate();
    } catch (const std::exception& e) {
      throw std::invalid_argument(std::string("t2_scale: scaled molecule invalid: ") + e.what());
    }
  }
  if (cfg.acq_dt_s == 0.0) cfg.acq_dt_s = default_dt(cfg.mol);
  return cfg;
}

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Runs one pipeline stage, records its wall time, and prefixes any error
// with the stage name so failures carry stage attribution.
void timed_stage(const char* stage, std::vector<std::pair<std::string, double>>& timings,
                 const std::function<void()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  try {
    fn();
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string(stage) + ": " + e.what());
  }
  timings.emplace_back(stage, seconds_since(t0));
}

std::string csv_of_fid(const Fid& fid) {
  std::ostringstream out;
  out << "time_s,real,imag\n";
  char buf[96];
  for (size_t k = 0; k < fid.samples.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.9g,%.12g,%.12g\n", static_cast<double>(k) * fid.dt_s,
                  fid.samples[k].real(), fid.samples[k].imag());
    out << buf;
  }
  return out.str();
}

std::string csv_of_magnitude(const Spectrum& sp) {
  std::ostringstream out;
  out << "freq_hz,magnitude\n";
  char buf[64];
  for (size_t j = 0; j < sp.freq_hz.size(); ++j) {
    std::snprintf(buf, sizeof buf, "%.9g,%.12g\n", sp.freq_hz[j], std::abs(sp.amplitudes[j]));
    out << buf;
  }
  return out.str();
}

}  // namespace

RunResult run_shor(const RunConfig& raw) {
  const RunConfig cfg = resolve_config(raw);
  RunResult res;
  res.mol = cfg.mol;
  res.acquisition_duration_s = cfg.acq_duration_s;

  Mat rho;
  PrepScheme scheme;
  timed_stage("prep", res.timings_s, [&] {
    if (cfg.prep != PrepMode::Ideal) scheme = build_prep_scheme(cfg.mol);
    switch (cfg.prep) {
      case PrepMode::Ideal: {
        const Vec psi = effective_pure_ideal(cfg.mol.n_spins);
        rho = psi * psi.adjoint();
        break;
      }
      case PrepMode::Simulated36:
        rho = effective_pure_state(cfg.mol, scheme);
        break;
      case PrepMode::PulseLowered: {
        rho = effective_pure_pulsed(cfg.mol, scheme, cfg.decoherence);
        double total = 0.0;
        for (const PrepExperiment& e : scheme.experiments)
          total += lower_to_pulses(e.circuit, cfg.mol).total_duration();
        res.prep_duration_s = total / static_cast<double>(scheme.experiments.size());
        break;
      }
    }
  });

  timed_stage("compile", res.timings_s, [&] {
    Circuit full = build_shor_circuit(cfg.a, /*named=*/true);
    res.gate_count_original = static_cast<int>(full.gates.size());
    res.circuit = cfg.optimize ? peephole_optimize(full, shor_input_facts(full.n_qubits))
                               : std::move(full);
    res.gate_count_optimized = static_cast<int>(res.circuit.gates.size());
  });

  timed_stage("simulate", res.timings_s, [&] {
    if (cfg.level == SimLevel::Gate) {
      apply_circuit(rho, res.circuit);
    } else {
      res.pulses = lower_to_pulses(res.circuit, cfg.mol);
      res.sequence_duration_s = res.pulses.total_duration();
      rho = run_pulses(res.pulses, cfg.mol, std::move(rho), cfg.decoherence);
    }
  });

  std::array<Fid, 3> fids;
  timed_stage("readout", res.timings_s, [&] {
    auto one = [&](int spin) {
      Fid fid =
          simulate_fid(rho, cfg.mol, spin, cfg.acq_duration_s, cfg.acq_dt_s, cfg.decoherence);
      Spectrum sp = spectrum(fid, cfg.zero_fill, 0.0,
                             cfg.mol.offset_hz[static_cast<size_t>(spin - 1)]);
      return std::make_pair(std::move(fid), std::move(sp));
    };
    std::array<std::future<std::pair<Fid, Spectrum>>, 3> futures;
    for (int s = 1; s <= 3; ++s) futures[s - 1] = std::async(std::launch::async, one, s);
    for (int s = 1; s <= 3; ++s) {
      auto pr = futures[s - 1].get();
      fids[static_cast<size_t>(s - 1)] = std::move(pr.first);
      res.spectra[static_cast<size_t>(s - 1)] = std::move(pr.second);
    }
  });

  timed_stage("classify", res.timings_s, [&] {
    // Reference: same prep mode without the algorithm, decoherence off.  The
    // pulse-lowered prep equals the averaged fast path exactly when
    // decoherence is off, so the fast path serves as the reference there too.
    Mat rho_ref;
    if (cfg.prep == PrepMode::Ideal) {
      const Vec psi = effective_pure_ideal(cfg.mol.n_spins);
      rho_ref = psi * psi.adjoint();
    } else {
      rho_ref = effective_pure_state(cfg.mol, scheme);
    }
    for (int s = 1; s <= 3; ++s) {
      const Complex ref = readout_signal0(rho_ref, cfg.mol, s);
      res.qubits[static_cast<size_t>(s - 1)] =
          classify_qubit(res.spectra[static_cast<size_t>(s - 1)], ref);
    }
  });

  timed_stage("postprocess", res.timings_s, [&] {
    res.y_support =
        estimate_register(res.qubits[0].cls, res.qubits[1].cls, res.qubits[2].cls);
    res.period = period_from_support(res.y_support, 3);
    if (res.period) {
      res.report = factors_from_period(cfg.a, *res.period, 15);
      res.report.r = *res.period;
    } else {
      res.report.a = cfg.a;
      res.report.r = 0;
      res.report.status = FactorStatus::Failed;
    }
    res.report.y_support = res.y_support;
  });

  if (!cfg.out_dir.empty()) {
    namespace fs = std::filesystem;
    timed_stage("write", res.timings_s, [&] {
      fs::create_directories(cfg.out_dir);
      auto write_file = [&](const std::string& name, const std::string& text) {
        const fs::path p = fs::path(cfg.out_dir) / name;
        std::ofstream out(p, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open " + p.string());
        out << text;
        if (!out) throw std::runtime_error("short write to " + p.string());
        res.files_written.push_back(p.string());
      };
      for (int s = 1; s <= 3; ++s)
        write_file("spectrum_q" + std::to_string(s) + ".csv",
                   spectrum_csv(res.spectra[static_cast<size_t>(s - 1)]));
      if (cfg.plot_data) {
        for (int s = 1; s <= 3; ++s) {
          write_file("fid_q" + std::to_string(s) + ".csv",
                     csv_of_fid(fids[static_cast<size_t>(s - 1)]));
          write_file("magnitude_q" + std::to_string(s) + ".csv",
                     csv_of_magnitude(res.spectra[static_cast<size_t>(s - 1)]));
        }
      }
      if (cfg.dump_pulses) {
        if (res.pulses.events.empty()) res.pulses = lower_to_pulses(res.circuit, cfg.mol);
        write_file("pulses.txt", serialize_pulses(res.pulses));
      }
      write_file("summary.json", summary_json(cfg, res));
    });
    // The sidecar carries wall-clock data, so it lives outside the
    // deterministic summary and is written after all timed stages.
    const fs::path p = fs::path(cfg.out_dir) / "timings.json";
    std::ofstream out(p, std::ios::binary);
    if (out) {
      out << timings_json(res);
      res.files_written.push_back(p.string());
    }
  }
  return res;
}

std::string summary_json(const RunConfig& cfg, const RunResult& res) {
  nlohmann::json j;
  j["base"] = cfg.a;
  j["config"] = {
      {"molecule", cfg.molecule_path.empty() ? "inline" : cfg.molecule_path},
      {"level", sim_level_name(cfg.level)},
      {"prep", prep_mode_name(cfg.prep)},
      {"decoherence", cfg.decoherence},
      {"optimize", cfg.optimize},
      {"acq_duration_s", cfg.acq_duration_s},
      {"acq_dt_s", cfg.acq_dt_s},
      {"zero_fill", cfg.zero_fill},
      {"t2_scale", cfg.t2_scale},
      {"seed", cfg.seed},
  };
  j["molecule"] = {{"n_spins", res.mol.n_spins}, {"labels", res.mol.labels}};
  j["circuit"] = {{"gates_original", res.gate_count_original},
                  {"gates_executed", res.gate_count_optimized}};
  if (!res.pulses.events.empty())
    j["pulses"] = {{"count", res.pulses.pulse_count()},
                   {"events", res.pulses.events.size()},
                   {"duration_s", res.pulses.total_duration()}};
  j["durations_s"] = {
      {"prep", res.prep_duration_s},
      {"sequence", res.sequence_duration_s},
      {"acquisition", res.acquisition_duration_s},
      {"total_simulated",
       res.prep_duration_s + res.sequence_duration_s + res.acquisition_duration_s},
  };
  nlohmann::json qubits = nlohmann::json::array();
  for (int s = 1; s <= 3; ++s) {
    const ClassifiedQubit& q = res.qubits[static_cast<size_t>(s - 1)];
    qubits.push_back({{"qubit", s}, {"class", qubit_class_name(q.cls)}, {"s", q.s}});
  }
  j["qubits"] = qubits;
  j["y_support"] = res.y_support;
  if (res.period)
    j["period"] = *res.period;
  else
    j["period"] = nullptr;
  j["factors"] = res.report.factors;
  j["status"] = factor_status_name(res.report.status);
  return j.dump(2) + "\n";
}

std::string timings_json(const RunResult& res) {
  nlohmann::json stages = nlohmann::json::array();
  double total = 0.0;
  for (const auto& [name, sec] : res.timings_s) {
    stages.push_back({{"stage", name}, {"seconds", sec}});
    total += sec;
  }
  nlohmann::json j;
  j["stages"] = stages;
  j["total_seconds"] = total;
  return j.dump(2) + "\n";
}

}  // namespace nmrshor
