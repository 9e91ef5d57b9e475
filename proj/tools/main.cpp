// Copyright 2026 The nmrshor Authors
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: factoring runs, circuit/pulse dumps, and spectrum
// exports for the 7-spin simulator.
#include <chrono>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "nmrshor/compiler.hpp"
#include "nmrshor/pipeline.hpp"
#include "nmrshor/prep.hpp"
#include "nmrshor/pulses.hpp"
#include "nmrshor/readout.hpp"
#include "nmrshor/spinsys.hpp"

using namespace nmrshor;

namespace {

constexpr const char* kDefaultMolecule = NMRSHOR_SAMPLE_MOLECULE;

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  ~Timer() {
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::fprintf(stderr, "wall time: %.3f s\n", s);
  }
};

SimLevel parse_level(const std::string& s) {
  return s == "pulse" ? SimLevel::Pulse : SimLevel::Gate;
}

PrepMode parse_prep(const std::string& s) {
  if (s == "ideal") return PrepMode::Ideal;
  if (s == "pulse-lowered") return PrepMode::PulseLowered;
  return PrepMode::Simulated36;
}

int cmd_run(const RunConfig& cfg) {
  const RunResult r = run_shor(cfg);
  std::printf("base %d, %s level, decoherence %s, prep %s\n", cfg.a, sim_level_name(cfg.level),
              cfg.decoherence ? "on" : "off", prep_mode_name(cfg.prep));
  std::printf("circuit: %d gates (%d executed)\n", r.gate_count_original,
              r.gate_count_optimized);
  if (!r.pulses.events.empty())
    std::printf("pulses: %d over %.6f s\n", r.pulses.pulse_count(),
                r.pulses.total_duration());
  for (int q = 0; q < 3; ++q)
    std::printf("qubit %d: %-5s (s = %+.4f)\n", q + 1,
                qubit_class_name(r.qubits[static_cast<size_t>(q)].cls),
                r.qubits[static_cast<size_t>(q)].s);
  std::string ys;
  for (int y : r.y_support) ys += std::to_string(y) + " ";
  std::printf("y support: %s\n", ys.c_str());
  if (r.period)
    std::printf("period r = %d\n", *r.period);
  else
    std::printf("period: undetermined\n");
  std::string fs;
  for (int f : r.report.factors) fs += std::to_string(f) + " ";
  std::printf("factors: %s(%s)\n", fs.c_str(), factor_status_name(r.report.status));
  for (const std::string& f : r.files_written) std::printf("wrote %s\n", f.c_str());
  return r.report.status == FactorStatus::Success ? 0 : 2;
}

int cmd_dump_circuit(int a, bool optimized) {
  Circuit c = build_shor_circuit(a, true);
  if (optimized) c = peephole_optimize(c, shor_input_facts());
  std::fputs(serialize_circuit(c).c_str(), stdout);
  return 0;
}

int cmd_dump_pulses(int a, const std::string& molecule) {
  const MoleculeSpec mol = load_molecule(molecule);
  const Circuit opt = peephole_optimize(build_shor_circuit(a), shor_input_facts());
  const PulseProgram p = lower_to_pulses(opt, mol);
  std::fputs(serialize_pulses(p).c_str(), stdout);
  return 0;
}

int cmd_spectra(const std::string& state, const std::string& molecule, const std::string& out,
                double duration_s) {
  const MoleculeSpec mol = load_molecule(molecule);
  const Mat rho = state == "thermal" ? thermal_state(mol) : effective_pure_state(mol);
  std::filesystem::create_directories(out);
  const double dt = default_dt(mol);
  for (int spin = 1; spin <= mol.n_spins; ++spin) {
    const Fid fid = simulate_fid(rho, mol, spin, duration_s, dt, true);
    const Spectrum sp =
        spectrum(fid, 4, 0.0, mol.offset_hz[static_cast<size_t>(spin - 1)]);
    const std::filesystem::path path =
        std::filesystem::path(out) / ("spectrum_q" + std::to_string(spin) + ".csv");
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << spectrum_csv(sp);
    std::printf("wrote %s (%zu bins)\n", path.string().c_str(), sp.amplitudes.size());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"7-spin NMR factoring simulator"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "execute the full factoring pipeline");
  RunConfig cfg;
  cfg.molecule_path = kDefaultMolecule;
  std::string dec = "off", level = "gate", prep = "simulated-36";
  bool no_optimize = false;
  run->add_option("--a", cfg.a, "base to factor with (coprime to 15)")->required();
  run->add_option("--molecule", cfg.molecule_path, "molecule config file");
  run->add_option("--decoherence", dec, "on|off")->check(CLI::IsMember({"on", "off"}));
  run->add_option("--level", level, "gate|pulse")->check(CLI::IsMember({"gate", "pulse"}));
  run->add_option("--prep", prep, "ideal|simulated-36|pulse-lowered")
      ->check(CLI::IsMember({"ideal", "simulated-36", "pulse-lowered"}));
  run->add_option("--out", cfg.out_dir, "directory for summary/spectra files");
  run->add_option("--duration", cfg.acq_duration_s, "FID acquisition window, seconds");
  run->add_option("--dt", cfg.acq_dt_s, "FID sampling interval (0 = automatic)");
  run->add_option("--zero-fill", cfg.zero_fill, "FFT zero-fill factor");
  run->add_option("--seed", cfg.seed, "seed recorded in the summary");
  run->add_option("--t2-scale", cfg.t2_scale, "scale all T2 values (decoherence studies)");
  run->add_flag("--no-optimize", no_optimize, "skip the peephole optimizer");
  run->add_flag("--dump-pulses", cfg.dump_pulses, "also write pulses.txt");
  run->add_flag("--plot-data", cfg.plot_data, "also write FID/magnitude plot series");

  // dump-circuit
  auto* dump_c = app.add_subcommand("dump-circuit", "print the gate list");
  int dc_a = 7;
  bool dc_opt = false;
  dump_c->add_option("--a", dc_a, "base")->required();
  dump_c->add_flag("--optimized", dc_opt, "print the peephole-optimized circuit");

  // dump-pulses
  auto* dump_p = app.add_subcommand("dump-pulses", "print the lowered pulse program");
  int dp_a = 7;
  std::string dp_mol = kDefaultMolecule;
  dump_p->add_option("--a", dp_a, "base")->required();
  dump_p->add_option("--molecule", dp_mol, "molecule config file");

  // spectra
  auto* spectra = app.add_subcommand("spectra", "export per-spin spectra as CSV");
  std::string sp_state = "thermal", sp_mol = kDefaultMolecule, sp_out = ".";
  double sp_duration = 3.0;
  spectra->add_option("--state", sp_state, "thermal|pure")
      ->required()
      ->check(CLI::IsMember({"thermal", "pure"}));
  spectra->add_option("--molecule", sp_mol, "molecule config file");
  spectra->add_option("--out", sp_out, "output directory");
  spectra->add_option("--duration", sp_duration, "acquisition window, seconds");

  CLI11_PARSE(app, argc, argv);

  Timer timer;
  try {
    if (run->parsed()) {
      cfg.decoherence = dec == "on";
      cfg.level = parse_level(level);
      cfg.prep = parse_prep(prep);
      cfg.optimize = !no_optimize;
      return cmd_run(cfg);
    }
    if (dump_c->parsed()) return cmd_dump_circuit(dc_a, dc_opt);
    if (dump_p->parsed()) return cmd_dump_pulses(dp_a, dp_mol);
    if (spectra->parsed()) return cmd_spectra(sp_state, sp_mol, sp_out, sp_duration);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
