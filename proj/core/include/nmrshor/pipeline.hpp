// Copyright 2026 The nmrshor Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "nmrshor/circuit.hpp"
#include "nmrshor/molecule.hpp"
#include "nmrshor/postproc.hpp"
#include "nmrshor/pulses.hpp"
#include "nmrshor/readout.hpp"

namespace nmrshor {

enum class SimLevel { Gate, Pulse };
enum class PrepMode { Ideal, Simulated36, PulseLowered };

const char* sim_level_name(SimLevel v);
const char* prep_mode_name(PrepMode v);

// Full configuration for one factoring run.  Either molecule_path names a
// config file or mol/mol_loaded carry an inline molecule.
struct RunConfig {
  std::string molecule_path;
  MoleculeSpec mol;
  bool mol_loaded = false;
  int a = 7;
  bool decoherence = false;     // requires level == Pulse
  SimLevel level = SimLevel::Gate;
  PrepMode prep = PrepMode::Simulated36;
  double acq_duration_s = 1.0;  // FID acquisition window
  double acq_dt_s = 0.0;        // 0 = pick automatically from the molecule
  int zero_fill = 4;
  std::string out_dir;          // empty = write nothing
  uint64_t seed = 0;            // recorded in the summary; the run is deterministic
  bool optimize = true;
  bool dump_pulses = false;     // write pulses.txt next to the summary
  bool plot_data = false;       // write fid_q*.csv series for plotting
  double t2_scale = 1.0;        // scales every T2 (decoherence studies)
};

// Validates, loads the molecule if needed, applies t2_scale, and fills the
// automatic dt.  Throws std::invalid_argument with a field-prefixed message.
RunConfig resolve_config(const RunConfig& cfg);

struct RunResult {
  MoleculeSpec mol;  // molecule actually simulated (after t2_scale)
  Circuit circuit;   // circuit actually executed
  int gate_count_original = 0;
  int gate_count_optimized = 0;
  PulseProgram pulses;  // empty at gate level
  double prep_duration_s = 0.0;       // mean pulse-program length of the prep stage
  double sequence_duration_s = 0.0;   // algorithm pulse-program length
  double acquisition_duration_s = 0.0;
  std::array<ClassifiedQubit, 3> qubits{};  // index 0 = qubit 1
  std::array<Spectrum, 3> spectra;
  std::set<int> y_support;
  std::optional<int> period;
  FactorReport report;
  std::vector<std::pair<std::string, double>> timings_s;  // wall clock per stage
  std::vector<std::string> files_written;
};

// Runs prep -> algorithm -> readout -> classification -> factor extraction
// and writes any requested artifacts.  Errors carry a "stage: " prefix;
// files already written stay on disk.
RunResult run_shor(const RunConfig& cfg);

// Deterministic report (no wall-clock content) and the timing sidecar.
std::string summary_json(const RunConfig& cfg, const RunResult& result);
std::string timings_json(const RunResult& result);

}  // namespace nmrshor
