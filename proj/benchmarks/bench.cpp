// Copyright 2026 The nmrshor Authors
// SPDX-License-Identifier: Apache-2.0
//
// Microbenchmarks for the hot paths: relaxation, delay evolution, density
// matrix circuit application, pulse lowering/execution, FID synthesis, and
// the 36-experiment effective-pure-state average.

#include <benchmark/benchmark.h>

#include "nmrshor/channels.hpp"
#include "nmrshor/circuit.hpp"
#include "nmrshor/compiler.hpp"
#include "nmrshor/molecule.hpp"
#include "nmrshor/prep.hpp"
#include "nmrshor/pulses.hpp"
#include "nmrshor/readout.hpp"
#include "nmrshor/spinsys.hpp"

namespace {

using namespace nmrshor;

const MoleculeSpec& sample_molecule() {
  static const MoleculeSpec mol = load_molecule(NMRSHOR_SAMPLE_MOLECULE);
  return mol;
}

void BM_RelaxationStep(benchmark::State& state) {
  const MoleculeSpec& mol = sample_molecule();
  Mat rho = thermal_state(mol);
  for (auto _ : state) {
    Mat out = relaxation_step(rho, mol, 1e-3);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_RelaxationStep);

void BM_SimulateDelay(benchmark::State& state) {
  const MoleculeSpec& mol = sample_molecule();
  const RVec h = build_hamiltonian(mol);
  Mat rho = thermal_state(mol);
  for (auto _ : state) {
    Mat out = simulate_delay(rho, mol, h, 1e-3);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_SimulateDelay);

void BM_ApplyShorCircuitDM(benchmark::State& state) {
  const MoleculeSpec& mol = sample_molecule();
  const Circuit c = build_shor_circuit(7);
  const Mat rho0 = effective_pure_state(mol);
  for (auto _ : state) {
    Mat rho = rho0;
    apply_circuit(rho, c);
    benchmark::DoNotOptimize(rho.data());
  }
}
BENCHMARK(BM_ApplyShorCircuitDM);

void BM_LowerAndRunPulses(benchmark::State& state) {
  const MoleculeSpec& mol = sample_molecule();
  const Circuit c = peephole_optimize(build_shor_circuit(7), shor_input_facts());
  const Vec psi0 = effective_pure_ideal();
  for (auto _ : state) {
    PulseProgram p = lower_to_pulses(c, mol);
    Vec psi = run_pulses(p, mol, psi0);
    benchmark::DoNotOptimize(psi.data());
  }
}
BENCHMARK(BM_LowerAndRunPulses);

void BM_Fid(benchmark::State& state) {
  const MoleculeSpec& mol = sample_molecule();
  Mat rho = thermal_state(mol);
  const double dt = default_dt(mol);
  for (auto _ : state) {
    Fid fid = simulate_fid(rho, mol, 1, 0.3, dt, true);
    benchmark::DoNotOptimize(fid.samples.data());
  }
}
BENCHMARK(BM_Fid);

void BM_EffectivePure36(benchmark::State& state) {
  const MoleculeSpec& mol = sample_molecule();
  for (auto _ : state) {
    Mat rho = effective_pure_state(mol);
    benchmark::DoNotOptimize(rho.data());
  }
}
BENCHMARK(BM_EffectivePure36);

}  // namespace

BENCHMARK_MAIN();
