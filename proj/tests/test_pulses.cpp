// Copyright 2026 The nmrshor Authors
// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>

#include "nmrshor/compiler.hpp"
#include "nmrshor/pulses.hpp"
#include "nmrshor/spinsys.hpp"
#include "test_util.hpp"

using namespace nmrshor;
using Catch::Matchers::WithinAbs;

namespace {

MoleculeSpec two_spin(double j = 50.0) {
  return test::make_molecule(2, {120.0, -80.0}, {{1, 2, j}});
}

// Unitary-equivalence helper: lower a tiny circuit without refocusing and
// compare the decoherence-free pulse path against the exact circuit action.
double lowering_fidelity(const Circuit& c, const MoleculeSpec& mol, bool refocus) {
  LowerOptions opt;
  opt.refocus = refocus;
  return verify_lowering(lower_to_pulses(c, mol, opt), c, mol);
}

}  // namespace

TEST_CASE("lowering of individual gates") {
  const MoleculeSpec mol = two_spin();
  LowerOptions plain;
  plain.refocus = false;

  SECTION("H is a frame advance plus one 90 about +y") {
    Circuit c(2);
    c.append(make_h(1));
    const PulseProgram p = lower_to_pulses(c, mol, plain);
    REQUIRE(p.events.size() == 2);
    CHECK(p.events[0].kind == PulseEvent::Kind::Frame);
    CHECK(p.events[0].spin == 1);
    CHECK_THAT(p.events[0].angle_deg, WithinAbs(180.0, 1e-12));
    CHECK(p.events[1].kind == PulseEvent::Kind::Pulse);
    CHECK_THAT(p.events[1].angle_deg, WithinAbs(90.0, 1e-12));
    CHECK(p.events[1].axis == Axis::PlusY);
    CHECK(p.pulse_count() == 1);
  }
  SECTION("RZ lowers to a frame advance only") {
    Circuit c(2);
    c.append(make_rz(2, 90.0));
    const PulseProgram p = lower_to_pulses(c, mol, plain);
    REQUIRE(p.events.size() == 1);
    CHECK(p.events[0].kind == PulseEvent::Kind::Frame);
    CHECK(p.pulse_count() == 0);
    CHECK(p.total_duration() == 0.0);
  }
  SECTION("CNOT spends exactly 1/(2J) in its delay") {
    Circuit c(2);
    c.append(make_cnot(1, 2));
    const PulseProgram p = lower_to_pulses(c, mol, plain);
    double delay = 0.0;
    for (const PulseEvent& e : p.events)
      if (e.kind == PulseEvent::Kind::Delay) delay += e.duration_s;
    CHECK_THAT(delay, WithinAbs(1.0 / (2.0 * 50.0), 1e-15));
    CHECK_THAT(p.total_duration(), WithinAbs(0.010, 1e-15));
  }
  SECTION("CRZ with a negative angle uses |theta|/(360 J)") {
    MoleculeSpec m = test::make_molecule(2, {0.0, 0.0}, {{1, 2, 12.25}});
    Circuit c(2);
    c.append(make_crz(2, 1, -90.0));
    const PulseProgram p = lower_to_pulses(c, m, plain);
    CHECK_THAT(p.total_duration(), WithinAbs(90.0 / (360.0 * 12.25), 1e-12));
    CHECK_THAT(p.total_duration() * 1e3, WithinAbs(20.4082, 5e-4));  // ms
  }
  SECTION("delays keep the coupling annotation of their gate") {
    Circuit c(2);
    c.append(make_cnot(2, 1));
    const PulseProgram p = lower_to_pulses(c, mol, plain);
    bool found = false;
    for (const PulseEvent& e : p.events)
      if (e.kind == PulseEvent::Kind::Delay) {
        REQUIRE(e.couplings.size() == 1);
        const auto [a, b] = e.couplings[0];
        CHECK(std::min(a, b) == 1);
        CHECK(std::max(a, b) == 2);
        found = true;
      }
    CHECK(found);
  }
}

TEST_CASE("lowered pulses reproduce gate semantics") {
  for (bool refocus : {false, true}) {
    // Plain delays evolve the chemical shifts along with the coupling, so
    // without refocusing the equivalence only holds for on-resonance spins.
    const MoleculeSpec mol =
        refocus ? two_spin() : test::make_molecule(2, {0.0, 0.0}, {{1, 2, 50.0}});
    DYNAMIC_SECTION("refocus=" << refocus) {
      for (GateKind k : {GateKind::Cnot, GateKind::Cy, GateKind::CyDag}) {
        Circuit c(2);
        Gate g;
        if (k == GateKind::Cnot) g = make_cnot(1, 2);
        if (k == GateKind::Cy) g = make_cy(1, 2);
        if (k == GateKind::CyDag) g = make_cydag(1, 2);
        c.append(g);
        // Sandwich in Hadamards so every basis amplitude participates.
        Circuit wrapped(2);
        wrapped.append(make_h(1));
        wrapped.append(make_h(2));
        wrapped.append(g);
        for (const Circuit* probe : {&c, &wrapped})
          CHECK(lowering_fidelity(*probe, mol, refocus) > 1.0 - 1e-9);
      }
      Circuit phases(2);
      phases.append(make_h(1));
      phases.append(make_h(2));
      phases.append(make_crz(1, 2, -45.0));
      phases.append(make_rz(1, 30.0));
      phases.append(make_crz(2, 1, 120.0));  // positive angles wrap, stay correct
      CHECK(lowering_fidelity(phases, mol, refocus) > 1.0 - 1e-9);
    }
  }
}

TEST_CASE("lowering rejects what the hardware cannot do") {
  SECTION("zero coupling between gate operands") {
    const MoleculeSpec m = test::make_molecule(3, {10.0, 20.0, 30.0}, {{1, 2, 40.0}});
    Circuit c(3);
    c.append(make_cnot(1, 3));
    CHECK_THROWS_WITH(lower_to_pulses(c, m), Catch::Matchers::ContainsSubstring("zero coupling"));
  }
  SECTION("negative couplings") {
    const MoleculeSpec m = test::make_molecule(2, {0.0, 0.0}, {{1, 2, -8.0}});
    Circuit c(2);
    c.append(make_cnot(1, 2));
    CHECK_THROWS_WITH(lower_to_pulses(c, m),
                      Catch::Matchers::ContainsSubstring("negative couplings"));
  }
  SECTION("three-qubit gates must be compiled away first") {
    const MoleculeSpec m = test::make_molecule(3, {0.0, 0.0, 0.0},
                                               {{1, 2, 10.0}, {2, 3, 10.0}, {1, 3, 10.0}});
    Circuit c(3);
    c.append(make_ccnot(1, 2, 3));
    CHECK_THROWS_WITH(lower_to_pulses(c, m),
                      Catch::Matchers::ContainsSubstring("run the optimizer"));
    Circuit s(3);
    s.append(make_cswap(1, 2, 3));
    CHECK_THROWS_WITH(lower_to_pulses(s, m),
                      Catch::Matchers::ContainsSubstring("run the optimizer"));
  }
}

TEST_CASE("refocusing schedules") {
  const MoleculeSpec mol = test::make_molecule(
      3, {150.0, -70.0, 90.0}, {{1, 2, 20.0}, {2, 3, 14.0}, {1, 3, 9.0}});
  const RVec h = build_hamiltonian(mol);

  SECTION("empty retained set cancels all evolution") {
    const auto seq = refocusing_schedule(make_delay(0.025), mol);
    PulseProgram p;
    p.n_spins = 3;
    p.events = seq;
    const Vec psi = test::random_state(3, 31);
    const Vec out = run_pulses(p, mol, psi);
    CHECK(std::abs(std::abs((psi.adjoint() * out)(0, 0)) - 1.0) < 1e-9);
  }
  SECTION("retaining (1,2) reproduces the pure J(1,2) evolution") {
    const double t = 0.0125;
    const auto seq = refocusing_schedule(make_delay(t, {{1, 2}}), mol);
    PulseProgram p;
    p.n_spins = 3;
    p.events = seq;
    const Vec psi = test::random_state(3, 37);
    const Vec got = run_pulses(p, mol, psi);
    // Reference: evolution under only the retained coupling term.
    const MoleculeSpec keep = test::make_molecule(3, {0.0, 0.0, 0.0}, {{1, 2, 20.0}});
    Vec want = psi;
    free_evolution_inplace(want, build_hamiltonian(keep), t);
    CHECK(std::abs(std::abs((want.adjoint() * got)(0, 0)) - 1.0) < 1e-9);
  }
  SECTION("structure: equal segments, even pulse parity, palindrome") {
    const auto seq = refocusing_schedule(make_delay(0.016, {{1, 2}}), mol);
    std::map<int, int> pulses_per_spin;
    std::vector<double> delays;
    for (const PulseEvent& e : seq) {
      if (e.kind == PulseEvent::Kind::Pulse) {
        CHECK_THAT(e.angle_deg, WithinAbs(180.0, 1e-12));
        ++pulses_per_spin[e.spin];
      } else if (e.kind == PulseEvent::Kind::Delay) {
        delays.push_back(e.duration_s);
      }
    }
    for (const auto& [spin, count] : pulses_per_spin) {
      INFO("spin " << spin);
      CHECK(count % 2 == 0);
    }
    // One retained pair among 3 spins: m alias groups -> 2^(m+1) segments.
    CHECK(delays.size() == 8);
    for (double d : delays) CHECK_THAT(d, WithinAbs(0.016 / 8.0, 1e-15));
    // Palindromic in time: delay list reads the same reversed.
    for (size_t i = 0; i < delays.size(); ++i)
      CHECK_THAT(delays[i], WithinAbs(delays[delays.size() - 1 - i], 1e-15));
  }
  SECTION("the 7-spin production molecule: 16 segments and 60 pi pulses") {
    const MoleculeSpec big = load_molecule(test::sample_molecule_path());
    const auto seq = refocusing_schedule(make_delay(0.01, {{2, 4}}), big, 0.0);
    int n_delay = 0, n_pulse = 0;
    for (const PulseEvent& e : seq) {
      n_delay += e.kind == PulseEvent::Kind::Delay;
      n_pulse += e.kind == PulseEvent::Kind::Pulse;
    }
    CHECK(n_delay == 16);
    CHECK(n_pulse == 60);
  }
  SECTION("zero-length delays produce empty schedules") {
    CHECK(refocusing_schedule(make_delay(0.0, {{1, 2}}), mol).empty());
  }
  SECTION("overlapping retained pairs are rejected") {
    CHECK_THROWS_WITH(refocusing_schedule(make_delay(0.01, {{1, 2}, {2, 3}}), mol),
                      Catch::Matchers::ContainsSubstring("split the delay"));
  }
}

TEST_CASE("full-circuit lowering for the factoring sequence") {
  const MoleculeSpec mol = load_molecule(test::sample_molecule_path());

  SECTION("base 7, optimized: high fidelity, frozen duration and pulse count") {
    const Circuit opt = peephole_optimize(build_shor_circuit(7), shor_input_facts());
    const PulseProgram p = lower_to_pulses(opt, mol);
    CHECK(verify_lowering(p, opt, mol) > 1.0 - 1e-6);
    CHECK_THAT(p.total_duration(), WithinAbs(0.7197226579, 1e-9));
    CHECK(p.pulse_count() == 679);
  }
  SECTION("base 11, optimized") {
    const Circuit opt = peephole_optimize(build_shor_circuit(11), shor_input_facts());
    const PulseProgram p = lower_to_pulses(opt, mol);
    CHECK(verify_lowering(p, opt, mol) > 1.0 - 1e-6);
  }
  SECTION("a corrupted delay destroys the fidelity") {
    const Circuit opt = peephole_optimize(build_shor_circuit(7), shor_input_facts());
    PulseProgram p = lower_to_pulses(opt, mol);
    for (PulseEvent& e : p.events)
      if (e.kind == PulseEvent::Kind::Delay) e.duration_s *= 1.05;
    CHECK(verify_lowering(p, opt, mol) < 0.99);
  }
}

TEST_CASE("pulse program serialization round-trips") {
  PulseProgram p;
  p.n_spins = 3;
  p.events.push_back(make_frame(1, 180.0));
  p.events.push_back(make_pulse(1, 90.0, Axis::MinusX, 1e-5));
  p.events.push_back(make_delay(0.0125, {{1, 2}}));
  p.events.push_back(make_pulse(2, 180.0, Axis::PlusY));
  p.events.push_back(make_acquire(3));
  const std::string text = serialize_pulses(p);
  CHECK(text.find("# spins 3") != std::string::npos);
  const PulseProgram back = parse_pulses(text);
  REQUIRE(back.events.size() == p.events.size());
  CHECK(back.n_spins == 3);
  for (size_t i = 0; i < p.events.size(); ++i) {
    CHECK(back.events[i].kind == p.events[i].kind);
    CHECK(back.events[i].spin == p.events[i].spin);
    CHECK_THAT(back.events[i].angle_deg, WithinAbs(p.events[i].angle_deg, 1e-12));
    CHECK(back.events[i].axis == p.events[i].axis);
    CHECK_THAT(back.events[i].duration_s, WithinAbs(p.events[i].duration_s, 1e-15));
    CHECK(back.events[i].couplings == p.events[i].couplings);
  }
  CHECK_THAT(back.total_duration(), WithinAbs(p.total_duration(), 1e-15));
  CHECK(back.pulse_count() == 2);
}
