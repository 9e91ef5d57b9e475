// Copyright 2026 The nmrshor Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace nmrshor {

// Physical description of the spin system: per-spin rotating-frame offsets,
// absolute Larmor frequencies (used only for thermal polarization), T1/T2
// relaxation constants, the symmetric J-coupling matrix, and the sample
// temperature.  All frequencies are plain Hz at this interface; conversion to
// angular units happens when Hamiltonians are built.
struct MoleculeSpec {
  int n_spins = 0;
  std::vector<std::string> labels;
  std::vector<double> offset_hz;
  std::vector<double> larmor_hz;
  std::vector<double> t1_s;
  std::vector<double> t2_s;
  Eigen::MatrixXd j_hz;  // symmetric, zero diagonal
  double temperature_k = 0.0;

  // Coupling between spins i and j (1-based).
  double j(int i, int j) const { return j_hz(i - 1, j - 1); }

  // Throws std::invalid_argument with a field-level message on any violation:
  // sizes, non-positive T1/T2/temperature, J asymmetry or nonzero diagonal,
  // and the physicality bound t2 <= 2*t1.
  void validate() const;
};

// Parses the structured text (JSON) molecule format:
//   { "temperature_k": <K>,
//     "spins":  [ {"label", "offset_hz", "larmor_hz", "t1_s", "t2_s"}, ... ],
//     "j_hz":   [ {"i", "j", "value"}, ... ] }   (i, j are 1-based)
// Redundant (i,j)/(j,i) entries are accepted when equal; conflicting values
// raise a symmetric-violation error.  Every error names the offending field.
MoleculeSpec parse_molecule(const std::string& json_text);

// Loads and validates a molecule file; errors mention the path.
MoleculeSpec load_molecule(const std::string& path);

}  // namespace nmrshor
