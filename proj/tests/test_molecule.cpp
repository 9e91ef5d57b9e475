// Copyright 2026 The nmrshor Authors
// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include "nmrshor/molecule.hpp"
#include "test_util.hpp"

using namespace nmrshor;

namespace {

std::string two_spin_json(const std::string& spin2_overrides, const std::string& j_entries) {
  return R"({
    "temperature_k": 300.0,
    "spins": [
      { "label": "A", "offset_hz": 100.0, "larmor_hz": 5.0e8, "t1_s": 1.0, "t2_s": 0.5 },
      { "label": "B", "offset_hz": -50.0, "larmor_hz": 5.0e8, )" +
         spin2_overrides + R"( }
    ],
    "j_hz": [)" + j_entries + R"(]
  })";
}

}  // namespace

TEST_CASE("shipped sample molecule round-trips") {
  const MoleculeSpec mol = load_molecule(test::sample_molecule_path());
  CHECK(mol.n_spins == 7);
  CHECK(mol.labels.size() == 7);
  CHECK(mol.j_hz.rows() == 7);
  for (int i = 1; i <= 7; ++i)
    for (int j = 1; j <= 7; ++j) CHECK(mol.j(i, j) == mol.j(j, i));
  CHECK(mol.temperature_k > 0.0);
  // Couplings needed by the two-qubit gates of the a=7 program must exist.
  for (auto [i, j] : {std::pair{2, 4}, {2, 7}, {4, 6}, {5, 7}, {3, 5}, {3, 6}, {1, 2}, {1, 3},
                      {2, 3}})
    CHECK(mol.j(i, j) > 0.0);
}

TEST_CASE("conflicting J entries raise the symmetric-violation error") {
  const std::string text =
      two_spin_json(R"("t1_s": 1.0, "t2_s": 0.5)",
                    R"({ "i": 1, "j": 2, "value": 5.0 }, { "i": 2, "j": 1, "value": 6.0 })");
  CHECK_THROWS_WITH(parse_molecule(text), Catch::Matchers::ContainsSubstring("symmetric"));
}

TEST_CASE("t2 above 2*t1 raises the physicality error") {
  const std::string text = two_spin_json(R"("t1_s": 1.0, "t2_s": 2.5)", "");
  CHECK_THROWS_WITH(parse_molecule(text), Catch::Matchers::ContainsSubstring("physicality"));
}

TEST_CASE("missing fields are reported distinctly") {
  CHECK_THROWS_WITH(parse_molecule(R"({"j_hz": [], "temperature_k": 300})"),
                    Catch::Matchers::ContainsSubstring("spins"));
  CHECK_THROWS_WITH(parse_molecule(R"({"spins": [{"label":"A"}], "j_hz": []})"),
                    Catch::Matchers::ContainsSubstring("temperature_k"));
  const std::string no_t1 = R"({
    "temperature_k": 300.0,
    "spins": [{ "label": "A", "offset_hz": 0.0, "larmor_hz": 5.0e8, "t2_s": 0.5 }],
    "j_hz": []
  })";
  CHECK_THROWS_WITH(parse_molecule(no_t1), Catch::Matchers::ContainsSubstring("t1_s"));
}

TEST_CASE("non-positive relaxation constants are rejected") {
  CHECK_THROWS_WITH(parse_molecule(two_spin_json(R"("t1_s": 0.0, "t2_s": 0.5)", "")),
                    Catch::Matchers::ContainsSubstring("t1_s"));
  CHECK_THROWS_WITH(parse_molecule(two_spin_json(R"("t1_s": 1.0, "t2_s": -0.5)", "")),
                    Catch::Matchers::ContainsSubstring("t2_s"));
}

TEST_CASE("malformed JSON and wrong shapes are rejected") {
  CHECK_THROWS_WITH(parse_molecule("{ not json"), Catch::Matchers::ContainsSubstring("JSON"));
  CHECK_THROWS_WITH(parse_molecule("[1,2,3]"), Catch::Matchers::ContainsSubstring("object"));
  CHECK_THROWS_WITH(
      parse_molecule(two_spin_json(R"("t1_s": 1.0, "t2_s": 0.5)",
                                   R"({ "i": 1, "j": 9, "value": 5.0 })")),
      Catch::Matchers::ContainsSubstring("indices"));
  CHECK_THROWS(load_molecule("/nonexistent/file.json"));
}

TEST_CASE("validate catches hand-built inconsistencies") {
  MoleculeSpec mol = test::make_molecule(2, {0.0, 0.0});
  mol.j_hz(0, 1) = 5.0;  // break symmetry
  CHECK_THROWS_WITH(mol.validate(), Catch::Matchers::ContainsSubstring("symmetric"));
  mol = test::make_molecule(2, {0.0, 0.0});
  mol.labels.pop_back();
  CHECK_THROWS(mol.validate());
}
