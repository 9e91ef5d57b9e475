// Copyright 2026 The nmrshor Authors
// SPDX-License-Identifier: Apache-2.0
#include "nmrshor/molecule.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace nmrshor {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument("molecule: " + msg); }

double require_number(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key)) fail(where + ": missing field '" + key + "'");
  const json& v = obj.at(key);
  if (!v.is_number()) fail(where + ": field '" + key + "' must be a number");
  return v.get<double>();
}

}  // namespace

void MoleculeSpec::validate() const {
  if (n_spins < 1) fail("n_spins must be >= 1");
  const auto n = static_cast<size_t>(n_spins);
  if (labels.size() != n) fail("labels: expected " + std::to_string(n_spins) + " entries");
  if (offset_hz.size() != n) fail("offset_hz: expected " + std::to_string(n_spins) + " entries");
  if (larmor_hz.size() != n) fail("larmor_hz: expected " + std::to_string(n_spins) + " entries");
  if (t1_s.size() != n) fail("t1_s: expected " + std::to_string(n_spins) + " entries");
  if (t2_s.size() != n) fail("t2_s: expected " + std::to_string(n_spins) + " entries");
  if (j_hz.rows() != n_spins || j_hz.cols() != n_spins) fail("j_hz: matrix must be n_spins x n_spins");
  if (!(temperature_k > 0.0)) fail("temperature_k: must be positive");
  for (int i = 0; i < n_spins; ++i) {
    const std::string spin = "spin " + std::to_string(i + 1);
    if (!std::isfinite(offset_hz[i])) fail(spin + ": offset_hz must be finite");
    if (!(larmor_hz[i] > 0.0)) fail(spin + ": larmor_hz must be positive");
    if (!(t1_s[i] > 0.0)) fail(spin + ": t1_s must be positive");
    if (!(t2_s[i] > 0.0)) fail(spin + ": t2_s must be positive");
    if (t2_s[i] > 2.0 * t1_s[i])
      fail(spin + ": physicality violation, t2_s exceeds 2*t1_s");
    if (j_hz(i, i) != 0.0) fail("j_hz: diagonal entry for spin " + std::to_string(i + 1) + " must be zero");
    for (int k = 0; k < n_spins; ++k) {
      if (j_hz(i, k) != j_hz(k, i))
        fail("j_hz: symmetric-violation between spins " + std::to_string(i + 1) + " and " +
             std::to_string(k + 1));
    }
  }
}

MoleculeSpec parse_molecule(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    fail(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) fail("top level must be an object");
  if (!doc.contains("spins")) fail("missing field 'spins'");
  if (!doc.contains("j_hz")) fail("missing field 'j_hz'");
  if (!doc.contains("temperature_k")) fail("missing field 'temperature_k'");
  if (!doc["spins"].is_array() || doc["spins"].empty()) fail("'spins' must be a non-empty array");
  if (!doc["j_hz"].is_array()) fail("'j_hz' must be an array");

  MoleculeSpec mol;
  mol.n_spins = static_cast<int>(doc["spins"].size());
  mol.temperature_k = require_number(doc, "temperature_k", "top level");

  int idx = 1;
  for (const auto& s : doc["spins"]) {
    const std::string where = "spin " + std::to_string(idx);
    if (!s.is_object()) fail(where + ": must be an object");
    if (!s.contains("label") || !s["label"].is_string()) fail(where + ": missing field 'label'");
    mol.labels.push_back(s["label"].get<std::string>());
    mol.offset_hz.push_back(require_number(s, "offset_hz", where));
    mol.larmor_hz.push_back(require_number(s, "larmor_hz", where));
    mol.t1_s.push_back(require_number(s, "t1_s", where));
    mol.t2_s.push_back(require_number(s, "t2_s", where));
    ++idx;
  }

  mol.j_hz = Eigen::MatrixXd::Zero(mol.n_spins, mol.n_spins);
  Eigen::MatrixXd seen = Eigen::MatrixXd::Zero(mol.n_spins, mol.n_spins);
  idx = 0;
  for (const auto& e : doc["j_hz"]) {
    const std::string where = "j_hz entry " + std::to_string(idx);
    if (!e.is_object()) fail(where + ": must be an object");
    const double iv = require_number(e, "i", where);
    const double jv = require_number(e, "j", where);
    const double value = require_number(e, "value", where);
    const int i = static_cast<int>(iv), j = static_cast<int>(jv);
    if (i < 1 || i > mol.n_spins || j < 1 || j > mol.n_spins || i == j)
      fail(where + ": spin indices must be distinct and within 1.." + std::to_string(mol.n_spins));
    // Accept either triangle; a pair given twice must agree.
    if (seen(i - 1, j - 1) != 0.0 && mol.j_hz(i - 1, j - 1) != value)
      fail(where + ": symmetric-violation, J[" + std::to_string(i) + "][" + std::to_string(j) +
           "] conflicts with an earlier entry");
    mol.j_hz(i - 1, j - 1) = value;
    mol.j_hz(j - 1, i - 1) = value;
    seen(i - 1, j - 1) = seen(j - 1, i - 1) = 1.0;
    ++idx;
  }

  mol.validate();
  return mol;
}

MoleculeSpec load_molecule(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("molecule: cannot open file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_molecule(ss.str());
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(std::string(e.what()) + " (file '" + path + "')");
  }
}

}  // namespace nmrshor
