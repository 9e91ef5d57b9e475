// Copyright 2026 The nmrshor Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <set>

namespace nmrshor {

// Classical number theory for period/factor extraction.
int euclid_gcd(int a, int b);
long long mod_pow(long long a, long long e, long long n);

// Smallest r > 0 with a^r = 1 mod n; requires gcd(a, n) = 1.
int classical_order(int a, int n);

// Ensemble semantics: the register supports multiples of 2^n/r, so the
// spacing (gcd of the support) determines r = 2^n / spacing.  Returns
// nullopt when the support is {0} (no period information) or the spacing
// does not divide 2^n.
std::optional<int> period_from_support(const std::set<int>& y_support, int n_bits);

// Single-shot semantics: largest continued-fraction convergent denominator
// of c / q not exceeding n.  Throws on c = 0 (no information).
int continued_fraction_period(int c, int q, int n);

enum class FactorStatus { Success, TrivialFactor, Failed };

struct FactorReport {
  int a = 0;
  std::set<int> y_support;
  int r = 0;  // 0 when no period could be inferred
  std::set<int> factors;
  FactorStatus status = FactorStatus::Failed;
};

// gcd(a^{r/2} +- 1, n) with 1 and n filtered out; Failed when r is odd or
// a^{r/2} = -1 mod n, TrivialFactor when nothing nontrivial survives.
FactorReport factors_from_period(int a, int r, int n);

const char* factor_status_name(FactorStatus s);

}  // namespace nmrshor
