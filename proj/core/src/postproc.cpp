// Copyright 2026 The nmrshor Authors
// SPDX-License-Identifier: Apache-2.0
#include "nmrshor/postproc.hpp"

#include <stdexcept>

namespace nmrshor {

int euclid_gcd(int a, int b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    const int t = a % b;
    a = b;
    b = t;
  }
  return a;
}

long long mod_pow(long long a, long long e, long long n) {
  if (n < 1) throw std::invalid_argument("mod_pow: modulus must be positive");
  if (e < 0) throw std::invalid_argument("mod_pow: negative exponent");
  long long base = ((a % n) + n) % n, r = 1 % n;
  while (e > 0) {
    if (e & 1) r = r * base % n;
    base = base * base % n;
    e >>= 1;
  }
  return r;
}

int classical_order(int a, int n) {
  if (n < 2) throw std::invalid_argument("classical_order: modulus must be >= 2");
  if (euclid_gcd(a, n) != 1)
    throw std::invalid_argument("classical_order: base shares a factor with the modulus");
  long long v = ((a % n) + n) % n;
  long long acc = v;
  for (int r = 1; r <= n; ++r) {
    if (acc == 1) return r;
    acc = acc * v % n;
  }
  throw std::logic_error("classical_order: unreachable");
}

std::optional<int> period_from_support(const std::set<int>& y_support, int n_bits) {
  if (y_support.empty()) throw std::invalid_argument("period_from_support: empty support");
  const int q = 1 << n_bits;
  int spacing = 0;
  for (int y : y_support) {
    if (y < 0 || y >= q) throw std::invalid_argument("period_from_support: value out of range");
    spacing = euclid_gcd(spacing, y);
  }
  if (spacing == 0) return std::nullopt;  // support {0}: no period information
  if (q % spacing != 0) return std::nullopt;
  return q / spacing;
}

int continued_fraction_period(int c, int q, int n) {
  if (q < 1 || c < 0 || c >= q)
    throw std::invalid_argument("continued_fraction_period: need 0 <= c < q");
  if (c == 0) throw std::invalid_argument("continued_fraction_period: c = 0 carries no information");
  // Convergent denominators k_i = a_i k_{i-1} + k_{i-2}, seeded with
  // k_{-2} = 1, k_{-1} = 0.
  int num = c, den = q;
  int d_prev = 1, d_cur = 0;
  int best = 1;
  while (den != 0) {
    const int a = num / den;
    const int d_next = a * d_cur + d_prev;
    if (d_next <= n) best = d_next > best ? d_next : best;
    d_prev = d_cur;
    d_cur = d_next;
    const int rem = num % den;
    num = den;
    den = rem;
  }
  return best;
}

FactorReport factors_from_period(int a, int r, int n) {
  FactorReport rep;
  rep.a = a;
  rep.r = r;
  if (r <= 0 || r % 2 != 0) {
    rep.status = FactorStatus::Failed;
    return rep;
  }
  const long long half = mod_pow(a, r / 2, n);
  if (half == n - 1) {  // a^{r/2} = -1 mod n: the textbook failure branch
    rep.status = FactorStatus::Failed;
    return rep;
  }
  for (int delta : {-1, +1}) {
    const int g = euclid_gcd(static_cast<int>((half + delta + n) % n), n);
    if (g != 1 && g != n) rep.factors.insert(g);
  }
  rep.status = rep.factors.empty() ? FactorStatus::TrivialFactor : FactorStatus::Success;
  return rep;
}

const char* factor_status_name(FactorStatus s) {
  switch (s) {
    case FactorStatus::Success: return "success";
    case FactorStatus::TrivialFactor: return "trivial-factor";
    case FactorStatus::Failed: return "failed";
  }
  return "?";
}

}  // namespace nmrshor
