#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace heis {

/// Raised for malformed input and violated preconditions (maps to CLI exit 2).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when an internal consistency check fails; always a bug or a
/// convention clash, never bad user input.
class DefectError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Raised when an exhaustive operation would exceed its enumeration budget.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace nt {

inline int64_t mod(int64_t a, int64_t n) {
  int64_t r = a % n;
  return r < 0 ? r + n : r;
}

inline int64_t gcd(int64_t a, int64_t b) { return std::gcd(a, b); }
inline int64_t lcm(int64_t a, int64_t b) { return a == 0 || b == 0 ? 0 : std::lcm(a, b); }

/// Returns (g, x, y) with a*x + b*y = g = gcd(a, b) >= 0.
inline std::tuple<int64_t, int64_t, int64_t> ext_gcd(int64_t a, int64_t b) {
  int64_t old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    int64_t q = old_r / r;
    std::tie(old_r, r) = std::make_pair(r, old_r - q * r);
    std::tie(old_s, s) = std::make_pair(s, old_s - q * s);
    std::tie(old_t, t) = std::make_pair(t, old_t - q * t);
  }
  if (old_r < 0) return {-old_r, -old_s, -old_t};
  return {old_r, old_s, old_t};
}

inline int64_t inv_mod(int64_t a, int64_t n) {
  auto [g, x, y] = ext_gcd(mod(a, n), n);
  (void)y;
  if (g != 1) throw InputError("inv_mod: " + std::to_string(a) + " not invertible mod " + std::to_string(n));
  return mod(x, n);
}

inline int64_t pow_mod(int64_t b, int64_t e, int64_t n) {
  int64_t r = 1 % n;
  b = mod(b, n);
  while (e > 0) {
    if (e & 1) r = static_cast<int64_t>((__int128)r * b % n);
    b = static_cast<int64_t>((__int128)b * b % n);
    e >>= 1;
  }
  return r;
}

inline bool is_prime(int64_t n) {
  if (n < 2) return false;
  for (int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

/// Prime factorisation as (prime, exponent) pairs in increasing prime order.
inline std::vector<std::pair<int64_t, int>> factorize(int64_t n) {
  std::vector<std::pair<int64_t, int>> out;
  for (int64_t d = 2; d * d <= n; ++d) {
    if (n % d) continue;
    int e = 0;
    while (n % d == 0) {
      n /= d;
      ++e;
    }
    out.emplace_back(d, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

inline std::vector<int64_t> prime_divisors(int64_t n) {
  std::vector<int64_t> ps;
  for (auto [p, e] : factorize(n)) ps.push_back(p);
  return ps;
}

/// p-adic valuation of a nonzero integer.
inline int valuation(int64_t n, int64_t p) {
  int v = 0;
  while (n != 0 && n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

inline int64_t ipow(int64_t b, int e) {
  int64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

inline int64_t euler_phi(int64_t n) {
  int64_t r = n;
  for (auto [p, e] : factorize(n)) r = r / p * (p - 1);
  return r;
}

/// Legendre symbol (a/p) for an odd prime p; 0 when p | a.
inline int legendre(int64_t a, int64_t p) {
  a = mod(a, p);
  if (a == 0) return 0;
  return pow_mod(a, (p - 1) / 2, p) == 1 ? 1 : -1;
}

/// Smallest primitive root mod an odd prime p.
inline int64_t primitive_root(int64_t p) {
  auto fs = prime_divisors(p - 1);
  for (int64_t g = 2; g < p; ++g) {
    bool ok = true;
    for (auto q : fs)
      if (pow_mod(g, (p - 1) / q, p) == 1) {
        ok = false;
        break;
      }
    if (ok) return g;
  }
  return 1;
}

/// Integer square root when n is a perfect square, -1 otherwise.
inline int64_t exact_sqrt(int64_t n) {
  if (n < 0) return -1;
  int64_t r = 0;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r * r == n ? r : -1;
}

}  // namespace nt
}  // namespace heis
