#pragma once

// Exact arithmetic in cyclotomic fields Q(zeta_N), power basis modulo Phi_N.

#include <gmpxx.h>

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "heis/numtheory.hpp"

namespace heis {

namespace detail {

struct CycloData {
  int64_t order = 1;
  int phi = 1;
  std::vector<int64_t> poly;                  // Phi_N, monic, degree phi
  std::vector<std::vector<int64_t>> powers;   // zeta^e reduced, e in [0, N)
};

inline std::vector<int64_t> poly_divide_monic(std::vector<int64_t> num, const std::vector<int64_t>& den) {
  const size_t dn = den.size() - 1;
  std::vector<int64_t> q(num.size() - dn, 0);
  for (size_t i = num.size(); i-- > dn;) {
    int64_t c = num[i];
    q[i - dn] = c;
    if (c == 0) continue;
    for (size_t j = 0; j <= dn; ++j) num[i - dn + j] -= c * den[j];
  }
  for (size_t i = 0; i < dn; ++i)
    if (num[i] != 0) throw DefectError("cyclotomic polynomial division is not exact");
  return q;
}

inline std::vector<int64_t> cyclotomic_polynomial(int64_t n) {
  std::vector<int64_t> p(static_cast<size_t>(n) + 1, 0);
  p[0] = -1;
  p[static_cast<size_t>(n)] = 1;
  for (int64_t d = 1; d < n; ++d)
    if (n % d == 0) p = poly_divide_monic(p, cyclotomic_polynomial(d));
  return p;
}

inline const CycloData& cyclo_data(int64_t n) {
  static std::mutex mu;
  static std::map<int64_t, std::unique_ptr<CycloData>> cache;
  thread_local const CycloData* last = nullptr;
  if (last && last->order == n) return *last;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) {
    auto d = std::make_unique<CycloData>();
    d->order = n;
    d->poly = cyclotomic_polynomial(n);
    d->phi = static_cast<int>(d->poly.size()) - 1;
    const auto phi = static_cast<size_t>(d->phi);
    d->powers.assign(static_cast<size_t>(n), std::vector<int64_t>(phi, 0));
    std::vector<int64_t> cur(phi + 1, 0);
    cur[0] = 1;
    for (int64_t e = 0; e < n; ++e) {
      if (e > 0) {
        for (size_t i = phi; i > 0; --i) cur[i] = cur[i - 1];
        cur[0] = 0;
        if (int64_t top = cur[phi]; top != 0) {
          for (size_t i = 0; i <= phi; ++i) cur[i] -= top * d->poly[i];
        }
      }
      for (size_t i = 0; i < phi; ++i) d->powers[static_cast<size_t>(e)][i] = cur[i];
    }
    it = cache.emplace(n, std::move(d)).first;
  }
  last = it->second.get();
  return *last;
}

inline void addmul(mpz_class& acc, const mpz_class& a, int64_t s) {
  if (s > 0)
    mpz_addmul_ui(acc.get_mpz_t(), a.get_mpz_t(), static_cast<unsigned long>(s));
  else if (s < 0)
    mpz_submul_ui(acc.get_mpz_t(), a.get_mpz_t(), static_cast<unsigned long>(-s));
}

}  // namespace detail

inline std::string rational_to_string(mpq_class q) {
  q.canonicalize();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline mpq_class rational_from_string(const std::string& s) {
  mpq_class q;
  try {
    q = mpq_class(s);
  } catch (const std::exception&) {
    throw InputError("malformed rational '" + s + "'");
  }
  if (q.get_den() == 0) throw InputError("zero denominator in '" + s + "'");
  q.canonicalize();
  return q;
}

/// An element of Q(zeta_N). Coefficients are stored as an integer vector over a
/// common positive denominator with gcd(content, den) = 1, so the representation
/// is unique for a fixed conductor.
class CycNum {
 public:
  CycNum() : n_(1), num_(1), den_(1) {}
  CycNum(long v) : n_(1), num_{mpz_class(v)}, den_(1) {}  // NOLINT(implicit)
  explicit CycNum(const mpq_class& q) : n_(1), num_{q.get_num()}, den_(q.get_den()) {}

  static CycNum zero(int64_t n) {
    CycNum z;
    z.n_ = n;
    z.num_.assign(static_cast<size_t>(detail::cyclo_data(n).phi), 0);
    return z;
  }

  static CycNum from_coeffs(int64_t n, const std::vector<mpq_class>& c) {
    const auto& d = detail::cyclo_data(n);
    if (c.size() != static_cast<size_t>(d.phi))
      throw InputError("conductor " + std::to_string(n) + " needs " + std::to_string(d.phi) + " coefficients");
    mpz_class den = 1;
    for (const auto& q : c) den = lcm(den, mpz_class(q.get_den()));
    CycNum r;
    r.n_ = n;
    r.num_.resize(c.size());
    for (size_t i = 0; i < c.size(); ++i) r.num_[i] = c[i].get_num() * (den / c[i].get_den());
    r.den_ = den;
    r.normalize();
    return r;
  }

  /// Sum of counts[e] * zeta_N^e over e in [0, N).
  static CycNum from_root_counts(int64_t n, const std::vector<int64_t>& counts) {
    const auto& d = detail::cyclo_data(n);
    CycNum r = zero(n);
    const auto phi = static_cast<size_t>(d.phi);
    std::vector<int64_t> acc(phi, 0);
    for (size_t e = 0; e < counts.size(); ++e) {
      if (counts[e] == 0) continue;
      const auto& pw = d.powers[e % static_cast<size_t>(n)];
      for (size_t i = 0; i < phi; ++i) acc[i] += counts[e] * pw[i];
    }
    for (size_t i = 0; i < phi; ++i) r.num_[i] = static_cast<long>(acc[i]);
    return r;
  }

  static CycNum root_of_unity(int64_t n, int64_t k) {
    if (n < 1) throw InputError("root_of_unity: conductor must be positive");
    const auto& d = detail::cyclo_data(n);
    CycNum r = zero(n);
    const auto& pw = d.powers[static_cast<size_t>(nt::mod(k, n))];
    for (size_t i = 0; i < pw.size(); ++i) r.num_[i] = static_cast<long>(pw[i]);
    return r;
  }

  int64_t conductor() const { return n_; }
  const mpz_class& denominator() const { return den_; }
  const std::vector<mpz_class>& numerators() const { return num_; }

  std::vector<mpq_class> coeffs() const {
    std::vector<mpq_class> out(num_.size());
    for (size_t i = 0; i < num_.size(); ++i) {
      out[i] = mpq_class(num_[i], den_);
      out[i].canonicalize();
    }
    return out;
  }

  bool is_zero() const {
    for (const auto& c : num_)
      if (c != 0) return false;
    return true;
  }

  bool is_rational() const {
    for (size_t i = 1; i < num_.size(); ++i)
      if (num_[i] != 0) return false;
    return true;
  }

  bool is_one() const { return is_rational() && num_[0] == den_; }

  mpq_class rational_value() const {
    if (!is_rational()) throw DefectError("CycNum is not rational");
    mpq_class q(num_[0], den_);
    q.canonicalize();
    return q;
  }

  /// Re-expresses this element at conductor m (a multiple of the current one).
  CycNum lifted(int64_t m) const {
    if (m == n_) return *this;
    if (m % n_ != 0) throw InputError("cannot lift conductor " + std::to_string(n_) + " to " + std::to_string(m));
    const auto& d = detail::cyclo_data(m);
    CycNum r = zero(m);
    const int64_t step = m / n_;
    for (size_t j = 0; j < num_.size(); ++j) {
      if (num_[j] == 0) continue;
      const auto& pw = d.powers[static_cast<size_t>(nt::mod(static_cast<int64_t>(j) * step, m))];
      for (size_t i = 0; i < pw.size(); ++i) detail::addmul(r.num_[i], num_[j], pw[i]);
    }
    r.den_ = den_;
    r.normalize();
    return r;
  }

  /// The Galois automorphism zeta_N -> zeta_N^k, gcd(k, N) = 1.
  CycNum galois(int64_t k) const {
    if (nt::gcd(nt::mod(k, n_), n_) != 1 && n_ > 1)
      throw InputError("galois: exponent not a unit mod conductor");
    const auto& d = detail::cyclo_data(n_);
    CycNum r = zero(n_);
    for (size_t j = 0; j < num_.size(); ++j) {
      if (num_[j] == 0) continue;
      const auto& pw = d.powers[static_cast<size_t>(nt::mod(static_cast<int64_t>(j) * k, n_))];
      for (size_t i = 0; i < pw.size(); ++i) detail::addmul(r.num_[i], num_[j], pw[i]);
    }
    r.den_ = den_;
    r.normalize();
    return r;
  }

  CycNum conj() const { return galois(-1); }

  CycNum inverse() const {
    if (is_zero()) throw InputError("division by zero in Q(zeta_" + std::to_string(n_) + ")");
    if (is_rational()) {
      CycNum r = zero(n_);
      r.num_[0] = den_;
      r.den_ = num_[0];
      r.normalize();
      return r;
    }
    CycNum others(1L);
    for (int64_t k = 2; k < n_; ++k)
      if (nt::gcd(k, n_) == 1) others = others * galois(k);
    CycNum norm = *this * others;
    if (!norm.is_rational()) throw DefectError("field norm is not rational");
    CycNum inv_norm(mpq_class(norm.den_, norm.num_[0]));
    return others * inv_norm;
  }

  CycNum pow(int64_t e) const {
    if (e < 0) return inverse().pow(-e);
    CycNum result = CycNum(1L).lifted(n_);
    CycNum base = *this;
    while (e > 0) {
      if (e & 1) result = result * base;
      base = base * base;
      e >>= 1;
    }
    return result;
  }

  CycNum operator-() const {
    CycNum r = *this;
    for (auto& c : r.num_) c = -c;
    return r;
  }

  friend CycNum operator+(const CycNum& a, const CycNum& b) {
    if (a.n_ != b.n_) {
      const int64_t m = nt::lcm(a.n_, b.n_);
      return a.lifted(m) + b.lifted(m);
    }
    CycNum r = a;
    if (a.den_ == b.den_) {
      for (size_t i = 0; i < r.num_.size(); ++i) r.num_[i] += b.num_[i];
    } else {
      for (size_t i = 0; i < r.num_.size(); ++i) r.num_[i] = a.num_[i] * b.den_ + b.num_[i] * a.den_;
      r.den_ = a.den_ * b.den_;
    }
    r.normalize();
    return r;
  }

  friend CycNum operator-(const CycNum& a, const CycNum& b) { return a + (-b); }

  friend CycNum operator*(const CycNum& a, const CycNum& b) {
    if (a.n_ != b.n_) {
      const int64_t m = nt::lcm(a.n_, b.n_);
      return a.lifted(m) * b.lifted(m);
    }
    const auto& d = detail::cyclo_data(a.n_);
    const auto phi = static_cast<size_t>(d.phi);
    if (a.is_zero() || b.is_zero()) return zero(a.n_);
    CycNum r = zero(a.n_);
    if (phi == 1) {
      r.num_[0] = a.num_[0] * b.num_[0];
    } else {
      std::vector<mpz_class> prod(2 * phi - 1);
      for (size_t i = 0; i < phi; ++i) {
        if (a.num_[i] == 0) continue;
        for (size_t j = 0; j < phi; ++j) {
          if (b.num_[j] == 0) continue;
          mpz_addmul(prod[i + j].get_mpz_t(), a.num_[i].get_mpz_t(), b.num_[j].get_mpz_t());
        }
      }
      for (size_t i = 0; i < phi; ++i) r.num_[i] = prod[i];
      for (size_t k = phi; k < prod.size(); ++k) {
        if (prod[k] == 0) continue;
        const auto& pw = d.powers[k % static_cast<size_t>(a.n_)];
        for (size_t i = 0; i < phi; ++i) detail::addmul(r.num_[i], prod[k], pw[i]);
      }
    }
    r.den_ = a.den_ * b.den_;
    r.normalize();
    return r;
  }

  friend CycNum operator/(const CycNum& a, const CycNum& b) { return a * b.inverse(); }

  CycNum& operator+=(const CycNum& o) { return *this = *this + o; }
  CycNum& operator-=(const CycNum& o) { return *this = *this - o; }
  CycNum& operator*=(const CycNum& o) { return *this = *this * o; }

  friend bool operator==(const CycNum& a, const CycNum& b) {
    if (a.n_ != b.n_) {
      const int64_t m = nt::lcm(a.n_, b.n_);
      return a.lifted(m).same_repr(b.lifted(m));
    }
    return a.same_repr(b);
  }
  friend bool operator!=(const CycNum& a, const CycNum& b) { return !(a == b); }

  std::string to_string() const {
    std::ostringstream os;
    bool first = true;
    auto cs = coeffs();
    for (size_t i = 0; i < cs.size(); ++i) {
      if (cs[i] == 0) continue;
      if (!first) os << " + ";
      first = false;
      os << cs[i].get_str();
      if (i > 0) os << "*z" << n_ << "^" << i;
    }
    if (first) os << "0";
    return os.str();
  }

 private:
  bool same_repr(const CycNum& o) const { return den_ == o.den_ && num_ == o.num_; }

  void normalize() {
    if (den_ < 0) {
      den_ = -den_;
      for (auto& c : num_) c = -c;
    }
    if (is_zero()) {
      den_ = 1;
      return;
    }
    if (den_ == 1) return;
    mpz_class g = den_;
    for (const auto& c : num_) {
      if (c == 0) continue;
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
      if (g == 1) return;
    }
    den_ /= g;
    for (auto& c : num_) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
  }

  int64_t n_;
  std::vector<mpz_class> num_;
  mpz_class den_;
};

inline CycNum root_of_unity(int64_t n, int64_t k) { return CycNum::root_of_unity(n, k); }

inline CycNum cyc_conj(const CycNum& a) { return a.conj(); }

/// Quadratic Gauss sum sum_{x mod p} zeta_p^{x^2}.
inline CycNum gauss_sum_quadratic(int64_t p) {
  if (p < 3 || !nt::is_prime(p)) throw InputError("gauss_sum_quadratic: " + std::to_string(p) + " is not an odd prime");
  std::vector<int64_t> counts(static_cast<size_t>(p), 0);
  for (int64_t x = 0; x < p; ++x) ++counts[static_cast<size_t>(x * x % p)];
  return CycNum::from_root_counts(p, counts);
}

/// The fixed square root of an odd prime: g_p for p = 1 mod 4 and zeta_4^{-1} g_p
/// for p = 3 mod 4, so that the value is positive under zeta_N -> exp(2 pi i / N).
inline CycNum sqrt_prime(int64_t p) {
  CycNum g = gauss_sum_quadratic(p);
  if (p % 4 == 1) return g;
  return root_of_unity(4, -1) * g;
}

/// True when sigma_k fixes a (a is first lifted to a conductor where k is a unit).
inline bool is_fixed_by(const CycNum& a, int64_t conductor, int64_t k) {
  CycNum b = a.lifted(conductor);
  return b.galois(k) == b;
}

/// Membership test for Q(zeta_m) inside Q(zeta_N), N = lcm(conductor, m):
/// a lies in Q(zeta_m) iff it is fixed by every sigma_k with k = 1 mod m.
inline bool in_cyclotomic_subfield(const CycNum& a, int64_t m) {
  const int64_t big = nt::lcm(a.conductor(), m);
  CycNum b = a.lifted(big);
  for (int64_t k = 1; k < big; ++k) {
    if (nt::gcd(k, big) != 1 || nt::mod(k, m) != 1 % m) continue;
    if (b.galois(k) != b) return false;
  }
  return true;
}

/// Representation of a at conductor m if a lies in Q(zeta_m), otherwise nullopt.
inline std::optional<CycNum> cyc_descend(const CycNum& a, int64_t m) {
  if (m < 1) throw InputError("cyc_descend: conductor must be positive");
  if (!in_cyclotomic_subfield(a, m)) return std::nullopt;
  const int64_t big = nt::lcm(a.conductor(), m);
  const CycNum b = a.lifted(big);
  const auto& dbig = detail::cyclo_data(big);
  const auto& dm = detail::cyclo_data(m);
  const size_t rows = static_cast<size_t>(dbig.phi), cols = static_cast<size_t>(dm.phi);
  // Columns: zeta_m^j lifted to conductor big; solve sum_j x_j col_j = b.
  std::vector<std::vector<mpq_class>> aug(rows, std::vector<mpq_class>(cols + 1));
  for (size_t j = 0; j < cols; ++j) {
    const auto& pw = dbig.powers[static_cast<size_t>(nt::mod(static_cast<int64_t>(j) * (big / m), big))];
    for (size_t i = 0; i < rows; ++i) aug[i][j] = pw[i];
  }
  auto bc = b.coeffs();
  for (size_t i = 0; i < rows; ++i) aug[i][cols] = bc[i];
  size_t r = 0;
  std::vector<size_t> pivot_col;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t piv = r;
    while (piv < rows && aug[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(aug[piv], aug[r]);
    for (size_t i = 0; i < rows; ++i) {
      if (i == r || aug[i][c] == 0) continue;
      mpq_class f = aug[i][c] / aug[r][c];
      for (size_t k = c; k <= cols; ++k) aug[i][k] -= f * aug[r][k];
    }
    pivot_col.push_back(c);
    ++r;
  }
  std::vector<mpq_class> x(cols, 0);
  for (size_t i = 0; i < pivot_col.size(); ++i) x[pivot_col[i]] = aug[i][cols] / aug[i][pivot_col[i]];
  CycNum out = CycNum::from_coeffs(m, x);
  if (out.lifted(big) != b) throw DefectError("cyc_descend: back-substitution mismatch");
  return out;
}

/// Smallest conductor m with a in Q(zeta_m).
inline int64_t min_conductor(const CycNum& a) {
  const int64_t n = a.conductor();
  for (int64_t m = 1; m <= n; ++m)
    if (n % m == 0 && in_cyclotomic_subfield(a, m)) return m;
  return n;
}

/// Membership in K = Q(mu_n, sqrt p : p | n) via invariance under the
/// automorphisms of Q(zeta_L) that fix K, L = lcm(conductor, 4n).
inline bool in_field_K(const CycNum& a, int64_t n) {
  const int64_t big = nt::lcm(a.conductor(), 4 * n);
  const CycNum b = a.lifted(big);
  std::vector<CycNum> roots;
  for (auto p : nt::prime_divisors(n)) roots.push_back(sqrt_prime(p).lifted(big));
  for (int64_t k = 1; k < big; ++k) {
    if (nt::gcd(k, big) != 1 || nt::mod(k, n) != 1 % n) continue;
    bool fixes_k = true;
    for (const auto& s : roots)
      if (s.galois(k) != s) {
        fixes_k = false;
        break;
      }
    if (fixes_k && b.galois(k) != b) return false;
  }
  return true;
}

}  // namespace heis
