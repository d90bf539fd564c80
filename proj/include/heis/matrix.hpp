#pragma once

// Three matrix flavours used throughout:
//   CycMatrix   dense, entries in Q(zeta_N)
//   RootMatrix  entries in the group ring Z[Z/n], i.e. integer combinations of
//               n-th roots of unity; fast exact products for intertwiners
//   MonoMatrix  monomial, one root of unity per row (Heisenberg actions, transports)

#include <cstdint>
#include <optional>
#include <vector>

#include "heis/cyclo.hpp"

namespace heis {

class CycMatrix {
 public:
  CycMatrix() = default;
  CycMatrix(size_t rows, size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static CycMatrix identity(size_t n) {
    CycMatrix m(n, n);
    for (size_t i = 0; i < n; ++i) m(i, i) = CycNum(1L);
    return m;
  }

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  CycNum& operator()(size_t i, size_t j) { return data_[i * cols_ + j]; }
  const CycNum& operator()(size_t i, size_t j) const { return data_[i * cols_ + j]; }
  const std::vector<CycNum>& entries() const { return data_; }

  friend CycMatrix operator*(const CycMatrix& a, const CycMatrix& b) {
    if (a.cols_ != b.rows_) throw DefectError("CycMatrix product: shape mismatch");
    CycMatrix c(a.rows_, b.cols_);
    for (size_t i = 0; i < a.rows_; ++i)
      for (size_t k = 0; k < a.cols_; ++k) {
        const CycNum& x = a(i, k);
        if (x.is_zero()) continue;
        for (size_t j = 0; j < b.cols_; ++j) {
          const CycNum& y = b(k, j);
          if (y.is_zero()) continue;
          c(i, j) += x * y;
        }
      }
    return c;
  }

  friend CycMatrix operator+(const CycMatrix& a, const CycMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw DefectError("CycMatrix sum: shape mismatch");
    CycMatrix c = a;
    for (size_t i = 0; i < c.data_.size(); ++i) c.data_[i] += b.data_[i];
    return c;
  }

  friend CycMatrix operator-(const CycMatrix& a, const CycMatrix& b) {
    CycMatrix nb = b;
    for (auto& x : nb.data_) x = -x;
    return a + nb;
  }

  friend CycMatrix operator*(const CycNum& s, const CycMatrix& a) {
    CycMatrix c = a;
    for (auto& x : c.data_)
      if (!x.is_zero()) x = s * x;
    return c;
  }

  friend bool operator==(const CycMatrix& a, const CycMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }
  friend bool operator!=(const CycMatrix& a, const CycMatrix& b) { return !(a == b); }

  bool is_zero() const {
    for (const auto& x : data_)
      if (!x.is_zero()) return false;
    return true;
  }

  CycNum trace() const {
    CycNum t;
    for (size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
    return t;
  }

  CycMatrix transpose() const {
    CycMatrix t(cols_, rows_);
    for (size_t i = 0; i < rows_; ++i)
      for (size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend CycMatrix kron(const CycMatrix& a, const CycMatrix& b) {
    CycMatrix c(a.rows_ * b.rows_, a.cols_ * b.cols_);
    for (size_t i = 0; i < a.rows_; ++i)
      for (size_t j = 0; j < a.cols_; ++j) {
        if (a(i, j).is_zero()) continue;
        for (size_t k = 0; k < b.rows_; ++k)
          for (size_t l = 0; l < b.cols_; ++l)
            if (!b(k, l).is_zero()) c(i * b.rows_ + k, j * b.cols_ + l) = a(i, j) * b(k, l);
      }
    return c;
  }

  /// Row-reduces in place; returns the rank.
  size_t row_reduce() {
    size_t r = 0;
    for (size_t c = 0; c < cols_ && r < rows_; ++c) {
      size_t piv = r;
      while (piv < rows_ && (*this)(piv, c).is_zero()) ++piv;
      if (piv == rows_) continue;
      if (piv != r)
        for (size_t k = 0; k < cols_; ++k) std::swap((*this)(piv, k), (*this)(r, k));
      const CycNum inv = (*this)(r, c).inverse();
      for (size_t k = c; k < cols_; ++k)
        if (!(*this)(r, k).is_zero()) (*this)(r, k) = (*this)(r, k) * inv;
      for (size_t i = 0; i < rows_; ++i) {
        if (i == r || (*this)(i, c).is_zero()) continue;
        const CycNum f = (*this)(i, c);
        for (size_t k = c; k < cols_; ++k)
          if (!(*this)(r, k).is_zero()) (*this)(i, k) -= f * (*this)(r, k);
      }
      ++r;
    }
    return r;
  }

  size_t rank() const {
    CycMatrix m = *this;
    return m.row_reduce();
  }

  CycMatrix inverse() const {
    if (rows_ != cols_) throw DefectError("inverse of a non-square matrix");
    const size_t n = rows_;
    CycMatrix aug(n, 2 * n);
    for (size_t i = 0; i < n; ++i) {
      for (size_t j = 0; j < n; ++j) aug(i, j) = (*this)(i, j);
      aug(i, n + i) = CycNum(1L);
    }
    if (aug.row_reduce() < n) throw InputError("matrix is singular");
    for (size_t i = 0; i < n; ++i)
      if (!aug(i, i).is_one()) throw InputError("matrix is singular");
    CycMatrix inv(n, n);
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
    return inv;
  }

 private:
  size_t rows_ = 0, cols_ = 0;
  std::vector<CycNum> data_;
};

/// Matrix over the group ring Z[Z/n]; entry (i, j) is sum_e c_e zeta_n^e.
class RootMatrix {
 public:
  RootMatrix() = default;
  RootMatrix(size_t rows, size_t cols, int64_t n)
      : rows_(rows), cols_(cols), n_(n), data_(rows * cols * static_cast<size_t>(n), 0) {}

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  int64_t order() const { return n_; }

  void add(size_t i, size_t j, int64_t e, int64_t count = 1) { at(i, j)[nt::mod(e, n_)] += count; }

  const int64_t* at(size_t i, size_t j) const { return &data_[(i * cols_ + j) * static_cast<size_t>(n_)]; }
  int64_t* at(size_t i, size_t j) { return &data_[(i * cols_ + j) * static_cast<size_t>(n_)]; }

  bool entry_is_zero(size_t i, size_t j) const { return reduced(i, j) == std::vector<int64_t>(phi(), 0); }

  /// Power-basis integer coordinates of entry (i, j).
  std::vector<int64_t> reduced(size_t i, size_t j) const {
    const auto& d = detail::cyclo_data(n_);
    std::vector<int64_t> out(static_cast<size_t>(d.phi), 0);
    const int64_t* p = at(i, j);
    for (int64_t e = 0; e < n_; ++e) {
      if (p[e] == 0) continue;
      const auto& pw = d.powers[static_cast<size_t>(e)];
      for (size_t k = 0; k < out.size(); ++k) out[k] += p[e] * pw[k];
    }
    return out;
  }

  CycNum entry(size_t i, size_t j) const {
    const int64_t* p = at(i, j);
    return CycNum::from_root_counts(n_, std::vector<int64_t>(p, p + n_));
  }

  CycMatrix to_cyc() const {
    CycMatrix m(rows_, cols_);
    for (size_t i = 0; i < rows_; ++i)
      for (size_t j = 0; j < cols_; ++j) m(i, j) = entry(i, j);
    return m;
  }

  bool is_zero() const {
    for (size_t i = 0; i < rows_; ++i)
      for (size_t j = 0; j < cols_; ++j)
        if (!entry_is_zero(i, j)) return false;
    return true;
  }

  static RootMatrix identity(size_t dim, int64_t n) {
    RootMatrix m(dim, dim, n);
    for (size_t i = 0; i < dim; ++i) m.add(i, i, 0);
    return m;
  }

  /// Same matrix over Z[Z/m], n | m.
  RootMatrix lifted(int64_t m) const {
    if (m % n_ != 0) throw DefectError("RootMatrix::lifted: order must divide target");
    if (m == n_) return *this;
    RootMatrix out(rows_, cols_, m);
    const int64_t f = m / n_;
    for (size_t i = 0; i < rows_; ++i)
      for (size_t j = 0; j < cols_; ++j) {
        const int64_t* p = at(i, j);
        for (int64_t e = 0; e < n_; ++e)
          if (p[e]) out.at(i, j)[e * f] += p[e];
      }
    return out;
  }

  friend RootMatrix kron(const RootMatrix& a0, const RootMatrix& b0) {
    const int64_t n = nt::lcm(a0.n_, b0.n_);
    const RootMatrix a = a0.lifted(n), b = b0.lifted(n);
    RootMatrix c(a.rows_ * b.rows_, a.cols_ * b.cols_, n);
    for (size_t i = 0; i < a.rows_; ++i)
      for (size_t j = 0; j < a.cols_; ++j)
        for (int64_t e1 = 0; e1 < n; ++e1) {
          const int64_t x = a.at(i, j)[e1];
          if (!x) continue;
          for (size_t k = 0; k < b.rows_; ++k)
            for (size_t l = 0; l < b.cols_; ++l)
              for (int64_t e2 = 0; e2 < n; ++e2) {
                const int64_t y = b.at(k, l)[e2];
                if (y) c.at(i * b.rows_ + k, j * b.cols_ + l)[(e1 + e2) % n] += x * y;
              }
        }
    return c;
  }

  friend RootMatrix operator+(const RootMatrix& a, const RootMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_ || a.n_ != b.n_) throw DefectError("RootMatrix sum: shape mismatch");
    RootMatrix c = a;
    for (size_t i = 0; i < c.data_.size(); ++i) c.data_[i] += b.data_[i];
    return c;
  }

  CycNum trace() const {
    std::vector<int64_t> counts(static_cast<size_t>(n_), 0);
    for (size_t i = 0; i < std::min(rows_, cols_); ++i)
      for (int64_t e = 0; e < n_; ++e) counts[static_cast<size_t>(e)] += at(i, i)[e];
    return CycNum::from_root_counts(n_, counts);
  }

  friend RootMatrix operator*(const RootMatrix& a, const RootMatrix& b) {
    if (a.n_ != b.n_) {
      const int64_t n = nt::lcm(a.n_, b.n_);
      return a.lifted(n) * b.lifted(n);
    }
    if (a.cols_ != b.rows_) throw DefectError("RootMatrix product: shape mismatch");
    const int64_t n = a.n_;
    RootMatrix c(a.rows_, b.cols_, n);
    struct Term {
      size_t j;
      int64_t e, c;
    };
    std::vector<std::vector<Term>> brow(b.rows_);
    for (size_t k = 0; k < b.rows_; ++k)
      for (size_t j = 0; j < b.cols_; ++j) {
        const int64_t* p = b.at(k, j);
        for (int64_t e = 0; e < n; ++e)
          if (p[e] != 0) brow[k].push_back({j, e, p[e]});
      }
    for (size_t i = 0; i < a.rows_; ++i)
      for (size_t k = 0; k < a.cols_; ++k) {
        const int64_t* p = a.at(i, k);
        for (int64_t e1 = 0; e1 < n; ++e1) {
          if (p[e1] == 0) continue;
          for (const auto& t : brow[k]) {
            int64_t e = e1 + t.e;
            if (e >= n) e -= n;
            c.at(i, t.j)[e] += p[e1] * t.c;
          }
        }
      }
    return c;
  }

  /// Exact equality of the represented field elements.
  friend bool operator==(const RootMatrix& a, const RootMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) return false;
    if (a.n_ != b.n_) return a.to_cyc() == b.to_cyc();
    for (size_t i = 0; i < a.rows_; ++i)
      for (size_t j = 0; j < a.cols_; ++j)
        if (a.reduced(i, j) != b.reduced(i, j)) return false;
    return true;
  }

 private:
  size_t phi() const { return static_cast<size_t>(detail::cyclo_data(n_).phi); }

  size_t rows_ = 0, cols_ = 0;
  int64_t n_ = 1;
  std::vector<int64_t> data_;
};

/// Square monomial matrix: row i holds zeta_n^{exps[i]} in column cols[i].
class MonoMatrix {
 public:
  MonoMatrix() = default;
  MonoMatrix(int64_t n, std::vector<size_t> cols, std::vector<int64_t> exps)
      : n_(n), cols_(std::move(cols)), exps_(std::move(exps)) {
    for (auto& e : exps_) e = nt::mod(e, n_);
  }

  static MonoMatrix identity(size_t dim, int64_t n) {
    std::vector<size_t> c(dim);
    for (size_t i = 0; i < dim; ++i) c[i] = i;
    return MonoMatrix(n, c, std::vector<int64_t>(dim, 0));
  }

  size_t dim() const { return cols_.size(); }
  int64_t order() const { return n_; }
  size_t col(size_t i) const { return cols_[i]; }
  int64_t exp(size_t i) const { return exps_[i]; }

  friend MonoMatrix operator*(const MonoMatrix& a, const MonoMatrix& b) {
    if (a.dim() != b.dim() || a.n_ != b.n_) throw DefectError("MonoMatrix product: shape mismatch");
    std::vector<size_t> c(a.dim());
    std::vector<int64_t> e(a.dim());
    for (size_t i = 0; i < a.dim(); ++i) {
      c[i] = b.cols_[a.cols_[i]];
      e[i] = a.exps_[i] + b.exps_[a.cols_[i]];
    }
    return MonoMatrix(a.n_, c, e);
  }

  friend bool operator==(const MonoMatrix& a, const MonoMatrix& b) {
    return a.n_ == b.n_ && a.cols_ == b.cols_ && a.exps_ == b.exps_;
  }

  MonoMatrix inverse() const {
    std::vector<size_t> c(dim());
    std::vector<int64_t> e(dim());
    for (size_t i = 0; i < dim(); ++i) {
      c[cols_[i]] = i;
      e[cols_[i]] = -exps_[i];
    }
    return MonoMatrix(n_, c, e);
  }

  /// Trace as root-of-unity counts.
  std::vector<int64_t> trace_counts() const {
    std::vector<int64_t> counts(static_cast<size_t>(n_), 0);
    for (size_t i = 0; i < dim(); ++i)
      if (cols_[i] == i) ++counts[static_cast<size_t>(exps_[i])];
    return counts;
  }

  CycNum trace() const { return CycNum::from_root_counts(n_, trace_counts()); }

  MonoMatrix lifted(int64_t m) const {
    if (m % n_ != 0) throw DefectError("MonoMatrix::lifted: order must divide target");
    std::vector<int64_t> e = exps_;
    for (auto& x : e) x *= m / n_;
    return MonoMatrix(m, cols_, e);
  }

  friend MonoMatrix kron(const MonoMatrix& a0, const MonoMatrix& b0) {
    const int64_t n = nt::lcm(a0.n_, b0.n_);
    const MonoMatrix a = a0.lifted(n), b = b0.lifted(n);
    std::vector<size_t> c(a.dim() * b.dim());
    std::vector<int64_t> e(c.size());
    for (size_t i = 0; i < a.dim(); ++i)
      for (size_t k = 0; k < b.dim(); ++k) {
        c[i * b.dim() + k] = a.cols_[i] * b.dim() + b.cols_[k];
        e[i * b.dim() + k] = a.exps_[i] + b.exps_[k];
      }
    return MonoMatrix(n, c, e);
  }

  friend MonoMatrix direct_sum(const MonoMatrix& a, const MonoMatrix& b) {
    if (a.n_ != b.n_) throw DefectError("direct_sum: order mismatch");
    std::vector<size_t> c = a.cols_;
    std::vector<int64_t> e = a.exps_;
    for (size_t i = 0; i < b.dim(); ++i) {
      c.push_back(b.cols_[i] + a.dim());
      e.push_back(b.exps_[i]);
    }
    return MonoMatrix(a.n_, c, e);
  }

  RootMatrix to_root() const {
    RootMatrix m(dim(), dim(), n_);
    for (size_t i = 0; i < dim(); ++i) m.add(i, cols_[i], exps_[i]);
    return m;
  }

  CycMatrix to_cyc() const { return to_root().to_cyc(); }

  friend RootMatrix operator*(const MonoMatrix& m0, const RootMatrix& a0) {
    if (m0.n_ != a0.order()) {
      const int64_t l = nt::lcm(m0.n_, a0.order());
      return m0.lifted(l) * a0.lifted(l);
    }
    const MonoMatrix& m = m0;
    const RootMatrix& a = a0;
    if (m.dim() != a.rows()) throw DefectError("Mono*Root: shape mismatch");
    const int64_t n = m.n_;
    RootMatrix out(a.rows(), a.cols(), n);
    for (size_t i = 0; i < m.dim(); ++i)
      for (size_t j = 0; j < a.cols(); ++j) {
        const int64_t* src = a.at(m.cols_[i], j);
        int64_t* dst = out.at(i, j);
        for (int64_t e = 0; e < n; ++e)
          if (src[e] != 0) dst[(e + m.exps_[i]) % n] += src[e];
      }
    return out;
  }

  friend RootMatrix operator*(const RootMatrix& a0, const MonoMatrix& m0) {
    if (m0.n_ != a0.order()) {
      const int64_t l = nt::lcm(m0.n_, a0.order());
      return a0.lifted(l) * m0.lifted(l);
    }
    const MonoMatrix& m = m0;
    const RootMatrix& a = a0;
    if (m.dim() != a.cols()) throw DefectError("Root*Mono: shape mismatch");
    const int64_t n = m.n_;
    RootMatrix out(a.rows(), a.cols(), n);
    for (size_t k = 0; k < m.dim(); ++k) {
      const size_t j = m.cols_[k];
      for (size_t i = 0; i < a.rows(); ++i) {
        const int64_t* src = a.at(i, k);
        int64_t* dst = out.at(i, j);
        for (int64_t e = 0; e < n; ++e)
          if (src[e] != 0) dst[(e + m.exps_[k]) % n] += src[e];
      }
    }
    return out;
  }

 private:
  int64_t n_ = 1;
  std::vector<size_t> cols_;
  std::vector<int64_t> exps_;
};

/// If s1 * A == s2 * B entrywise, true. Exact.
inline bool scaled_equal(const CycNum& s1, const RootMatrix& a, const CycNum& s2, const RootMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  if (s1 == s2 && a.order() == b.order()) return a == b;
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t j = 0; j < a.cols(); ++j) {
      CycNum x = a.entry(i, j), y = b.entry(i, j);
      if (x.is_zero() && y.is_zero()) continue;
      if (s1 * x != s2 * y) return false;
    }
  return true;
}

/// The scalar r with A == r * B, if B != 0 and A is proportional to B.
inline std::optional<CycNum> proportionality(const RootMatrix& a, const RootMatrix& b) {
  for (size_t i = 0; i < b.rows(); ++i)
    for (size_t j = 0; j < b.cols(); ++j) {
      if (b.entry_is_zero(i, j)) continue;
      CycNum r = a.entry(i, j) / b.entry(i, j);
      if (!scaled_equal(CycNum(1L), a, r, b)) return std::nullopt;
      return r;
    }
  return std::nullopt;
}

/// Scalar multiple of an integral root matrix: the common shape of every
/// canonical intertwiner in this library.
struct ScaledMatrix {
  CycNum scalar;
  RootMatrix base;

  CycMatrix dense() const { return scalar * base.to_cyc(); }

  friend ScaledMatrix operator*(const ScaledMatrix& a, const ScaledMatrix& b) {
    return {a.scalar * b.scalar, a.base * b.base};
  }
  friend bool operator==(const ScaledMatrix& a, const ScaledMatrix& b) {
    return scaled_equal(a.scalar, a.base, b.scalar, b.base);
  }
  friend ScaledMatrix kron(const ScaledMatrix& a, const ScaledMatrix& b) { return {a.scalar * b.scalar, kron(a.base, b.base)}; }
  CycNum trace() const { return scalar * base.trace(); }
};

}  // namespace heis
