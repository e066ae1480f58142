#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "harnesslab/errors.hpp"
#include "harnesslab/linear.hpp"
#include "harnesslab/recurrence.hpp"
#include "harnesslab/regression.hpp"

namespace harnesslab {

/// Finite truncation of an infinite banded matrix, stored by diagonals.
///
/// valid_block() is the size of the leading principal block whose
/// entries equal the untruncated matrix. A product shrinks it by
/// min(upper bandwidth of the left factor, lower bandwidth of the right
/// factor); after m multiplications of tridiagonal factors the leading
/// (N-m) block is exact.
template <class S>
class BandedMatrix {
 public:
  BandedMatrix(int n, int lower, int upper, int valid)
      : n_(n), lower_(lower), upper_(upper), valid_(std::clamp(valid, 0, n)) {
    if (n < 1 || lower < 0 || upper < 0 || lower >= n || upper >= n)
      throw DomainError("bad banded matrix shape");
    diag_.resize(static_cast<std::size_t>(lower_ + upper_) + 1);
    for (int d = -lower_; d <= upper_; ++d)
      diag_[static_cast<std::size_t>(d + lower_)].assign(
          static_cast<std::size_t>(n_ - (d < 0 ? -d : d)), S(0));
  }

  static BandedMatrix identity(int n) {
    BandedMatrix m(n, 0, 0, n);
    for (int i = 0; i < n; ++i) m.set(i, i, S(1));
    return m;
  }

  int size() const { return n_; }
  int lower_bandwidth() const { return lower_; }
  int upper_bandwidth() const { return upper_; }
  int valid_block() const { return valid_; }

  S get(int i, int j) const {
    check_index(i, j);
    const int d = j - i;
    if (d < -lower_ || d > upper_) return S(0);
    return diag_[static_cast<std::size_t>(d + lower_)][static_cast<std::size_t>(std::min(i, j))];
  }

  void set(int i, int j, S v) {
    check_index(i, j);
    const int d = j - i;
    if (d < -lower_ || d > upper_) throw DomainError("entry outside the band");
    diag_[static_cast<std::size_t>(d + lower_)][static_cast<std::size_t>(std::min(i, j))] =
        std::move(v);
  }

  friend BandedMatrix operator+(const BandedMatrix& a, const BandedMatrix& b) {
    a.require_same(b);
    BandedMatrix r(a.n_, std::max(a.lower_, b.lower_), std::max(a.upper_, b.upper_),
                   std::min(a.valid_, b.valid_));
    for (int i = 0; i < a.n_; ++i)
      for (int j = std::max(0, i - r.lower_); j <= std::min(a.n_ - 1, i + r.upper_); ++j)
        r.set(i, j, S(a.get(i, j) + b.get(i, j)));
    return r;
  }

  friend BandedMatrix operator-(const BandedMatrix& a, const BandedMatrix& b) {
    a.require_same(b);
    BandedMatrix r(a.n_, std::max(a.lower_, b.lower_), std::max(a.upper_, b.upper_),
                   std::min(a.valid_, b.valid_));
    for (int i = 0; i < a.n_; ++i)
      for (int j = std::max(0, i - r.lower_); j <= std::min(a.n_ - 1, i + r.upper_); ++j)
        r.set(i, j, S(a.get(i, j) - b.get(i, j)));
    return r;
  }

  friend BandedMatrix operator*(const S& c, const BandedMatrix& a) {
    BandedMatrix r(a.n_, a.lower_, a.upper_, a.valid_);
    for (int i = 0; i < a.n_; ++i)
      for (int j = std::max(0, i - a.lower_); j <= std::min(a.n_ - 1, i + a.upper_); ++j)
        r.set(i, j, S(c * a.get(i, j)));
    return r;
  }

  friend BandedMatrix operator*(const BandedMatrix& a, const BandedMatrix& b) {
    a.require_same(b);
    const int lower = std::min(a.n_ - 1, a.lower_ + b.lower_);
    const int upper = std::min(a.n_ - 1, a.upper_ + b.upper_);
    const int valid = std::min(a.valid_, b.valid_) - std::min(a.upper_, b.lower_);
    BandedMatrix r(a.n_, lower, upper, valid);
    for (int i = 0; i < a.n_; ++i) {
      const int jlo = std::max(0, i - lower), jhi = std::min(a.n_ - 1, i + upper);
      for (int j = jlo; j <= jhi; ++j) {
        const int klo = std::max({0, i - a.lower_, j - b.upper_});
        const int khi = std::min({a.n_ - 1, i + a.upper_, j + b.lower_});
        S acc(0);
        for (int k = klo; k <= khi; ++k) acc = acc + a.get(i, k) * b.get(k, j);
        r.set(i, j, std::move(acc));
      }
    }
    return r;
  }

  std::vector<S> apply(const std::vector<S>& v) const {
    if (static_cast<int>(v.size()) != n_) throw DomainError("vector length mismatch");
    std::vector<S> out(static_cast<std::size_t>(n_), S(0));
    for (int i = 0; i < n_; ++i) {
      S acc(0);
      for (int j = std::max(0, i - lower_); j <= std::min(n_ - 1, i + upper_); ++j)
        acc = acc + get(i, j) * v[static_cast<std::size_t>(j)];
      out[static_cast<std::size_t>(i)] = std::move(acc);
    }
    return out;
  }

  bool zero_on_block(int k) const {
    k = std::min(k, n_);
    for (int i = 0; i < k; ++i)
      for (int j = std::max(0, i - lower_); j <= std::min(k - 1, i + upper_); ++j)
        if (!(get(i, j) == S(0))) return false;
    return true;
  }

  bool equal_on_block(const BandedMatrix& other, int k) const {
    k = std::min({k, n_, other.n_});
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j)
        if (!(get(i, j) == other.get(i, j))) return false;
    return true;
  }

 private:
  void check_index(int i, int j) const {
    if (i < 0 || i >= n_ || j < 0 || j >= n_) throw DomainError("matrix index out of range");
  }
  void require_same(const BandedMatrix& other) const {
    if (n_ != other.n_) throw DomainError("mismatched matrix sizes");
  }

  int n_, lower_, upper_, valid_;
  std::vector<std::vector<S>> diag_;
};

/// Multiplication-by-x matrix in the martingale-polynomial basis:
/// subdiagonal a_n(t), diagonal b_n(t), superdiagonal c_n(t). The value
/// type S may be the scalar itself or a polynomial in t.
template <class T, class S>
BandedMatrix<S> build_ct(const RecurrenceTable<T>& tbl, const S& t, int N) {
  if (N < 2 || N - 1 > tbl.order) throw DomainError("truncation exceeds table order");
  BandedMatrix<S> m(N, 1, 1, N);
  for (int n = 0; n < N; ++n) {
    const auto c = coeffs_at(tbl, n);
    const S bn = S(c.b.slope) * t + S(c.b.intercept);
    m.set(n, n, bn);
    if (n + 1 < N) m.set(n + 1, n, S(S(c.a.slope) * t + S(c.a.intercept)));
    if (n >= 1) m.set(n - 1, n, S(S(c.c.slope) * t + S(c.c.intercept)));
  }
  return m;
}

/// C_t = t X + Y with X = C_1 - C_0 and Y = C_0, both tridiagonal.
template <class T>
std::pair<BandedMatrix<T>, BandedMatrix<T>> split_xy(const RecurrenceTable<T>& tbl, int N) {
  if (N < 2 || N - 1 > tbl.order) throw DomainError("truncation exceeds table order");
  BandedMatrix<T> x(N, 1, 1, N), y(N, 1, 1, N);
  for (int n = 0; n < N; ++n) {
    const auto c = coeffs_at(tbl, n);
    x.set(n, n, c.b.slope);
    y.set(n, n, c.b.intercept);
    if (n + 1 < N) {
      x.set(n + 1, n, T(c.a.slope));
      y.set(n + 1, n, c.a.intercept);
    }
    if (n >= 1) {
      x.set(n - 1, n, c.c.slope);
      y.set(n - 1, n, c.c.intercept);
    }
  }
  return {std::move(x), std::move(y)};
}

/// Residual of X Y - q Y X - (I + tau X^2 + sigma Y^2 + theta X + eta Y)
/// on the truncation; exact on its valid block.
template <class T, class S>
BandedMatrix<S> matrix_ccom_residual(const BandedMatrix<S>& x, const BandedMatrix<S>& y,
                                     const ParamSet<T>& p) {
  const auto I = BandedMatrix<S>::identity(x.size());
  return x * y - S(p.q) * (y * x) -
         (I + S(p.tau) * (x * x) + S(p.sigma) * (y * y) + S(p.theta) * x + S(p.eta) * y);
}

template <class T>
BandedMatrix<T> verify_matrix_ccom(const RecurrenceTable<T>& tbl, int N) {
  if (N < 6) throw DomainError("commutation check needs N >= 6");
  const auto [x, y] = split_xy(tbl, N);
  return matrix_ccom_residual(x, y, tbl.params);
}

/// Residual of C_t^2 - Q_{t,s,u}(C_s, C_u) with the B term ordered
/// C_s C_u. Identically F_{t,s,u} times the q-commutation residual.
template <class T>
BandedMatrix<T> verify_matrix_quadratic(const RecurrenceTable<T>& tbl, const TimeTriple<T>& tr,
                                        int N) {
  if (tr.s == tr.t || tr.t == tr.u)
    throw DomainError("quadratic identity needs strictly ordered times");
  const FormCoeffs<T> fc = form_coeffs(tbl.params, tr);
  const auto I = BandedMatrix<T>::identity(N);
  const auto cs = build_ct(tbl, tr.s, N);
  const auto ct = build_ct(tbl, tr.t, N);
  const auto cu = build_ct(tbl, tr.u, N);
  return ct * ct - (fc.A * (cs * cs) + fc.B * (cs * cu) + fc.C * (cu * cu) + fc.D * cs +
                    fc.E * cu + fc.F * I);
}

/// Dual form: X_t = X + t Y satisfies the quadratic identity whose
/// coefficients come from the time-inverted parameter set, with the B
/// term ordered X_u X_s.
template <class T>
BandedMatrix<T> verify_matrix_quadratic_dual(const RecurrenceTable<T>& tbl,
                                             const TimeTriple<T>& tr, int N) {
  if (tr.s == tr.t || tr.t == tr.u)
    throw DomainError("quadratic identity needs strictly ordered times");
  const FormCoeffs<T> fc = form_coeffs(time_invert(tbl.params), tr);
  const auto I = BandedMatrix<T>::identity(N);
  const auto [x, y] = split_xy(tbl, N);
  auto xt = [&](const T& tt) { return x + tt * y; };
  const auto gs = xt(tr.s), gt = xt(tr.t), gu = xt(tr.u);
  return gt * gt - (fc.A * (gs * gs) + fc.B * (gu * gs) + fc.C * (gu * gu) + fc.D * gs +
                    fc.E * gu + fc.F * I);
}

/// Moments of the orthogonality measure, m_n(t) = (C_t^n)_{00}.
/// Needs N >= n + 2 so truncation cannot reach the (0,0) entry.
template <class T, class S>
std::vector<S> moments(const RecurrenceTable<T>& tbl, const S& t, int nmax, int N) {
  if (N < nmax + 2) throw TruncationExceeded("moments need N >= n + 2");
  const auto ct = build_ct(tbl, t, N);
  std::vector<S> v(static_cast<std::size_t>(N), S(0));
  v[0] = S(1);
  std::vector<S> out;
  out.reserve(static_cast<std::size_t>(nmax) + 1);
  out.push_back(S(1));
  for (int k = 1; k <= nmax; ++k) {
    v = ct.apply(v);
    out.push_back(v[0]);
  }
  return out;
}

/// Moments as exact polynomials in t.
template <class T>
std::vector<Poly<T>> moments_poly(const RecurrenceTable<T>& tbl, int nmax) {
  return moments(tbl, Poly<T>::var(), nmax, nmax + 2);
}

/// Necessary condition for a positive orthogonality measure:
/// a_{n-1}(t) c_n(t) > 0 for 1 <= n < N at the given time.
template <class T>
bool hankel_positivity_proxy(const RecurrenceTable<T>& tbl, const T& t, int N) {
  for (int n = 1; n < N; ++n) {
    const auto prev = coeffs_at(tbl, n - 1);
    const auto cur = coeffs_at(tbl, n);
    if (!(prev.a(t) * cur.c(t) > T(0))) return false;
  }
  return true;
}

}  // namespace harnesslab
