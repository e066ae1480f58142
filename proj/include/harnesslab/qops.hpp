#pragma once

#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "harnesslab/errors.hpp"
#include "harnesslab/params.hpp"
#include "harnesslab/recurrence.hpp"
#include "harnesslab/regression.hpp"
#include "harnesslab/scalar.hpp"

namespace harnesslab {

/// [n]_q = 1 + q + ... + q^{n-1}, with [0]_q = 0.
template <class T>
T q_number(int n, const T& q) {
  if (n < 0) throw DomainError("q_number needs n >= 0");
  T acc(0), pw(1);
  for (int k = 0; k < n; ++k) {
    acc = acc + pw;
    pw = pw * q;
  }
  return acc;
}

/// [n]_q! = [1]_q [2]_q ... [n]_q, with [0]_q! = 1.
template <class T>
T q_factorial(int n, const T& q) {
  if (n < 0) throw DomainError("q_factorial needs n >= 0");
  T acc(1);
  for (int k = 1; k <= n; ++k) acc = acc * q_number(k, q);
  return acc;
}

/// A linear operator on polynomials in the auxiliary variable z,
/// truncated at degree N. Column j holds the coefficients of Op(z^j).
///
/// Truncation bookkeeping is the main correctness hazard here: columns
/// past validity() are stored zero-extended but no longer equal the
/// untruncated action (degree-raising operators lose top entries), so
/// every identity check restricts itself to the joint validity range.
/// degree_shift() bounds the degree raise of a valid column and drives
/// the validity adjustment under composition.
template <class T>
class SeriesOperator {
 public:
  SeriesOperator(int trunc, int validity, int shift)
      : n_(trunc),
        validity_(std::min(validity, trunc)),
        shift_(shift),
        m_(static_cast<std::size_t>(trunc + 1) * static_cast<std::size_t>(trunc + 1), T(0)) {
    if (trunc < 1) throw DomainError("truncation degree must be >= 1");
  }

  static SeriesOperator zero(int N) { return SeriesOperator(N, N, 0); }

  static SeriesOperator identity(int N) {
    SeriesOperator op(N, N, 0);
    for (int j = 0; j <= N; ++j) op.at(j, j) = T(1);
    return op;
  }

  /// q-differentiation: D_q z^j = [j]_q z^{j-1}.
  static SeriesOperator dq(const T& q, int N) {
    SeriesOperator op(N, N, -1);
    for (int j = 1; j <= N; ++j) op.at(j - 1, j) = q_number(j, q);
    return op;
  }

  /// Multiplication by z; the top column is lost to truncation.
  static SeriesOperator zmul(int N) {
    SeriesOperator op(N, N - 1, +1);
    for (int j = 0; j < N; ++j) op.at(j + 1, j) = T(1);
    return op;
  }

  int truncation() const { return n_; }
  int validity() const { return validity_; }
  int degree_shift() const { return shift_; }

  const T& at(int i, int j) const { return m_[idx(i, j)]; }
  T& at(int i, int j) { return m_[idx(i, j)]; }

  /// Coefficients of Op(z^j); exact only within the validity range.
  std::vector<T> column(int j) const {
    if (j < 0 || j > validity_)
      throw TruncationExceeded("column " + std::to_string(j) + " past validity degree " +
                               std::to_string(validity_));
    std::vector<T> col(static_cast<std::size_t>(n_) + 1);
    for (int i = 0; i <= n_; ++i) col[static_cast<std::size_t>(i)] = at(i, j);
    return col;
  }

  friend SeriesOperator operator+(const SeriesOperator& a, const SeriesOperator& b) {
    a.require_same(b);
    SeriesOperator r(a.n_, std::min(a.validity_, b.validity_), std::max(a.shift_, b.shift_));
    for (std::size_t k = 0; k < r.m_.size(); ++k) r.m_[k] = a.m_[k] + b.m_[k];
    return r;
  }
  friend SeriesOperator operator-(const SeriesOperator& a, const SeriesOperator& b) {
    a.require_same(b);
    SeriesOperator r(a.n_, std::min(a.validity_, b.validity_), std::max(a.shift_, b.shift_));
    for (std::size_t k = 0; k < r.m_.size(); ++k) r.m_[k] = a.m_[k] - b.m_[k];
    return r;
  }
  friend SeriesOperator operator*(const T& c, const SeriesOperator& a) {
    SeriesOperator r(a.n_, a.validity_, a.shift_);
    for (std::size_t k = 0; k < r.m_.size(); ++k) r.m_[k] = c * a.m_[k];
    return r;
  }

  /// Composition "a after b". A valid column j of b has degree at most
  /// j + b.shift, which must stay within a's validity.
  friend SeriesOperator operator*(const SeriesOperator& a, const SeriesOperator& b) {
    a.require_same(b);
    const int validity = std::min(b.validity_, a.validity_ - b.shift_);
    SeriesOperator r(a.n_, validity, a.shift_ + b.shift_);
    for (int j = 0; j <= a.n_; ++j)
      for (int k = 0; k <= a.n_; ++k) {
        const T& bkj = b.at(k, j);
        if (bkj == T(0)) continue;
        for (int i = 0; i <= a.n_; ++i) {
          const T& aik = a.at(i, k);
          if (aik == T(0)) continue;
          r.at(i, j) = r.at(i, j) + aik * bkj;
        }
      }
    return r;
  }

  /// All entries of columns 0..validity vanish.
  bool zero_on_validity() const {
    for (int j = 0; j <= validity_; ++j)
      for (int i = 0; i <= n_; ++i)
        if (!(at(i, j) == T(0))) return false;
    return true;
  }

  T max_abs_on_validity() const {
    T m(0);
    for (int j = 0; j <= validity_; ++j)
      for (int i = 0; i <= n_; ++i) {
        T a = tabs(at(i, j));
        if (m < a) m = a;
      }
    return m;
  }

 private:
  std::size_t idx(int i, int j) const {
    if (i < 0 || i > n_ || j < 0 || j > n_) throw DomainError("operator index out of range");
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_ + 1) +
           static_cast<std::size_t>(j);
  }
  void require_same(const SeriesOperator& other) const {
    if (n_ != other.n_) throw DomainError("mismatched truncations");
  }

  int n_, validity_, shift_;
  std::vector<T> m_;
};

/// [A, B]_q = A B - q B A.
template <class T>
SeriesOperator<T> q_commutator(const SeriesOperator<T>& a, const SeriesOperator<T>& b,
                               const T& q) {
  return a * b - q * (b * a);
}

template <class T>
struct OperatorCheck {
  std::string name;
  bool zero = false;
  int checked_upto = -1;
  T max_abs{0};
};

namespace detail {

template <class T>
OperatorCheck<T> check_zero(const std::string& name, const SeriesOperator<T>& r) {
  return {name, r.zero_on_validity(), r.validity(), r.max_abs_on_validity()};
}

}  // namespace detail

/// Verifies every populated cell of the q-commutator table for the
/// operators generated by D_q and Z. All ten residuals are identically
/// zero; each is checked on its joint validity range.
template <class T>
std::vector<OperatorCheck<T>> table1_verify(const T& q, int N) {
  if (N < 5) throw DomainError("table verification needs N >= 5");
  using Op = SeriesOperator<T>;
  const Op I = Op::identity(N);
  const Op D = Op::dq(q, N);
  const Op Z = Op::zmul(N);
  const Op D2 = D * D;
  const Op ZD = Z * D;
  const Op ZD2 = Z * D2;
  const Op Z2 = Z * Z;
  const Op Z2D = Z2 * D;
  const Op Z2D2 = Z2 * D2;
  const T one(1);
  const Op mix_plus = (one + q) * ZD - T(q * (one - q)) * Z2D2;
  const Op mix_minus = (one - q) * ZD + T(q * (one - q)) * Z2D2;

  std::vector<OperatorCheck<T>> out;
  auto cell = [&](const char* name, const Op& a, const Op& b, const Op& rhs) {
    out.push_back(detail::check_zero(name, q_commutator(a, b, q) - rhs));
  };
  cell("[Dq,Z]_q = I", D, Z, I);
  cell("[Dq,ZDq]_q = Dq", D, ZD, D);
  cell("[Dq,ZDq2]_q = Dq2", D, ZD2, D2);
  cell("[Dq,Z2Dq]_q = (1+q)ZDq - q(1-q)Z2Dq2", D, Z2D, mix_plus);
  cell("[ZDq,Z]_q = Z", ZD, Z, Z);
  cell("[ZDq,ZDq]_q = (1-q)ZDq + q(1-q)Z2Dq2", ZD, ZD, mix_minus);
  cell("[ZDq,Z2Dq]_q = Z2Dq", ZD, Z2D, Z2D);
  cell("[ZDq2,Z]_q = (1+q)ZDq - q(1-q)Z2Dq2", ZD2, Z, mix_plus);
  cell("[ZDq2,ZDq]_q = ZDq2", ZD2, ZD, ZD2);
  cell("[Z2Dq,Z]_q = Z2", Z2D, Z, Z2);
  return out;
}

/// Operator pair solving the q-commutation equation for the two families
/// the construction covers, normalized so x(1) = 0 and y(1) = z.
///   q-Meixner (sigma = eta = 0): x = Dq, y = Z(1 + theta Dq + tau Dq^2)
///   bi-Poisson (sigma = tau = 0): x = Dq + eta Z(Dq + theta Dq^2),
///                                 y = Z(1 + theta Dq)
template <class T>
std::pair<SeriesOperator<T>, SeriesOperator<T>> realization(FamilyTag tag, const ParamSet<T>& p,
                                                            int N) {
  using Op = SeriesOperator<T>;
  const Op I = Op::identity(N);
  const Op D = Op::dq(p.q, N);
  const Op Z = Op::zmul(N);
  if (tag == FamilyTag::QMeixner) {
    if (!(p.sigma == T(0) && p.eta == T(0)))
      throw FamilyMismatch("q-Meixner realization needs sigma = eta = 0");
    return {D, Z * (I + p.theta * D + p.tau * (D * D))};
  }
  if (tag == FamilyTag::BiPoisson) {
    if (!(p.sigma == T(0) && p.tau == T(0)))
      throw FamilyMismatch("bi-Poisson realization needs sigma = tau = 0");
    return {D + p.eta * (Z * (D + p.theta * (D * D))), Z * (I + p.theta * D)};
  }
  throw FamilyMismatch("no operator realization for this family");
}

/// Dual pair solving [x,y]_q = sigma x^2 + tau y^2 + eta x + theta y + 1.
///   q-Meixner: x = (1 + theta Z + tau Z^2) Dq, y = Z
///   bi-Poisson: x = (1 + theta Z) Dq, y = Z + eta (Z + theta Z^2) Dq
template <class T>
std::pair<SeriesOperator<T>, SeriesOperator<T>> dual_realization(FamilyTag tag,
                                                                 const ParamSet<T>& p, int N) {
  using Op = SeriesOperator<T>;
  const Op I = Op::identity(N);
  const Op D = Op::dq(p.q, N);
  const Op Z = Op::zmul(N);
  if (tag == FamilyTag::QMeixner) {
    if (!(p.sigma == T(0) && p.eta == T(0)))
      throw FamilyMismatch("q-Meixner realization needs sigma = eta = 0");
    return {(I + p.theta * Z + p.tau * (Z * Z)) * D, Z};
  }
  if (tag == FamilyTag::BiPoisson) {
    if (!(p.sigma == T(0) && p.tau == T(0)))
      throw FamilyMismatch("bi-Poisson realization needs sigma = tau = 0");
    return {(I + p.theta * Z) * D, Z + p.eta * ((Z + p.theta * (Z * Z)) * D)};
  }
  throw FamilyMismatch("no operator realization for this family");
}

/// Residual of x y - q y x - (I + tau x^2 + sigma y^2 + theta x + eta y).
template <class T>
SeriesOperator<T> ccom_residual(const SeriesOperator<T>& x, const SeriesOperator<T>& y,
                                const ParamSet<T>& p) {
  const auto I = SeriesOperator<T>::identity(x.truncation());
  return q_commutator(x, y, p.q) -
         (I + p.tau * (x * x) + p.sigma * (y * y) + p.theta * x + p.eta * y);
}

/// Dual residual, x y - q y x - (sigma x^2 + tau y^2 + eta x + theta y + I).
template <class T>
SeriesOperator<T> ccom_residual_dual(const SeriesOperator<T>& x, const SeriesOperator<T>& y,
                                     const ParamSet<T>& p) {
  const auto I = SeriesOperator<T>::identity(x.truncation());
  return q_commutator(x, y, p.q) -
         (I + p.sigma * (x * x) + p.tau * (y * y) + p.eta * x + p.theta * y);
}

template <class T>
OperatorCheck<T> verify_ccom(const SeriesOperator<T>& x, const SeriesOperator<T>& y,
                             const ParamSet<T>& p) {
  return detail::check_zero<T>("q-commutation", ccom_residual(x, y, p));
}

template <class T>
OperatorCheck<T> verify_ccom_dual(const SeriesOperator<T>& x, const SeriesOperator<T>& y,
                                  const ParamSet<T>& p) {
  return detail::check_zero<T>("dual q-commutation", ccom_residual_dual(x, y, p));
}

/// Reads the three-term coefficients off column n of t*x + y:
/// (t x + y) z^n = a z^{n+1} + b z^n + c z^{n-1}. Any coefficient outside
/// the three-band raises NotBanded.
template <class T>
std::tuple<T, T, T> extract_recurrence(const SeriesOperator<T>& x, const SeriesOperator<T>& y,
                                       const T& t, int n) {
  const SeriesOperator<T> ct = t * x + y;
  if (n < 0 || n > ct.validity())
    throw TruncationExceeded("column past the joint validity range");
  const auto col = ct.column(n);
  const int top = ct.truncation();
  for (int i = 0; i <= top; ++i) {
    if (i >= n - 1 && i <= n + 1) continue;
    if (!(col[static_cast<std::size_t>(i)] == T(0)))
      throw NotBanded("coefficient at z^" + std::to_string(i) + " of column " +
                      std::to_string(n) + " is nonzero");
  }
  const T a = n + 1 <= top ? col[static_cast<std::size_t>(n + 1)] : T(0);
  const T b = col[static_cast<std::size_t>(n)];
  const T c = n >= 1 ? col[static_cast<std::size_t>(n - 1)] : T(0);
  return {a, b, c};
}

/// The multiplication operator of the dual picture: conjugating the
/// transposed Jacobi matrix by diag([n]_q!) must reproduce the operator
/// X_t = x + t y of the dual realization. Requires q > -1 so the
/// q-factorials do not vanish. Returns the residual check.
template <class T>
OperatorCheck<T> verify_coherent_conjugation(FamilyTag tag, const ParamSet<T>& p, const T& t,
                                             int N) {
  if (!(p.q > T(-1))) throw DomainError("coherent-state normalization needs q > -1");
  const auto [dx, dy] = dual_realization(tag, p, N);
  SeriesOperator<T> xt = t * dy + dx;  // X_t = x + t*y
  const auto fam = closed_family(p, tag, N);
  // (X_t)_{ij} = [j]_q!/[i]_q! * (C_t)_{ji} for the tridiagonal C_t.
  SeriesOperator<T> expect(N, xt.validity(), xt.degree_shift());
  // (X)_{ij} = [j]!/[i]! (C)_{ji}: sub/diag/super of C map to super/diag/sub of X.
  for (int j = 0; j <= N; ++j) {
    const auto& f = fam[static_cast<std::size_t>(j)];
    expect.at(j, j) = f.b(t);  // (C)_{jj}
    if (j + 1 <= N) {
      // (X)_{j+1,j} = [j]!/[j+1]! (C)_{j,j+1} = c_{j+1}(t)/[j+1]
      const T cnext = fam[static_cast<std::size_t>(j + 1)].c(t);
      expect.at(j + 1, j) = cnext / q_number(j + 1, p.q);
    }
    if (j >= 1) {
      // (X)_{j-1,j} = [j]!/[j-1]! (C)_{j,j-1} = a_{j-1}(t) * [j]
      const T aprev = fam[static_cast<std::size_t>(j - 1)].a(t);
      expect.at(j - 1, j) = aprev * q_number(j, p.q);
    }
  }
  return detail::check_zero<T>("coherent-state conjugation", xt - expect);
}

/// Operator form of the quadratic identity for X_t = x + t y from the
/// dual realization: X_t^2 = A X_s^2 + B X_u X_s + C X_u^2 + D X_s +
/// E X_u + F, with the B term ordered second-argument-first.
template <class T>
OperatorCheck<T> verify_dual_quadratic(FamilyTag tag, const ParamSet<T>& p,
                                       const TimeTriple<T>& tr, int N) {
  const auto [dx, dy] = dual_realization(tag, p, N);
  const auto I = SeriesOperator<T>::identity(N);
  const FormCoeffs<T> fc = form_coeffs(p, tr);
  auto xt = [&](const T& tt) { return tt * dy + dx; };
  const auto Xs = xt(tr.s), Xt = xt(tr.t), Xu = xt(tr.u);
  const auto residual = Xt * Xt - (fc.A * (Xs * Xs) + fc.B * (Xu * Xs) + fc.C * (Xu * Xu) +
                                   fc.D * Xs + fc.E * Xu + fc.F * I);
  return detail::check_zero<T>("dual operator quadratic identity", residual);
}

}  // namespace harnesslab
