#pragma once

#include <string>
#include <utility>
#include <vector>

#include "harnesslab/errors.hpp"
#include "harnesslab/params.hpp"
#include "harnesslab/scalar.hpp"

namespace harnesslab {

/// Times 0 < s < t < u. The middle time may sit at an endpoint (t = s or
/// t = u) so endpoint limits stay testable; s = u is always rejected.
template <class T>
struct TimeTriple {
  T s{0};
  T t{0};
  T u{0};
};

template <class T>
void check_times(const TimeTriple<T>& tr) {
  if (!(T(0) < tr.s) || !(tr.s < tr.u) || tr.t < tr.s || tr.u < tr.t)
    throw DomainError("times must satisfy 0 < s <= t <= u with s < u");
}

template <class T>
struct LinCoeffs {
  T a{0};
  T b{0};
};

/// The six coefficients of the conditional quadratic form
/// Q(x,y) = A x^2 + B xy + C y^2 + D x + E y + F at fixed times s < t < u.
template <class T>
struct FormCoeffs {
  T A{0}, B{0}, C{0}, D{0}, E{0}, F{0};
};

template <class T>
struct DeltaPair {
  T delta{0};
  T delta_tilde{0};
};

/// Slope functionals of the pair (x_s, x_u) over the window [s, u].
template <class T>
DeltaPair<T> deltas(const T& s, const T& u, const T& x_s, const T& x_u) {
  if (s == u) throw DomainError("deltas: s = u");
  const T den = u - s;
  return {T((x_u - x_s) / den), T((u * x_s - s * x_u) / den)};
}

/// a = (u-t)/(u-s), b = (t-s)/(u-s); a + b = 1 and s*a + u*b = t.
template <class T>
LinCoeffs<T> harness_coeffs(const TimeTriple<T>& tr) {
  check_times(tr);
  const T den = tr.u - tr.s;
  return {T((tr.u - tr.t) / den), T((tr.t - tr.s) / den)};
}

/// Common denominator u(1+sigma*s)+tau-q*s of the closed-form coefficients.
template <class T>
T form_denominator(const ParamSet<T>& p, const TimeTriple<T>& tr) {
  return tr.u * (T(1) + p.sigma * tr.s) + p.tau - p.q * tr.s;
}

template <class T>
FormCoeffs<T> form_coeffs(const ParamSet<T>& p, const TimeTriple<T>& tr) {
  check_times(tr);
  const T d0 = form_denominator(p, tr);
  if (d0 == T(0)) throw ZeroDenominator("u(1+sigma*s)+tau-q*s = 0");
  const T den = (tr.u - tr.s) * d0;
  const T ut = tr.u - tr.t, ts = tr.t - tr.s;
  FormCoeffs<T> fc;
  fc.A = ut * (tr.u * (T(1) + p.sigma * tr.t) + p.tau - p.q * tr.t) / den;
  fc.B = ut * ts * (T(1) + p.q) / den;
  fc.C = ts * (tr.t * (T(1) + p.sigma * tr.s) + p.tau - p.q * tr.s) / den;
  fc.D = ut * ts * (tr.u * p.eta - p.theta) / den;
  fc.E = ut * ts * (p.theta - tr.s * p.eta) / den;
  fc.F = ut * ts / d0;
  return fc;
}

/// Inverts the five parameters from the six coefficients at one triple.
template <class T>
ParamSet<T> extract_params(const FormCoeffs<T>& fc, const TimeTriple<T>& tr) {
  check_times(tr);
  if (fc.F == T(0)) throw ZeroF("F = 0: parameters not extractable");
  ParamSet<T> p;
  p.sigma = (fc.A + fc.B + fc.C - T(1)) / fc.F;
  p.tau = (tr.s * tr.s * fc.A + tr.s * tr.u * fc.B + tr.u * tr.u * fc.C - tr.t * tr.t) / fc.F;
  p.q = fc.B * (tr.u - tr.s) / fc.F - T(1);
  p.eta = (fc.D + fc.E) / fc.F;
  p.theta = (tr.s * fc.D + tr.u * fc.E) / fc.F;
  return p;
}

template <class T>
T quadratic_form(const FormCoeffs<T>& fc, const T& x, const T& y) {
  return fc.A * x * x + fc.B * x * y + fc.C * y * y + fc.D * x + fc.E * y + fc.F;
}

/// Conditional variance of X_t given (X_s, X_u) = (x_s, x_u):
/// F * (1 + eta*Dt + theta*D + sigma*Dt^2 + tau*D^2 - (1-q)*D*Dt).
template <class T>
T cond_variance(const ParamSet<T>& p, const TimeTriple<T>& tr, const T& x_s, const T& x_u) {
  const FormCoeffs<T> fc = form_coeffs(p, tr);
  const DeltaPair<T> d = deltas(tr.s, tr.u, x_s, x_u);
  return fc.F * (T(1) + p.eta * d.delta_tilde + p.theta * d.delta +
                 p.sigma * d.delta_tilde * d.delta_tilde + p.tau * d.delta * d.delta -
                 (T(1) - p.q) * d.delta * d.delta_tilde);
}

/// Same value along the other route, Q(x_s,x_u) - (a*x_s + b*x_u)^2.
/// Verification mode computes both and compares.
template <class T>
T cond_variance_via_form(const ParamSet<T>& p, const TimeTriple<T>& tr, const T& x_s,
                         const T& x_u) {
  const FormCoeffs<T> fc = form_coeffs(p, tr);
  const LinCoeffs<T> ab = harness_coeffs(tr);
  const T mean = ab.a * x_s + ab.b * x_u;
  return quadratic_form(fc, x_s, x_u) - mean * mean;
}

/// Var(X_t | F_{<=s}) = (t-s)/(1+sigma*s) * (sigma*x_s^2 + eta*x_s + 1).
template <class T>
T one_sided_variance_left(const ParamSet<T>& p, const T& s, const T& t, const T& x_s) {
  if (!(T(0) < s) || !(s < t)) throw DomainError("need 0 < s < t");
  const T den = T(1) + p.sigma * s;
  if (den == T(0)) throw ZeroDenominator("1 + sigma*s = 0");
  return (t - s) / den * (p.sigma * x_s * x_s + p.eta * x_s + T(1));
}

/// Var(X_t | F_{>=u}) = t(u-t)/(u+tau) * (tau*x_u^2/u^2 + theta*x_u/u + 1).
template <class T>
T one_sided_variance_right(const ParamSet<T>& p, const T& t, const T& u, const T& x_u) {
  if (!(T(0) < t) || !(t < u)) throw DomainError("need 0 < t < u");
  const T den = u + p.tau;
  if (den == T(0)) throw ZeroDenominator("u + tau = 0");
  return t * (u - t) / den * (p.tau * x_u * x_u / (u * u) + p.theta * x_u / u + T(1));
}

template <class T>
struct Residual {
  std::string name;
  T value{0};
};

template <class T>
struct ResidualReport {
  std::vector<Residual<T>> entries;

  bool all_zero() const {
    for (const auto& e : entries)
      if (!(e.value == T(0))) return false;
    return true;
  }
  T max_abs() const {
    T m(0);
    for (const auto& e : entries) {
      T a = tabs(e.value);
      if (m < a) m = a;
    }
    return m;
  }
};

/// The consistency identities tying the regression coefficients at the
/// four windows of 0 < r < s < t < u; every residual is exactly zero for
/// coefficients produced by form_coeffs. Also includes the trivial sum
/// rule s*A+s*B+u*C+F = t and the parenthetical swap identity
/// b_{t,s,u} a_{s,r,u} = a_{s,r,t} b_{t,r,u}.
template <class T>
ResidualReport<T> verify_chain_identities(const ParamSet<T>& p, const T& r, const T& s,
                                          const T& t, const T& u) {
  if (!(T(0) < r) || !(r < s) || !(s < t) || !(t < u))
    throw DomainError("need 0 < r < s < t < u strictly");
  const TimeTriple<T> tsu{s, t, u}, sru{r, s, u}, tru{r, t, u}, srt{r, s, t};
  const LinCoeffs<T> l_tsu = harness_coeffs(tsu);
  const LinCoeffs<T> l_sru = harness_coeffs(sru);
  const LinCoeffs<T> l_tru = harness_coeffs(tru);
  const LinCoeffs<T> l_srt = harness_coeffs(srt);
  const FormCoeffs<T> f_sru = form_coeffs(p, sru);
  const FormCoeffs<T> f_tru = form_coeffs(p, tru);
  const FormCoeffs<T> f_tsu = form_coeffs(p, tsu);

  ResidualReport<T> rep;
  auto push = [&rep](const char* name, T v) { rep.entries.push_back({name, std::move(v)}); };

  push("A1", T(l_tsu.a * f_sru.A - (l_srt.b * f_tru.A + l_srt.a * l_tru.a)));
  push("B1", T(l_tsu.a * f_sru.B - l_srt.b * f_tru.B));
  push("C1", T(l_tsu.b * l_sru.b + l_tsu.a * f_sru.C - l_srt.b * f_tru.C));
  push("D1", T(l_tsu.a * f_sru.D - l_srt.b * f_tru.D));
  push("E1", T(l_tsu.a * f_sru.E - l_srt.b * f_tru.E));
  push("F1", T(l_tsu.a * f_sru.F - l_srt.b * f_tru.F));
  push("tmp", T(l_tsu.a + l_tsu.b * l_sru.b - l_srt.b - l_srt.a * l_tru.a));
  push("A2", T(f_tru.A - f_tsu.A * f_sru.A));
  push("B2", T(f_tru.B - (f_tsu.A * f_sru.B + f_tsu.B * l_sru.a)));
  push("C2", T(f_tru.C - (f_tsu.A * f_sru.C + f_tsu.B * l_sru.b + f_tsu.C)));
  push("D2", T(f_tru.D - (f_tsu.A * f_sru.D + f_tsu.D * l_sru.a)));
  push("E2", T(f_tru.E - (f_tsu.A * f_sru.E + f_tsu.D * l_sru.b + f_tsu.E)));
  push("F2", T(f_tru.F - (f_tsu.A * f_sru.F + f_tsu.F)));
  const T pivot = l_tsu.a - l_srt.b * f_tsu.A;
  push("A3", T(f_sru.A * pivot - l_srt.a * l_tru.a));
  push("B3", T(f_sru.B * pivot - l_srt.b * f_tsu.B * l_sru.a));
  push("C3", T(f_sru.C * pivot - (l_srt.b * (f_tsu.B * l_sru.b + f_tsu.C) - l_tsu.b * l_sru.b)));
  push("D3", T(f_sru.D * pivot - l_srt.b * f_tsu.D * l_sru.a));
  push("E3", T(f_sru.E * pivot - l_srt.b * (f_tsu.D * l_sru.b + f_tsu.E)));
  push("F3", T(f_sru.F * pivot - l_srt.b * f_tsu.F));
  push("sum-rule", T(s * f_tsu.A + s * f_tsu.B + u * f_tsu.C + f_tsu.F - t));
  push("swap", T(l_tsu.b * l_sru.a - l_srt.a * l_tru.b));
  return rep;
}

}  // namespace harnesslab
