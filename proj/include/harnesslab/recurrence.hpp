#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "harnesslab/errors.hpp"
#include "harnesslab/linear.hpp"
#include "harnesslab/params.hpp"
#include "harnesslab/regression.hpp"
#include "harnesslab/scalar.hpp"

namespace harnesslab {

/// One step of the three-term recurrence
///   x p_n(x;t) = a_n(t) p_{n+1} + b_n(t) p_n + c_n(t) p_{n-1},
/// each coefficient linear in t.
template <class T>
struct ThreeTermCoeffs {
  LinearPoly<T> a, b, c;
};

/// Coefficient tables of the general engine to truncation order N:
///   a_n(t) = sigma*alpha_{n+1} t + beta_{n+1}
///   b_n(t) = gamma_n t + delta_n
///   c_n(t) = epsilon_n t + phi_n = (beta_n t + tau*alpha_n) omega_n
/// alpha/beta run 0..N+1 (index 0 hard-coded to 0), gamma/delta 0..N,
/// epsilon/phi/omega 1..N (slot 0 unused and zero).
template <class T>
struct RecurrenceTable {
  ParamSet<T> params;
  int order = 0;
  std::vector<T> alpha, beta, gamma, delta, epsilon, phi, omega;

  /// lambda_{n,k} = beta_n beta_{n+k} - sigma tau alpha_n alpha_{n+k};
  /// indices at 0 resolve to 0 via the alpha_0 = beta_0 = 0 convention.
  T lambda(int n, int k) const {
    const std::size_t i = static_cast<std::size_t>(n), j = static_cast<std::size_t>(n + k);
    return beta[i] * beta[j] - params.sigma * params.tau * alpha[i] * alpha[j];
  }
};

/// Runs the recurrences of the general engine. Requires an admissible
/// parameter set with sigma*tau < 1; throws DegenerateDenominator(n)
/// when a lambda denominator vanishes (the parameter set then falls
/// outside the engine's hypotheses).
template <class T>
RecurrenceTable<T> build_tables(const ParamSet<T>& p, int N) {
  if (N < 1) throw DomainError("order must be >= 1");
  if (!validate(p).admissible) throw DomainError("parameter set not admissible");
  RecurrenceTable<T> tbl;
  tbl.params = p;
  tbl.order = N;
  const T st = p.sigma * p.tau;

  tbl.alpha.assign(static_cast<std::size_t>(N) + 2, T(0));
  tbl.beta.assign(static_cast<std::size_t>(N) + 2, T(0));
  tbl.alpha[1] = T(0);
  tbl.beta[1] = T(1);
  for (int n = 1; n <= N; ++n) {
    tbl.alpha[n + 1] = p.q * tbl.alpha[n] + tbl.beta[n];
    tbl.beta[n + 1] = -st * tbl.alpha[n] + tbl.beta[n];
  }

  tbl.gamma.assign(static_cast<std::size_t>(N) + 1, T(0));
  tbl.delta.assign(static_cast<std::size_t>(N) + 1, T(0));
  for (int n = 0; n + 1 <= N; ++n) {
    const T den = tbl.lambda(n + 2, 0);
    if (den == T(0)) throw DegenerateDenominator(n + 2);
    const T cross = tbl.alpha[n + 2] * tbl.beta[n] - tbl.beta[n + 2] * tbl.alpha[n];
    const T mixed_a = p.eta * p.tau * tbl.alpha[n + 1] + p.theta * tbl.beta[n + 1];
    const T mixed_b = p.theta * p.sigma * tbl.alpha[n + 1] + p.eta * tbl.beta[n + 1];
    tbl.gamma[n + 1] =
        ((p.q + st) * (tbl.lambda(n, 2) * tbl.gamma[n] + cross * p.sigma * tbl.delta[n]) +
         p.sigma * tbl.alpha[n + 2] * mixed_a + tbl.beta[n + 2] * mixed_b) /
        den;
    tbl.delta[n + 1] =
        ((p.q + st) * (tbl.lambda(n, 2) * tbl.delta[n] + cross * p.tau * tbl.gamma[n]) +
         tbl.beta[n + 2] * mixed_a + p.tau * tbl.alpha[n + 2] * mixed_b) /
        den;
  }

  tbl.omega.assign(static_cast<std::size_t>(N) + 1, T(0));
  tbl.omega[1] = T(1);
  if (N >= 2) {
    const T one_st = T(1) - st;
    const T d2 = one_st * one_st * (T(1) - st * (T(2) + p.q));
    if (d2 == T(0)) throw DegenerateDenominator(2);
    tbl.omega[2] = (T(1) + p.q) *
                   (one_st * one_st + (p.eta + p.theta * p.sigma) * (p.theta + p.eta * p.tau)) /
                   d2;
  }
  for (int n = 2; n + 1 <= N; ++n) {
    const T den = tbl.lambda(n + 1, 1);
    if (den == T(0)) throw DegenerateDenominator(n + 1);
    tbl.omega[n + 1] = ((p.q + st) * tbl.lambda(n - 1, 1) * tbl.omega[n] + T(1) +
                        tbl.gamma[n] * (p.tau * tbl.gamma[n] - tbl.delta[n] + p.theta) +
                        tbl.delta[n] * (p.q * tbl.gamma[n] + p.sigma * tbl.delta[n] + p.eta)) /
                       den;
  }

  tbl.epsilon.assign(static_cast<std::size_t>(N) + 1, T(0));
  tbl.phi.assign(static_cast<std::size_t>(N) + 1, T(0));
  for (int n = 1; n <= N; ++n) {
    tbl.epsilon[n] = tbl.omega[n] * tbl.beta[n];
    tbl.phi[n] = p.tau * tbl.omega[n] * tbl.alpha[n];
  }
  return tbl;
}

/// Recurrence step n as linear functions of t; valid for 0 <= n <= N.
template <class T>
ThreeTermCoeffs<T> coeffs_at(const RecurrenceTable<T>& tbl, int n) {
  if (n < 0 || n > tbl.order) throw DomainError("coefficient index out of range");
  ThreeTermCoeffs<T> c;
  c.a = {tbl.params.sigma * tbl.alpha[n + 1], tbl.beta[n + 1]};
  c.b = {tbl.gamma[n], tbl.delta[n]};
  c.c = {tbl.epsilon[n], tbl.phi[n]};
  return c;
}

template <class T>
std::vector<ThreeTermCoeffs<T>> table_coeffs(const RecurrenceTable<T>& tbl) {
  std::vector<ThreeTermCoeffs<T>> out;
  out.reserve(static_cast<std::size_t>(tbl.order) + 1);
  for (int n = 0; n <= tbl.order; ++n) out.push_back(coeffs_at(tbl, n));
  return out;
}

/// Numeric (a_n(t), b_n(t), c_n(t)) at a nonnegative time; a_n(t) > 0
/// there whenever the engine's positivity hypotheses hold.
template <class T>
std::tuple<T, T, T> coeffs_value(const RecurrenceTable<T>& tbl, int n, const T& t) {
  if (t < T(0)) throw DomainError("coefficients are defined for t >= 0");
  const auto c = coeffs_at(tbl, n);
  return {c.a(t), c.b(t), c.c(t)};
}

/// Roots of the characteristic equation behind the alpha/beta recurrence:
/// lambda_{+,-} = (1+q +- sqrt((1+q)^2 - 4(q + sigma*tau)))/2.
/// Exact mode requires the discriminant to be a rational square.
template <class T>
std::pair<T, T> closed_alpha_beta_roots(const ParamSet<T>& p) {
  const T disc = (T(1) + p.q) * (T(1) + p.q) - T(4) * (p.q + p.sigma * p.tau);
  if (disc == T(0)) throw RepeatedRoot("repeated root: use build_tables iteration");
  if (disc < T(0)) throw DomainError("negative discriminant: q > 1 - 2*sqrt(sigma*tau)");
  const auto root = exact_sqrt(disc);
  if (!root)
    throw IrrationalValue("irrational lambda roots; use float mode or build_tables");
  return {T((T(1) + p.q + *root) / T(2)), T((T(1) + p.q - *root) / T(2))};
}

/// Explicit solution of the alpha/beta recurrence for distinct roots.
template <class T>
std::pair<T, T> closed_alpha_beta(const ParamSet<T>& p, int n) {
  if (n < 1) throw DomainError("index must be >= 1");
  const auto [lp, lm] = closed_alpha_beta_roots(p);
  const T den = lp - lm;
  const T pp = tpow(lp, n - 1), pm = tpow(lm, n - 1);
  const T alpha = (pp - pm) / den;
  const T beta = (pp * (T(1) - lm) + pm * (lp - T(1))) / den;
  return {alpha, beta};
}

/// Residuals of the five coupling equations for 1 <= n <= N-1, plus the
/// equality of the two stored forms of c_n. All are exactly zero for
/// tables produced by build_tables.
template <class T>
ResidualReport<T> verify_eq1_eq5(const RecurrenceTable<T>& tbl) {
  const ParamSet<T>& p = tbl.params;
  ResidualReport<T> rep;
  auto push = [&rep](const std::string& name, T v) { rep.entries.push_back({name, std::move(v)}); };
  const auto& al = tbl.alpha;
  const auto& be = tbl.beta;
  const auto& ga = tbl.gamma;
  const auto& de = tbl.delta;
  const auto& ep = tbl.epsilon;
  const auto& ph = tbl.phi;
  for (int n = 1; n + 1 <= tbl.order; ++n) {
    const std::string sn = std::to_string(n);
    push("eq1[" + sn + "]",
         T(p.sigma * p.sigma * p.tau * al[n] * al[n + 1] + p.sigma * al[n] * be[n + 1] * p.q +
           p.sigma * be[n] * be[n + 1] - p.sigma * al[n + 1] * be[n]));
    push("eq2[" + sn + "]",
         T(be[n + 1] * ga[n + 1] + p.sigma * al[n + 1] * de[n] -
           (p.sigma * al[n + 1] * (ga[n] + ga[n + 1]) * p.tau +
            (p.sigma * al[n + 1] * de[n + 1] + be[n + 1] * ga[n]) * p.q +
            be[n + 1] * (de[n] + de[n + 1]) * p.sigma + p.sigma * al[n + 1] * p.theta +
            be[n + 1] * p.eta)));
    push("eq3[" + sn + "]",
         T(be[n + 1] * ep[n + 1] + ga[n] * de[n] + p.sigma * al[n] * ph[n] -
           ((p.sigma * al[n + 1] * ep[n + 1] + ga[n] * ga[n] + p.sigma * al[n] * ep[n]) * p.tau +
            (p.sigma * al[n + 1] * ph[n + 1] + ga[n] * de[n] + be[n] * ep[n]) * p.q +
            (be[n + 1] * ph[n + 1] + de[n] * de[n] + be[n] * ph[n]) * p.sigma +
            ga[n] * p.theta + de[n] * p.eta + T(1))));
    push("eq4[" + sn + "]",
         T(ga[n - 1] * ph[n] + de[n] * ep[n] -
           ((ga[n - 1] + ga[n]) * ep[n] * p.tau + (ga[n] * ph[n] + de[n - 1] * ep[n]) * p.q +
            (de[n - 1] + de[n]) * ph[n] * p.sigma + ep[n] * p.theta + ph[n] * p.eta)));
    push("eq5[" + sn + "]",
         T(ep[n] * ph[n + 1] -
           (ep[n] * ep[n + 1] * p.tau + ep[n + 1] * ph[n] * p.q + ph[n] * ph[n + 1] * p.sigma)));
  }
  for (int n = 1; n <= tbl.order; ++n) {
    const std::string sn = std::to_string(n);
    push("coeff+slope[" + sn + "]", T(ep[n] - tbl.omega[n] * be[n]));
    push("coeff+intercept[" + sn + "]", T(ph[n] - p.tau * tbl.omega[n] * al[n]));
  }
  return rep;
}

struct PositivityEntry {
  std::string name;
  bool holds = false;
};

struct PositivityReport {
  std::vector<PositivityEntry> entries;
  bool lambda_positive = true;   // lambda_{n,k} > 0, k in {0,1,2}
  bool growth_bound = true;      // beta_n > sqrt(sigma*tau) alpha_n >= 0
  bool omega_positive = true;    // omega_n > 0 for 1 <= n <= N
  int first_failure = -1;
};

/// lambda positivity, the growth bound on alpha/beta, omega signs, and
/// the four parameter-level sufficient conditions for omega positivity
/// in the sigma = 0 family.
template <class T>
PositivityReport positivity_report(const RecurrenceTable<T>& tbl) {
  const ParamSet<T>& p = tbl.params;
  PositivityReport rep;
  const T st = p.sigma * p.tau;
  for (int n = 1; n <= tbl.order + 1; ++n) {
    for (int k = 0; k <= 2; ++k) {
      if (n + k > tbl.order + 1) continue;
      if (!(tbl.lambda(n, k) > T(0))) {
        rep.lambda_positive = false;
        if (rep.first_failure < 0) rep.first_failure = n;
      }
    }
    if (!(tbl.alpha[n] >= T(0)) || cmp_minus_sqrt(tbl.beta[n], st, tbl.alpha[n]) <= 0) {
      rep.growth_bound = false;
      if (rep.first_failure < 0) rep.first_failure = n;
    }
  }
  for (int n = 1; n <= tbl.order; ++n) {
    if (!(tbl.omega[n] > T(0))) {
      rep.omega_positive = false;
      if (rep.first_failure < 0) rep.first_failure = n;
    }
  }
  rep.entries.push_back({"lambda_{n,k} > 0", rep.lambda_positive});
  rep.entries.push_back({"beta_n > sqrt(sigma*tau) alpha_n >= 0", rep.growth_bound});
  rep.entries.push_back({"omega_n > 0", rep.omega_positive});

  // Sufficient conditions for omega positivity in the sigma = 0 family.
  const bool in_range_half_open = T(-1) < p.q && p.q <= T(1);
  const bool in_range_open = T(-1) < p.q && p.q < T(1);
  const T et = p.eta * p.theta;
  const bool case1 = in_range_half_open && et >= T(0);
  const T qmax = p.q > T(0) ? p.q : T(0);
  const bool case2 = in_range_half_open && p.tau == T(0) && T(1) + et > qmax;
  const bool case3 = in_range_open && p.theta * p.theta < T(4) * p.tau;
  bool case4 = false;
  if (in_range_half_open && p.tau > T(0) && et < T(0) &&
      T(1) + et + p.tau * p.eta * p.eta > T(0) && p.theta * p.theta >= T(4) * p.tau) {
    // 1 + min(q,0) > (|theta| + sqrt(theta^2 - 4 tau)) / (2 tau |eta|)
    const T qmin = p.q < T(0) ? p.q : T(0);
    const T lhs = (T(1) + qmin) * T(2) * p.tau * tabs(p.eta) - tabs(p.theta);
    case4 = cmp_minus_sqrt(lhs, T(p.theta * p.theta - T(4) * p.tau), T(1)) > 0;
  }
  rep.entries.push_back({"sigma0 sufficient: eta*theta >= 0", case1});
  rep.entries.push_back({"sigma0 sufficient: tau = 0 and 1+eta*theta > max(q,0)", case2});
  rep.entries.push_back({"sigma0 sufficient: theta^2 < 4*tau", case3});
  rep.entries.push_back({"sigma0 sufficient: discriminant bound", case4});
  return rep;
}

namespace detail {

template <class T>
T q_num(int n, const T& q) {
  T acc(0), pw(1);
  for (int k = 0; k < n; ++k) {
    acc = acc + pw;
    pw = pw * q;
  }
  return acc;
}

template <class T>
std::vector<ThreeTermCoeffs<T>> family_sigma0(const ParamSet<T>& p, int N) {
  if (!(T(-1) < p.q) || p.q > T(1)) throw DomainError("sigma0 family needs -1 < q <= 1");
  std::vector<ThreeTermCoeffs<T>> seq(static_cast<std::size_t>(N) + 1);
  seq[0] = {{T(0), T(1)}, {T(0), T(0)}, {T(0), T(0)}};
  for (int n = 1; n <= N; ++n) {
    const T qn = q_num(n, p.q), qn1 = q_num(n - 1, p.q);
    const T w = T(1) + qn1 * p.eta * p.theta + qn1 * qn1 * p.tau * p.eta * p.eta;
    if (!(w > T(0))) throw PositivityViolated(n);
    seq[n].a = {T(0), T(1)};
    seq[n].b = {p.eta * qn, (p.theta + p.eta * p.tau * (qn + qn1)) * qn};
    seq[n].c = {w * qn, p.tau * qn1 * w * qn};
  }
  return seq;
}

template <class T>
std::vector<ThreeTermCoeffs<T>> family_tau0(const ParamSet<T>& p, int N) {
  if (!(T(-1) < p.q) || !(p.q < T(1))) throw DomainError("tau0 family needs -1 < q < 1");
  std::vector<ThreeTermCoeffs<T>> seq(static_cast<std::size_t>(N) + 1);
  seq[0] = {{T(0), T(1)}, {T(0), T(0)}, {T(0), T(0)}};
  for (int n = 1; n <= N; ++n) {
    const T qn = q_num(n, p.q), qn1 = q_num(n - 1, p.q);
    const T w = T(1) + qn1 * p.eta * p.theta + qn1 * qn1 * p.sigma * p.theta * p.theta;
    if (!(w > T(0))) throw PositivityViolated(n);
    seq[n].a = {p.sigma * qn, T(1)};
    seq[n].b = {(p.eta + (qn + qn1) * p.theta * p.sigma) * qn, p.theta * qn};
    seq[n].c = {w * qn, T(0)};
  }
  return seq;
}

template <class T>
std::vector<ThreeTermCoeffs<T>> family_qmeixner(const ParamSet<T>& p, int N) {
  if (!(T(-1) < p.q) || p.q > T(1)) throw DomainError("q-Meixner family needs -1 < q <= 1");
  std::vector<ThreeTermCoeffs<T>> seq(static_cast<std::size_t>(N) + 1);
  seq[0] = {{T(0), T(1)}, {T(0), T(0)}, {T(0), T(0)}};
  for (int n = 1; n <= N; ++n) {
    const T qn = q_num(n, p.q), qn1 = q_num(n - 1, p.q);
    seq[n].a = {T(0), T(1)};
    seq[n].b = {T(0), p.theta * qn};
    seq[n].c = {qn, p.tau * qn1 * qn};
  }
  return seq;
}

template <class T>
std::vector<ThreeTermCoeffs<T>> family_bipoisson(const ParamSet<T>& p, int N) {
  if (p.q < T(-1) || p.q > T(1)) throw DomainError("bi-Poisson family needs -1 <= q <= 1");
  std::vector<ThreeTermCoeffs<T>> seq(static_cast<std::size_t>(N) + 1);
  seq[0] = {{T(0), T(1)}, {T(0), T(0)}, {T(0), T(0)}};
  for (int n = 1; n <= N; ++n) {
    const T qn = q_num(n, p.q), qn1 = q_num(n - 1, p.q);
    const T w = T(1) + p.eta * p.theta * qn1;
    if (!(w > T(0))) throw PositivityViolated(n);
    seq[n].a = {T(0), T(1)};
    seq[n].b = {p.eta * qn, p.theta * qn};
    seq[n].c = {w * qn, T(0)};
  }
  return seq;
}

template <class T>
std::vector<ThreeTermCoeffs<T>> family_free(const ParamSet<T>& p, int N) {
  const T st = p.sigma * p.tau;
  const T one_st = T(1) - st;
  if (!(one_st > T(0))) throw DomainError("free family needs sigma*tau < 1");
  const T K = one_st * one_st + (p.eta + p.theta * p.sigma) * (p.theta + p.eta * p.tau);
  if (!(K > T(0))) throw PositivityViolated(2);
  std::vector<ThreeTermCoeffs<T>> seq(static_cast<std::size_t>(N) + 1);
  const T b1_s = (p.eta + p.theta * p.sigma) / one_st;
  const T b1_i = (p.eta * p.tau + p.theta) / one_st;
  const T bn_s = (p.eta + T(2) * p.theta * p.sigma + p.eta * st) / (one_st * one_st);
  const T bn_i = (p.theta + T(2) * p.eta * p.tau + p.theta * st) / (one_st * one_st);
  const T c2 = K / (one_st * one_st * one_st);
  const T cn = c2 / one_st;
  seq[0] = {{T(0), T(1)}, {T(0), T(0)}, {T(0), T(0)}};
  for (int n = 1; n <= N; ++n) {
    seq[n].a = {p.sigma, T(1)};
    seq[n].b = n == 1 ? LinearPoly<T>{b1_s, b1_i} : LinearPoly<T>{bn_s, bn_i};
    if (n == 1)
      seq[n].c = {T(1), T(0)};
    else if (n == 2)
      seq[n].c = {c2, p.tau * c2};
    else
      seq[n].c = {cn, p.tau * cn};
  }
  return seq;
}

template <class T>
std::vector<ThreeTermCoeffs<T>> family_classical(const ParamSet<T>& p, int N) {
  const auto rho_opt = exact_sqrt(T(p.sigma * p.tau));
  if (!rho_opt)
    throw IrrationalValue("classical family needs rational rho = sqrt(sigma*tau) in exact mode");
  const T rho = *rho_opt;
  const T one_r = T(1) - rho;
  if (!(one_r > T(0))) throw DomainError("classical family needs sigma*tau < 1");
  const T K = one_r * one_r * (T(1) + rho) * (T(1) + rho) +
              (p.eta + p.theta * p.sigma) * (p.theta + p.eta * p.tau);
  // (1 - sigma*tau)^2 + (eta+theta*sigma)(theta+eta*tau) with sigma*tau = rho^2.
  if (!(K > T(0))) throw PositivityViolated(2);
  std::vector<ThreeTermCoeffs<T>> seq(static_cast<std::size_t>(N) + 1);
  seq[0] = {{T(0), T(1)}, {T(0), T(0)}, {T(0), T(0)}};
  auto lin = [](int k) { return T(k); };
  for (int n = 1; n <= N; ++n) {
    seq[n].a = {lin(n) * p.sigma, T(1) + lin(n - 1) * rho};
    const T pref = lin(n) * (T(1) + lin(n - 2) * rho) /
                   (one_r * one_r * (T(1) + lin(2 * n - 1) * rho) * (T(1) + lin(2 * n - 3) * rho));
    const T gam = pref * (p.eta + lin(2 * n - 1) * p.theta * p.sigma + lin(2 * n - 3) * p.eta * rho +
                          T(2) * lin(n - 1) * lin(n - 1) * p.eta * rho * rho +
                          (T(2) * lin(n - 1) * lin(n - 1) - T(1)) * p.theta * p.sigma * rho);
    const T del = pref * (p.theta + lin(2 * n - 1) * p.eta * p.tau + lin(2 * n - 3) * p.theta * rho +
                          T(2) * lin(n - 1) * lin(n - 1) * p.theta * rho * rho +
                          (T(2) * lin(n - 1) * lin(n - 1) - T(1)) * p.eta * p.tau * rho);
    seq[n].b = {gam, del};
    if (n == 1) {
      seq[n].c = {T(1), T(0)};
    } else {
      const T d1 = (T(1) + lin(2 * n - 2) * rho) * (T(1) + lin(2 * n - 4) * rho);
      const T d2mid = T(1) + lin(2 * n - 3) * rho;
      const T w = lin(n) * (T(1) + lin(n - 3) * rho) / (one_r * one_r * d1) +
                  lin(n) * lin(n - 1) * (T(1) + lin(n - 2) * rho) * (T(1) + lin(n - 3) * rho) *
                      ((T(1) + lin(n - 2) * rho) * p.theta + lin(n - 1) * p.eta * p.tau) *
                      ((T(1) + lin(n - 2) * rho) * p.eta + lin(n - 1) * p.theta * p.sigma) /
                      (one_r * one_r * one_r * one_r * d1 * d2mid * d2mid);
      if (!(w > T(0))) throw PositivityViolated(n);
      seq[n].c = {w * (T(1) + lin(n - 2) * rho), w * p.tau * lin(n - 1)};
    }
  }
  return seq;
}

}  // namespace detail

/// Closed-form coefficient sequences for the named families, exactly as
/// printed (including the per-family renormalizations). Entries run
/// n = 0..N. Throws FamilyMismatch when the defining equalities fail and
/// PositivityViolated(n) when a family positivity condition breaks.
template <class T>
std::vector<ThreeTermCoeffs<T>> closed_family(const ParamSet<T>& p, FamilyTag tag, int N) {
  const auto tags = classify(p);
  if (tag != FamilyTag::General && !tags.count(tag))
    throw FamilyMismatch(std::string("parameters do not satisfy the ") + family_name(tag) +
                         " defining equalities");
  switch (tag) {
    case FamilyTag::SigmaZero: return detail::family_sigma0(p, N);
    case FamilyTag::TauZero: return detail::family_tau0(p, N);
    case FamilyTag::QMeixner: return detail::family_qmeixner(p, N);
    case FamilyTag::BiPoisson: return detail::family_bipoisson(p, N);
    case FamilyTag::Free: return detail::family_free(p, N);
    case FamilyTag::Classical: return detail::family_classical(p, N);
    case FamilyTag::General: return table_coeffs(build_tables(p, N));
  }
  throw FamilyMismatch("unknown family tag");
}

/// True when two coefficient sequences describe the same polynomials up
/// to constant rescaling: b_n agree and a_n(t)*c_{n+1}(t) agree as
/// polynomials in t, for all n < N.
template <class T>
bool rescale_equivalent(const std::vector<ThreeTermCoeffs<T>>& s1,
                        const std::vector<ThreeTermCoeffs<T>>& s2, int N) {
  if (static_cast<int>(s1.size()) < N + 1 || static_cast<int>(s2.size()) < N + 1)
    throw DomainError("sequences shorter than requested comparison range");
  for (int n = 0; n < N; ++n) {
    if (!(scalar_close(s1[n].b.slope, s2[n].b.slope) &&
          scalar_close(s1[n].b.intercept, s2[n].b.intercept)))
      return false;
    const auto& a1 = s1[n].a;
    const auto& c1 = s1[n + 1].c;
    const auto& a2 = s2[n].a;
    const auto& c2 = s2[n + 1].c;
    // quadratic coefficients of a_n(t) * c_{n+1}(t)
    if (!(scalar_close(T(a1.slope * c1.slope), T(a2.slope * c2.slope)) &&
          scalar_close(T(a1.slope * c1.intercept + a1.intercept * c1.slope),
                       T(a2.slope * c2.intercept + a2.intercept * c2.slope)) &&
          scalar_close(T(a1.intercept * c1.intercept), T(a2.intercept * c2.intercept))))
      return false;
  }
  return true;
}

}  // namespace harnesslab
