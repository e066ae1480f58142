#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "harnesslab/errors.hpp"
#include "harnesslab/params.hpp"
#include "harnesslab/qops.hpp"
#include "harnesslab/recurrence.hpp"

namespace harnesslab {

/// Discrete quadrature rule: ascending nodes, nonnegative weights
/// summing to the zeroth moment (1 for the normalized measures here).
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  double integrate_moment(int k) const {
    double acc = 0;
    for (std::size_t i = 0; i < nodes.size(); ++i) acc += weights[i] * std::pow(nodes[i], k);
    return acc;
  }

  /// Scale of the moment summation, sum w |x|^k; the natural yardstick
  /// for relative error when the signed moment nearly cancels.
  double moment_scale(int k) const {
    double acc = 0;
    for (std::size_t i = 0; i < nodes.size(); ++i)
      acc += weights[i] * std::pow(std::abs(nodes[i]), k);
    return acc;
  }
};

struct SymTriEigResult {
  std::vector<double> values;       // ascending
  std::vector<double> first_row;    // first components of unit eigenvectors
};

/// Implicit-shift QL iteration for a symmetric tridiagonal matrix,
/// accumulating only the first row of the eigenvector matrix (all that
/// Gauss weights need). Deterministic: fixed sweep order, deflation at
/// |e| <= 1e-13 * ||J||, ascending final sort.
inline SymTriEigResult sym_tridiag_eigen(std::vector<double> d, std::vector<double> e) {
  const int m = static_cast<int>(d.size());
  if (m < 1 || static_cast<int>(e.size()) != m - 1)
    throw DomainError("tridiagonal dimensions inconsistent");
  std::vector<double> w(static_cast<std::size_t>(m), 0.0);
  w[0] = 1.0;
  double norm = 0.0;
  for (int i = 0; i < m; ++i) {
    double row = std::abs(d[static_cast<std::size_t>(i)]);
    if (i > 0) row += std::abs(e[static_cast<std::size_t>(i - 1)]);
    if (i + 1 < m) row += std::abs(e[static_cast<std::size_t>(i)]);
    norm = std::max(norm, row);
  }
  const double tol = 1e-13 * std::max(norm, 1e-300);
  e.push_back(0.0);

  for (int l = 0; l < m; ++l) {
    int iter = 0;
    int mm;
    do {
      for (mm = l; mm < m - 1; ++mm)
        if (std::abs(e[static_cast<std::size_t>(mm)]) <= tol) break;
      if (mm != l) {
        if (iter++ == 100) throw EigenFailure("QL iteration did not converge");
        double g = (d[static_cast<std::size_t>(l + 1)] - d[static_cast<std::size_t>(l)]) /
                   (2.0 * e[static_cast<std::size_t>(l)]);
        double r = std::hypot(g, 1.0);
        g = d[static_cast<std::size_t>(mm)] - d[static_cast<std::size_t>(l)] +
            e[static_cast<std::size_t>(l)] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        int i;
        for (i = mm - 1; i >= l; --i) {
          double f = s * e[static_cast<std::size_t>(i)];
          double b = c * e[static_cast<std::size_t>(i)];
          r = std::hypot(f, g);
          e[static_cast<std::size_t>(i + 1)] = r;
          if (r == 0.0) {
            d[static_cast<std::size_t>(i + 1)] -= p;
            e[static_cast<std::size_t>(mm)] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[static_cast<std::size_t>(i + 1)] - p;
          r = (d[static_cast<std::size_t>(i)] - g) * s + 2.0 * c * b;
          p = s * r;
          d[static_cast<std::size_t>(i + 1)] = g + p;
          g = c * r - b;
          // rotate the tracked first row
          f = w[static_cast<std::size_t>(i + 1)];
          w[static_cast<std::size_t>(i + 1)] = s * w[static_cast<std::size_t>(i)] + c * f;
          w[static_cast<std::size_t>(i)] = c * w[static_cast<std::size_t>(i)] - s * f;
        }
        if (r == 0.0 && i >= l) continue;
        d[static_cast<std::size_t>(l)] -= p;
        e[static_cast<std::size_t>(l)] = g;
        e[static_cast<std::size_t>(mm)] = 0.0;
      }
    } while (mm != l);
  }

  std::vector<int> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&d](int a, int b) {
    return d[static_cast<std::size_t>(a)] < d[static_cast<std::size_t>(b)];
  });
  SymTriEigResult res;
  res.values.reserve(static_cast<std::size_t>(m));
  res.first_row.reserve(static_cast<std::size_t>(m));
  for (int k : order) {
    res.values.push_back(d[static_cast<std::size_t>(k)]);
    res.first_row.push_back(w[static_cast<std::size_t>(k)]);
  }
  return res;
}

/// Gauss rule from raw Jacobi data: diagonal b_n (n = 0..M-1) and the
/// products ac_n = a_{n-1} c_n (n = 1..M-1), which must be positive.
inline GaussRule golub_welsch_raw(const std::vector<double>& b, const std::vector<double>& ac,
                                  double m0 = 1.0) {
  const int m = static_cast<int>(b.size());
  if (static_cast<int>(ac.size()) != m - 1) throw DomainError("offdiagonal length mismatch");
  std::vector<double> e(static_cast<std::size_t>(m - 1));
  for (int n = 1; n < m; ++n) {
    if (!(ac[static_cast<std::size_t>(n - 1)] > 0.0)) throw NotSymmetrizable(n);
    e[static_cast<std::size_t>(n - 1)] = std::sqrt(ac[static_cast<std::size_t>(n - 1)]);
  }
  const auto eig = sym_tridiag_eigen(b, e);
  GaussRule rule;
  rule.nodes = eig.values;
  rule.weights.resize(eig.first_row.size());
  for (std::size_t i = 0; i < eig.first_row.size(); ++i)
    rule.weights[i] = m0 * eig.first_row[i] * eig.first_row[i];
  return rule;
}

/// Gauss rule of size M for the measure orthogonalizing a three-term
/// recurrence at time t.
inline GaussRule golub_welsch(const std::vector<ThreeTermCoeffs<double>>& coeffs, double t,
                              int M) {
  if (static_cast<int>(coeffs.size()) < M) throw DomainError("need M coefficient rows");
  std::vector<double> b(static_cast<std::size_t>(M));
  std::vector<double> ac(static_cast<std::size_t>(M - 1));
  for (int n = 0; n < M; ++n) b[static_cast<std::size_t>(n)] = coeffs[static_cast<std::size_t>(n)].b(t);
  for (int n = 1; n < M; ++n)
    ac[static_cast<std::size_t>(n - 1)] =
        coeffs[static_cast<std::size_t>(n - 1)].a(t) * coeffs[static_cast<std::size_t>(n)].c(t);
  return golub_welsch_raw(b, ac);
}

/// Evaluates p_0..p_nmax at x by the forward recurrence.
inline std::vector<double> eval_polynomials(const std::vector<ThreeTermCoeffs<double>>& coeffs,
                                            double t, double x, int nmax) {
  std::vector<double> p(static_cast<std::size_t>(nmax) + 1);
  p[0] = 1.0;
  if (nmax >= 1) p[1] = x;  // p_1 = x: a_0 = 1, b_0 = c_0 = 0
  for (int n = 1; n < nmax; ++n) {
    const auto& c = coeffs[static_cast<std::size_t>(n)];
    p[static_cast<std::size_t>(n + 1)] =
        ((x - c.b(t)) * p[static_cast<std::size_t>(n)] -
         c.c(t) * p[static_cast<std::size_t>(n - 1)]) /
        c.a(t);
  }
  return p;
}

struct GramReport {
  double max_offdiagonal = 0.0;     // max |<p_m, p_n>| over m != n
  double max_diagonal_error = 0.0;  // relative, against prod c_k/a_{k-1}
  double weight_sum_error = 0.0;
  double min_weight = 0.0;
};

/// Quadrature orthogonality check with the rule built from the same
/// recurrence: off-diagonal Gram entries for m + n <= M - 1 and diagonal
/// entries against the closed-form norm products.
inline GramReport orthogonality_check(const std::vector<ThreeTermCoeffs<double>>& coeffs,
                                      double t, int M) {
  const GaussRule rule = golub_welsch(coeffs, t, M);
  GramReport rep;
  rep.weight_sum_error =
      std::abs(std::accumulate(rule.weights.begin(), rule.weights.end(), 0.0) - 1.0);
  rep.min_weight = *std::min_element(rule.weights.begin(), rule.weights.end());
  const int nmax = M - 1;
  std::vector<std::vector<double>> vals(rule.nodes.size());
  for (std::size_t k = 0; k < rule.nodes.size(); ++k)
    vals[k] = eval_polynomials(coeffs, t, rule.nodes[k], nmax);
  std::vector<double> norms(static_cast<std::size_t>(nmax) + 1, 1.0);
  for (int n = 1; n <= nmax; ++n)
    norms[static_cast<std::size_t>(n)] = norms[static_cast<std::size_t>(n - 1)] *
                                         coeffs[static_cast<std::size_t>(n)].c(t) /
                                         coeffs[static_cast<std::size_t>(n - 1)].a(t);
  for (int a = 0; a <= nmax; ++a)
    for (int b = a; b <= nmax; ++b) {
      if (a + b > M - 1) continue;
      double acc = 0;
      for (std::size_t k = 0; k < rule.nodes.size(); ++k)
        acc += rule.weights[k] * vals[k][static_cast<std::size_t>(a)] *
               vals[k][static_cast<std::size_t>(b)];
      if (a == b) {
        const double expect = norms[static_cast<std::size_t>(a)];
        rep.max_diagonal_error = std::max(
            rep.max_diagonal_error, std::abs(acc - expect) / std::max(1.0, std::abs(expect)));
      } else {
        const double scale =
            std::max(1.0, std::sqrt(norms[static_cast<std::size_t>(a)] *
                                    norms[static_cast<std::size_t>(b)]));
        rep.max_offdiagonal = std::max(rep.max_offdiagonal, std::abs(acc) / scale);
      }
    }
  return rep;
}

/// Markov kernel P_{s,t}(x, .) of the sigma = eta = 0 family: the rule
/// orthogonalizing the transition polynomials with
///   b~_n = theta [n]_q + x q^n,  c~_n = (t - s q^{n-1} + tau [n-1]_q)[n]_q.
struct KernelRule {
  double x = 0;
  double s = 0, t = 0;
  GaussRule rule;
};

inline KernelRule qmeixner_kernel(const ParamSet<double>& p, double x, double s, double t,
                                  int M) {
  if (!(p.sigma == 0.0 && p.eta == 0.0))
    throw FamilyMismatch("transition kernel needs sigma = eta = 0");
  if (!(0.0 <= s && s < t)) throw DomainError("need 0 <= s < t");
  std::vector<double> b(static_cast<std::size_t>(M));
  std::vector<double> ac(static_cast<std::size_t>(M - 1));
  for (int n = 0; n < M; ++n)
    b[static_cast<std::size_t>(n)] = p.theta * q_number(n, p.q) + x * std::pow(p.q, n);
  for (int n = 1; n < M; ++n) {
    const double cn =
        (t - s * std::pow(p.q, n - 1) + p.tau * q_number(n - 1, p.q)) * q_number(n, p.q);
    if (!(cn > 0.0)) throw NotSymmetrizable(n);
    ac[static_cast<std::size_t>(n - 1)] = cn;
  }
  return {x, s, t, golub_welsch_raw(b, ac)};
}

struct MartingaleReport {
  double max_deviation = 0.0;     // over conditioning nodes and degrees
  double covariance_residual = 0.0;  // | E(X_s E(X_t|X_s)) - s |
};

/// Checks E(p_n(X_t;t) | X_s = x) = p_n(x;s) by quadrature over the
/// kernel, with x running over the nodes of the time-s marginal rule.
inline MartingaleReport martingale_check(const ParamSet<double>& p, double s, double t, int nmax,
                                         int M) {
  const auto coeffs = closed_family(p, FamilyTag::QMeixner, std::max(M, nmax + 1));
  const GaussRule marginal = golub_welsch(coeffs, s, M);
  MartingaleReport rep;
  double cov = 0.0;
  for (std::size_t ix = 0; ix < marginal.nodes.size(); ++ix) {
    const double x = marginal.nodes[ix];
    const KernelRule kr = qmeixner_kernel(p, x, s, t, M);
    std::vector<double> expect = eval_polynomials(coeffs, s, x, nmax);
    std::vector<double> acc(static_cast<std::size_t>(nmax) + 1, 0.0);
    std::vector<double> scale(static_cast<std::size_t>(nmax) + 1, 1.0);
    for (std::size_t k = 0; k < kr.rule.nodes.size(); ++k) {
      const auto pv = eval_polynomials(coeffs, t, kr.rule.nodes[k], nmax);
      for (int n = 0; n <= nmax; ++n) {
        acc[static_cast<std::size_t>(n)] += kr.rule.weights[k] * pv[static_cast<std::size_t>(n)];
        scale[static_cast<std::size_t>(n)] +=
            kr.rule.weights[k] * std::abs(pv[static_cast<std::size_t>(n)]);
      }
    }
    for (int n = 0; n <= nmax; ++n)
      rep.max_deviation =
          std::max(rep.max_deviation, std::abs(acc[static_cast<std::size_t>(n)] -
                                               expect[static_cast<std::size_t>(n)]) /
                                          scale[static_cast<std::size_t>(n)]);
    cov += marginal.weights[ix] * x * kr.rule.integrate_moment(1);
  }
  rep.covariance_residual = std::abs(cov - s);
  return rep;
}

/// Chapman-Kolmogorov consistency at desk scale: moments of the
/// composed kernels s -> t -> u against the direct kernel s -> u,
/// conditioning on each node of the time-s marginal.
inline double chapman_kolmogorov_deviation(const ParamSet<double>& p, double s, double t,
                                           double u, int max_order, int M) {
  const auto coeffs = closed_family(p, FamilyTag::QMeixner, M);
  const GaussRule marginal = golub_welsch(coeffs, s, M);
  double worst = 0.0;
  for (double x : marginal.nodes) {
    const KernelRule st = qmeixner_kernel(p, x, s, t, M);
    const KernelRule su = qmeixner_kernel(p, x, s, u, M);
    std::vector<double> composed(static_cast<std::size_t>(max_order) + 1, 0.0);
    for (std::size_t k = 0; k < st.rule.nodes.size(); ++k) {
      const KernelRule tu = qmeixner_kernel(p, st.rule.nodes[k], t, u, M);
      for (int ord = 0; ord <= max_order; ++ord)
        composed[static_cast<std::size_t>(ord)] +=
            st.rule.weights[k] * tu.rule.integrate_moment(ord);
    }
    for (int ord = 0; ord <= max_order; ++ord) {
      const double direct = su.rule.integrate_moment(ord);
      worst = std::max(worst, std::abs(composed[static_cast<std::size_t>(ord)] - direct) /
                                  std::max(1.0, std::abs(direct)));
    }
  }
  return worst;
}

}  // namespace harnesslab
