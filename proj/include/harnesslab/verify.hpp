#pragma once

#include <chrono>
#include <functional>
#include <string>
#include <vector>

#include "harnesslab/banded.hpp"
#include "harnesslab/json_io.hpp"
#include "harnesslab/params.hpp"
#include "harnesslab/presets.hpp"
#include "harnesslab/qops.hpp"
#include "harnesslab/quadrature.hpp"
#include "harnesslab/recurrence.hpp"
#include "harnesslab/regression.hpp"

namespace harnesslab {

struct CheckResult {
  std::string name;
  bool pass = false;
  bool skipped = false;
  std::string detail;  // residual magnitude, skip reason, ...
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckResult> checks;
  double elapsed_ms = 0;

  bool pass() const {
    for (const auto& c : checks)
      if (!c.skipped && !c.pass) return false;
    return true;
  }
};

struct VerifyOptions {
  int N = 40;  // matrix/recurrence truncation
  int M = 30;  // quadrature rule size
};

namespace detail {

inline void run_check(std::vector<CheckResult>& out, const std::string& name,
                      const std::function<CheckResult()>& body) {
  try {
    auto r = body();
    r.name = name;
    out.push_back(std::move(r));
  } catch (const std::exception& e) {
    out.push_back({name, false, false, std::string("error: ") + e.what()});
  }
}

inline CheckResult ok(bool pass, std::string detail = "") {
  return {"", pass, false, std::move(detail)};
}

inline CheckResult skip(std::string why) { return {"", true, true, std::move(why)}; }

template <class T>
std::string exact_residual_str(const ResidualReport<T>& rep) {
  return rep.all_zero() ? std::string("0") : std::string("max |r| = ") + to_string(rep.max_abs());
}

/// q inside the engine window (-1, 1 - 2 sqrt(sigma tau)].
inline bool engine_window(const ParamSet<Rational>& p) {
  return p.q > Rational(-1) &&
         cmp_minus_sqrt(Rational(Rational(1) - p.q), Rational(4 * p.sigma * p.tau),
                        Rational(1)) >= 0;
}

}  // namespace detail

inline SuiteReport verify_params_suite(const ParamSet<Rational>& p) {
  SuiteReport rep{"params", {}};
  const auto v = validate(p);
  for (const auto& c : v.constraints)
    rep.checks.push_back({"admissible: " + c.name, c.satisfied, false,
                          c.assumed ? "assumed (process-level hypothesis)" : ""});
  std::string tags;
  for (auto t : classify(p)) tags += std::string(tags.empty() ? "" : ",") + family_name(t);
  rep.checks.push_back({"classification", true, false, tags});
  rep.checks.push_back(
      {"time inversion is an involution", time_invert(time_invert(p)) == p, false, ""});
  return rep;
}

inline SuiteReport verify_regression_suite(const ParamSet<Rational>& p) {
  using detail::ok;
  SuiteReport rep{"regression", {}};
  const std::vector<TimeTriple<Rational>> triples = {
      {Rational(1), Rational(2), Rational(3)},
      {make_rational(1, 2), Rational(1), make_rational(5, 2)},
      {make_rational(2, 3), make_rational(7, 4), Rational(4)},
  };
  detail::run_check(rep.checks, "extract_params inverts form_coeffs", [&] {
    for (const auto& tr : triples)
      if (!(extract_params(form_coeffs(p, tr), tr) == p)) return ok(false, "round trip failed");
    return ok(true, "exact on 3 triples");
  });
  detail::run_check(rep.checks, "sum rule sA + sB + uC + F = t", [&] {
    for (const auto& tr : triples) {
      const auto fc = form_coeffs(p, tr);
      if (!(tr.s * fc.A + tr.s * fc.B + tr.u * fc.C + fc.F == tr.t)) return ok(false);
    }
    return ok(true, "exact");
  });
  detail::run_check(rep.checks, "chain identities (19 + sum rule + swap)", [&] {
    const auto r1 = verify_chain_identities(p, make_rational(1, 2), Rational(1),
                                            make_rational(3, 2), Rational(2));
    const auto r2 = verify_chain_identities(p, Rational(1), Rational(2), Rational(3), Rational(4));
    return ok(r1.all_zero() && r2.all_zero(),
              detail::exact_residual_str(r1) + "; " + detail::exact_residual_str(r2));
  });
  detail::run_check(rep.checks, "conditional variance: two routes agree", [&] {
    const Rational xs = make_rational(3, 7), xu = make_rational(-5, 4);
    for (const auto& tr : triples)
      if (!(cond_variance(p, tr, xs, xu) == cond_variance_via_form(p, tr, xs, xu)))
        return ok(false);
    return ok(true, "exact");
  });
  detail::run_check(rep.checks, "time-inverted normalizer matches its closed form", [&] {
    for (const auto& tr : triples) {
      const Rational den = tr.u * (Rational(1) + p.tau * tr.s) + p.sigma - p.q * tr.s;
      if (den == Rational(0)) throw ZeroDenominator("inverted normalizer undefined here");
      const Rational expect = (tr.u - tr.t) * (tr.t - tr.s) / den;
      if (!(form_coeffs(time_invert(p), tr).F == expect)) return ok(false);
    }
    return ok(true, "exact");
  });
  return rep;
}

inline SuiteReport verify_recurrence_suite(const ParamSet<Rational>& p, const VerifyOptions& opt) {
  using detail::ok;
  using detail::skip;
  SuiteReport rep{"recurrence", {}};
  RecurrenceTable<Rational> tbl;
  try {
    tbl = build_tables(p, opt.N);
  } catch (const std::exception& e) {
    rep.checks.push_back({"build_tables", false, false, std::string("error: ") + e.what()});
    return rep;
  }
  rep.checks.push_back({"build_tables", true, false, "order " + std::to_string(opt.N)});
  detail::run_check(rep.checks, "initial values", [&] {
    return ok(tbl.alpha[1] == Rational(0) && tbl.beta[1] == Rational(1) &&
              tbl.gamma[0] == Rational(0) && tbl.delta[0] == Rational(0) &&
              tbl.epsilon[1] == Rational(1) && tbl.phi[1] == Rational(0) &&
              tbl.omega[1] == Rational(1));
  });
  detail::run_check(rep.checks, "coupling equations eq1-eq5", [&] {
    const auto r = verify_eq1_eq5(tbl);
    return ok(r.all_zero(), detail::exact_residual_str(r));
  });
  detail::run_check(rep.checks, "positivity (lambda, growth bound, omega)", [&] {
    if (!detail::engine_window(p)) return skip("q outside (-1, 1 - 2 sqrt(sigma tau)]");
    const auto r = positivity_report(tbl);
    return ok(r.lambda_positive && r.growth_bound && r.omega_positive);
  });

  const auto engine = table_coeffs(tbl);
  const auto tags = classify(p);
  const int upto = std::min(30, opt.N - 1);
  for (const FamilyTag tag : {FamilyTag::Free, FamilyTag::Classical, FamilyTag::SigmaZero,
                              FamilyTag::TauZero, FamilyTag::QMeixner, FamilyTag::BiPoisson}) {
    const std::string name = std::string("closed family vs engine: ") + family_name(tag);
    if (!tags.count(tag)) continue;
    detail::run_check(rep.checks, name, [&]() -> CheckResult {
      try {
        const auto closed = closed_family(p, tag, upto + 1);
        return ok(rescale_equivalent(engine, closed, upto), "exact to n = " + std::to_string(upto));
      } catch (const IrrationalValue& e) {
        return skip(e.what());
      } catch (const DomainError& e) {
        return skip(e.what());
      }
    });
  }
  detail::run_check(rep.checks, "explicit alpha/beta solution vs iteration", [&]() -> CheckResult {
    try {
      for (int n = 1; n <= std::min(50, opt.N + 1); ++n) {
        const auto [a, b] = closed_alpha_beta(p, n);
        if (!(a == tbl.alpha[n] && b == tbl.beta[n])) return ok(false, "mismatch at n=" + std::to_string(n));
      }
      return ok(true, "exact (rational roots)");
    } catch (const RepeatedRoot&) {
      return skip("repeated characteristic root; iteration is authoritative");
    } catch (const IrrationalValue&) {
      const auto pd = to_double_params(p);
      const auto tbld = build_tables(pd, std::min(50, opt.N));
      for (int n = 1; n <= tbld.order + 1; ++n) {
        const auto [a, b] = closed_alpha_beta(pd, n);
        if (std::abs(a - tbld.alpha[n]) > 1e-10 * std::max(1.0, std::abs(tbld.alpha[n])) ||
            std::abs(b - tbld.beta[n]) > 1e-10 * std::max(1.0, std::abs(tbld.beta[n])))
          return ok(false, "float mismatch at n=" + std::to_string(n));
      }
      return ok(true, "float, relative 1e-10 (irrational roots)");
    } catch (const DomainError& e) {
      return skip(e.what());
    }
  });
  detail::run_check(rep.checks, "low-order polynomial p_2", [&] {
    const Rational t(2);
    const auto c1 = coeffs_at(tbl, 1);
    const Rational one_pst = Rational(1) + p.sigma * t;
    const bool okv =
        Rational(1) / c1.a(t) == Rational(1) / one_pst &&
        -c1.b(t) / c1.a(t) == -((p.eta + p.theta * p.sigma) * t + p.eta * p.tau + p.theta) /
                                  ((Rational(1) - p.sigma * p.tau) * one_pst) &&
        -c1.c(t) / c1.a(t) == -t / one_pst;
    return ok(okv, "exact at t = 2");
  });
  return rep;
}

inline SuiteReport verify_qops_suite(const ParamSet<Rational>& p, const VerifyOptions& opt) {
  using detail::ok;
  using detail::skip;
  SuiteReport rep{"qops", {}};
  const int N = std::max(8, std::min(opt.N, 30));
  detail::run_check(rep.checks, "q-commutator table (10 cells)", [&] {
    for (const auto& cell : table1_verify(p.q, N))
      if (!cell.zero) return ok(false, cell.name);
    return ok(true, "exact at q = " + to_string(p.q));
  });
  const auto tags = classify(p);
  for (const FamilyTag tag : {FamilyTag::QMeixner, FamilyTag::BiPoisson}) {
    const std::string base = family_name(tag);
    if (!tags.count(tag)) {
      rep.checks.push_back({base + " realization", true, true, "family equalities do not hold"});
      continue;
    }
    detail::run_check(rep.checks, base + ": q-commutation of the realization", [&] {
      const auto [x, y] = realization(tag, p, N + 4);
      return ok(verify_ccom(x, y, p).zero, "exact");
    });
    detail::run_check(rep.checks, base + ": dual q-commutation", [&] {
      const auto [x, y] = dual_realization(tag, p, N + 4);
      return ok(verify_ccom_dual(x, y, p).zero, "exact");
    });
    detail::run_check(rep.checks, base + ": recurrence extraction matches the engine", [&] {
      const auto [x, y] = realization(tag, p, N + 4);
      const auto tbl = build_tables(p, N + 4);
      for (const Rational& t : {Rational(1), Rational(2)}) {
        for (int n = 0; n <= N; ++n) {
          const auto [a, b, c] = extract_recurrence(x, y, t, n);
          const auto [ea, eb, ec] = coeffs_value(tbl, n, t);
          if (!(a == ea && b == eb && c == ec)) return ok(false, "n=" + std::to_string(n));
        }
      }
      return ok(true, "exact to n = " + std::to_string(N));
    });
    detail::run_check(rep.checks, base + ": coherent-state conjugation", [&]() -> CheckResult {
      if (!(p.q > Rational(-1))) return skip("needs q > -1");
      return ok(verify_coherent_conjugation(tag, p, Rational(2), N).zero, "exact at t = 2");
    });
    detail::run_check(rep.checks, base + ": dual operator quadratic identity", [&] {
      const TimeTriple<Rational> tr{Rational(1), Rational(2), Rational(3)};
      return ok(verify_dual_quadratic(tag, p, tr, N).zero, "exact at (1,2,3)");
    });
    if (tag == FamilyTag::QMeixner) {
      detail::run_check(rep.checks, "qmeixner: norm product of c_k", [&] {
        const auto fam = closed_family(p, tag, N);
        for (const Rational& t : {Rational(1), Rational(2)}) {
          Rational prod_c(1), prod_t(1);
          for (int n = 1; n <= N - 1; ++n) {
            prod_c = prod_c * fam[static_cast<std::size_t>(n)].c(t);
            prod_t = prod_t * (t + p.tau * q_number(n - 1, p.q));
            if (!(prod_c == q_factorial(n, p.q) * prod_t)) return ok(false);
          }
        }
        return ok(true, "exact");
      });
    }
  }
  return rep;
}

inline SuiteReport verify_matrix_suite(const ParamSet<Rational>& p, const VerifyOptions& opt) {
  using detail::ok;
  using detail::skip;
  SuiteReport rep{"matrix", {}};
  RecurrenceTable<Rational> tbl;
  try {
    tbl = build_tables(p, opt.N + 2);
  } catch (const std::exception& e) {
    rep.checks.push_back({"build_tables", false, false, std::string("error: ") + e.what()});
    return rep;
  }
  const int N = opt.N;
  const TimeTriple<Rational> tr{Rational(1), Rational(2), Rational(3)};
  detail::run_check(rep.checks, "matrix q-commutation residual", [&] {
    return ok(verify_matrix_ccom(tbl, N).zero_on_block(N - 2),
              "exact on leading " + std::to_string(N - 2) + " block");
  });
  detail::run_check(rep.checks, "matrix quadratic identity at (1,2,3)", [&] {
    return ok(verify_matrix_quadratic(tbl, tr, N).zero_on_block(N - 2), "exact");
  });
  detail::run_check(rep.checks, "dual matrix quadratic identity", [&] {
    return ok(verify_matrix_quadratic_dual(tbl, tr, N).zero_on_block(N - 2), "exact");
  });
  detail::run_check(rep.checks, "quadratic residual = F x commutation residual", [&] {
    const auto quad = verify_matrix_quadratic(tbl, tr, N);
    const auto ccom = verify_matrix_ccom(tbl, N);
    const Rational f = form_coeffs(p, tr).F;
    const auto scaled = f * ccom;
    const int block = std::min(quad.valid_block(), scaled.valid_block());
    return ok(quad.equal_on_block(scaled, block),
              "entrywise on leading " + std::to_string(block) + " block");
  });
  detail::run_check(rep.checks, "moments m0 = 1, m1 = 0, m2 = t (symbolic)", [&] {
    const auto m = moments_poly(tbl, 2);
    return ok(m[0] == Poly<Rational>(1) && m[1] == Poly<Rational>() &&
              m[2] == Poly<Rational>::var());
  });
  detail::run_check(rep.checks, "sigma = 0 third moment", [&]() -> CheckResult {
    if (!(p.sigma == Rational(0))) return skip("sigma != 0");
    const auto m = moments_poly(tbl, 3);
    const auto t = Poly<Rational>::var();
    const auto expect = t * (Poly<Rational>(p.eta) * t + Poly<Rational>(p.theta) +
                             Poly<Rational>(Rational(p.eta * p.tau)));
    return ok(m[3] == expect, "m3(t) = t(eta t + theta + eta tau)");
  });
  detail::run_check(rep.checks, "even moments and Cauchy-Schwarz (float)", [&] {
    const auto tbld = build_tables(to_double_params(p), 14);
    for (double t : {1.0, 2.0}) {
      const auto m = moments(tbld, t, 12, 14);
      for (int n = 1; n <= 6; ++n) {
        if (m[static_cast<std::size_t>(2 * n)] < -1e-9) return ok(false, "negative even moment");
        if (m[static_cast<std::size_t>(2 * n)] <
            m[static_cast<std::size_t>(n)] * m[static_cast<std::size_t>(n)] - 1e-9)
          return ok(false, "Cauchy-Schwarz violated");
      }
    }
    return ok(true);
  });
  detail::run_check(rep.checks, "Hankel positivity proxy a_{n-1} c_n > 0", [&]() -> CheckResult {
    if (!detail::engine_window(p)) return skip("q outside the engine window");
    return ok(hankel_positivity_proxy(tbl, Rational(1), N) &&
              hankel_positivity_proxy(tbl, Rational(2), N));
  });
  return rep;
}

inline SuiteReport verify_quadrature_suite(const ParamSet<Rational>& p, const VerifyOptions& opt) {
  using detail::ok;
  using detail::skip;
  SuiteReport rep{"quadrature", {}};
  const int M = opt.M;
  const auto pd = to_double_params(p);
  std::vector<ThreeTermCoeffs<double>> coeffs;
  RecurrenceTable<Rational> tbl;
  try {
    coeffs = table_coeffs(build_tables(pd, 2 * M + 2));
    tbl = build_tables(p, 2 * M + 1);
  } catch (const std::exception& e) {
    rep.checks.push_back({"coefficients", false, false, std::string("error: ") + e.what()});
    return rep;
  }
  for (double t : {1.0, 2.0}) {
    const std::string at = " at t = " + std::to_string(static_cast<int>(t));
    detail::run_check(rep.checks, "weights nonnegative, summing to 1" + at, [&] {
      const auto rule = golub_welsch(coeffs, t, M);
      double sum = 0;
      for (double w : rule.weights) {
        if (w < 0) return ok(false, "negative weight");
        sum += w;
      }
      return ok(std::abs(sum - 1.0) <= 1e-12, "sum error " + std::to_string(std::abs(sum - 1.0)));
    });
    detail::run_check(rep.checks, "Gram off-diagonals below 1e-8" + at, [&] {
      const auto g = orthogonality_check(coeffs, t, M);
      return ok(g.max_offdiagonal < 1e-8 && g.max_diagonal_error < 1e-8);
    });
    detail::run_check(rep.checks, "Gauss exactness vs exact moments" + at, [&] {
      const auto rule = golub_welsch(coeffs, t, M);
      const auto exact = moments(tbl, Rational(static_cast<long>(t)), 2 * M - 1, 2 * M + 1);
      for (int d = 0; d <= 2 * M - 1; ++d) {
        const double got = rule.integrate_moment(d);
        const double expect = to_double(exact[static_cast<std::size_t>(d)]);
        const double scale = std::max({1.0, std::abs(expect), rule.moment_scale(d)});
        if (std::abs(got - expect) / scale >= 1e-10)
          return ok(false, "degree " + std::to_string(d));
      }
      return ok(true, "relative 1e-10 to degree " + std::to_string(2 * M - 1));
    });
  }
  detail::run_check(rep.checks, "node interlacing M vs M+1", [&] {
    const auto small = golub_welsch(coeffs, 1.5, M);
    const auto large = golub_welsch(coeffs, 1.5, M + 1);
    for (std::size_t i = 0; i < small.nodes.size(); ++i)
      if (!(large.nodes[i] < small.nodes[i] && small.nodes[i] < large.nodes[i + 1]))
        return ok(false);
    return ok(true);
  });
  const bool kernel_family = pd.sigma == 0.0 && pd.eta == 0.0;
  detail::run_check(rep.checks, "kernel martingale check", [&]() -> CheckResult {
    if (!kernel_family) return skip("transition kernel defined for sigma = eta = 0 only");
    const auto mr = martingale_check(pd, 1.0, 2.0, 8, std::max(M, 40));
    return ok(mr.max_deviation < 1e-8 && mr.covariance_residual < 1e-8,
              "max deviation " + std::to_string(mr.max_deviation));
  });
  detail::run_check(rep.checks, "Chapman-Kolmogorov moments (order <= 6)", [&]() -> CheckResult {
    if (!kernel_family) return skip("transition kernel defined for sigma = eta = 0 only");
    const double dev = chapman_kolmogorov_deviation(pd, 1.0, 2.0, 3.0, 6, M);
    return ok(dev < 1e-7, "max deviation " + std::to_string(dev));
  });
  return rep;
}

inline std::vector<SuiteReport> verify_all(const ParamSet<Rational>& p, const VerifyOptions& opt) {
  std::vector<SuiteReport> out;
  const auto timed = [&out](const std::function<SuiteReport()>& suite) {
    const auto start = std::chrono::steady_clock::now();
    auto rep = suite();
    rep.elapsed_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    out.push_back(std::move(rep));
  };
  timed([&] { return verify_params_suite(p); });
  timed([&] { return verify_regression_suite(p); });
  timed([&] { return verify_recurrence_suite(p, opt); });
  timed([&] { return verify_qops_suite(p, opt); });
  timed([&] { return verify_matrix_suite(p, opt); });
  timed([&] { return verify_quadrature_suite(p, opt); });
  return out;
}

inline bool all_pass(const std::vector<SuiteReport>& reports) {
  for (const auto& r : reports)
    if (!r.pass()) return false;
  return true;
}

/// Timing is opt-in so that default reports stay byte-stable across runs.
inline json report_to_json(const std::vector<SuiteReport>& reports,
                           const ParamSet<Rational>& p, const VerifyOptions& opt,
                           const std::string& mode, bool with_timings = false) {
  json j;
  j["schema"] = "harnesslab/1";
  j["suite"] = "verify-all";
  j["params"] = params_to_json(p);
  j["mode"] = mode;
  j["truncation"] = {{"N", opt.N}, {"M", opt.M}};
  json suites = json::array();
  for (const auto& r : reports) {
    json js;
    js["suite"] = r.suite;
    js["pass"] = r.pass();
    if (with_timings) js["elapsed_ms"] = r.elapsed_ms;
    json checks = json::array();
    for (const auto& c : r.checks) {
      json jc;
      jc["name"] = c.name;
      jc["status"] = c.skipped ? "skipped" : (c.pass ? "pass" : "fail");
      if (!c.detail.empty()) jc["detail"] = c.detail;
      checks.push_back(jc);
    }
    js["checks"] = checks;
    suites.push_back(js);
  }
  j["suites"] = suites;
  j["pass"] = all_pass(reports);
  return j;
}

}  // namespace harnesslab
