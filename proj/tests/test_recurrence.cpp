#include <doctest.h>

#include "harnesslab/qops.hpp"
#include "harnesslab/recurrence.hpp"
#include "test_support.hpp"

using namespace harnesslab;

namespace {

Rational r(long n, long d = 1) { return make_rational(n, d); }

const ParamSet<Rational> qmeixner{r(1, 2), r(0), r(1, 3), r(0), r(1, 5)};
const ParamSet<Rational> bipoisson{r(0), r(1, 4), r(1, 2), r(0), r(0)};
const ParamSet<Rational> free_p{r(-1, 8), r(1, 3), r(1, 5), r(1, 2), r(1, 4)};
const ParamSet<Rational> classical_p{r(1, 2), r(1, 3), r(1, 2), r(1, 4), r(1, 4)};
const ParamSet<Rational> sigma0_p{r(1, 3), r(1, 4), r(-1, 2), r(0), r(2, 5)};
const ParamSet<Rational> tau0_p{r(1, 3), r(-1, 2), r(1, 4), r(2, 5), r(0)};
// general regime: sigma*tau = 3/16, q = 0 < 1 - 2*sqrt(3/16)? No: pick q
// well inside (-1, 1-2*rho) with rho = sqrt(1/16) = 1/4.
const ParamSet<Rational> general_p{r(1, 5), r(1, 3), r(-1, 4), r(1, 2), r(1, 8)};

}  // namespace

TEST_CASE("build_tables: initial values") {
  const auto tbl = build_tables(general_p, 10);
  CHECK(tbl.alpha[1] == r(0));
  CHECK(tbl.beta[1] == r(1));
  CHECK(tbl.gamma[0] == r(0));
  CHECK(tbl.delta[0] == r(0));
  CHECK(tbl.epsilon[1] == r(1));
  CHECK(tbl.phi[1] == r(0));
  CHECK(tbl.omega[1] == r(1));
}

TEST_CASE("build_tables: gamma_1 and delta_1 closed forms") {
  testing::RationalGen gen(43);
  for (int i = 0; i < 15; ++i) {
    const auto p = gen.admissible(true);
    const auto tbl = build_tables(p, 3);
    const Rational one_st = Rational(1) - p.sigma * p.tau;
    CHECK(tbl.gamma[1] == (p.eta + p.theta * p.sigma) / one_st);
    CHECK(tbl.delta[1] == (p.eta * p.tau + p.theta) / one_st);
  }
}

TEST_CASE("build_tables: omega_2 matches its closed form") {
  testing::RationalGen gen(47);
  for (int i = 0; i < 15; ++i) {
    const auto p = gen.admissible(true);
    const auto tbl = build_tables(p, 3);
    const Rational st = p.sigma * p.tau;
    const Rational one_st = Rational(1) - st;
    const Rational expect = (Rational(1) + p.q) *
                            (one_st * one_st + (p.eta + p.theta * p.sigma) *
                                                   (p.theta + p.eta * p.tau)) /
                            (one_st * one_st * (Rational(1) - st * (Rational(2) + p.q)));
    CHECK(tbl.omega[2] == expect);
  }
}

TEST_CASE("verify_eq1_eq5: residuals vanish exactly to N = 50") {
  for (const auto& p : {qmeixner, bipoisson, free_p, classical_p, sigma0_p, tau0_p, general_p}) {
    const auto tbl = build_tables(p, 50);
    CHECK(verify_eq1_eq5(tbl).all_zero());
  }
}

TEST_CASE("verify_eq1_eq5 on random engine-safe draws") {
  testing::RationalGen gen(53);
  for (int i = 0; i < 10; ++i) {
    const auto tbl = build_tables(gen.admissible(true), 25);
    CHECK(verify_eq1_eq5(tbl).all_zero());
  }
}

TEST_CASE("positivity: lambda > 0 and the growth bound hold in the engine window") {
  testing::RationalGen gen(59);
  for (int i = 0; i < 10; ++i) {
    const auto tbl = build_tables(gen.admissible(true), 30);
    const auto rep = positivity_report(tbl);
    CHECK(rep.lambda_positive);
    CHECK(rep.growth_bound);
  }
}

TEST_CASE("positivity: Remark cases certify omega > 0 for sigma = 0") {
  // eta*theta >= 0 case
  {
    const ParamSet<Rational> p{r(1, 2), r(1, 3), r(1, 4), r(0), r(1, 5)};
    const auto rep = positivity_report(build_tables(p, 30));
    CHECK(rep.entries[3].holds);
    CHECK(rep.omega_positive);
  }
  // theta^2 < 4 tau case with eta*theta < 0
  {
    const ParamSet<Rational> p{r(1, 2), r(1, 2), r(-1, 2), r(0), r(1, 2)};
    const auto rep = positivity_report(build_tables(p, 30));
    CHECK(rep.entries[5].holds);
    CHECK(rep.omega_positive);
  }
}

TEST_CASE("coeffs_at: step 0 is (1, 0, 0) for any parameters") {
  testing::RationalGen gen(61);
  for (int i = 0; i < 10; ++i) {
    const auto tbl = build_tables(gen.admissible(true), 5);
    const auto [a, b, c] = coeffs_value(tbl, 0, gen.positive(5, 3));
    CHECK(a == r(1));
    CHECK(b == r(0));
    CHECK(c == r(0));
  }
}

TEST_CASE("coeffs_at: sigma = 0 family is monic (a_n = 1)") {
  const auto tbl = build_tables(sigma0_p, 20);
  for (int n = 0; n <= 20; ++n) {
    const auto c = coeffs_at(tbl, n);
    CHECK(c.a.slope == r(0));
    CHECK(c.a.intercept == r(1));
  }
}

TEST_CASE("coeffs_at: bi-Poisson step 1 is b_1(t) = theta + t eta, c_1(t) = t") {
  const auto tbl = build_tables(bipoisson, 5);
  const auto c = coeffs_at(tbl, 1);
  CHECK(c.b.slope == bipoisson.eta);
  CHECK(c.b.intercept == bipoisson.theta);
  CHECK(c.c.slope == r(1));
  CHECK(c.c.intercept == r(0));
}

TEST_CASE("closed_alpha_beta: initial conditions and sigma = 0 closed form") {
  CHECK(closed_alpha_beta(qmeixner, 1) == std::pair<Rational, Rational>{r(0), r(1)});
  // sigma = 0: alpha_n = [n-1]_q, beta_n = 1
  for (int n = 1; n <= 12; ++n) {
    const auto [a, b] = closed_alpha_beta(sigma0_p, n);
    CHECK(a == q_number(n - 1, sigma0_p.q));
    CHECK(b == r(1));
  }
}

TEST_CASE("closed_alpha_beta: free case gives (1 - sigma tau)^{n-2}") {
  const Rational one_st = Rational(1) - free_p.sigma * free_p.tau;
  for (int n = 2; n <= 12; ++n) {
    const auto [a, b] = closed_alpha_beta(free_p, n);
    CHECK(a == tpow(one_st, n - 2));
    CHECK(b == tpow(one_st, n - 2));
  }
}

TEST_CASE("closed_alpha_beta matches the iteration exactly for rational roots") {
  // sigma*tau = 3/16 with q = 0: discriminant (1-q)^2 - 4 st = 1/4
  const ParamSet<Rational> p{r(0), r(1, 3), r(1, 5), r(3, 8), r(1, 2)};
  const auto tbl = build_tables(p, 50);
  for (int n = 1; n <= 50; ++n) {
    const auto [a, b] = closed_alpha_beta(p, n);
    CHECK(a == tbl.alpha[n]);
    CHECK(b == tbl.beta[n]);
  }
}

TEST_CASE("closed_alpha_beta matches the iteration to 1e-10 in float mode") {
  // irrational roots: q = 1/10, sigma*tau = 0.15
  const ParamSet<double> p{0.1, 0.3, -0.2, 0.5, 0.3};
  const auto tbl = build_tables(p, 50);
  for (int n = 1; n <= 50; ++n) {
    const auto [a, b] = closed_alpha_beta(p, n);
    CHECK(std::abs(a - tbl.alpha[n]) <= 1e-10 * std::max(1.0, std::abs(tbl.alpha[n])));
    CHECK(std::abs(b - tbl.beta[n]) <= 1e-10 * std::max(1.0, std::abs(tbl.beta[n])));
  }
}

TEST_CASE("closed_alpha_beta: repeated root rejected") {
  // classical: q = 1 - 2 sqrt(sigma tau) makes the discriminant vanish
  CHECK_THROWS_AS(closed_alpha_beta(classical_p, 3), RepeatedRoot);
  CHECK_THROWS_AS(closed_alpha_beta(ParamSet<Rational>{r(1), r(0), r(0), r(0), r(0)}, 3),
                  RepeatedRoot);
}

TEST_CASE("closed_family sigma0 matches the engine exactly") {
  const auto engine = table_coeffs(build_tables(sigma0_p, 31));
  const auto closed = closed_family(sigma0_p, FamilyTag::SigmaZero, 31);
  CHECK(rescale_equivalent(engine, closed, 30));
  // the sigma = 0 engine output is itself monic, so coefficients match 1:1
  for (int n = 0; n <= 30; ++n) {
    CHECK(engine[n].b == closed[n].b);
    CHECK(engine[n].c == closed[n].c);
  }
}

TEST_CASE("closed_family tau0 matches the engine exactly") {
  const auto engine = table_coeffs(build_tables(tau0_p, 31));
  const auto closed = closed_family(tau0_p, FamilyTag::TauZero, 31);
  CHECK(rescale_equivalent(engine, closed, 30));
}

TEST_CASE("closed_family qmeixner and bipoisson match the engine exactly") {
  CHECK(rescale_equivalent(table_coeffs(build_tables(qmeixner, 31)),
                           closed_family(qmeixner, FamilyTag::QMeixner, 31), 30));
  CHECK(rescale_equivalent(table_coeffs(build_tables(bipoisson, 31)),
                           closed_family(bipoisson, FamilyTag::BiPoisson, 31), 30));
}

TEST_CASE("closed_family free matches the engine under rescaling") {
  CHECK(rescale_equivalent(table_coeffs(build_tables(free_p, 31)),
                           closed_family(free_p, FamilyTag::Free, 31), 30));
}

TEST_CASE("free regime: raw engine sequences in closed form") {
  // gamma_n, delta_n constant for n >= 2; omega_n = K/(1-st)^{2n} for
  // n >= 3 with omega_2 = K/(1-st)^3; lambda_{n+2,0} = (1-st)^{2n+1}.
  const auto& p = free_p;
  const auto tbl = build_tables(p, 20);
  const Rational st = p.sigma * p.tau;
  const Rational one_st = Rational(1) - st;
  const Rational K = one_st * one_st + (p.eta + p.theta * p.sigma) * (p.theta + p.eta * p.tau);
  const Rational gam = (p.eta + 2 * p.theta * p.sigma + p.eta * st) / (one_st * one_st);
  const Rational del = (p.theta + 2 * p.eta * p.tau + p.theta * st) / (one_st * one_st);
  for (int n = 2; n <= 20; ++n) {
    CHECK(tbl.gamma[n] == gam);
    CHECK(tbl.delta[n] == del);
  }
  CHECK(tbl.omega[2] == K / tpow(one_st, 3));
  for (int n = 3; n <= 20; ++n) CHECK(tbl.omega[n] == K / tpow(one_st, 2 * n));
  for (int n = 0; n <= 18; ++n) CHECK(tbl.lambda(n + 2, 0) == tpow(one_st, 2 * n + 1));
}

TEST_CASE("classical regime: raw alpha/beta and the cross difference") {
  // alpha_n = (1-rho)^{n-2}(n-1), beta_n = (1-rho)^{n-2}(1+(n-2)rho),
  // alpha_{n+2} beta_n - beta_{n+2} alpha_n = 2 (1-rho)^{2n-1}.
  const auto tbl = build_tables(classical_p, 20);
  const Rational rho = *exact_sqrt(Rational(classical_p.sigma * classical_p.tau));
  const Rational one_r = Rational(1) - rho;
  for (int n = 2; n <= 21; ++n) {
    CHECK(tbl.alpha[n] == tpow(one_r, n - 2) * Rational(n - 1));
    CHECK(tbl.beta[n] == tpow(one_r, n - 2) * (Rational(1) + Rational(n - 2) * rho));
  }
  for (int n = 1; n <= 19; ++n)
    CHECK(tbl.alpha[n + 2] * tbl.beta[n] - tbl.beta[n + 2] * tbl.alpha[n] ==
          2 * tpow(one_r, 2 * n - 1));
}

TEST_CASE("cross-time balance of a_{n-1} against the alpha/beta sequences") {
  // a_{n-1}(u) [(qs - tau) sigma alpha_{n-1} + (1 + s sigma) beta_{n-1}]
  //   = a_{n-1}(s) [(qu - tau) sigma alpha_{n-1} + (1 + u sigma) beta_{n-1}]
  // for every pair s, u; a consequence of eq1 used to pin down the
  // engine's sequences.
  testing::RationalGen gen(97);
  for (int i = 0; i < 8; ++i) {
    const auto p = gen.admissible(true);
    const auto tbl = build_tables(p, 20);
    const Rational s = gen.positive(5, 3);
    const Rational u = s + gen.positive(5, 3);
    for (int n = 2; n <= 20; ++n) {
      const auto a_prev = coeffs_at(tbl, n - 1).a;
      const Rational lhs = a_prev(u) * ((p.q * s - p.tau) * p.sigma * tbl.alpha[n - 1] +
                                        (Rational(1) + s * p.sigma) * tbl.beta[n - 1]);
      const Rational rhs = a_prev(s) * ((p.q * u - p.tau) * p.sigma * tbl.alpha[n - 1] +
                                        (Rational(1) + u * p.sigma) * tbl.beta[n - 1]);
      CHECK(lhs == rhs);
    }
  }
}

TEST_CASE("bi-Poisson at the q = -1 corner: engine runs, omega_2 = 0") {
  const ParamSet<Rational> p{r(-1), r(1, 4), r(1, 2), r(0), r(0)};
  const auto tbl = build_tables(p, 20);
  CHECK(verify_eq1_eq5(tbl).all_zero());
  CHECK(tbl.omega[2] == r(0));  // (1+q) factor kills the c_2 coefficient
  CHECK_FALSE(positivity_report(tbl).omega_positive);
}

TEST_CASE("closed_family classical (rational rho) matches the engine under rescaling") {
  CHECK(rescale_equivalent(table_coeffs(build_tables(classical_p, 31)),
                           closed_family(classical_p, FamilyTag::Classical, 31), 30));
}

TEST_CASE("classical lambda_{n,k} closed form (1-rho)^{2n+k-3}(1+(2n+k-3)rho)") {
  const auto tbl = build_tables(classical_p, 20);
  const Rational rho = *exact_sqrt(Rational(classical_p.sigma * classical_p.tau));
  for (int n = 2; n <= 18; ++n)
    for (int k = 0; k <= 2; ++k) {
      const Rational expect =
          tpow(Rational(1 - rho), 2 * n + k - 3) * (Rational(1) + Rational(2 * n + k - 3) * rho);
      CHECK(tbl.lambda(n, k) == expect);
    }
}

TEST_CASE("rescale_equivalent detects a perturbed delta_3") {
  auto seq1 = closed_family(sigma0_p, FamilyTag::SigmaZero, 10);
  auto seq2 = seq1;
  seq2[3].b.intercept = seq2[3].b.intercept + r(1, 1000);
  CHECK(rescale_equivalent(seq1, seq1, 9));
  CHECK_FALSE(rescale_equivalent(seq1, seq2, 9));
}

TEST_CASE("closed_family rejects mismatched tags and broken positivity") {
  CHECK_THROWS_AS(closed_family(general_p, FamilyTag::Free, 5), FamilyMismatch);
  // sigma = 0 with 1 + [n] eta theta + [n]^2 tau eta^2 eventually negative:
  // q = 1, eta = 1, theta = -2, tau = 1/10 gives 1 - 2n + n^2/10 < 0 at n = 3
  const ParamSet<Rational> bad{r(1), r(1), r(-2), r(0), r(1, 10)};
  CHECK_THROWS_AS(closed_family(bad, FamilyTag::SigmaZero, 10), PositivityViolated);
}

TEST_CASE("time-inversion duality: tau0 closed family is the swapped sigma0 family") {
  // b and a*c transform by coefficient reversal: b~(t) = t b(1/t),
  // (ac)~(t) = t^2 (ac)(1/t).
  const auto tau0 = closed_family(tau0_p, FamilyTag::TauZero, 21);
  const auto sig0 = closed_family(time_invert(tau0_p), FamilyTag::SigmaZero, 21);
  for (int n = 0; n < 20; ++n) {
    CHECK(tau0[n].b.slope == sig0[n].b.intercept);
    CHECK(tau0[n].b.intercept == sig0[n].b.slope);
    const auto prod = [](const LinearPoly<Rational>& a, const LinearPoly<Rational>& c) {
      return std::array<Rational, 3>{a.intercept * c.intercept,
                                     a.slope * c.intercept + a.intercept * c.slope,
                                     a.slope * c.slope};
    };
    const auto pt = prod(tau0[n].a, tau0[n + 1].c);
    const auto ps = prod(sig0[n].a, sig0[n + 1].c);
    CHECK(pt[0] == ps[2]);
    CHECK(pt[1] == ps[1]);
    CHECK(pt[2] == ps[0]);
  }
}

TEST_CASE("low-order sanity: p_2 from two recurrence steps") {
  // p_2(x;t) = x^2/(1+sigma t) - ((eta+theta sigma)t + eta tau + theta)
  //            x/((1-sigma tau)(1+sigma t)) - t/(1+sigma t)
  testing::RationalGen gen(67);
  for (int i = 0; i < 10; ++i) {
    const auto p = gen.admissible(true);
    const auto tbl = build_tables(p, 3);
    const Rational t = gen.positive(5, 3);
    // two steps: p_1 = x, a_1 p_2 = (x - b_1) x - c_1
    const auto c1 = coeffs_at(tbl, 1);
    const Rational a1 = c1.a(t), b1 = c1.b(t), cc1 = c1.c(t);
    // coefficients of p_2 in the monomial basis
    const Rational lead = Rational(1) / a1;
    const Rational mid = -b1 / a1;
    const Rational con = -cc1 / a1;
    const Rational one_pst = Rational(1) + p.sigma * t;
    CHECK(lead == Rational(1) / one_pst);
    CHECK(mid == -((p.eta + p.theta * p.sigma) * t + p.eta * p.tau + p.theta) /
                     ((Rational(1) - p.sigma * p.tau) * one_pst));
    CHECK(con == -t / one_pst);
  }
}

TEST_CASE("build_tables rejects inadmissible parameters and degenerate denominators") {
  CHECK_THROWS_AS(build_tables(ParamSet<Rational>{r(3), r(0), r(0), r(0), r(0)}, 5), DomainError);
  // omega_2 denominator 1 - sigma*tau*(2+q) = 0: q = 0, sigma*tau = 1/2
  const ParamSet<Rational> degen{r(0), r(0), r(0), r(1), r(1, 2)};
  CHECK_THROWS_AS(build_tables(degen, 5), DegenerateDenominator);
}
