#include <doctest.h>

#include "harnesslab/qops.hpp"
#include "test_support.hpp"

using namespace harnesslab;

namespace {

Rational r(long n, long d = 1) { return make_rational(n, d); }

const ParamSet<Rational> qmeixner{r(1, 2), r(0), r(1, 3), r(0), r(1, 5)};
const ParamSet<Rational> bipoisson{r(0), r(1, 4), r(1, 2), r(0), r(0)};

using Op = SeriesOperator<Rational>;

}  // namespace

TEST_CASE("q-number conventions") {
  CHECK(q_number(0, r(1, 2)) == r(0));
  CHECK(q_factorial(0, r(1, 2)) == r(1));
  CHECK(q_number(3, r(1, 2)) == r(7, 4));
  CHECK(q_number(5, r(1)) == r(5));
  // [n]_q = 1 + q [n-1]_q
  testing::RationalGen gen(71);
  for (int i = 0; i < 10; ++i) {
    const Rational q = gen.uniform(3, 4);
    const long n = gen.integer(1, 12);
    CHECK(q_number(static_cast<int>(n), q) ==
          Rational(1) + q * q_number(static_cast<int>(n - 1), q));
  }
}

TEST_CASE("dq and zmul act on monomials as expected") {
  const Rational q = r(2, 3);
  const auto D = Op::dq(q, 8);
  const auto col = D.column(3);
  CHECK(col[2] == q_number(3, q));
  for (int i = 0; i <= 8; ++i)
    if (i != 2) CHECK(col[static_cast<std::size_t>(i)] == r(0));

  const auto Z = Op::zmul(8);
  CHECK(Z.validity() == 7);
  CHECK(Z.column(4)[5] == r(1));
  CHECK_THROWS_AS(Z.column(8), TruncationExceeded);

  // z d/dz at q = 1: (ZD) z^n = n z^n
  const auto ZD = Op::zmul(8) * Op::dq(r(1), 8);
  CHECK(ZD.column(5)[5] == r(5));
}

TEST_CASE("validity bookkeeping under composition") {
  const int N = 10;
  const auto D = Op::dq(r(1, 2), N);
  const auto Z = Op::zmul(N);
  CHECK((Z * Z).validity() == N - 2);
  CHECK((Z * Z).degree_shift() == 2);
  CHECK((D * Z).validity() == N - 1);
  CHECK((Z * D).validity() == N);  // lowering then raising stays in range
  CHECK((D * D).validity() == N);
  CHECK((D * D).degree_shift() == -2);
}

TEST_CASE("q-commutator [Dq, Z]_q = I on the validity range") {
  for (long num : {-1L, 0L, 1L, 2L}) {
    const Rational q = make_rational(num, 2);
    const int N = 12;
    const auto residual = q_commutator(Op::dq(q, N), Op::zmul(N), q) - Op::identity(N);
    CHECK(residual.zero_on_validity());
  }
}

TEST_CASE("table1_verify: all ten populated cells vanish for several q") {
  for (const Rational& q : {r(2, 3), r(1), r(-1, 2), r(0)}) {
    const auto cells = table1_verify(q, 30);
    CHECK(cells.size() == 10);
    for (const auto& cell : cells) {
      INFO(cell.name);
      CHECK(cell.zero);
      CHECK(cell.checked_upto >= 25);
    }
  }
}

TEST_CASE("q-Meixner realization satisfies its commutation identity") {
  const int N = 30;
  const auto [x, y] = realization(FamilyTag::QMeixner, qmeixner, N);
  // x(1) = 0, y(1) = z
  CHECK(x.column(0) == std::vector<Rational>(static_cast<std::size_t>(N) + 1, r(0)));
  auto e1 = std::vector<Rational>(static_cast<std::size_t>(N) + 1, r(0));
  e1[1] = r(1);
  CHECK(y.column(0) == e1);
  // [x, y]_q = I + theta Dq + tau Dq^2
  const auto D = Op::dq(qmeixner.q, N);
  const auto rhs = Op::identity(N) + qmeixner.theta * D + qmeixner.tau * (D * D);
  CHECK((q_commutator(x, y, qmeixner.q) - rhs).zero_on_validity());
  CHECK(verify_ccom(x, y, qmeixner).zero);
}

TEST_CASE("bi-Poisson realization satisfies [x,y]_q = I + theta x + eta y") {
  const int N = 30;
  const auto [x, y] = realization(FamilyTag::BiPoisson, bipoisson, N);
  const auto rhs = Op::identity(N) + bipoisson.theta * x + bipoisson.eta * y;
  CHECK((q_commutator(x, y, bipoisson.q) - rhs).zero_on_validity());
  CHECK(verify_ccom(x, y, bipoisson).zero);
}

TEST_CASE("Heisenberg special case: [d/dz, Z] = I") {
  const ParamSet<Rational> heisenberg{r(1), r(0), r(0), r(0), r(0)};
  const int N = 10;
  const auto x = Op::dq(r(1), N);
  const auto y = Op::zmul(N);
  CHECK(verify_ccom(x, y, heisenberg).zero);
}

TEST_CASE("dual realizations satisfy the dual commutation identity") {
  const int N = 30;
  {
    const auto [x, y] = dual_realization(FamilyTag::QMeixner, qmeixner, N);
    CHECK(verify_ccom_dual(x, y, qmeixner).zero);
  }
  {
    const auto [x, y] = dual_realization(FamilyTag::BiPoisson, bipoisson, N);
    CHECK(verify_ccom_dual(x, y, bipoisson).zero);
  }
}

TEST_CASE("realization rejects mismatched parameters") {
  CHECK_THROWS_AS(realization(FamilyTag::QMeixner, bipoisson, 10), FamilyMismatch);
  CHECK_THROWS_AS(realization(FamilyTag::Free, qmeixner, 10), FamilyMismatch);
}

TEST_CASE("extract_recurrence: q-Meixner column action") {
  // (t x + y) z^n = z^{n+1} + theta [n] z^n + (t + tau [n-1]) [n] z^{n-1}
  const int N = 34;
  const auto [x, y] = realization(FamilyTag::QMeixner, qmeixner, N);
  for (const Rational& t : {r(2), r(1, 3)}) {
    for (int n = 0; n <= 30; ++n) {
      const auto [a, b, c] = extract_recurrence(x, y, t, n);
      const Rational qn = q_number(n, qmeixner.q), qn1 = q_number(n - 1 < 0 ? 0 : n - 1, qmeixner.q);
      CHECK(a == r(1));
      CHECK(b == qmeixner.theta * qn);
      CHECK(c == (t + qmeixner.tau * qn1) * qn);
    }
  }
}

TEST_CASE("extract_recurrence: bi-Poisson column action") {
  const int N = 34;
  const auto [x, y] = realization(FamilyTag::BiPoisson, bipoisson, N);
  const Rational t = r(3, 2);
  for (int n = 0; n <= 30; ++n) {
    const auto [a, b, c] = extract_recurrence(x, y, t, n);
    const Rational qn = q_number(n, bipoisson.q), qn1 = q_number(n - 1 < 0 ? 0 : n - 1, bipoisson.q);
    CHECK(a == r(1));
    CHECK(b == (bipoisson.theta + t * bipoisson.eta) * qn);
    CHECK(c == t * (Rational(1) + bipoisson.eta * bipoisson.theta * qn1) * qn);
  }
}

TEST_CASE("extract_recurrence matches the recurrence engine coefficients") {
  const int N = 34;
  for (const auto& p : {qmeixner, bipoisson}) {
    const auto tag = p.tau == r(0) ? FamilyTag::BiPoisson : FamilyTag::QMeixner;
    const auto [x, y] = realization(tag, p, N);
    const auto tbl = build_tables(p, N);
    for (const Rational& t : {r(1), r(5, 2)}) {
      for (int n = 0; n <= 30; ++n) {
        const auto [a, b, c] = extract_recurrence(x, y, t, n);
        const auto [ea, eb, ec] = coeffs_value(tbl, n, t);
        CHECK(a == ea);
        CHECK(b == eb);
        CHECK(c == ec);
      }
    }
  }
}

TEST_CASE("extract_recurrence flags a non-banded operator") {
  const int N = 10;
  const auto D = Op::dq(qmeixner.q, N);
  // t x + y with y = Z + Dq^2 has a z^{n-2} coefficient
  const auto y = Op::zmul(N) + D * D;
  CHECK_THROWS_AS(extract_recurrence(D, y, r(1), 5), NotBanded);
}

TEST_CASE("coherent-state conjugation reproduces X_t for both families") {
  const int N = 28;
  CHECK(verify_coherent_conjugation(FamilyTag::QMeixner, qmeixner, r(2), N).zero);
  CHECK(verify_coherent_conjugation(FamilyTag::QMeixner, qmeixner, r(1, 2), N).zero);
  CHECK(verify_coherent_conjugation(FamilyTag::BiPoisson, bipoisson, r(3), N).zero);
}

TEST_CASE("norm product: prod c_k(t) = [n]_q! prod (t + tau [k-1]_q)") {
  const auto fam = closed_family(qmeixner, FamilyTag::QMeixner, 20);
  for (const Rational& t : {r(1), r(2), r(7, 3)}) {
    Rational prod_c(1), prod_t(1);
    for (int n = 1; n <= 20; ++n) {
      prod_c = prod_c * fam[static_cast<std::size_t>(n)].c(t);
      prod_t = prod_t * (t + qmeixner.tau * q_number(n - 1, qmeixner.q));
      CHECK(prod_c == q_factorial(n, qmeixner.q) * prod_t);
    }
  }
}

TEST_CASE("dual operator quadratic identity X_t^2 = Q*(X_s, X_u)") {
  const int N = 26;
  const TimeTriple<Rational> tr{r(1), r(2), r(3)};
  CHECK(verify_dual_quadratic(FamilyTag::QMeixner, qmeixner, tr, N).zero);
  CHECK(verify_dual_quadratic(FamilyTag::BiPoisson, bipoisson, tr, N).zero);
  const TimeTriple<Rational> tr2{r(1, 2), r(3, 4), r(5, 2)};
  CHECK(verify_dual_quadratic(FamilyTag::QMeixner, qmeixner, tr2, N).zero);
}

TEST_CASE("q = -1 rejected for coherent-state normalized checks") {
  const ParamSet<Rational> p{r(-1), r(0), r(1, 3), r(0), r(1, 5)};
  CHECK_THROWS_AS(verify_coherent_conjugation(FamilyTag::QMeixner, p, r(1), 10), DomainError);
}
