#include <doctest.h>

#include "pfkit/expansion.hpp"

using namespace pfkit;

namespace {
ExactScalar S(const char* s) { return ExactScalar::parse(s); }

// Coefficient as displayed: h^j |h|^r with r the class start.
ExactScalar shown(const Series& s, const Frac& e, int log, const Frac& class_start) {
  return ExactScalar(s.display_sign(e, class_start)) * s.scalar_coeff(e, log);
}

const Frac q0(0), q34(3, 4), q1(1), q54(5, 4), q74(7, 4), q2(2);
}  // namespace

TEST_CASE("seed coefficients at the loop") {
  Hamiltonian H = Hamiltonian::quintic();
  SeedSet s = seed_coefficients(H, 0);
  CHECK(s.a0[0] == S("25/84*sqrt(2)"));
  CHECK(s.b1[0] == S("-1/5*sqrt(2)"));
  CHECK(s.c0[0] == S("k1"));
  CHECK(s.d0[0] == S("k3"));
  CHECK(s.constants.get(Sym::k1) < 0);
  CHECK(s.constants.get(Sym::k3) > 0);
  // k4 from its closed form
  Real phi = (1 + sqrt(Real(5))) / 2;
  CHECK(abs(s.constants.get(Sym::k4) - sqrt(Real(5)) / 5 * log(phi)) < Real("1e-90"));
  CHECK_THROWS_AS(seed_coefficients(Hamiltonian({0, Rational(1, 2)}), 0), Error);
}

TEST_CASE("closed expansions reproduce the reference coefficients") {
  auto I = closed_expansion(Hamiltonian::quintic(), 0, Frac(3));
  REQUIRE(I.size() == 4);
  // I_{0,1}
  CHECK(shown(I[0], q0, 0, q0) == S("25/84*sqrt(2)"));
  CHECK(shown(I[0], q34, 0, q34) == S("k1"));
  CHECK(shown(I[0], q1, 1, q0) == S("-1/5*sqrt(2)"));
  CHECK(shown(I[0], q1, 0, q0) == S("k2"));
  CHECK(shown(I[0], q54, 0, q54) == S("k3"));
  CHECK(shown(I[0], q74, 0, q34) == S("-663/1750*k1"));
  CHECK(shown(I[0], q2, 1, q0) == S("1386/3125*sqrt(2)"));
  // I_{1,1}
  CHECK(shown(I[1], q0, 0, q0) == S("125/504*sqrt(2)"));
  CHECK(I[1].scalar_coeff(q34).is_zero());
  CHECK(shown(I[1], q1, 1, q0) == S("-1/2*sqrt(2)"));
  CHECK(shown(I[1], q1, 0, q0) == S("3*sqrt(2) + 5/2*k2"));
  CHECK(shown(I[1], q54, 0, q54) == S("10/7*k3"));
  CHECK(shown(I[1], q74, 0, q34) == S("-78/175*k1"));
  CHECK(shown(I[1], q2, 1, q0) == S("63/125*sqrt(2)"));
  // I_{2,1}
  CHECK(shown(I[2], q0, 0, q0) == S("625/2772*sqrt(2)"));
  CHECK(I[2].scalar_coeff(q1, 1).is_zero());
  CHECK(shown(I[2], q1, 0, q0) == S("5*sqrt(2)"));
  CHECK(shown(I[2], q54, 0, q54) == S("50/21*k3"));
  CHECK(shown(I[2], q74, 0, q34) == S("-18/35*k1"));
  CHECK(shown(I[2], q2, 1, q0) == S("14/25*sqrt(2)"));
  // I_{3,1}
  CHECK(shown(I[3], q0, 0, q0) == S("15625/72072*sqrt(2)"));
  CHECK(shown(I[3], q1, 0, q0) == S("25/6*sqrt(2)"));
  CHECK(I[3].scalar_coeff(q54).is_zero());
  CHECK(shown(I[3], q74, 0, q34) == S("-4/7*k1"));
  CHECK(shown(I[3], q2, 1, q0) == S("3/5*sqrt(2)"));
}

TEST_CASE("closed expansion against quadrature") {
  Hamiltonian H = Hamiltonian::quintic();
  SeedSet seeds = seed_coefficients(H, 0);
  auto I = closed_expansion(H, 0, Frac(3));
  Oracle o(H);
  for (int i = 0; i < 4; ++i) {
    auto r = expansion_residual(
        I[i], [&](const Real& h) { return o.integral(Region::closed, i, 1, h); }, Real("-1e-3"), Real("-1e-5"), 8,
        {}, &seeds.constants);
    // first omitted terms are h^3 ln|h| and h^3
    CHECK(r.slope > 2.7);
    CHECK(r.slope < 3.3);
  }
  // the series solves the homogeneous system term by term
  I = closed_expansion(H, 0, Frac(8));
  PFSystem sys = homogeneous_system(H);
  Real h("-0.001");
  for (size_t r = 0; r < 4; ++r) {
    Real lhs = poly_eval_real(sys.P, h) * I[r].derivative().evaluate(h, {}, &seeds.constants), rhs = 0;
    for (size_t c = 0; c < 4; ++c) rhs += poly_eval_real(sys.T(r, c), h) * I[c].evaluate(h, {}, &seeds.constants);
    CHECK(abs(lhs - rhs) < Real("1e-12"));
  }
}

TEST_CASE("open expansions on the vertical line") {
  Hamiltonian H = Hamiltonian::quintic();
  SeparationLine L = SeparationLine::half_pi(1);
  auto J = open_expansion(H, L, 0, Frac(3));
  const char* v0[] = {"17/420*sqrt(10)", "113/2520*sqrt(10)", "691/13860*sqrt(10)", "20047/360360*sqrt(10)"};
  const char* v1[] = {"2/5*sqrt(10) + 8/5*sqrt(10)*k4", "4*sqrt(10)*k4", "sqrt(10)", "7/6*sqrt(10)"};
  // -9/3125 (13 + 1232 k4), 1/250 (103 - 1008 k4), 4/75 (19 - 84 k4), 3/5 (3 - 8 k4), times sqrt 10
  const char* v2[] = {"-117/3125*sqrt(10) - 11088/3125*sqrt(10)*k4", "103/250*sqrt(10) - 504/125*sqrt(10)*k4",
                      "76/75*sqrt(10) - 112/25*sqrt(10)*k4", "9/5*sqrt(10) - 24/5*sqrt(10)*k4"};
  for (int i = 0; i < 4; ++i) {
    CHECK(shown(J[i], q0, 0, q0) == S(v0[i]));
    CHECK(shown(J[i], q1, 0, q0) == S(v1[i]));
    CHECK(shown(J[i], q2, 0, q0) == S(v2[i]));
  }
  BoundarySeries b = boundary_series(H, L, 0, Frac(3));
  Series K01 = b.Kt(0).truncated(Frac(3));
  CHECK(shown(K01, q0, 0, q0) == S("-1/5*sqrt(10)"));
  CHECK(shown(K01, q1, 0, q0) == S("-2*sqrt(10)"));
  // -sqrt(10 + 200 h)/5 to the truncation order
  Oracle o(H, L);
  auto r = expansion_residual(K01, [&](const Real& h) { return o.K(0, 1, h); }, Real("-1e-3"), Real("-1e-5"));
  CHECK(r.slope > 2.7);
  CHECK(r.slope < 3.3);
}

TEST_CASE("open expansions for the horizontal and slanted lines") {
  Hamiltonian H = Hamiltonian::quintic();
  SeedSet seeds = seed_coefficients(H, 0);
  auto closed = closed_expansion(H, 0, Frac(4));
  auto half = open_expansion(H, SeparationLine::pi(), 0, Frac(4), &closed);
  for (int i = 0; i < 4; ++i) CHECK(ParamPoly(ExactScalar(2)) * half[i] == closed[i]);

  SeparationLine L = SeparationLine::through_anchor(H, Rational(11, 10), 1, 0);
  auto J = open_expansion(H, L, 0, Frac(4));
  Oracle o(H, L);
  for (int i = 0; i < 4; ++i) {
    CHECK(J[i].denominator() == 1);
    CHECK(!J[i].has_log());
    auto r = expansion_residual(
        J[i], [&](const Real& h) { return o.integral(Region::open_plus, i, 1, h); }, Real("-1e-3"), Real("-1e-5"), 8,
        {}, &seeds.constants);
    CHECK(r.slope > 3.6);
    CHECK(r.slope < 4.4);
  }
}

TEST_CASE("Melnikov series from a bundle") {
  Hamiltonian H = Hamiltonian::quintic();
  ExpansionBundle b = expansion_bundle(H, SeparationLine::half_pi(1), 0, Frac(3));
  IntegralExpr e = IntegralExpr::symbol(BasisSymbol::I(0), PolyP(ParamPoly::var("B0"))) +
                   IntegralExpr::symbol(BasisSymbol::Iplus(0), PolyP(ParamPoly::var("B6"))) +
                   IntegralExpr::symbol(BasisSymbol::Kt(0), PolyP(ParamPoly::var("B12")));
  Series m = melnikov_expansion(e, b);
  CHECK(m.coeff(q0) == ParamPoly::parse("25/84*sqrt(2)*B0 + 17/420*sqrt(10)*B6 - 1/5*sqrt(10)*B12"));
  CHECK(m.coeff(q34) == ParamPoly::parse("k1*B0"));
  CHECK_THROWS_AS(melnikov_expansion(IntegralExpr::symbol(BasisSymbol::Iraw(0, 3)), b), Error);
}

TEST_CASE("Frobenius solver failure modes") {
  Hamiltonian H = Hamiltonian::quintic();
  PFSystem sys = homogeneous_system(H);
  // no normalisation for the singular exponents
  CHECK_THROWS_AS(frobenius_solve(sys, 0, {}, Frac(2)), Error);
  // P does not vanish at a regular point
  CHECK_THROWS_AS(frobenius_solve(sys, Rational(-1, 100), {}, Frac(2)), Error);
  try {
    frobenius_solve(sys, 0, {}, Frac(2));
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnexpectedSingularStep);
  }
}
