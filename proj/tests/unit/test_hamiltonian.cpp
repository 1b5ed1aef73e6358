#include <doctest.h>

#include "pfkit/hamiltonian.hpp"

using namespace pfkit;

namespace {
Series horner(const Poly& P, const Series& x) {
  Series acc(x.base(), x.side(), x.trunc());
  for (size_t i = P.coeffs().size(); i-- > 0;) {
    acc = acc * x;
    acc.add(Frac(0), 0, ParamPoly(P.coeffs()[i]));
  }
  return acc;
}

// F(x(h)) + y(h)^2/2 - h must vanish to the order carried by the series.
void check_on_level(const Hamiltonian& H, const IntersectionSeries& s) {
  Series lhs = horner(H.F(), s.x) + ParamPoly(ExactScalar(Rational(1, 2))) * (s.y * s.y);
  lhs -= Series::from_poly(Poly(std::vector<ExactScalar>{ExactScalar(), ExactScalar(1)}), s.x.base(), s.x.side());
  for (const auto& [k, c] : lhs.terms()) {
    if (!(k.e < s.x.trunc())) continue;
    ExactScalar v = c.constant();
    if (v.exact())
      CHECK_MESSAGE(v.is_zero(), "residual at exponent " << k.e.to_string() << ": " << v.to_string());
    else
      CHECK(abs(v.to_real()) < Real("1e-70"));
  }
}
}  // namespace

TEST_CASE("critical points and classification") {
  auto q = critical_data(Hamiltonian::quintic());
  REQUIRE(q.size() == 2);
  CHECK(*q[0].x_exact == 0);
  CHECK(*q[0].h_exact == 0);
  CHECK(q[0].multiplicity == 3);
  CHECK(q[0].kind == CriticalKind::nilpotent_saddle);
  CHECK(*q[1].x_exact == 1);
  CHECK(*q[1].h_exact == Rational(-1, 20));
  CHECK(q[1].kind == CriticalKind::center);

  auto sq = critical_data(Hamiltonian({0, 1}));
  REQUIRE(sq.size() == 1);
  CHECK(sq[0].kind == CriticalKind::center);

  auto cub = critical_data(Hamiltonian({-1, 0, Rational(1, 3)}));
  REQUIRE(cub.size() == 2);
  CHECK(*cub[0].x_exact == -1);
  CHECK(*cub[0].h_exact == Rational(2, 3));
  CHECK(cub[0].kind == CriticalKind::hyperbolic_saddle);
  CHECK(*cub[1].h_exact == Rational(-2, 3));
  CHECK(cub[1].kind == CriticalKind::center);

  // (x - 1/3)^2 (x^2 - 2) has an irrational pair and a double root
  Poly p(std::vector<ExactScalar>{Rational(-2, 9), Rational(4, 3), Rational(-17, 9), Rational(-2, 3), 1});
  auto r = real_roots(p);
  REQUIRE(r.size() == 3);
  CHECK(abs(r[0].x + sqrt(Real(2))) < Real("1e-100"));
  CHECK(*r[1].exact == Rational(1, 3));
  CHECK(r[1].multiplicity == 2);
  CHECK_FALSE(r[2].exact.has_value());
}

TEST_CASE("period annulus and turning points of the quintic") {
  Hamiltonian H = Hamiltonian::quintic();
  PeriodAnnulus A = default_annulus(H);
  CHECK(*A.beta_exact == 0);
  CHECK(abs(A.alpha + Real("0.05")) < Real("1e-100"));
  auto [xl, xr] = turning_points(H, A, Real(0));
  CHECK(abs(xl) < Real("1e-100"));
  CHECK(abs(xr - Real("1.25")) < Real("1e-100"));
  auto [a, b] = turning_points(H, A, Real("-0.01"));
  CHECK(abs(H.F(a) + Real("0.01")) < Real("1e-100"));
  CHECK(abs(H.F(b) + Real("0.01")) < Real("1e-100"));
  CHECK(a < 1);
  CHECK(b > 1);
  CHECK_THROWS_AS(turning_points(H, A, Real("0.1")), Error);
}

TEST_CASE("inner Puiseux branch at the nilpotent saddle") {
  Hamiltonian H = Hamiltonian::quintic();
  auto s = intersection_series(H, SeparationLine::pi(), 0, Endpoint::start, 12);
  CHECK(s.p == 4);
  CHECK(s.x.scalar_coeff(Frac(1, 4)) == ExactScalar::radical(2));
  CHECK(s.x.scalar_coeff(Frac(11, 4)) == ExactScalar::radical(2, Rational(1067760993, 78125000)));
  check_on_level(H, s);
  // against a direct turning point
  Real h("-1e-12");  // next omitted term is O(|h|^3)
  auto [xl, xr] = turning_points(H, default_annulus(H), h);
  CHECK(abs(s.x.evaluate(h) - xl) < Real("1e-33"));
}

TEST_CASE("outer simple-root branch") {
  Hamiltonian H = Hamiltonian::quintic();
  auto s = intersection_series(H, SeparationLine::pi(), 0, Endpoint::end, 12);
  CHECK(s.p == 1);
  CHECK(s.x.scalar_coeff(Frac(0)) == ExactScalar(Rational(5, 4)));
  // h^k = -|s|^k for odd k on the side h < 0
  CHECK(s.x.scalar_coeff(Frac(1)) == ExactScalar(Rational(-256, 125)));
  CHECK(s.x.scalar_coeff(Frac(3)) == ExactScalar(Rational(-6979321856, 48828125)));
  check_on_level(H, s);
}

TEST_CASE("vertical and generic lines") {
  Hamiltonian H = Hamiltonian::quintic();
  auto v = intersection_series(H, SeparationLine::half_pi(1), 0, Endpoint::start, 10);
  CHECK(v.y.scalar_coeff(Frac(0)) == ExactScalar::sqrt_of(Rational(1, 10)));
  check_on_level(H, v);
  auto ve = intersection_series(H, SeparationLine::half_pi(1), 0, Endpoint::end, 10);
  CHECK(ve.y.scalar_coeff(Frac(0)) == -ExactScalar::sqrt_of(Rational(1, 10)));

  Rational xa(11, 10);
  SeparationLine L = SeparationLine::through_anchor(H, xa, 1, 0);
  CHECK(L.tan_theta == ExactScalar::radical(6, Rational(121, 100)));
  auto g = intersection_series(H, L, 0, Endpoint::start, 10);
  CHECK(g.x.scalar_coeff(Frac(0)) == ExactScalar(xa));
  Rational first = 10 * (xa - 1) / (xa * xa * xa * (6 * xa * xa - 15 * xa + 10));
  CHECK(g.x.scalar_coeff(Frac(1)) == ExactScalar(-first));
  CHECK(g.y.scalar_coeff(Frac(0)) == ExactScalar::radical(6, Rational(121, 1000)));
  check_on_level(H, g);

  auto ge = intersection_series(H, L, 0, Endpoint::end, 10);
  Real xb = opposite_intersection_quintic(Real("1.1"));
  CHECK(abs(xb - Real("0.89791472161636914533040398")) < Real("1e-25"));
  CHECK(abs(ge.x.scalar_coeff(Frac(0)).to_real() - xb) < Real("1e-90"));
  check_on_level(H, ge);
  CHECK_THROWS_AS(opposite_intersection_quintic(Real("1.3")), Error);
  CHECK_THROWS_AS(opposite_intersection_quintic(Real("0.9")), Error);
}
