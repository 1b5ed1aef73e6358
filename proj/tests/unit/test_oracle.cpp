#include <doctest.h>

#include "pfkit/oracle.hpp"

#include <random>
#include <sstream>

using namespace pfkit;

namespace {
Real R(const char* s) { return Real(s); }
Real rel(const Real& a, const Real& b) { return abs(a - b) / (abs(b) > 0 ? abs(b) : Real(1)); }

SeparationLine generic_line() {
  return SeparationLine::through_anchor(Hamiltonian::quintic(), Rational(11, 10), 1, 0);
}
}  // namespace

TEST_CASE("tanh-sinh on endpoint singularities") {
  QuadratureConfig cfg;
  auto r = tanh_sinh([](const Real& x, const Real&, const Real&) { return sqrt(x); }, 0, 1, cfg);
  CHECK(abs(r.value - Real(2) / 3) < R("1e-58"));
  // 1/sqrt(1-x) evaluated through the distance to the right end
  r = tanh_sinh([](const Real&, const Real&, const Real& dr) { return 1 / sqrt(dr); }, 0, 1, cfg);
  CHECK(abs(r.value - 2) < R("1e-58"));
  r = tanh_sinh([](const Real& x, const Real&, const Real&) { return x; }, 1, 0, cfg);
  CHECK(abs(r.value + R("0.5")) < R("1e-58"));
  cfg.precision = 10;
  CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("closed and open values at the loop and the center") {
  Oracle o(Hamiltonian::quintic());
  Real want = 25 * sqrt(Real(2)) / 84;
  CHECK(abs(o.integral(Region::closed, 0, 1, 0) - want) < R("1e-55"));
  CHECK(o.integral(Region::closed, 0, 1, R("-0.05")) == 0);
  CHECK(o.integral(Region::closed, 1, 2, R("-0.03")) == 0);
  CHECK_THROWS_AS(o.integral(Region::closed, 0, 1, R("0.01")), Error);
  // the upper half of the oval
  CHECK(abs(o.integral(Region::open_plus, 2, 1, R("-0.02")) - o.integral(Region::closed, 2, 1, R("-0.02")) / 2) <
        R("1e-55"));

  Oracle v(Hamiltonian::quintic(), SeparationLine::half_pi(1));
  CHECK(abs(v.integral(Region::open_plus, 0, 1, 0) - 17 * sqrt(Real(10)) / 420) < R("1e-55"));
  // K_{0,1} = -2 sqrt(2(h - F(1)))
  Real h = R("-0.01");
  CHECK(abs(v.K(0, 1, h) + sqrt(10 + 200 * h) / 5) < R("1e-90"));
  CHECK(v.J(0, h) == 0);
}

TEST_CASE("exact integrals with a linear square root") {
  Rational a(1, 2), b(-2, 5);
  // closed and open integrals at the loop
  CHECK(ExactScalar(2) * linear_root_integral(2, 1, a, b, 0, Rational(5, 4)) == ExactScalar::parse("25/84*sqrt(2)"));
  CHECK(ExactScalar(2) * linear_root_integral(2, 1, a, b, 1, Rational(5, 4)) == ExactScalar::parse("17/420*sqrt(10)"));
  CHECK(ExactScalar(2) * linear_root_integral(5, 1, a, b, 1, Rational(5, 4)) ==
        ExactScalar::parse("20047/360360*sqrt(10)"));
  // log terms collapse onto k4
  ConstantTable t;
  t.set(Sym::k4, asinh(Real("0.5")) / sqrt(Real(5)));
  QuadratureConfig cfg;
  for (int m : {-2, -1, 0, 3}) {
    ExactScalar e = linear_root_integral(m, -1, a, b, 1, Rational(5, 4));
    if (m < 0) CHECK(e.has_symbol(Sym::k4));
    CHECK(e.exact());
    auto q = tanh_sinh(
        [&](const Real& x, const Real&, const Real& dr) {
          Real u = Real(2) / 5 * dr;  // 1/2 - 2x/5 vanishes at 5/4
          return pow(x, m) / sqrt(u);
        },
        1, Real(5) / 4, cfg);
    CHECK(abs(e.to_real(&t) - q.value) < R("1e-55"));
  }
  CHECK_THROWS_AS(linear_root_integral(-1, 1, a, b, 0, 1), Error);
}

TEST_CASE("reductions agree with quadrature") {
  Hamiltonian H = Hamiltonian::quintic();
  std::mt19937 rng(2024);
  std::uniform_int_distribution<int> di(0, 9), dj(0, 3);
  const std::vector<Real> hs{R("-0.04"), R("-0.02"), R("-0.005")};
  Oracle oc(H);
  ReductionContext cc(H);
  int checked = 0;
  for (int it = 0; it < 50; ++it) {
    int i = di(rng), j = 2 * dj(rng) + 1;
    IntegralExpr e = cc.closed(i, j);
    for (const auto& h : hs) {
      Real got = oc.evaluate(e, h), want = oc.integral(Region::closed, i, j, h);
      CHECK_MESSAGE(rel(got, want) < R("1e-40"), "I_{" << i << "," << j << "} at " << h);
      ++checked;
    }
  }
  CHECK(checked == 150);

  std::vector<SeparationLine> lines{SeparationLine::pi(), SeparationLine::half_pi(1), generic_line()};
  std::uniform_int_distribution<int> dj2(0, 5);
  for (const auto& L : lines) {
    Oracle o(H, L);
    ReductionContext ctx(H, L);
    for (int it = 0; it < 17; ++it) {
      int i = di(rng), j = dj2(rng);
      IntegralExpr raw = ctx.open(i, j), norm = ctx.normalize(raw);
      Real h = hs[it % 3];
      Real want = o.integral(Region::open_plus, i, j, h);
      CHECK_MESSAGE(rel(o.evaluate(raw, h), want) < R("1e-40"), L.kind_name() << " I+_{" << i << "," << j << "}");
      CHECK_MESSAGE(rel(o.evaluate(norm, h), want) < R("1e-40"), L.kind_name() << " I+_{" << i << "," << j << "}");
      for (int s = 0; s < 4; ++s) {
        IntegralExpr kb = ctx.boundary(s + 1, 2 * (it % 3) + 1);
        CHECK(rel(o.evaluate(kb, h), o.K(s + 1, 2 * (it % 3) + 1, h)) < R("1e-40"));
      }
    }
  }
}

TEST_CASE("Green and derivative identities") {
  Hamiltonian H = Hamiltonian::quintic();
  Oracle o(H);
  Real h = R("-0.03");
  for (int i = 0; i < 4; ++i)
    for (int j : {-1, 1, 3}) {
      Real lhs = o.dy_integral(i + 1, j + 1, h);
      Real rhs = -Real(i + 1) / (j + 2) * o.integral(Region::closed, i, j + 2, h);
      CHECK(rel(lhs, rhs) < R("1e-50"));
    }

  const Real d = R("1e-20");
  for (int k = 0; k < 10; ++k) {
    Real hk = R("-0.048") + Real(k) * R("0.0047");
    for (int i = 0; i < 4; ++i) {
      Real num = (o.integral(Region::closed, i, 1, hk + d) - o.integral(Region::closed, i, 1, hk - d)) / (2 * d);
      CHECK(rel(num, o.integral(Region::closed, i, -1, hk)) < R("1e-8"));
    }
  }
  // open arcs pick up the moving endpoints
  Oracle g(H, generic_line());
  for (Real hk : {R("-0.04"), R("-0.01")})
    for (int i = 0; i < 4; ++i) {
      Real num = (g.integral(Region::open_plus, i, 1, hk + d) - g.integral(Region::open_plus, i, 1, hk - d)) / (2 * d);
      CHECK(rel(num, g.integral(Region::open_plus, i, -1, hk) + g.J(i, hk)) < R("1e-8"));
    }
}

TEST_CASE("Picard-Fuchs residuals") {
  Hamiltonian H = Hamiltonian::quintic();
  auto hom = pf_residual(Oracle(H), homogeneous_system(H), {R("-0.02"), R("-0.045"), R("-0.001")});
  for (const auto& r : hom) {
    CHECK(r.residual_identity < R("1e-8"));
    CHECK(r.residual_difference < R("1e-8"));
  }
  for (const auto& L : {SeparationLine::pi(), SeparationLine::half_pi(1), generic_line()}) {
    auto res = pf_residual(Oracle(H, L), inhomogeneous_system(H, L), {R("-0.01"), R("-0.03")});
    for (const auto& r : res) CHECK_MESSAGE(r.residual_identity < R("1e-8"), L.kind_name() << " at " << r.h);
  }
  // other Hamiltonians
  for (const auto& K : {Hamiltonian({Rational(-1), Rational(0), Rational(1, 3)}),
                        Hamiltonian({Rational(0), Rational(1, 2), Rational(-1, 3)}),
                        Hamiltonian({Rational(0), Rational(1), Rational(-2), Rational(1, 2), Rational(1, 5)})}) {
    Oracle ok(K);
    const auto& A = ok.annulus();
    std::vector<Real> hs;
    for (int k = 1; k <= 10; ++k) hs.push_back(A.alpha + (A.beta - A.alpha) * k / 11);
    for (const auto& r : pf_residual(ok, homogeneous_system(K), hs))
      CHECK_MESSAGE(r.residual_identity < R("1e-8"), K.to_string() << " at " << r.h);
  }
}

TEST_CASE("expansion residual and csv") {
  Series s = Series::constant(ParamPoly(ExactScalar(3)), 0, -1);
  auto r = expansion_residual(s, [](const Real&) { return Real(3); }, R("-1e-3"), R("-1e-5"));
  CHECK(r.max_deviation == 0);
  Series lin = Series::constant(ParamPoly(ExactScalar(1)), 0, -1);
  r = expansion_residual(lin, [](const Real& h) { return 1 + h * h * h; }, R("-1e-3"), R("-1e-5"));
  CHECK(std::abs(r.slope - 3) < 1e-6);
  std::ostringstream os;
  write_csv(os, r.table, 10);
  CHECK(os.str().rfind("h,value\n", 0) == 0);
}
