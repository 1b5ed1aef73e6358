#include <doctest.h>

#include "pfkit/reduction.hpp"

using namespace pfkit;

namespace {
PolyP P(std::vector<ExactScalar> c) {
  std::vector<ParamPoly> v;
  for (auto& x : c) v.emplace_back(x);
  return PolyP(std::move(v));
}
ExactScalar r(long a, long b = 1) { return ExactScalar(Rational(a, b)); }
ParamPoly v(const char* name) { return ParamPoly::var(name); }
// copy, so range-for does not iterate a dead temporary
IntegralExpr::Terms terms_of(const IntegralExpr& e) { return e.terms(); }
}  // namespace

TEST_CASE("closed reductions for the quintic") {
  Hamiltonian H = Hamiltonian::quintic();
  CHECK(reduce_closed(H, 2, 2).is_zero());
  CHECK(reduce_closed(H, 4, 1) == IntegralExpr::symbol(BasisSymbol::I(3)));

  IntegralExpr e03 = IntegralExpr::symbol(BasisSymbol::I(0), P({0, r(30, 17)})) +
                     IntegralExpr::symbol(BasisSymbol::I(3), P({r(3, 34)}));
  CHECK(reduce_closed(H, 0, 3) == e03);

  IntegralExpr e13 = IntegralExpr::symbol(BasisSymbol::I(0), P({0, r(15, 323)})) +
                     IntegralExpr::symbol(BasisSymbol::I(1), P({0, r(30, 19)})) +
                     IntegralExpr::symbol(BasisSymbol::I(3), P({r(105, 1292)}));
  CHECK(reduce_closed(H, 1, 3) == e13);

  // only basis symbols remain
  ReductionContext ctx(H);
  for (int i = 0; i < 12; ++i)
    for (int j = 0; j < 8; ++j)
      for (const auto& [s, c] : terms_of(ctx.closed(i, j))) {
        CHECK(s.family == Family::closed);
        CHECK(s.i <= 3);
      }
  // idempotence
  IntegralExpr e = ctx.closed(7, 5);
  CHECK(ctx.normalize(e) == e);
}

TEST_CASE("boundary reductions") {
  Hamiltonian H = Hamiltonian::quintic();
  CHECK(reduce_boundary(H, SeparationLine::pi(), 5, 0) == IntegralExpr::symbol(BasisSymbol::Kt(3), P({r(5, 4)})));
  CHECK(reduce_boundary(H, SeparationLine::pi(), 3, 2).is_zero());
  CHECK(reduce_boundary(H, SeparationLine::half_pi(1), 2, 3) ==
        IntegralExpr::symbol(BasisSymbol::Kt(0), P({r(1, 10), r(2)})));
  CHECK(reduce_boundary(H, SeparationLine::half_pi(1), 2, 4).is_zero());

  // degree bound deg <= (i + j - s)/n for every line kind
  SeparationLine g = SeparationLine::through_anchor(H, Rational(11, 10), 1, 0);
  for (const SeparationLine& L : {SeparationLine::pi(), SeparationLine::half_pi(1), g}) {
    ReductionContext ctx(H, L);
    for (int i = 0; i < 9; ++i)
      for (int j = 0; j < 9; ++j)
        for (const auto& [s, c] : terms_of(ctx.boundary(i, j))) {
          REQUIRE(s.family == Family::boundary);
          // the vertical line only obeys the weighted bound y^2 ~ h
          bool ok = L.kind == ThetaKind::half_pi ? 2 * c.degree() <= j - 1 : 5 * c.degree() <= i + j - (s.i + 1);
          CHECK_MESSAGE(ok,
                        L.kind_name() << " K_{" << i << "," << j << "} -> " << s.to_string());
        }
  }
}

TEST_CASE("open reductions keep the index bound") {
  Hamiltonian H = Hamiltonian::quintic();
  CHECK(reduce_open(H, SeparationLine::half_pi(1), 0, 1) == IntegralExpr::symbol(BasisSymbol::Iplus(0)));
  CHECK(reduce_open(H, SeparationLine::half_pi(1), 3, 0) ==
        IntegralExpr::symbol(BasisSymbol::K(4, 0), P({r(1, 4)})));
  ReductionContext ctx(H, SeparationLine::half_pi(1));
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 6; ++j) {
      if (i + j == 0) continue;
      for (const auto& [s, c] : terms_of(ctx.open(i, j))) {
        if (s.family == Family::raw_k) CHECK(2 * s.i + 5 * s.j <= 2 * i + 5 * j + 2);
        if (s.family == Family::open) CHECK(s.i <= 3);
      }
    }
}

TEST_CASE("first-order Melnikov function of the smooth quartic family") {
  Hamiltonian H = Hamiltonian::quintic();
  PlanarPoly Pp = PlanarPoly::generic("a", 4, "1"), Qq = PlanarPoly::generic("b", 4, "1");
  IntegralExpr raw = raw_closed_melnikov(H, Pp, Qq);
  CHECK(raw.terms().size() == 6);
  CHECK(raw.coeff(BasisSymbol::Iraw(0, 1)) == PolyP(v("a101") + v("b011")));
  CHECK(raw.coeff(BasisSymbol::Iraw(1, 1)) == PolyP(ExactScalar(2) * v("a201") + v("b111")));
  CHECK(raw.coeff(BasisSymbol::Iraw(3, 1)) == PolyP(ExactScalar(4) * v("a401") + v("b311")));
  CHECK(raw.coeff(BasisSymbol::Iraw(0, 3)) == PolyP(ExactScalar(Rational(1, 3)) * v("a121") + v("b031")));
  CHECK(raw.coeff(BasisSymbol::Iraw(1, 3)) == PolyP(ExactScalar(Rational(2, 3)) * v("a221") + v("b131")));

  // smooth pair: open and boundary parts cancel
  for (const SeparationLine& L : {SeparationLine::pi(), SeparationLine::half_pi(1)}) {
    IntegralExpr m = assemble_melnikov(H, L, PerturbationPair::smooth(Pp, Qq));
    CHECK(m == ReductionContext(H).normalize(raw));
  }
}

TEST_CASE("piecewise quartic with the line y = 0 couples K_{1,0} and K_{4,0}") {
  Hamiltonian H = Hamiltonian::quintic();
  PerturbationPair pp{PlanarPoly::generic("a", 4, "p"), PlanarPoly::generic("b", 4, "p"),
                      PlanarPoly::generic("a", 4, "m"), PlanarPoly::generic("b", 4, "m")};
  IntegralExpr m = assemble_melnikov(H, SeparationLine::pi(), pp);
  std::set<BasisSymbol> want{BasisSymbol::I(0), BasisSymbol::I(1), BasisSymbol::I(2), BasisSymbol::I(3),
                             BasisSymbol::Kt(0), BasisSymbol::Kt(1), BasisSymbol::Kt(2), BasisSymbol::Kt(3)};
  std::set<BasisSymbol> got;
  for (const auto& [s, c] : m.terms()) got.insert(s);
  CHECK(got == want);
  PolyP k1 = m.coeff(BasisSymbol::Kt(0)), k4 = m.coeff(BasisSymbol::Kt(3));
  CHECK(k1.degree() == 2);
  CHECK(k4.degree() == 1);
  CHECK(k1[2] == ExactScalar(48) * k4[1]);
  CHECK(m.coeff(BasisSymbol::I(2)).degree() == 0);
  CHECK(m.coeff(BasisSymbol::I(0)).degree() == 1);
}

TEST_CASE("Francoise decomposition") {
  Hamiltonian H = Hamiltonian::quintic();
  // d(xy): exact
  auto fx = francoise_decompose(H, PlanarPoly::parse("y"), PlanarPoly::parse("x"));
  CHECK(fx.r.is_zero());
  CHECK(fx.remainder_ok);
  // dH itself is exact as well; constants are normalized away
  PlanarPoly h = PlanarPoly::from_H(H);
  auto fh = francoise_decompose(H, h.dx(), h.dy());
  CHECK(fh.r.is_zero());
  // x dH is not exact, and r = x
  auto fxh = francoise_decompose(H, PlanarPoly::parse("x") * h.dx(), PlanarPoly::parse("x") * h.dy());
  CHECK(fxh.r == PlanarPoly::parse("x"));
  CHECK_THROWS_AS(francoise_decompose(H, PlanarPoly::parse("y"), PlanarPoly()), Error);

  // kernel of the first-order function of the quartic family
  std::map<ParamId, ParamPoly> kernel{
      {param_id("a121"), ParamPoly::parse("-3*b031")}, {param_id("b111"), ParamPoly::parse("-2*a201")},
      {param_id("a101"), ParamPoly::parse("-b011")},   {param_id("b131"), ParamPoly::parse("-2/3*a221")},
      {param_id("b211"), ParamPoly::parse("-3*a301")}, {param_id("b311"), ParamPoly::parse("-4*a401")}};
  PlanarPoly P1 = PlanarPoly::generic("a", 4, "1").substitute(kernel);
  PlanarPoly Q1 = PlanarPoly::generic("b", 4, "1").substitute(kernel);
  auto f1 = francoise_decompose(H, Q1, -P1);
  PlanarPoly A4 = PlanarPoly::parse("a131 + 4*b041");
  PlanarPoly want = PlanarPoly::parse("-a111*x - 2*b021*x - a211*x^2 - b121*x^2 - a311*x^3 - 2/3*b221*x^3") -
                    A4 * PlanarPoly::parse("1/3*x^6 - 2/5*x^5 + x*y^2");
  CHECK(f1.r == want);

  auto m2 = second_order_melnikov(H, P1, Q1, PlanarPoly::generic("a", 4, "2"), PlanarPoly::generic("b", 4, "2"));
  // 25 slots: I_{0..9,1}, I_{0..7,3}, I_{0..5,5}, I_{0,7}; the I_{3,5} slot comes out zero
  std::set<BasisSymbol> slots;
  for (int i = 0; i <= 9; ++i) slots.insert(BasisSymbol::Iraw(i, 1));
  for (int i = 0; i <= 7; ++i) slots.insert(BasisSymbol::Iraw(i, 3));
  for (int i = 0; i <= 5; ++i) slots.insert(BasisSymbol::Iraw(i, 5));
  slots.insert(BasisSymbol::Iraw(0, 7));
  REQUIRE(slots.size() == 25);
  for (const auto& [s, c] : m2.raw.terms()) CHECK(slots.count(s) == 1);
  CHECK(m2.raw.terms().size() == 24);
  CHECK(m2.raw.coeff(BasisSymbol::Iraw(3, 5)).is_zero());
  CHECK(m2.raw.coeff(BasisSymbol::Iraw(0, 7)).degree() == 0);
  CHECK(m2.reduced.terms().size() == 4);
  CHECK(m2.reduced.coeff(BasisSymbol::I(0)).degree() == 3);
  CHECK_THROWS_AS(second_order_melnikov(H, PlanarPoly::generic("a", 4, "1"), PlanarPoly::generic("b", 4, "1"),
                                        PlanarPoly(), PlanarPoly()),
                  Error);
}
