#include <doctest.h>

#include "pfkit/series.hpp"

#include <random>

using namespace pfkit;

static ExactScalar S(const char* s) { return ExactScalar::parse(s); }

TEST_CASE("radical products fold by squarefree part") {
  CHECK(ExactScalar::radical(2) * ExactScalar::radical(5) == ExactScalar::radical(10));
  CHECK(ExactScalar::radical(10) * ExactScalar::radical(2) == ExactScalar::radical(5, 2));
  CHECK((S("25/84*sqrt(2)") + S("125/504*sqrt(2)")).to_string() == "275/504*sqrt(2)");
  CHECK(ExactScalar::sqrt_of(Rational(43923, 500000)).to_string() == "121/1000*sqrt(6)");
}

TEST_CASE("named constants multiply up to the degree cap") {
  ExactScalar k1k3 = ExactScalar::symbol(Sym::k1) * ExactScalar::symbol(Sym::k3);
  ExactScalar sq = k1k3 * k1k3;
  CHECK(sq.to_string() == "k1^2*k3^2");
  CHECK_THROWS_AS(sq * ExactScalar::symbol(Sym::k1), Error);
  ExactScalar three = ExactScalar::symbol(Sym::k1) * ExactScalar::symbol(Sym::k2);
  CHECK_THROWS_AS(three * ExactScalar::symbol(Sym::k3), Error);
}

TEST_CASE("string round trip") {
  for (const char* s : {"25/84", "25/84*sqrt(2)", "k1", "k1^2*k3^2", "-3/5*sqrt(10)*k4 + 2", "1/2 - sqrt(2)"}) {
    ExactScalar x = S(s);
    CHECK(ExactScalar::parse(x.to_string()) == x);
  }
  CHECK(S("k1^2*k3^2").to_string() == "k1^2*k3^2");
  CHECK_THROWS_AS(S("3/0x"), Error);
}

TEST_CASE("multiquadratic inverse") {
  ExactScalar x = S("1 + sqrt(2) - 3/7*sqrt(5) + sqrt(10)");
  CHECK(x * x.inverse() == ExactScalar(1));
  CHECK_THROWS_AS(ExactScalar::symbol(Sym::k1).inverse(), Error);
}

static ExactScalar random_scalar(std::mt19937& rng, bool with_symbol = true) {
  std::uniform_int_distribution<int> d(-9, 9);
  ExactScalar out;
  const std::uint64_t rads[] = {1, 2, 5, 10};
  for (auto r : rads) out += ExactScalar::radical(r, Number(Rational(d(rng), 1 + std::abs(d(rng)))));
  if (with_symbol && d(rng) > 4) out += ExactScalar::symbol(Sym::k1, Number(Rational(d(rng))));
  return out;
}

TEST_CASE("ring axioms on random scalars") {
  std::mt19937 rng(7);
  for (int it = 0; it < 1000; ++it) {
    ExactScalar a = random_scalar(rng), b = random_scalar(rng, false), c = random_scalar(rng, false);
    CHECK((a + b) + c == a + (b + c));
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a * b == b * a);
  }
}

TEST_CASE("numeric evaluation agrees with float composition") {
  std::mt19937 rng(11);
  ConstantTable t;
  t.set(Sym::k1, Real("-0.5"));
  for (int it = 0; it < 50; ++it) {
    ExactScalar a = random_scalar(rng), b = random_scalar(rng);
    Real direct = (a * b).to_real(&t);
    Real composed = a.to_real(&t) * b.to_real(&t);
    CHECK(abs(direct - composed) < Real("1e-50") * (1 + abs(direct)));
  }
}

TEST_CASE("polynomial ring axioms") {
  std::mt19937 rng(3);
  auto rp = [&] {
    std::vector<ExactScalar> c;
    for (int i = 0; i < 4; ++i) c.push_back(random_scalar(rng, false));
    return Poly(c);
  };
  for (int it = 0; it < 200; ++it) {
    Poly a = rp(), b = rp(), c = rp();
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
  }
  Poly p({ExactScalar(0), ExactScalar(20), ExactScalar(400)});  // 20h(20h+1)
  Poly q({ExactScalar(0), ExactScalar(0), ExactScalar(1)});
  CHECK(poly_gcd(p, q) == Poly({ExactScalar(0), ExactScalar(1)}));
}

TEST_CASE("series arithmetic") {
  Rational z = 0;
  Series one_plus = Series::from_poly(Poly({ExactScalar(1), ExactScalar(1)}), z, -1);
  Series one_minus = Series::from_poly(Poly({ExactScalar(1), ExactScalar(-1)}), z, -1);
  Series prod = one_plus * one_minus;
  CHECK(prod == Series::from_poly(Poly({ExactScalar(1), ExactScalar(0), ExactScalar(-1)}), z, -1));

  Series a(z, -1, Frac(4));
  a.add(Frac(3, 4), 0, ParamPoly(1));
  Series h = Series::from_poly(Poly::monomial(ExactScalar(1), 1), z, -1);
  Series ah = a * h;
  CHECK(ah.coeff(Frac(7, 4)) == ParamPoly(-1));  // h|h|^{3/4} = -|h|^{7/4} for h<0
  CHECK(ah.display_sign(Frac(7, 4), Frac(3, 4)) == -1);

  Series hl(z, -1, Frac(3));
  hl.add(Frac(1), 1, ParamPoly(-1));  // h ln|h|
  Series h2l = hl * h;
  CHECK(h2l.coeff(Frac(2), 1) == ParamPoly(1));
  CHECK_THROWS_AS(hl * hl, Error);
}

TEST_CASE("series reversion") {
  Rational z = 0;
  Series t(z, -1, Frac(6));
  t.add(Frac(1), 0, ParamPoly(1));
  CHECK(series_reversion(t) == t);

  Series s(z, -1, Frac(5));
  s.add(Frac(1), 0, ParamPoly(1));
  s.add(Frac(2), 0, ParamPoly(-1));
  Series r = series_reversion(s);
  // brute-force coefficient solve: x = t + c2 t^2 + ..., (x - x^2) = t
  std::vector<Rational> c = {0, 1};
  for (int n = 2; n < 5; ++n) {
    // [t^n](x - x^2) = c_n - sum_{i+j=n} c_i c_j = 0
    Rational acc = 0;
    for (int i = 1; i < n; ++i) acc += c[i] * c[n - i];
    c.push_back(acc);
  }
  for (int n = 1; n < 5; ++n) CHECK(r.scalar_coeff(Frac(n)) == ExactScalar(c[n]));
  CHECK(c[4] == 5);
}

TEST_CASE("reversion of the inner-branch relation has leading sqrt(2)") {
  // t = x (1/4 - x/5)^{1/4} = (sqrt2/2) x (1 - 4x/5)^{1/4}
  Rational z = 0;
  Series w(z, -1, Frac(8));
  w.add(Frac(0), 0, ParamPoly(1));
  w.add(Frac(1), 0, ParamPoly(ExactScalar(Rational(-4, 5))));
  Series root = series_pow(w, Rational(1, 4), ExactScalar(1));
  Series x(z, -1, Frac(8));
  x.add(Frac(1), 0, ParamPoly(ExactScalar::sqrt_of(Rational(1, 2))));
  Series rel = x * root;
  Series inv = series_reversion(rel);
  CHECK(inv.scalar_coeff(Frac(1)) == ExactScalar::radical(2));
}

TEST_CASE("double reversion is the identity") {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> d(-6, 6);
  for (int it = 0; it < 100; ++it) {
    Series s(Rational(0), -1, Frac(7, 2));
    s.add(Frac(1, 2), 0, ParamPoly(ExactScalar(Rational(d(rng) == 0 ? 1 : d(rng) == 0 ? 2 : 3, 1 + std::abs(d(rng))))));
    for (int k = 2; k < 7; ++k) s.add(Frac(k, 2), 0, ParamPoly(ExactScalar(Rational(d(rng), 1 + std::abs(d(rng))))));
    Series back = series_reversion(series_reversion(s));
    CHECK_MESSAGE(back == s, s.to_string() << " vs " << back.to_string());
  }
}
