#include "pfkit/hamiltonian.hpp"

#include <algorithm>

namespace pfkit {

namespace {

Real to_r(const Rational& q) { return Number(q).to_real(); }

const Real& root_eps() {
  static const Real e("1e-105");
  return e;
}

Rational eval_exact(const Poly& p, const Rational& x) {
  Rational acc = 0;
  for (size_t i = p.coeffs().size(); i-- > 0;) acc = acc * x + p.coeffs()[i].rational();
  return acc;
}

bool rational_coeffs(const Poly& p) {
  for (const auto& c : p.coeffs())
    if (!(c.is_rational() && c.exact())) return false;
  return true;
}

Poly exact_div(const Poly& a, const Poly& b) { return poly_divmod(a, b).first; }

int sign_at(const Poly& p, const Rational& x) { return sgn(eval_exact(p, x)); }

// Safeguarded Newton on a sign-changing bracket.
template <class Fn, class DFn>
Real bracket_newton(Fn f, DFn df, Real a, Real b) {
  Real fa = f(a), fb = f(b);
  if (fa == 0) return a;
  if (fb == 0) return b;
  if ((fa > 0) == (fb > 0)) throw Error(ErrorKind::NoRoot, "no sign change on bracket");
  Real x = (a + b) / 2;
  Real last_fx = abs(fa) < abs(fb) ? abs(fb) : abs(fa);
  for (int it = 0; it < 4000; ++it) {
    Real fx = f(x);
    if (fx == 0) return x;
    if ((fx > 0) == (fa > 0)) {
      a = x;
      fa = fx;
    } else {
      b = x;
    }
    Real tol = root_eps() * (1 + abs(x));
    if (b - a <= tol) return x;
    Real d = df(x);
    Real xn = (a + b) / 2;
    // Newton while the residual keeps halving
    if (d != 0 && abs(fx) < last_fx / 2) {
      Real xt = x - fx / d;
      if (xt > a && xt < b) {
        if (abs(xt - x) <= tol) return xt;
        xn = xt;
      }
    }
    last_fx = abs(fx);
    x = xn;
  }
  throw Error(ErrorKind::RootIsolationFailure, "root refinement did not converge");
}

std::optional<Rational> recognise_rational(const Poly& p, const Real& x) {
  if (!rational_coeffs(p)) return std::nullopt;
  Rational q = best_rational(x, Integer("1000000000000000"));
  if (abs(to_r(q) - x) > Real("1e-60") * (1 + abs(x))) return std::nullopt;
  if (sgn(eval_exact(p, q)) == 0) return q;
  return std::nullopt;
}

// Roots of a squarefree rational polynomial by Sturm bisection.
void isolate(const Poly& g, int mult, std::vector<RealRoot>& out) {
  std::vector<Poly> sturm{g, g.derivative()};
  while (sturm.back().degree() > 0) {
    Poly r = poly_divmod(sturm[sturm.size() - 2], sturm.back()).second;
    if (r.is_zero()) break;
    sturm.push_back(-r);
  }
  auto changes = [&](const Rational& x) {
    int n = 0, prev = 0;
    for (const auto& p : sturm) {
      int s = sign_at(p, x);
      if (s == 0) continue;
      if (prev != 0 && s != prev) ++n;
      prev = s;
    }
    return n;
  };
  Rational B = 1;
  Rational lead = g.lead().rational();
  for (const auto& c : g.coeffs()) {
    Rational v = abs(c.rational() / lead);
    if (v + 1 > B) B = v + 1;
  }
  std::vector<std::pair<Rational, Rational>> todo{{-B, B}};
  std::vector<std::pair<Rational, Rational>> single;
  int guard = 0;
  while (!todo.empty()) {
    if (++guard > 100000) throw Error(ErrorKind::RootIsolationFailure, "Sturm bisection did not separate roots");
    auto [a, b] = todo.back();
    todo.pop_back();
    int n = changes(a) - changes(b);
    if (n == 0) continue;
    if (n == 1) {
      single.emplace_back(a, b);
      continue;
    }
    Rational mid = (a + b) / 2;
    for (int k = 3; sign_at(g, mid) == 0; ++k) mid = a + (b - a) * Rational(k, 2 * k + 1);
    todo.emplace_back(a, mid);
    todo.emplace_back(mid, b);
  }
  for (auto& [a, b] : single) {
    RealRoot r;
    r.multiplicity = mult;
    if (sign_at(g, b) == 0) {
      r.exact = b;
      r.x = to_r(b);
    } else {
      r.x = bracket_newton([&](const Real& x) { return poly_eval_real(g, x); },
                           [&](const Real& x) { return poly_eval_real(g.derivative(), x); }, to_r(a), to_r(b));
      r.exact = recognise_rational(g, r.x);
      if (r.exact) r.x = to_r(*r.exact);
    }
    out.push_back(r);
  }
}

// Taylor coefficients of P about x0.
std::vector<ExactScalar> taylor(const Poly& P, const ExactScalar& x0) {
  std::vector<ExactScalar> c = P.coeffs();
  int n = static_cast<int>(c.size()) - 1;
  for (int i = 0; i < n; ++i)
    for (int j = n - 1; j >= i; --j) c[j] += x0 * c[j + 1];
  return c;
}

// Exact q^(1/n) when it lives in a quadratic extension.
std::optional<ExactScalar> rational_root(const Rational& q, int n) {
  if (sgn(q) <= 0) return std::nullopt;
  auto iroot = [](const Integer& v, unsigned k) -> std::optional<Integer> {
    Integer r;
    if (mpz_root(r.get_mpz_t(), v.get_mpz_t(), k) != 0) return r;
    return std::nullopt;
  };
  auto nth = [&](unsigned k) -> std::optional<Rational> {
    auto a = iroot(q.get_num(), k);
    auto b = iroot(q.get_den(), k);
    if (a && b) return Rational(*a, *b);
    return std::nullopt;
  };
  if (auto r = nth(n)) return ExactScalar(*r);
  if (n % 2 == 0)
    if (auto r = nth(n / 2)) return ExactScalar::sqrt_of(*r);
  return std::nullopt;
}

ExactScalar as_scalar(const Real& x, const std::optional<Rational>& exact) {
  return exact ? ExactScalar(*exact) : ExactScalar(Number(x));
}

// Real roots of a polynomial with possibly approximate coefficients on [a, b].
std::vector<Real> numeric_roots(const Poly& p, const Real& a, const Real& b) {
  Poly dp = p.derivative();
  auto f = [&](const Real& x) { return poly_eval_real(p, x); };
  const int N = 512;
  std::vector<Real> out;
  Real prev_x = a, prev_f = f(a);
  if (abs(prev_f) < Real("1e-90")) out.push_back(a);
  for (int i = 1; i <= N; ++i) {
    Real x = a + (b - a) * i / N;
    Real fx = f(x);
    if (abs(fx) < Real("1e-90")) {
      if (out.empty() || abs(out.back() - x) > Real("1e-50")) out.push_back(x);
    } else if (prev_f != 0 && abs(prev_f) >= Real("1e-90") && (fx > 0) != (prev_f > 0)) {
      out.push_back(bracket_newton(f, [&](const Real& t) { return poly_eval_real(dp, t); }, prev_x, x));
    }
    prev_x = x;
    prev_f = fx;
  }
  return out;
}

Poly level_poly(const Hamiltonian& H, const SeparationLine& line) {
  if (line.kind != ThetaKind::generic) return H.F();
  ExactScalar k2 = line.tan_theta * line.tan_theta;
  Rational c = line.c;
  // k^2 (x - c)^2 / 2
  Poly q(std::vector<ExactScalar>{ExactScalar(c * c), ExactScalar(-2 * c), ExactScalar(1)});
  return H.F() + q.scaled(k2 * ExactScalar(Rational(1, 2)));
}

}  // namespace

// ---- Hamiltonian -------------------------------------------------------------

Hamiltonian::Hamiltonian(std::vector<Rational> b) : b_(std::move(b)) {
  while (!b_.empty() && sgn(b_.back()) == 0) b_.pop_back();
  if (b_.empty()) throw Error(ErrorKind::InvalidInput, "potential F is identically zero");
  std::vector<ExactScalar> c{ExactScalar()};
  for (const auto& v : b_) c.emplace_back(v);
  F_ = Poly(std::move(c));
}

Hamiltonian Hamiltonian::quintic() { return Hamiltonian({0, 0, 0, Rational(-1, 4), Rational(1, 5)}); }

Rational Hamiltonian::F(const Rational& x) const { return eval_exact(F_, x); }
Real Hamiltonian::F(const Real& x) const { return poly_eval_real(F_, x); }
Real Hamiltonian::dF(const Real& x) const { return poly_eval_real(F_.derivative(), x); }

std::string Hamiltonian::to_string() const { return "y^2/2 + " + poly_to_string(F_, "x"); }

// ---- separation line ---------------------------------------------------------

SeparationLine SeparationLine::through_anchor(const Hamiltonian& H, const Rational& x_a, const Rational& c,
                                              const Rational& h0) {
  if (x_a == c) throw Error(ErrorKind::InvalidInput, "anchor on the vertical through c");
  Rational v = -2 * (H.F(x_a) - h0);
  if (sgn(v) <= 0) throw Error(ErrorKind::LevelSetNotFound, "anchor abscissa is outside the level set");
  ExactScalar y_a = ExactScalar::sqrt_of(v);
  return generic(y_a * ExactScalar(1 / Rational(x_a - c)), c);
}

int SeparationLine::crossing_sign(const Hamiltonian& H, const Real& x, const Real& y) const {
  Real v;
  switch (kind) {
    case ThetaKind::pi:
      v = -H.dF(x);
      break;
    case ThetaKind::half_pi:
      v = y;
      break;
    case ThetaKind::generic:
      v = y + H.dF(x) / tan_theta.to_real();
      break;
  }
  return v > 0 ? 1 : (v < 0 ? -1 : 0);
}

std::string SeparationLine::kind_name() const {
  switch (kind) {
    case ThetaKind::pi:
      return "pi";
    case ThetaKind::half_pi:
      return "half_pi";
    case ThetaKind::generic:
      return "generic";
  }
  return "?";
}

// ---- critical points ---------------------------------------------------------

const char* critical_kind_name(CriticalKind k) {
  switch (k) {
    case CriticalKind::center:
      return "center";
    case CriticalKind::hyperbolic_saddle:
      return "hyperbolic-saddle";
    case CriticalKind::nilpotent_saddle:
      return "nilpotent-saddle";
    case CriticalKind::cusp:
      return "cusp";
    case CriticalKind::degenerate:
      return "degenerate";
  }
  return "?";
}

std::vector<RealRoot> real_roots(const Poly& p) {
  if (!rational_coeffs(p)) throw Error(ErrorKind::Unsupported, "real_roots needs rational coefficients");
  std::vector<RealRoot> out;
  if (p.degree() < 1) return out;
  // Yun's squarefree decomposition
  Poly f = poly_monic(p);
  Poly a = poly_gcd(f, f.derivative());
  Poly b = exact_div(f, a);
  Poly d = exact_div(f.derivative(), a) - b.derivative();
  for (int i = 1; b.degree() > 0; ++i) {
    Poly ai = poly_gcd(b, d);
    if (ai.degree() > 0) isolate(ai, i, out);
    b = exact_div(b, ai);
    d = exact_div(d, ai) - b.derivative();
    if (i > 64) throw Error(ErrorKind::RootIsolationFailure, "squarefree decomposition did not terminate");
  }
  std::sort(out.begin(), out.end(), [](const RealRoot& u, const RealRoot& v) { return u.x < v.x; });
  return out;
}

std::vector<CriticalDatum> critical_data(const Hamiltonian& H) {
  std::vector<CriticalDatum> out;
  for (const auto& r : real_roots(H.F().derivative())) {
    CriticalDatum c;
    c.x = r.x;
    c.x_exact = r.exact;
    c.multiplicity = r.multiplicity;
    if (r.exact) {
      c.h_exact = H.F(*r.exact);
      c.h = to_r(*c.h_exact);
    } else {
      c.h = H.F(r.x);
    }
    Poly d = H.F();
    for (int k = 0; k <= r.multiplicity; ++k) d = d.derivative();
    int s = r.exact ? sgn(eval_exact(d, *r.exact)) : (poly_eval_real(d, r.x) > 0 ? 1 : -1);
    int m = r.multiplicity;
    if (m % 2 == 0)
      c.kind = CriticalKind::cusp;
    else if (m == 1)
      c.kind = s > 0 ? CriticalKind::center : CriticalKind::hyperbolic_saddle;
    else
      c.kind = s > 0 ? CriticalKind::degenerate : CriticalKind::nilpotent_saddle;
    out.push_back(c);
  }
  return out;
}

PeriodAnnulus period_annulus(const Hamiltonian& H, size_t center_index) {
  auto cd = critical_data(H);
  if (center_index >= cd.size()) throw Error(ErrorKind::InvalidInput, "critical point index out of range");
  const CriticalDatum& c = cd[center_index];
  if (c.kind != CriticalKind::center && c.kind != CriticalKind::degenerate)
    throw Error(ErrorKind::InvalidInput, "critical point is not a center");
  PeriodAnnulus A;
  A.center = c;
  A.alpha = c.h;
  std::optional<CriticalDatum> best;
  if (center_index > 0) {
    A.left = cd[center_index - 1].x;
    best = cd[center_index - 1];
  }
  if (center_index + 1 < cd.size()) {
    A.right = cd[center_index + 1].x;
    if (!best || cd[center_index + 1].h < best->h) best = cd[center_index + 1];
  }
  if (best) {
    A.beta = best->h;
    A.beta_exact = best->h_exact;
    A.boundary = best;
  } else {
    A.beta = std::numeric_limits<Real>::infinity();
  }
  return A;
}

PeriodAnnulus default_annulus(const Hamiltonian& H) {
  auto cd = critical_data(H);
  std::optional<PeriodAnnulus> unbounded;
  for (size_t i = 0; i < cd.size(); ++i) {
    if (cd[i].kind != CriticalKind::center) continue;
    PeriodAnnulus A = period_annulus(H, i);
    if (A.boundary) return A;
    if (!unbounded) unbounded = A;
  }
  if (unbounded) return *unbounded;
  throw Error(ErrorKind::HypothesisViolated, "no center, hence no period annulus");
}

PeriodAnnulus annulus_containing(const Hamiltonian& H, const Rational& h0) {
  auto cd = critical_data(H);
  Real h = to_r(h0);
  for (size_t i = 0; i < cd.size(); ++i) {
    if (cd[i].kind != CriticalKind::center) continue;
    PeriodAnnulus A = period_annulus(H, i);
    if (A.alpha < h && h <= A.beta) return A;
  }
  throw Error(ErrorKind::LevelSetNotFound, "no period annulus contains h0 = " + h0.get_str());
}

std::pair<Real, Real> turning_points(const Hamiltonian& H, const PeriodAnnulus& A, const Real& h) {
  if (!(h > A.alpha) || h > A.beta) throw Error(ErrorKind::OutOfRange, "energy outside the period annulus");
  auto f = [&](const Real& x) { return H.F(x) - h; };
  auto df = [&](const Real& x) { return H.dF(x); };
  auto side = [&](const std::optional<Real>& crit, int dir) {
    Real far;
    if (crit) {
      far = *crit;
      if (f(far) == 0 || (A.boundary && h == A.beta && abs(far - A.boundary->x) < Real("1e-100"))) return far;
    } else {
      Real step = 1;
      far = A.center.x + dir * step;
      while (f(far) < 0) {
        step *= 2;
        far = A.center.x + dir * step;
        if (step > Real("1e30")) throw Error(ErrorKind::LevelSetNotFound, "level set is unbounded");
      }
    }
    return dir < 0 ? bracket_newton(f, df, far, A.center.x) : bracket_newton(f, df, A.center.x, far);
  };
  return {side(A.left, -1), side(A.right, 1)};
}

// ---- intersections -----------------------------------------------------------

std::pair<IntersectionAnchor, IntersectionAnchor> intersection_anchors(const Hamiltonian& H,
                                                                       const SeparationLine& line,
                                                                       const PeriodAnnulus& A, const Real& h,
                                                                       const std::optional<Rational>& h_exact) {
  auto [xl, xr] = turning_points(H, A, h);
  auto exact_of = [&](const Real& x, const Poly& P) -> std::optional<Rational> {
    if (!h_exact || !rational_coeffs(P)) return std::nullopt;
    return recognise_rational(P - Poly(ExactScalar(*h_exact)), x);
  };
  IntersectionAnchor s, e;
  s.which = Endpoint::start;
  e.which = Endpoint::end;
  switch (line.kind) {
    case ThetaKind::pi: {
      s.x = xl;
      e.x = xr;
      s.y = e.y = 0;
      s.x_exact = exact_of(xl, H.F());
      e.x_exact = exact_of(xr, H.F());
      if (line.crossing_sign(H, xl, Real(0)) < 0) std::swap(s, e), s.which = Endpoint::start, e.which = Endpoint::end;
      return {s, e};
    }
    case ThetaKind::half_pi: {
      Real c = to_r(line.c);
      if (!(c > xl && c < xr)) throw Error(ErrorKind::LevelSetNotFound, "vertical line misses the oval");
      Real y = sqrt(2 * (h - H.F(c)));
      s.x = e.x = c;
      s.x_exact = e.x_exact = line.c;
      s.y = y;
      e.y = -y;
      return {s, e};
    }
    case ThetaKind::generic: {
      Poly G = level_poly(H, line);
      std::vector<Real> xs;
      std::vector<std::optional<Rational>> ex;
      if (h_exact && rational_coeffs(G)) {
        for (const auto& r : real_roots(G - Poly(ExactScalar(*h_exact))))
          if (r.x >= xl - Real("1e-90") && r.x <= xr + Real("1e-90")) {
            xs.push_back(r.x);
            ex.push_back(r.exact);
          }
      } else {
        for (const auto& x : numeric_roots(G - Poly(ExactScalar(Number(h))), xl, xr)) {
          xs.push_back(x);
          ex.push_back(std::nullopt);
        }
      }
      if (xs.size() != 2)
        throw Error(ErrorKind::LevelSetNotFound, "line meets the oval in " + std::to_string(xs.size()) + " points");
      Real k = line.tan_theta.to_real();
      Real c = to_r(line.c);
      for (int i = 0; i < 2; ++i) {
        IntersectionAnchor a;
        a.x = xs[i];
        a.x_exact = ex[i];
        a.y = k * (xs[i] - c);
        int sg = line.crossing_sign(H, a.x, a.y);
        if (sg == 0) throw Error(ErrorKind::BranchAmbiguity, "line tangent to the flow at an intersection");
        a.which = sg > 0 ? Endpoint::start : Endpoint::end;
        (sg > 0 ? s : e) = a;
      }
      if (s.which == e.which) throw Error(ErrorKind::BranchAmbiguity, "both intersections have the same orientation");
      return {s, e};
    }
  }
  throw Error(ErrorKind::InvalidInput, "unknown line kind");
}

IntersectionSeries intersection_series(const Hamiltonian& H, const SeparationLine& line, const Rational& h0,
                                       Endpoint endpoint, int terms) {
  if (terms < 2) throw Error(ErrorKind::InvalidInput, "need at least two series terms");
  PeriodAnnulus A = annulus_containing(H, h0);
  const int side = -1;
  auto anchors = intersection_anchors(H, line, A, to_r(h0), h0);
  const IntersectionAnchor& an = endpoint == Endpoint::start ? anchors.first : anchors.second;
  IntersectionSeries out;

  if (line.kind == ThetaKind::half_pi) {
    Rational base = 2 * (h0 - H.F(line.c));
    if (sgn(base) <= 0) throw Error(ErrorKind::BranchAmbiguity, "vertical line tangent to the level");
    Series y2(h0, side, Frac(terms + 1));
    y2.add(Frac(0), 0, ParamPoly(ExactScalar(base)));
    y2.add(Frac(1), 0, ParamPoly(ExactScalar(2 * side)));
    Series y = series_sqrt(y2);
    out.y = endpoint == Endpoint::start ? y : -y;
    out.x = Series(h0, side, Frac(terms + 1));
    out.x.add(Frac(0), 0, ParamPoly(ExactScalar(line.c)));
    out.p = 1;
    return out;
  }

  Poly G = level_poly(H, line) - Poly(ExactScalar(h0));
  ExactScalar x0 = as_scalar(an.x, an.x_exact);
  std::vector<ExactScalar> f = taylor(G, x0);
  f.resize(std::max<size_t>(f.size(), static_cast<size_t>(terms) + 8));

  // multiplicity of the anchor as a root of G'
  int m = 0;
  for (size_t j = 1; j < f.size(); ++j) {
    bool zero = f[j].exact() ? f[j].is_zero() : abs(f[j].to_real()) < Real("1e-80");
    if (!zero) break;
    ++m;
  }
  Series xs;
  if (m == 0) {
    // simple root: side * f(u) = |s|
    Series g(h0, side, Frac(terms + 1));
    for (int j = 1; j <= terms; ++j) g.add(Frac(j), 0, ParamPoly(ExactScalar(side) * f[j]));
    Series u = series_reversion(g);
    xs = Series(h0, side, Frac(terms + 1));
    xs.add(Frac(0), 0, ParamPoly(x0));
    xs += u;
    out.p = 1;
  } else {
    if (line.kind != ThetaKind::pi)
      throw Error(ErrorKind::BranchAmbiguity, "line meets the level at a critical point");
    // degenerate root: u = sigma (x - x*), |s| = u^(m+1) G(u)
    int sigma = A.center.x > an.x ? 1 : -1;
    int p = m + 1;
    Series Gs(h0, side, Frac(terms));
    for (int i = 0; i < terms; ++i) {
      size_t j = static_cast<size_t>(i + p);
      ExactScalar v = j < f.size() ? f[j] : ExactScalar();
      if ((j % 2) && sigma < 0) v = -v;
      Gs.add(Frac(i), 0, ParamPoly(ExactScalar(side) * v));
    }
    ExactScalar g0 = Gs.scalar_coeff(Frac(0));
    if (!(g0.to_real() > 0)) throw Error(ErrorKind::BranchAmbiguity, "level does not open toward the annulus");
    std::optional<ExactScalar> lead;
    if (g0.is_rational() && g0.exact()) lead = rational_root(g0.rational(), p);
    if (!lead) lead = ExactScalar(Number(Real(pow(g0.to_real(), Real(1) / p))));
    Series Gp = series_pow(Gs, Rational(1, p), *lead);
    Series t(h0, side, Frac(terms + 1));
    for (const auto& [k, c] : Gp.terms()) t.add(k.e + Frac(1), 0, c);
    Series u = series_reversion(t);
    xs = Series(h0, side, Frac(terms + 1, p));
    xs.add(Frac(0), 0, ParamPoly(x0));
    for (const auto& [k, c] : u.terms()) xs.add(Frac(k.e.num, p), 0, sigma > 0 ? c : -c);
    out.p = p;
  }
  out.x = xs;
  if (line.kind == ThetaKind::generic) {
    Series sh = xs;
    sh.add(Frac(0), 0, ParamPoly(ExactScalar(-line.c)));
    out.y = ParamPoly(line.tan_theta) * sh;
  } else {
    out.y = Series(h0, side, xs.trunc());
  }
  return out;
}

Real opposite_intersection(const Hamiltonian& H, const SeparationLine& line, const Real& x_a, const Rational& h0) {
  PeriodAnnulus A = annulus_containing(H, h0);
  Real h = to_r(h0);
  auto [xl, xr] = turning_points(H, A, h);
  Real c = to_r(line.c);
  bool right = x_a > c;
  if (!(right ? (x_a < xr) : (x_a > xl)) || x_a == c)
    throw Error(ErrorKind::OutOfRange, "anchor abscissa outside the oval on its side of c");
  // (F(x) - h0) - phi_a (x - c)^2 = 0 with phi_a = (F(x_a) - h0) / (x_a - c)^2
  Real phi = (H.F(x_a) - h) / ((x_a - c) * (x_a - c));
  if (!(phi < 0)) throw Error(ErrorKind::OutOfRange, "anchor abscissa is not inside the level");
  auto psi = [&](const Real& x) { return H.F(x) - h - phi * (x - c) * (x - c); };
  auto dpsi = [&](const Real& x) { return H.dF(x) - 2 * phi * (x - c); };
  Real a = right ? xl : c, b = right ? c : xr;
  const int N = 400;
  std::vector<Real> found;
  Real px = a, pf = psi(a);
  for (int i = 1; i <= N; ++i) {
    Real x = a + (b - a) * i / N;
    Real fx = psi(x);
    if (pf != 0 && fx != 0 && (fx > 0) != (pf > 0)) found.push_back(bracket_newton(psi, dpsi, px, x));
    px = x;
    pf = fx;
  }
  if (found.empty()) throw Error(ErrorKind::NoRoot, "no opposite intersection");
  if (found.size() > 1) throw Error(ErrorKind::BranchAmbiguity, "several opposite intersections");
  return found.front();
}

Real opposite_intersection_quintic(const Real& x_a) {
  if (!(x_a > 1 && x_a < Real(5) / 4)) throw Error(ErrorKind::OutOfRange, "x_a must lie in (1, 5/4)");
  return opposite_intersection(Hamiltonian::quintic(), SeparationLine::generic(ExactScalar(1), 1), x_a, 0);
}

}  // namespace pfkit
