#include "pfkit/expansion.hpp"

#include <mutex>

namespace pfkit {

namespace {

using Vec = std::vector<ExactScalar>;
constexpr int kSide = -1;

Vec matvec(const ScalarMatrix& m, const Vec& v) {
  Vec out(m.rows());
  for (size_t i = 0; i < m.rows(); ++i)
    for (size_t j = 0; j < m.cols(); ++j)
      if (!m(i, j).is_zero() && !v[j].is_zero()) out[i] += m(i, j) * v[j];
  return out;
}
Vec& axpy(Vec& y, const ExactScalar& a, const Vec& x) {
  for (size_t i = 0; i < y.size(); ++i)
    if (!x[i].is_zero()) y[i] += a * x[i];
  return y;
}
Real vnorm(const Vec& v, const ConstantTable* t) {
  Real m = 0;
  for (const auto& x : v) {
    Real a = abs(x.to_real(t));
    if (m < a) m = a;
  }
  return m;
}

// p(h0 + t) as a polynomial in t.
Poly shift(const Poly& p, const Rational& h0) {
  Poly out;
  Poly base(std::vector<ExactScalar>{ExactScalar(h0), ExactScalar(1)});
  for (size_t k = p.coeffs().size(); k-- > 0;) out = out * base + Poly(p.coeffs()[k]);
  return out;
}

std::vector<ScalarMatrix> coeff_matrices(const PolyMatrix& m, const Rational& h0) {
  int deg = 0;
  PolyMatrix s(m.rows(), m.cols());
  for (size_t i = 0; i < m.rows(); ++i)
    for (size_t j = 0; j < m.cols(); ++j) {
      s(i, j) = shift(m(i, j), h0);
      deg = std::max(deg, s(i, j).degree());
    }
  std::vector<ScalarMatrix> out(deg + 1, ScalarMatrix(m.rows(), m.cols()));
  for (size_t i = 0; i < m.rows(); ++i)
    for (size_t j = 0; j < m.cols(); ++j)
      for (int k = 0; k <= s(i, j).degree(); ++k) out[k](i, j) = s(i, j)[k];
  return out;
}

ScalarMatrix shifted_identity(const ScalarMatrix& A0, const ExactScalar& lambda) {
  ScalarMatrix m(A0.rows(), A0.cols());
  for (size_t i = 0; i < A0.rows(); ++i)
    for (size_t j = 0; j < A0.cols(); ++j) m(i, j) = (i == j ? lambda : ExactScalar()) - A0(i, j);
  return m;
}

ExactScalar sign_pow(int k) { return ExactScalar((kSide < 0 && (k % 2 != 0)) ? -1 : 1); }

// Data for solving a singular M x = r: x = S r on the range, kernel v, left kernel w.
struct SingularSolver {
  ScalarMatrix S;
  Vec v, w;
  size_t norm_index = 0;
};

SingularSolver singular_solver(const ScalarMatrix& M, const Frac& e) {
  const size_t n = M.rows();
  ScalarMatrix aug(n, 2 * n);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) aug(i, j) = M(i, j);
    aug(i, n + i) = ExactScalar(1);
  }
  Rref r = rref(aug);
  SingularSolver s;
  s.S = ScalarMatrix(n, n);
  std::vector<Vec> left;
  for (size_t row = 0; row < r.pivots.size(); ++row) {
    size_t pc = r.pivots[row];
    if (pc < n) {
      for (size_t j = 0; j < n; ++j) s.S(pc, j) = r.m(row, n + j);
    } else {
      Vec w(n);
      for (size_t j = 0; j < n; ++j) w[j] = r.m(row, n + j);
      left.push_back(w);
    }
  }
  auto ker = nullspace(M);
  if (ker.size() != 1 || left.size() != 1)
    throw Error(ErrorKind::Unsupported, "kernel of dimension " + std::to_string(ker.size()) + " at exponent " +
                                            e.to_string());
  s.v = ker[0];
  s.w = left[0];
  while (s.norm_index < n && s.v[s.norm_index].is_zero()) ++s.norm_index;
  return s;
}

ExactScalar dot(const Vec& a, const Vec& b) {
  ExactScalar acc;
  for (size_t i = 0; i < a.size(); ++i)
    if (!a[i].is_zero() && !b[i].is_zero()) acc += a[i] * b[i];
  return acc;
}

bool negligible(const ExactScalar& x) { return x.exact() ? x.is_zero() : abs(x.to_real()) < Real("1e-50"); }

bool is_quintic(const Hamiltonian& H) {
  return H.degree() == 5 && H.b(1) == 0 && H.b(2) == 0 && H.b(3) == 0 && H.b(4) == Rational(-1, 4) &&
         H.b(5) == Rational(1, 5);
}

}  // namespace

// ---- constants and seeds ------------------------------------------------------

ConstantTable quintic_constants(int precision) {
  QuadratureConfig cfg;
  cfg.precision = precision;
  // 1 - v^4 = (1 - v)(1 + v)(1 + v^2), the first factor from the distance to v = 1
  auto root = [](const Real& v, const Real& dr) { return sqrt(dr * (1 + v) * (1 + v * v)); };
  Real i0 = tanh_sinh([&](const Real& v, const Real&, const Real& dr) { return 1 / root(v, dr); }, 0, 1, cfg).value;
  Real i2 = tanh_sinh(
                [&](const Real& v, const Real&, const Real& dr) {
                  Real s = root(v, dr);
                  return v * v / (s * (1 + s));
                },
                0, 1, cfg)
                .value;
  ConstantTable t;
  Real At0 = -Real(2) / 3 * i0;
  Real At2 = Real(2) / 5 * (1 - i2);
  if (!(At0 < 0) || !(At2 > 0)) throw Error(ErrorKind::HypothesisViolated, "seed constants have the wrong sign");
  t.set(Sym::At0, At0);
  t.set(Sym::At2, At2);
  t.set(Sym::k1, 4 * At0);
  t.set(Sym::k3, Real(84) / 25 * At2);
  t.set(Sym::k4, asinh(Real("0.5")) / sqrt(Real(5)));
  return t;
}

std::optional<QuarticLinearLevel> quartic_linear_level(const Hamiltonian& H, const Rational& h0) {
  if (H.degree() != 5) return std::nullopt;
  for (int k = 1; k <= 3; ++k)
    if (H.b(k) != 0) return std::nullopt;
  if (h0 != 0) return std::nullopt;
  QuarticLinearLevel q{-2 * H.b(4), -2 * H.b(5)};
  if (sgn(q.alpha) <= 0 || sgn(q.beta) >= 0) return std::nullopt;
  return q;
}

namespace {

KernelNormalisation quintic_norms() {
  KernelNormalisation n;
  n[Frac(0)] = ExactScalar(2) * linear_root_integral(2, 1, Rational(1, 2), Rational(-2, 5), 0, Rational(5, 4));
  n[Frac(3, 4)] = ExactScalar::symbol(Sym::k1);
  n[Frac(1)] = ExactScalar::symbol(Sym::k2, Number(kSide));
  n[Frac(5, 4)] = ExactScalar::symbol(Sym::k3);
  return n;
}

const ConstantTable& cached_constants(int precision) {
  static std::mutex mu;
  static std::map<int, ConstantTable> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(precision);
  if (it != cache.end()) return it->second;
  ConstantTable t = quintic_constants(precision);
  Hamiltonian H = Hamiltonian::quintic();
  auto series = frobenius_solve(homogeneous_system(H), 0, quintic_norms(), Frac(8));
  t.set(Sym::k2, fit_k2(series[0], t, std::min(precision + 30, static_cast<int>(kWorkDigits) - 20)));
  return cache.emplace(precision, t).first->second;
}

}  // namespace

Real fit_k2(const Series& I01, const ConstantTable& constants, int precision) {
  QuadratureConfig cfg;
  cfg.precision = precision;
  cfg.max_levels = 16;
  Oracle o(Hamiltonian::quintic(), SeparationLine::pi(), cfg);
  const Real h("-1e-12");
  Real val = o.integral(Region::closed, 0, 1, h);
  ConstantTable t0 = constants, t1 = constants;
  t0.set(Sym::k2, 0);
  t1.set(Sym::k2, 1);
  Real s0 = I01.evaluate(h, {}, &t0), s1 = I01.evaluate(h, {}, &t1);
  return (val - s0) / (s1 - s0);
}

SeedSet seed_coefficients(const Hamiltonian& H, const Rational& h0, int precision) {
  if (!is_quintic(H) || h0 != 0)
    throw Error(ErrorKind::SeedUnavailable, "no seed formulas for " + H.to_string() + " at h0 = " + h0.get_str());
  SeedSet s;
  s.precision = precision;
  s.constants = cached_constants(precision);
  auto series = frobenius_solve(homogeneous_system(H), h0, quintic_norms(), Frac(2));
  ExactScalar sg(kSide);
  for (const auto& x : series) {
    s.a0.push_back(x.scalar_coeff(Frac(0)));
    s.a1.push_back(sg * x.scalar_coeff(Frac(1)));
    s.b1.push_back(sg * x.scalar_coeff(Frac(1), 1));
    s.c0.push_back(x.scalar_coeff(Frac(3, 4)));
    s.d0.push_back(x.scalar_coeff(Frac(5, 4)));
  }
  return s;
}

// ---- Frobenius recursion --------------------------------------------------------

std::vector<Series> frobenius_solve(const PFSystem& sys, const Rational& h0, const KernelNormalisation& norms,
                                    const Frac& order) {
  const size_t n = sys.T.rows();
  Poly p = shift(sys.P, h0);
  if (!p[0].is_zero()) throw Error(ErrorKind::InvalidInput, "P does not vanish at h0");
  if (p[1].is_zero()) throw Error(ErrorKind::Unsupported, "irregular or higher-order singular point");
  const ExactScalar p1 = p[1];
  const Rational p1q = p1.rational();
  std::vector<ScalarMatrix> A = coeff_matrices(sys.T, h0);
  const ScalarMatrix& A0 = A[0];
  bool upper = true, lower = true;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      if (i > j && !A0(i, j).is_zero()) upper = false;
      if (i < j && !A0(i, j).is_zero()) lower = false;
    }
  if (!upper && !lower) throw Error(ErrorKind::Unsupported, "leading matrix is not triangular");

  // exponent classes from the eigenvalues of A0 / p1
  std::map<Frac, Frac> starts;
  for (size_t i = 0; i < n; ++i) {
    Rational r = A0(i, i).rational() / p1q;
    Frac e(r.get_num().get_si(), r.get_den().get_si());
    Frac cls = e.frac_part();
    auto it = starts.find(cls);
    if (it == starts.end() || e < it->second) starts[cls] = e;
  }

  std::map<Frac, Vec> X, Y;
  const Vec zero(n);
  auto at = [&](const std::map<Frac, Vec>& m, const Frac& e) -> const Vec& {
    auto it = m.find(e);
    return it == m.end() ? zero : it->second;
  };
  for (const auto& [cls, e0] : starts) {
    for (Frac e = e0; e < order; e = e + Frac(1)) {
      Vec RX(n), RY(n);
      for (size_t k = 1; k < A.size(); ++k) {
        Frac ek = e - Frac(static_cast<std::int64_t>(k));
        ExactScalar sk = sign_pow(static_cast<int>(k));
        axpy(RX, sk, matvec(A[k], at(X, ek)));
        axpy(RY, sk, matvec(A[k], at(Y, ek)));
      }
      for (int k = 2; k <= p.degree(); ++k) {
        Frac ek = e - Frac(k - 1);
        ExactScalar c = p[k] * sign_pow(k + 1);
        ExactScalar ce = c * ExactScalar(Rational(ek.num, ek.den));
        axpy(RX, -ce, at(X, ek));
        axpy(RX, -c, at(Y, ek));
        axpy(RY, -ce, at(Y, ek));
      }
      ExactScalar lam = p1 * ExactScalar(Rational(e.num, e.den));
      ScalarMatrix M = shifted_identity(A0, lam);
      Vec Xe, Ye;
      if (!determinant(M).is_zero()) {
        ScalarMatrix Mi = inverse(M);
        Ye = matvec(Mi, RY);
        Vec r = RX;
        axpy(r, -p1, Ye);
        Xe = matvec(Mi, r);
      } else {
        auto it = norms.find(e);
        if (it == norms.end())
          throw Error(ErrorKind::UnexpectedSingularStep, "singular step at exponent " + e.to_string());
        SingularSolver ss = singular_solver(M, e);
        if (!negligible(dot(ss.w, RY)))
          throw Error(ErrorKind::LogPowerOverflow, "second log power needed at exponent " + e.to_string());
        Ye = matvec(ss.S, RY);
        Vec r = RX;
        axpy(r, -p1, Ye);
        ExactScalar wv = dot(ss.w, ss.v);
        ExactScalar wr = dot(ss.w, r);
        if (!wr.is_zero()) {
          if (wv.is_zero()) throw Error(ErrorKind::Unsupported, "non-semisimple resonance at " + e.to_string());
          ExactScalar beta = wr * (p1 * wv).inverse();
          axpy(Ye, beta, ss.v);
          axpy(r, -p1 * beta, ss.v);
        }
        Xe = matvec(ss.S, r);
        ExactScalar gamma = (it->second - Xe[ss.norm_index]) * ss.v[ss.norm_index].inverse();
        axpy(Xe, gamma, ss.v);
      }
      X[e] = Xe;
      bool any = false;
      for (const auto& y : Ye) any = any || !y.is_zero();
      if (any) Y[e] = Ye;
    }
  }
  std::vector<Series> out(n, Series(h0, kSide, order));
  for (size_t i = 0; i < n; ++i) {
    for (const auto& [e, v] : X)
      if (!v[i].is_zero()) out[i].add(e, 0, ParamPoly(v[i]));
    for (const auto& [e, v] : Y)
      if (!v[i].is_zero()) out[i].add(e, 1, ParamPoly(v[i]));
  }
  return out;
}

std::vector<Series> closed_expansion(const Hamiltonian& H, const Rational& h0, const Frac& order) {
  if (!is_quintic(H) || h0 != 0)
    throw Error(ErrorKind::SeedUnavailable, "no seed formulas for " + H.to_string() + " at h0 = " + h0.get_str());
  return frobenius_solve(homogeneous_system(H), h0, quintic_norms(), order);
}

// ---- boundary terms -------------------------------------------------------------

Series BoundarySeries::K(int i, int j) const {
  return start.x.pow(0) * (end.x.pow(i) * end.y.pow(j)) - start.x.pow(i) * start.y.pow(j);
}

Series BoundarySeries::J(int i) const {
  return end.x.pow(i) * end.y * end.x.derivative() - start.x.pow(i) * start.y * start.x.derivative();
}

Series BoundarySeries::Kt(int s) const {
  switch (line.kind) {
    case ThetaKind::pi:
      return K(s + 1, 0);
    case ThetaKind::half_pi:
      return K(0, 1);
    case ThetaKind::generic:
      return K(0, s + 1);
  }
  throw Error(ErrorKind::InvalidInput, "unknown line kind");
}

BoundarySeries boundary_series(const Hamiltonian& H, const SeparationLine& line, const Rational& h0,
                               const Frac& order) {
  const int need = static_cast<int>(order.floor()) + 3;
  auto series_for = [&](Endpoint which) {
    int p = intersection_series(H, line, h0, which, 3).p;
    return intersection_series(H, line, h0, which, p * need);
  };
  BoundarySeries b{series_for(Endpoint::start), series_for(Endpoint::end), line, order};
  return b;
}

// ---- open basis -------------------------------------------------------------------

OpenInitialData open_initial_data(const Hamiltonian& H, const SeparationLine& line, const Rational& h0,
                                  int precision) {
  const int m = H.degree() - 1;
  OpenInitialData d;
  auto q = quartic_linear_level(H, h0);
  if (line.kind == ThetaKind::half_pi && q) {
    Rational xr = -q->alpha / q->beta;
    if (sgn(line.c) > 0 && line.c < xr) {
      for (int i = 0; i < m; ++i) {
        d.value.push_back(ExactScalar(2) * linear_root_integral(i + 2, 1, q->alpha, q->beta, line.c, xr));
        d.slope.push_back(ExactScalar(2) * linear_root_integral(i - 2, -1, q->alpha, q->beta, line.c, xr));
      }
      return d;
    }
  }
  QuadratureConfig cfg;
  cfg.precision = precision;
  Oracle o(H, line, cfg);
  Real h = Number(h0).to_real();
  for (int i = 0; i < m; ++i) {
    d.value.push_back(ExactScalar(Number(o.integral(Region::open_plus, i, 1, h))));
    d.slope.push_back(ExactScalar(Number(Real(o.integral(Region::open_plus, i, -1, h) + o.J(i, h)))));
  }
  return d;
}

namespace {

// Coefficients of (h - h0)^j, j < count, of an integer-exponent log-free series.
Vec taylor_coeffs(const Series& s, int count) {
  Vec out(count);
  for (const auto& [k, c] : s.terms()) {
    if (k.log || !k.e.is_integer() || k.e.num < 0)
      throw Error(ErrorKind::NonconformingSeries, "boundary series is not analytic at the loop energy");
    if (k.e.num < count) out[k.e.num] = sign_pow(static_cast<int>(k.e.num)) * c.constant();
  }
  return out;
}

}  // namespace

std::vector<Series> open_expansion(const Hamiltonian& H, const SeparationLine& line, const Rational& h0,
                                   const Frac& order, const std::vector<Series>* closed) {
  if (line.kind == ThetaKind::pi) {
    std::vector<Series> c = closed ? *closed : closed_expansion(H, h0, order);
    for (auto& s : c) s = ParamPoly(ExactScalar(Rational(1, 2))) * s;
    return c;
  }
  PFSystem sys = inhomogeneous_system(H, line);
  const size_t m = sys.T.rows();
  const int count = static_cast<int>(order.floor()) + (order.is_integer() ? 0 : 1);
  Poly p = shift(sys.P, h0);
  std::vector<ScalarMatrix> A = coeff_matrices(sys.T, h0);
  std::vector<ScalarMatrix> F = coeff_matrices(*sys.forcing_K, h0);
  Poly pj = shift(*sys.forcing_J_scale, h0);
  BoundarySeries bs = boundary_series(H, line, h0, Frac(count + 1));
  std::vector<Vec> Kc, Jc;  // per symbol, Taylor coefficients
  for (size_t i = 0; i < sys.forcing_K->cols(); ++i) Kc.push_back(taylor_coeffs(bs.K(static_cast<int>(i), 1), count + 1));
  for (size_t i = 0; i < m; ++i) Jc.push_back(taylor_coeffs(bs.J(static_cast<int>(i)), count + 1));
  auto forcing = [&](int j) {
    Vec f(m);
    for (size_t k = 0; k < F.size() && static_cast<int>(k) <= j; ++k) {
      Vec kv(Kc.size());
      for (size_t i = 0; i < Kc.size(); ++i) kv[i] = Kc[i][j - k];
      axpy(f, ExactScalar(1), matvec(F[k], kv));
    }
    for (int k = 0; k <= pj.degree() && k <= j; ++k)
      for (size_t i = 0; i < m; ++i)
        if (!pj[k].is_zero()) f[i] += pj[k] * Jc[i][j - k];
    return f;
  };
  OpenInitialData init = open_initial_data(H, line, h0);
  std::vector<Vec> c{init.value, init.slope};
  ConstantTable logs;  // exact initial data may carry k4
  logs.set(Sym::k4, asinh(Real("0.5")) / sqrt(Real(5)));
  // right-hand side of (p1 j - A0) c_j = ...
  auto rhs = [&](int j) {
    Vec r = forcing(j);
    for (size_t k = 1; k < A.size() && static_cast<int>(k) <= j; ++k) axpy(r, ExactScalar(1), matvec(A[k], c[j - k]));
    for (int k = 2; k <= p.degree(); ++k) {
      int idx = j - k + 1;
      if (idx < 0) continue;
      axpy(r, -p[k] * ExactScalar(static_cast<long>(idx)), c[idx]);
    }
    return r;
  };
  for (int j = 0; j < 2; ++j) {
    Vec lhs = matvec(shifted_identity(A[0], p[1] * ExactScalar(j)), c[j]);
    Vec r = rhs(j);
    axpy(lhs, ExactScalar(-1), r);
    Real scale = vnorm(r, &logs) + vnorm(c[j], &logs);
    bool ok = true;
    for (const auto& x : lhs)
      ok = ok && (x.exact() ? x.is_zero() : abs(x.to_real(&logs)) <= Real("1e-40") * (1 + scale));
    if (!ok)
      throw Error(ErrorKind::InconsistentForcing,
                  "initial data violate the order-" + std::to_string(j) + " relation (residual " +
                      vnorm(lhs, &logs).str(6) + ")");
  }
  for (int j = 2; j < count; ++j) {
    ScalarMatrix M = shifted_identity(A[0], p[1] * ExactScalar(j));
    if (determinant(M).is_zero()) throw Error(ErrorKind::UnexpectedSingularStep, "singular order " + std::to_string(j));
    c.push_back(matvec(inverse(M), rhs(j)));
  }
  std::vector<Series> out(m, Series(h0, kSide, order));
  for (int j = 0; j < count; ++j)
    for (size_t i = 0; i < m; ++i)
      if (!c[j][i].is_zero()) out[i].add(Frac(j), 0, ParamPoly(sign_pow(j) * c[j][i]));
  return out;
}

// ---- bundle and Melnikov series --------------------------------------------------

ExpansionBundle expansion_bundle(const Hamiltonian& H, const SeparationLine& line, const Rational& h0,
                                 const Frac& order, int precision) {
  ExpansionBundle b{H, line, h0, order, {}, {}, {}, {}};
  SeedSet seeds = seed_coefficients(H, h0, precision);
  b.constants = seeds.constants;
  b.closed = closed_expansion(H, h0, order);
  b.open = open_expansion(H, line, h0, order, &b.closed);
  b.boundary = boundary_series(H, line, h0, order);
  return b;
}

Series melnikov_expansion(const IntegralExpr& expr, const ExpansionBundle& bundle) {
  Series out(bundle.h0, kSide, bundle.order);
  for (const auto& [sym, coeff] : expr.terms()) {
    Series s;
    switch (sym.family) {
      case Family::closed:
        if (sym.i >= static_cast<int>(bundle.closed.size())) throw Error(ErrorKind::InvalidInput, "closed index");
        s = bundle.closed[sym.i];
        break;
      case Family::open:
        if (sym.i >= static_cast<int>(bundle.open.size())) throw Error(ErrorKind::InvalidInput, "open index");
        s = bundle.open[sym.i];
        break;
      case Family::boundary:
        s = bundle.boundary.Kt(sym.i);
        break;
      case Family::raw_k:
        s = bundle.boundary.K(sym.i, sym.j);
        break;
      case Family::raw_closed:
        throw Error(ErrorKind::InvalidInput, "expression still contains unreduced closed integrals");
    }
    out += s.mul_poly(coeff);
  }
  if (out.trunc() < bundle.order)
    throw Error(ErrorKind::TruncationTooShort, "series known only below exponent " + out.trunc().to_string());
  return out;
}

}  // namespace pfkit
