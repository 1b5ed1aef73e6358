#include "pfkit/oracle.hpp"

#include <boost/math/constants/constants.hpp>

#include <cmath>
#include <iomanip>
#include <mutex>
#include <ostream>

namespace pfkit {

void QuadratureConfig::validate() const {
  if (precision < 30 || precision > static_cast<int>(kWorkDigits) - 20)
    throw Error(ErrorKind::InvalidInput, "quadrature precision must lie in [30, " + std::to_string(kWorkDigits - 20) + "]");
  if (max_levels < 3 || max_levels > 20) throw Error(ErrorKind::InvalidInput, "max_levels must lie in [3, 20]");
}

// ---- tanh-sinh ---------------------------------------------------------------

namespace {

// Unit-interval node: x = a + (b-a) fl = b - (b-a) fr.
struct Node {
  Real w, fl, fr;
};

const Real& tmax() {
  static const Real t = asinh(Real(2) / boost::math::constants::pi<Real>() * log(Real(10)) * (kWorkDigits + 40));
  return t;
}

Node make_node(const Real& t) {
  const Real half_pi = boost::math::constants::half_pi<Real>();
  Real u = half_pi * sinh(t);
  Real e = exp(-2 * abs(u));
  Real lo = e / (1 + e), hi = 1 / (1 + e);
  Real ch = cosh(u);
  Node n;
  n.w = half_pi * cosh(t) / (2 * ch * ch);
  n.fl = u < 0 ? lo : hi;
  n.fr = u < 0 ? hi : lo;
  return n;
}

// Level 0 holds t = k/2; level l > 0 the odd multiples of 2^-(l+1).
const std::vector<Node>& level_nodes(int level) {
  static std::mutex mu;
  static std::map<int, std::vector<Node>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(level);
  if (it != cache.end()) return it->second;
  std::vector<Node> v;
  Real step = ldexp(Real(1), -(level + 1));
  long kmax = static_cast<long>(ceil(tmax() / step).convert_to<double>());
  for (long k = -kmax; k <= kmax; ++k) {
    if (level > 0 && k % 2 == 0) continue;
    v.push_back(make_node(step * k));
  }
  return cache.emplace(level, std::move(v)).first->second;
}

Real pow10(int e) { return pow(Real(10), e); }
Real rmax(const Real& a, const Real& b) { return a < b ? b : a; }

}  // namespace

QuadResult tanh_sinh(const EndpointIntegrand& f, const Real& a, const Real& b, const QuadratureConfig& cfg) {
  cfg.validate();
  QuadResult r;
  if (a == b) return r;
  if (b < a) {
    QuadResult s = tanh_sinh([&](const Real& x, const Real& dl, const Real& dr) { return f(x, dr, dl); }, b, a, cfg);
    s.value = -s.value;
    return s;
  }
  const Real len = b - a;
  const Real tol = pow10(-cfg.precision);
  const Real floor_tol = pow10(-(cfg.precision + 40));
  Real sum = 0, prev = 0;
  for (int level = 0; level <= cfg.max_levels; ++level) {
    for (const Node& n : level_nodes(level)) {
      Real dl = len * n.fl, dr = len * n.fr;
      if (dl < cfg.abscissa_tolerance || dr < cfg.abscissa_tolerance) continue;
      Real x = n.fl < n.fr ? a + dl : b - dr;
      sum += n.w * f(x, dl, dr);
    }
    Real step = ldexp(Real(1), -(level + 1));
    Real s = len * step * sum;
    r.levels = level;
    if (level >= 3) {
      r.last_change = abs(s - prev);
      if (r.last_change <= tol * abs(s) || r.last_change <= floor_tol) {
        r.value = s;
        return r;
      }
    }
    prev = s;
    r.value = s;
  }
  throw Error(ErrorKind::NonconvergentQuadrature,
              "tanh-sinh did not reach 1e-" + std::to_string(cfg.precision) + " after " +
                  std::to_string(cfg.max_levels) + " levels (last change " + r.last_change.str(6) + ")");
}

// ---- integrals over the level set -----------------------------------------------

namespace {

std::vector<Real> real_coeffs(const Poly& p) {
  std::vector<Real> out;
  for (const auto& c : p.coeffs()) out.push_back(c.to_real());
  return out;
}

// Taylor coefficients of p about x0.
std::vector<Real> taylor_at(std::vector<Real> c, const Real& x0) {
  const size_t n = c.size();
  for (size_t k = 0; k < n; ++k)
    for (size_t j = n - 1; j > k; --j) c[j - 1] += x0 * c[j];
  return c;
}

Real horner(const std::vector<Real>& c, const Real& x) {
  Real acc = 0;
  for (size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
  return acc;
}

Real ipow(const Real& x, int i) {
  Real r = 1;
  for (int k = 0; k < i; ++k) r *= x;
  return r;
}

// Integral along x from `from` to `to` on the branch y = sigma*w, w = sqrt(2(h - F)).
struct Piece {
  Real from, to;
  int sigma;
  bool from_turn, to_turn;
};

using BranchIntegrand = std::function<Real(const Real& x, const Real& y)>;

Real integrate_piece(const Hamiltonian& H, const Piece& p, const Real& h, const BranchIntegrand& g,
                     const QuadratureConfig& cfg, Real* change) {
  const bool fwd = p.from < p.to;
  const Real lo = fwd ? p.from : p.to, hi = fwd ? p.to : p.from;
  const bool lo_turn = fwd ? p.from_turn : p.to_turn, hi_turn = fwd ? p.to_turn : p.from_turn;
  std::vector<Real> F = real_coeffs(H.F());
  std::vector<Real> tl = lo_turn ? taylor_at(F, lo) : std::vector<Real>{};
  std::vector<Real> tr = hi_turn ? taylor_at(F, hi) : std::vector<Real>{};
  // F(x0 + d) - F(x0) without the constant term
  auto incr = [](const std::vector<Real>& t, const Real& d) {
    Real acc = 0;
    for (size_t k = t.size(); k-- > 1;) acc = (acc + t[k]) * d;
    return acc;
  };
  auto f = [&](const Real& x, const Real& dl, const Real& dr) -> Real {
    Real y2;
    if (lo_turn && (!hi_turn || dl <= dr)) y2 = -2 * incr(tl, dl);
    else if (hi_turn) y2 = -2 * incr(tr, -dr);
    else y2 = 2 * (h - horner(F, x));
    if (!(y2 > 0)) return Real(0);
    Real y = sqrt(y2);
    return g(x, p.sigma > 0 ? y : Real(-y));
  };
  QuadResult r = tanh_sinh(f, lo, hi, cfg);
  if (change) *change = rmax(*change, r.last_change);
  return fwd ? r.value : Real(-r.value);
}

Real ypow(const Real& y, int j) {
  if (j >= 0) return ipow(y, j);
  return 1 / ipow(y, -j);
}

bool near(const Real& a, const Real& b) { return abs(a - b) <= Real("1e-90") * (1 + abs(a)); }

}  // namespace

Oracle::Oracle(Hamiltonian H, SeparationLine line, QuadratureConfig cfg)
    : H_(std::move(H)), line_(std::move(line)), cfg_(std::move(cfg)), A_(default_annulus(H_)) {
  cfg_.validate();
}

QuadResult Oracle::integral_detail(Region region, int i, int j, const Real& h) const {
  if (i < 0 || j < -1) throw Error(ErrorKind::InvalidInput, "integral index out of range");
  QuadResult out;
  if (abs(h - A_.alpha) < Real("1e-90")) return out;  // oval collapsed to the center
  if (!(h > A_.alpha) || h > A_.beta) throw Error(ErrorKind::LevelSetNotFound, "energy outside the period annulus");
  auto [xl, xr] = turning_points(H_, A_, h);
  std::vector<Piece> pieces;
  if (region == Region::closed) {
    if (j % 2 == 0) return out;  // symmetric in y
    pieces = {{xl, xr, 1, true, true}, {xr, xl, -1, true, true}};
  } else {
    auto [s, e] = intersection_anchors(H_, line_, A_, h);
    const bool s_up = s.y > 0 || (s.y == 0 && near(s.x, xl));
    const bool e_up = e.y > 0 || (e.y == 0 && near(e.x, xr));
    auto turn = [&](const Real& x) { return near(x, xl) || near(x, xr); };
    const bool st = turn(s.x), et = turn(e.x);
    if (s_up && e_up && e.x > s.x) {
      pieces = {{s.x, e.x, 1, st, et}};
    } else if (s_up && !e_up) {
      pieces = {{s.x, xr, 1, st, true}, {xr, e.x, -1, true, et}};
    } else if (!s_up && e_up) {
      pieces = {{s.x, xl, -1, st, true}, {xl, e.x, 1, true, et}};
    } else if (!s_up && !e_up && e.x < s.x) {
      pieces = {{s.x, e.x, -1, st, et}};
    } else if (s_up) {
      pieces = {{s.x, xr, 1, st, true}, {xr, xl, -1, true, true}, {xl, e.x, 1, true, et}};
    } else {
      pieces = {{s.x, xl, -1, st, true}, {xl, xr, 1, true, true}, {xr, e.x, -1, true, et}};
    }
  }
  BranchIntegrand g = [&](const Real& x, const Real& y) { return ipow(x, i) * ypow(y, j); };
  for (const auto& p : pieces) out.value += integrate_piece(H_, p, h, g, cfg_, &out.last_change);
  return out;
}

Real Oracle::integral(Region r, int i, int j, const Real& h) const { return integral_detail(r, i, j, h).value; }

Real Oracle::dy_integral(int i, int j, const Real& h) const {
  if (i < 0 || j < 0) throw Error(ErrorKind::InvalidInput, "integral index out of range");
  if (!(h > A_.alpha) || h > A_.beta) throw Error(ErrorKind::LevelSetNotFound, "energy outside the period annulus");
  auto [xl, xr] = turning_points(H_, A_, h);
  // y dy = -F'(x) dx on the level set
  BranchIntegrand g = [&](const Real& x, const Real& y) { return -ipow(x, i) * ypow(y, j - 1) * H_.dF(x); };
  Real v = 0;
  for (const Piece& p : {Piece{xl, xr, 1, true, true}, Piece{xr, xl, -1, true, true}})
    v += integrate_piece(H_, p, h, g, cfg_, nullptr);
  return v;
}

Real Oracle::K(int i, int j, const Real& h) const {
  auto [s, e] = intersection_anchors(H_, line_, A_, h);
  return ipow(e.x, i) * ypow(e.y, j) - ipow(s.x, i) * ypow(s.y, j);
}

Real Oracle::J(int i, const Real& h) const {
  if (line_.kind != ThetaKind::generic) return 0;  // y = 0 at both ends, or x fixed
  auto [s, e] = intersection_anchors(H_, line_, A_, h);
  Real k = line_.tan_theta.to_real();
  Real c = Number(line_.c).to_real();
  auto dx = [&](const Real& x) { return 1 / (H_.dF(x) + k * k * (x - c)); };
  return ipow(e.x, i) * e.y * dx(e.x) - ipow(s.x, i) * s.y * dx(s.x);
}

Real Oracle::symbol(const BasisSymbol& s, const Real& h) const {
  switch (s.family) {
    case Family::closed:
      return integral(Region::closed, s.i, 1, h);
    case Family::open:
      return integral(Region::open_plus, s.i, 1, h);
    case Family::raw_closed:
      return integral(Region::closed, s.i, s.j, h);
    case Family::raw_k:
      return K(s.i, s.j, h);
    case Family::boundary:
      switch (line_.kind) {
        case ThetaKind::pi:
          return K(s.i + 1, 0, h);
        case ThetaKind::half_pi:
          return K(0, 1, h);
        case ThetaKind::generic:
          return K(0, s.i + 1, h);
      }
  }
  throw Error(ErrorKind::InvalidInput, "unknown symbol family");
}

Real Oracle::evaluate(const IntegralExpr& e, const Real& h, const std::map<ParamId, Real>& point,
                      const ConstantTable* table) const {
  Real acc = 0;
  for (const auto& [sym, coeff] : e.terms()) {
    Real c = 0;
    const auto& cs = coeff.coeffs();
    for (size_t k = cs.size(); k-- > 0;) c = c * h + cs[k].evaluate(point, table);
    acc += c * symbol(sym, h);
  }
  return acc;
}

// ---- residual checks -------------------------------------------------------------

std::vector<PFResidual> pf_residual(const Oracle& o, const PFSystem& sys, const std::vector<Real>& h_samples) {
  const size_t m = sys.T.rows();
  const bool open = sys.forcing_K.has_value();
  const Region reg = open ? Region::open_plus : Region::closed;
  const Real delta = pow10(-(o.config().precision / 3));
  std::vector<PFResidual> out;
  for (const Real& h : h_samples) {
    std::vector<Real> X(m), D1(m), D2(m), Jv(m);
    Real xnorm = 0;
    for (size_t i = 0; i < m; ++i) {
      X[i] = o.integral(reg, static_cast<int>(i), 1, h);
      if (open) Jv[i] = o.J(static_cast<int>(i), h);
      D1[i] = o.integral(reg, static_cast<int>(i), -1, h) + Jv[i];
      D2[i] = (o.integral(reg, static_cast<int>(i), 1, h + delta) - o.integral(reg, static_cast<int>(i), 1, h - delta)) /
              (2 * delta);
      xnorm = rmax(xnorm, abs(X[i]));
    }
    std::vector<Real> Kv;
    if (open)
      for (size_t i = 0; i < sys.forcing_K->cols(); ++i) Kv.push_back(o.K(static_cast<int>(i), 1, h));
    Real P = poly_eval_real(sys.P, h);
    auto resid = [&](const std::vector<Real>& D) {
      Real worst = 0;
      for (size_t r = 0; r < m; ++r) {
        Real v = P * D[r];
        for (size_t c = 0; c < m; ++c) v -= poly_eval_real(sys.T(r, c), h) * X[c];
        if (open) {
          for (size_t c = 0; c < Kv.size(); ++c) v -= poly_eval_real((*sys.forcing_K)(r, c), h) * Kv[c];
          v -= poly_eval_real(*sys.forcing_J_scale, h) * Jv[r];
        }
        worst = rmax(worst, abs(v));
      }
      return xnorm > 0 ? Real(worst / xnorm) : worst;
    };
    out.push_back({h, resid(D1), resid(D2)});
  }
  return out;
}

ExpansionResidual expansion_residual(const Series& s, const std::function<Real(const Real&)>& target, const Real& lo,
                                     const Real& hi, int samples, const std::map<ParamId, Real>& point,
                                     const ConstantTable* table) {
  if (samples < 2) throw Error(ErrorKind::InvalidInput, "need at least two samples");
  const Real h0 = Number(s.base()).to_real();
  Real a = abs(lo - h0), b = abs(hi - h0);
  const int sg = lo < h0 ? -1 : 1;
  ExpansionResidual r;
  r.max_deviation = 0;
  std::vector<double> lx, ly;
  for (int k = 0; k < samples; ++k) {
    Real d = exp(log(a) + (log(b) - log(a)) * k / (samples - 1));
    Real h = h0 + sg * d;
    Real dev = s.evaluate(h, point, table) - target(h);
    r.table.emplace_back(h, dev);
    r.max_deviation = rmax(r.max_deviation, abs(dev));
    if (dev != 0) {
      lx.push_back(static_cast<double>(log(d)));
      ly.push_back(static_cast<double>(log(abs(dev))));
    }
  }
  if (lx.size() >= 2) {
    double mx = 0, my = 0;
    for (size_t k = 0; k < lx.size(); ++k) mx += lx[k], my += ly[k];
    mx /= lx.size();
    my /= ly.size();
    double sxy = 0, sxx = 0;
    for (size_t k = 0; k < lx.size(); ++k) sxy += (lx[k] - mx) * (ly[k] - my), sxx += (lx[k] - mx) * (lx[k] - mx);
    r.slope = sxy / sxx;
  }
  return r;
}

void write_csv(std::ostream& os, const std::vector<std::pair<Real, Real>>& rows, int digits) {
  os << "h,value\n";
  for (const auto& [h, v] : rows) os << h.str(digits, std::ios::scientific) << "," << v.str(digits, std::ios::scientific) << "\n";
}

// ---- exact integrals along h = h0 ------------------------------------------------

namespace {

ExactScalar rpow(const ExactScalar& x, int e) {
  ExactScalar r(1);
  if (e >= 0) {
    for (int k = 0; k < e; ++k) r *= x;
    return r;
  }
  ExactScalar inv = x.inverse();
  for (int k = 0; k < -e; ++k) r *= inv;
  return r;
}

Integer binom(int n, int k) {
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

// Antiderivative pieces of 1/(v^2 - alpha)^l: algebraic value at v plus the
// coefficient of ln|(v - sqrt a)/(v + sqrt a)|.
struct LogPart {
  ExactScalar alg, logc;
};
LogPart inverse_power(int l, const ExactScalar& v, const Rational& alpha, const ExactScalar& sqrt_alpha) {
  LogPart p{ExactScalar(), (ExactScalar(2) * sqrt_alpha).inverse()};
  ExactScalar base = v * v - ExactScalar(alpha);
  for (int k = 1; k < l; ++k) {
    ExactScalar f(Rational(-(2 * k - 1), 2 * k) / alpha);
    ExactScalar a = -v * rpow(base, -k) * ExactScalar(Rational(1, 2 * k) / alpha);
    p.alg = a + f * p.alg;
    p.logc = f * p.logc;
  }
  return p;
}

ExactScalar log_of(const ExactScalar& ratio) {
  // ratio = phi^m ?
  const ExactScalar phi = ExactScalar(Rational(1, 2)) + ExactScalar::radical(5, Number(Rational(1, 2)));
  const ExactScalar phi_inv = phi - ExactScalar(1);
  ExactScalar up(1), down(1);
  for (int m = 0; m <= 64; ++m) {
    if (up == ratio) return ExactScalar::symbol(Sym::k4, Number(m)) * ExactScalar::radical(5);
    if (down == ratio) return ExactScalar::symbol(Sym::k4, Number(-m)) * ExactScalar::radical(5);
    up *= phi;
    down *= phi_inv;
  }
  return ExactScalar(Number(Real(log(ratio.to_real()))));
}

}  // namespace

ExactScalar linear_root_integral(int m, int p, const Rational& alpha, const Rational& beta, const Rational& x0,
                                 const Rational& x1) {
  if (p % 2 == 0 || p < -1) throw Error(ErrorKind::Unsupported, "exponent must be p/2 with odd p >= -1");
  if (sgn(alpha) <= 0 || sgn(beta) == 0) throw Error(ErrorKind::InvalidInput, "need alpha > 0 and beta != 0");
  if (m < 0 && (sgn(x0) == 0 || sgn(x1) == 0 || sgn(x0) != sgn(x1)))
    throw Error(ErrorKind::InvalidInput, "negative power of x across x = 0");
  Rational u0 = alpha + beta * x0, u1 = alpha + beta * x1;
  if (sgn(u0) < 0 || sgn(u1) < 0) throw Error(ErrorKind::InvalidInput, "linear factor negative on the range");
  const ExactScalar v0 = ExactScalar::sqrt_of(u0), v1 = ExactScalar::sqrt_of(u1);
  const ExactScalar A(alpha);
  // dx = 2 v dv / beta; x = (v^2 - alpha)/beta; integrand (2/beta^(m+1)) (v^2 - alpha)^m v^(p+1)
  const int q = (p + 1) / 2;  // v^(p+1) = z^q, z = v^2
  ExactScalar scale = ExactScalar(Rational(2)) * rpow(ExactScalar(beta), -(m + 1));
  // polynomial part in v: coefficients of v^e
  std::map<int, ExactScalar> poly;
  ExactScalar logc_total;
  ExactScalar alg_total;
  // z^q = sum_r binom(q,r) alpha^(q-r) (z - alpha)^r
  for (int r = 0; r <= q; ++r) {
    ExactScalar w = ExactScalar(Rational(binom(q, r))) * rpow(A, q - r);
    int e = r + m;  // power of (z - alpha)
    if (e >= 0) {
      for (int s = 0; s <= e; ++s) {
        ExactScalar c = w * ExactScalar(Rational(binom(e, s))) * rpow(-A, e - s);
        poly[2 * s] += c;
      }
    } else {
      LogPart a = inverse_power(-e, v1, alpha, ExactScalar::sqrt_of(alpha));
      LogPart b = inverse_power(-e, v0, alpha, ExactScalar::sqrt_of(alpha));
      alg_total += w * (a.alg - b.alg);
      logc_total += w * a.logc;
    }
  }
  ExactScalar val = alg_total;
  for (const auto& [e, c] : poly) {
    if (c.is_zero()) continue;
    ExactScalar k(Rational(1, e + 1));
    val += c * k * (rpow(v1, e + 1) - rpow(v0, e + 1));
  }
  if (!logc_total.is_zero()) {
    const ExactScalar sa = ExactScalar::sqrt_of(alpha);
    auto abs_ratio = [&](const ExactScalar& v) {
      ExactScalar r = (v - sa) * (v + sa).inverse();
      return r.to_real() < 0 ? -r : r;
    };
    ExactScalar lg;
    if (v1.is_zero() && v0.is_zero()) lg = ExactScalar();
    else if (v0.is_zero()) lg = log_of(abs_ratio(v1));
    else if (v1.is_zero()) lg = -log_of(abs_ratio(v0));
    else lg = log_of(abs_ratio(v1) * abs_ratio(v0).inverse());
    val += logc_total * lg;
  }
  return scale * val;
}

}  // namespace pfkit
