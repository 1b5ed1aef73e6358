#include "pfkit/series.hpp"

#include <numeric>

namespace pfkit {

// ---- Frac ------------------------------------------------------------------

Frac::Frac(std::int64_t n, std::int64_t d) : num(n), den(d) {
  if (den == 0) throw Error(ErrorKind::InvalidInput, "zero denominator in exponent");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  std::int64_t g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
}

std::int64_t Frac::floor() const {
  std::int64_t q = num / den;
  if (num % den != 0 && num < 0) --q;
  return q;
}

Real Frac::to_real() const { return Real(num) / Real(den); }

std::string Frac::to_string() const {
  if (den == 1) return std::to_string(num);
  return std::to_string(num) + "/" + std::to_string(den);
}

Frac Frac::parse(const std::string& s) {
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Frac(std::stoll(s));
    return Frac(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
  } catch (const std::logic_error&) {
    throw Error(ErrorKind::InvalidInput, "bad exponent '" + s + "'");
  }
}

Frac operator+(const Frac& a, const Frac& b) { return Frac(a.num * b.den + b.num * a.den, a.den * b.den); }
Frac operator-(const Frac& a, const Frac& b) { return Frac(a.num * b.den - b.num * a.den, a.den * b.den); }
Frac operator*(const Frac& a, const Frac& b) { return Frac(a.num * b.num, a.den * b.den); }
bool operator<(const Frac& a, const Frac& b) {
  return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
}

static Frac fmin(const Frac& a, const Frac& b) { return b < a ? b : a; }

// ---- Series ----------------------------------------------------------------

Series Series::constant(const ParamPoly& c, const Rational& h0, int side) {
  Series s(h0, side, Frac::inf());
  s.add(Frac(0), 0, c);
  return s;
}

Series Series::from_poly(const PolyP& p, const Rational& h0, int side) {
  Series out(h0, side, Frac::inf());
  for (int k = 0; k <= p.degree(); ++k) {
    if (p[k].is_zero()) continue;
    // (h0 + side t)^k
    Integer binom = 1;
    for (int m = 0; m <= k; ++m) {
      Rational c(binom);
      Rational h0pow = 1;
      for (int i = 0; i < k - m; ++i) h0pow *= h0;
      c *= h0pow;
      if (side < 0 && (m % 2)) c = -c;
      if (sgn(c) != 0) out.add(Frac(m), 0, ExactScalar(c) * p[k]);
      binom = binom * (k - m) / (m + 1);
    }
  }
  return out;
}

std::int64_t Series::denominator() const {
  std::int64_t d = 1;
  for (const auto& [k, c] : terms_) d = std::lcm(d, k.e.den);
  return d;
}

bool Series::has_log() const {
  for (const auto& [k, c] : terms_)
    if (k.log) return true;
  return false;
}

Frac Series::valuation() const { return terms_.empty() ? trunc_ : terms_.begin()->first.e; }

ParamPoly Series::coeff(const Frac& e, int log) const {
  auto it = terms_.find(SeriesKey{e, log});
  return it == terms_.end() ? ParamPoly() : it->second;
}

void Series::set(const Frac& e, int log, const ParamPoly& c) {
  if (log > 1) throw Error(ErrorKind::LogPowerOverflow, "log power above one");
  SeriesKey k{e, log};
  if (c.is_zero() || !(e < trunc_)) {
    terms_.erase(k);
    return;
  }
  terms_[k] = c;
}

void Series::add(const Frac& e, int log, const ParamPoly& c) {
  if (c.is_zero()) return;
  if (log > 1) throw Error(ErrorKind::LogPowerOverflow, "log power above one");
  if (!(e < trunc_)) return;
  SeriesKey k{e, log};
  auto it = terms_.find(k);
  if (it == terms_.end()) {
    terms_.emplace(k, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

Series Series::truncated(const Frac& order) const {
  Series out(h0_, side_, fmin(order, trunc_));
  for (const auto& [k, c] : terms_) out.add(k.e, k.log, c);
  return out;
}

Series Series::operator-() const {
  Series out = *this;
  for (auto& [k, c] : out.terms_) c = -c;
  return out;
}

static void check_base(const Series& a, const Series& b) {
  if (a.base() != b.base() || a.side() != b.side())
    throw Error(ErrorKind::InvalidInput, "series about different base points");
}

Series operator+(const Series& a, const Series& b) {
  check_base(a, b);
  Series out(a.base(), a.side(), fmin(a.trunc(), b.trunc()));
  for (const auto& [k, c] : a.terms()) out.add(k.e, k.log, c);
  for (const auto& [k, c] : b.terms()) out.add(k.e, k.log, c);
  return out;
}

Series operator-(const Series& a, const Series& b) { return a + (-b); }

Series operator*(const Series& a, const Series& b) {
  check_base(a, b);
  Frac t = fmin(a.trunc() + b.valuation(), b.trunc() + a.valuation());
  Series out(a.base(), a.side(), t);
  for (const auto& [ka, ca] : a.terms()) {
    for (const auto& [kb, cb] : b.terms()) {
      Frac e = ka.e + kb.e;
      if (!(e < t)) continue;
      if (ka.log + kb.log > 1) throw Error(ErrorKind::LogPowerOverflow, "product of two log terms");
      out.add(e, ka.log + kb.log, ca * cb);
    }
  }
  return out;
}

Series operator*(const ParamPoly& c, const Series& a) {
  Series out(a.base(), a.side(), a.trunc());
  for (const auto& [k, v] : a.terms()) out.add(k.e, k.log, c * v);
  return out;
}

Series Series::mul_poly(const PolyP& p) const { return *this * from_poly(p, h0_, side_); }

Series Series::pow(int k) const {
  if (k < 0) throw Error(ErrorKind::InvalidInput, "negative series power");
  Series out = constant(ParamPoly(1), h0_, side_);
  for (int i = 0; i < k; ++i) out = out * *this;
  return out;
}

Series Series::derivative() const {
  Series out(h0_, side_, trunc_.is_inf() ? trunc_ : trunc_ - Frac(1));
  ExactScalar sg(side_);
  for (const auto& [k, c] : terms_) {
    Frac e1 = k.e - Frac(1);
    if (k.e.num != 0) out.add(e1, k.log, (sg * ExactScalar(Rational(k.e.num, k.e.den))) * c);
    if (k.log) out.add(e1, 0, sg * c);
  }
  return out;
}

Series Series::map_coeffs(const std::function<ParamPoly(const ParamPoly&)>& fn) const {
  Series out(h0_, side_, trunc_);
  for (const auto& [k, c] : terms_) out.add(k.e, k.log, fn(c));
  return out;
}

Real Series::evaluate(const Real& h, const std::map<ParamId, Real>& point, const ConstantTable* table) const {
  Real hb = Real(h0_.get_num().get_str()) / Real(h0_.get_den().get_str());
  Real t = abs(h - hb);
  Real lt = t > 0 ? log(t) : Real(0);
  Real acc = 0;
  for (const auto& [k, c] : terms_) {
    Real v = c.evaluate(point, table);
    if (k.e.num != 0) v *= boost::multiprecision::pow(t, k.e.to_real());
    if (k.log) v *= lt;
    acc += v;
  }
  return acc;
}

int Series::display_sign(const Frac& e, const Frac& class_start) const {
  Frac j = e - class_start;
  if (!j.is_integer()) throw Error(ErrorKind::InvalidInput, "exponent outside its class");
  return (side_ < 0 && (j.num % 2 != 0)) ? -1 : 1;
}

std::map<Frac, Frac> Series::class_starts() const {
  std::map<Frac, Frac> out;
  for (const auto& [k, c] : terms_) {
    Frac r = k.e.frac_part();
    if (r.num == 0) continue;
    auto it = out.find(r);
    if (it == out.end() || k.e < it->second) out[r] = k.e;
  }
  return out;
}

std::string Series::to_string() const {
  auto starts = class_starts();
  std::string var = sgn(h0_) == 0 ? "h" : "(h - " + h0_.get_str() + ")";
  std::string out;
  for (const auto& [k, c] : terms_) {
    Frac r = k.e.frac_part();
    Frac start = r.num == 0 ? Frac(0) : starts.at(r);
    Frac j = k.e - start;
    int sg = display_sign(k.e, start);
    ParamPoly dc = sg < 0 ? -c : c;
    std::string scale;
    if (j.num > 0) scale = j.num == 1 ? var : var + "^" + j.to_string();
    if (start.num != 0) scale += (scale.empty() ? "" : "*") + std::string("|" + var + "|^(" + start.to_string() + ")");
    if (k.log) scale += (scale.empty() ? "" : "*") + std::string("ln|" + var + "|");
    std::string cs = dc.to_string();
    bool compound = dc.terms().size() > 1 || cs.find(" + ") != std::string::npos || cs.find(" - ") != std::string::npos;
    std::string t = scale.empty() ? (compound ? "(" + cs + ")" : cs) : (compound ? "(" + cs + ")" : cs) + "*" + scale;
    if (out.empty()) {
      out = t;
    } else {
      out += " + " + t;
    }
  }
  if (!trunc_.is_inf()) out += (out.empty() ? "" : " + ") + std::string("O(|" + var + "|^(" + trunc_.to_string() + "))");
  return out.empty() ? "0" : out;
}

// ---- reversion / powers ----------------------------------------------------

namespace {
using Coeffs = std::vector<ExactScalar>;

// truncated product of two coefficient vectors in t, indices < n
Coeffs cmul(const Coeffs& a, const Coeffs& b, size_t n) {
  Coeffs out(n);
  for (size_t i = 0; i < a.size() && i < n; ++i) {
    if (a[i].is_zero()) continue;
    for (size_t j = 0; j < b.size() && i + j < n; ++j)
      if (!b[j].is_zero()) out[i + j] += a[i] * b[j];
  }
  return out;
}

ExactScalar const_coeff(const ParamPoly& p) {
  if (!p.is_constant()) throw Error(ErrorKind::InvalidInput, "series coefficient depends on parameters");
  return p.constant();
}
}  // namespace

Series series_reversion(const Series& s) {
  if (s.has_log()) throw Error(ErrorKind::InvalidInput, "reversion of a series with log terms");
  std::int64_t p = s.denominator();
  Frac step(1, p);
  if (!s.coeff(Frac(0)).is_zero()) throw Error(ErrorKind::InvalidInput, "reversion needs a zero constant term");
  ExactScalar a1 = const_coeff(s.coeff(step));
  if (a1.is_zero()) throw Error(ErrorKind::NotInvertible, "leading term |s|^(1/p) absent");
  for (const auto& [k, c] : s.terms())
    if (k.e < step) throw Error(ErrorKind::NotInvertible, "series has terms below its leading exponent");
  // number of known t-coefficients
  std::int64_t n = s.trunc().is_inf() ? 13 : (s.trunc() * Frac(p)).floor() + ((s.trunc() * Frac(p)).is_integer() ? 0 : 1);
  Coeffs a(n);
  for (const auto& [k, c] : s.terms()) {
    std::int64_t idx = (k.e * Frac(p)).num;
    if (idx < n) a[idx] = const_coeff(c);
  }
  ExactScalar inv = a1.inverse();
  Coeffs b(n);
  if (n > 1) b[1] = inv;
  for (std::int64_t m = 2; m < n; ++m) {
    // [t^m] sum_{k>=2} a_k g^k with g = b_1..b_{m-1}
    ExactScalar acc;
    Coeffs gk = b;  // g^1
    gk.resize(m + 1);
    for (std::int64_t k = 2; k <= m; ++k) {
      gk = cmul(gk, b, m + 1);
      if (!a[k].is_zero()) acc += a[k] * gk[m];
    }
    b[m] = -(acc * inv);
  }
  Series out(s.base(), s.side(), s.trunc().is_inf() ? Frac(n, p) : s.trunc());
  for (std::int64_t m = 1; m < n; ++m) out.add(Frac(m, p), 0, ParamPoly(b[m]));
  return out;
}

Series series_pow(const Series& s, const Rational& alpha, const ExactScalar& lead_pow) {
  if (s.has_log()) throw Error(ErrorKind::InvalidInput, "power of a series with log terms");
  if (s.trunc().is_inf()) throw Error(ErrorKind::InvalidInput, "series power needs a finite truncation order");
  ExactScalar c0 = const_coeff(s.coeff(Frac(0)));
  if (c0.is_zero()) throw Error(ErrorKind::NotInvertible, "series power needs a nonzero constant term");
  for (const auto& [k, c] : s.terms())
    if (k.e < Frac(0)) throw Error(ErrorKind::InvalidInput, "negative exponent in series power");
  Series w = s.map_coeffs([&](const ParamPoly& c) { return ParamPoly(const_coeff(c) / c0); });
  w.set(Frac(0), 0, ParamPoly());
  Frac v = w.valuation();
  Series out = Series::constant(ParamPoly(lead_pow), s.base(), s.side()).truncated(s.trunc());
  if (w.is_zero()) return out;
  Series wk = Series::constant(ParamPoly(1), s.base(), s.side());
  Rational binom = 1;
  for (int k = 1;; ++k) {
    if (!(Frac(k) * v < s.trunc())) break;
    binom = binom * (alpha - (k - 1)) / k;
    wk = wk * w;
    out += ParamPoly(lead_pow * ExactScalar(binom)) * wk;
  }
  return out;
}

Series series_sqrt(const Series& s) {
  ExactScalar c0 = s.scalar_coeff(Frac(0));
  if (c0.is_zero()) throw Error(ErrorKind::NotInvertible, "sqrt of a series without constant term");
  ExactScalar root;
  if (c0.is_rational() && c0.exact()) {
    Rational q = c0.rational();
    if (sgn(q) < 0) throw Error(ErrorKind::InvalidInput, "sqrt of a negative series");
    root = ExactScalar::sqrt_of(q);
  } else if (c0.radical_only() && !c0.exact()) {
    Real v = c0.to_real();
    if (v < 0) throw Error(ErrorKind::InvalidInput, "sqrt of a negative series");
    root = ExactScalar(Number(Real(sqrt(v))));
  } else {
    throw Error(ErrorKind::Unsupported, "sqrt of an irrational exact constant: " + c0.to_string());
  }
  return series_pow(s, Rational(1, 2), root);
}

}  // namespace pfkit
