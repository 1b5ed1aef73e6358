#pragma once

#include "pfkit/poly.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace pfkit {

// Small exact rational for exponents.
struct Frac {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Frac() = default;
  Frac(std::int64_t n, std::int64_t d = 1);  // NOLINT
  static Frac inf() { return Frac(std::int64_t(1) << 40, 1); }
  bool is_inf() const { return num >= (std::int64_t(1) << 39) * den; }
  bool is_integer() const { return den == 1; }
  std::int64_t floor() const;
  Frac frac_part() const { return *this - Frac(floor()); }
  Real to_real() const;
  std::string to_string() const;
  static Frac parse(const std::string& s);

  friend Frac operator+(const Frac& a, const Frac& b);
  friend Frac operator-(const Frac& a, const Frac& b);
  friend Frac operator*(const Frac& a, const Frac& b);
  friend bool operator<(const Frac& a, const Frac& b);
  friend bool operator==(const Frac& a, const Frac& b) { return a.num == b.num && a.den == b.den; }
  friend bool operator!=(const Frac& a, const Frac& b) { return !(a == b); }
  friend bool operator<=(const Frac& a, const Frac& b) { return !(b < a); }
};

// Key of |s|^e (ln|s|)^log, s = h - h0. Ordered by asymptotic dominance as
// s -> 0: smaller exponent first, the log term ahead of the plain one.
struct SeriesKey {
  Frac e;
  int log = 0;
  bool operator<(const SeriesKey& o) const {
    if (e != o.e) return e < o.e;
    return log > o.log;
  }
  bool operator==(const SeriesKey& o) const { return e == o.e && log == o.log; }
};

// Truncated Puiseux-log series about h0 on one side of it. Terms are stored in
// powers of |s|; side = -1 means h < h0, where h^j|h|^r = (-1)^j |s|^(j+r).
class Series {
 public:
  using Terms = std::map<SeriesKey, ParamPoly>;

  Series() = default;
  Series(Rational h0, int side, Frac trunc) : h0_(std::move(h0)), side_(side), trunc_(trunc) {}

  static Series constant(const ParamPoly& c, const Rational& h0, int side);
  static Series from_poly(const PolyP& p, const Rational& h0, int side);
  static Series from_poly(const Poly& p, const Rational& h0, int side) { return from_poly(to_polyp(p), h0, side); }

  const Rational& base() const { return h0_; }
  int side() const { return side_; }
  Frac trunc() const { return trunc_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::int64_t denominator() const;
  bool has_log() const;
  Frac valuation() const;  // smallest stored exponent, trunc if empty

  ParamPoly coeff(const Frac& e, int log = 0) const;
  ExactScalar scalar_coeff(const Frac& e, int log = 0) const { return coeff(e, log).constant(); }
  void set(const Frac& e, int log, const ParamPoly& c);
  void add(const Frac& e, int log, const ParamPoly& c);

  Series truncated(const Frac& order) const;
  Series operator-() const;
  friend Series operator+(const Series& a, const Series& b);
  friend Series operator-(const Series& a, const Series& b);
  friend Series operator*(const Series& a, const Series& b);
  friend Series operator*(const ParamPoly& c, const Series& a);
  friend bool operator==(const Series& a, const Series& b) {
    return a.h0_ == b.h0_ && a.side_ == b.side_ && a.trunc_ == b.trunc_ && a.terms_ == b.terms_;
  }
  Series& operator+=(const Series& o) { return *this = *this + o; }
  Series& operator-=(const Series& o) { return *this = *this - o; }
  Series mul_poly(const PolyP& p) const;
  Series mul_poly(const Poly& p) const { return mul_poly(to_polyp(p)); }
  Series pow(int k) const;
  // d/dh
  Series derivative() const;
  Series map_coeffs(const std::function<ParamPoly(const ParamPoly&)>& fn) const;

  // Value at h (same side of h0); parameters/constants as in ParamPoly::evaluate.
  Real evaluate(const Real& h, const std::map<ParamId, Real>& point = {}, const ConstantTable* table = nullptr) const;

  // Display sign for |s|^e when shown as h^j |h|^(e - j) with j = e - class_start.
  int display_sign(const Frac& e, const Frac& class_start) const;
  // Smallest stored exponent in each residue class mod 1 (fractional classes).
  std::map<Frac, Frac> class_starts() const;
  std::string to_string() const;

 private:
  Rational h0_ = 0;
  int side_ = -1;
  Frac trunc_ = Frac::inf();
  Terms terms_;
};

using PuiseuxLogSeries = Series;

// Compositional inverse in the variable t = |s|^(1/p).
Series series_reversion(const Series& s);
// (c0 (1 + w))^alpha with lead_pow = c0^alpha supplied by the caller.
Series series_pow(const Series& s, const Rational& alpha, const ExactScalar& lead_pow);
// sqrt of a series with an exact or approximate positive constant term.
Series series_sqrt(const Series& s);

}  // namespace pfkit
