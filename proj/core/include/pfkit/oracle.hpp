#pragma once

#include "pfkit/picard_fuchs.hpp"
#include "pfkit/reduction.hpp"

#include <functional>
#include <iosfwd>

namespace pfkit {

struct QuadratureConfig {
  int precision = 60;          // decimal digits, >= 30
  Real abscissa_tolerance = Real("1e-200");  // nodes closer than this to an end are dropped
  int max_levels = 12;
  void validate() const;
};

struct QuadResult {
  Real value;
  Real last_change;  // |S_k - S_{k-1}| at the accepted level
  int levels = 0;
};

// f(x, x - a, b - x); the distances are supplied without cancellation.
using EndpointIntegrand = std::function<Real(const Real&, const Real&, const Real&)>;
QuadResult tanh_sinh(const EndpointIntegrand& f, const Real& a, const Real& b, const QuadratureConfig& cfg = {});

enum class Region { closed, open_plus };

class Oracle {
 public:
  Oracle(Hamiltonian H, SeparationLine line = SeparationLine::pi(), QuadratureConfig cfg = {});

  const Hamiltonian& hamiltonian() const { return H_; }
  const SeparationLine& line() const { return line_; }
  const PeriodAnnulus& annulus() const { return A_; }
  const QuadratureConfig& config() const { return cfg_; }

  // Integral of x^i y^j dx, j >= -1, over the oval or over the arc in L > 0.
  Real integral(Region r, int i, int j, const Real& h) const;
  QuadResult integral_detail(Region r, int i, int j, const Real& h) const;
  // Closed integral of x^i y^j dy.
  Real dy_integral(int i, int j, const Real& h) const;
  // x2^i y2^j - x1^i y1^j at the arc ends.
  Real K(int i, int j, const Real& h) const;
  // x2^i y2 x2' - x1^i y1 x1', prime = d/dh along the line.
  Real J(int i, const Real& h) const;
  // Value of any reduction symbol.
  Real symbol(const BasisSymbol& s, const Real& h) const;
  Real evaluate(const IntegralExpr& e, const Real& h, const std::map<ParamId, Real>& point = {},
                const ConstantTable* table = nullptr) const;

 private:
  Hamiltonian H_;
  SeparationLine line_;
  QuadratureConfig cfg_;
  PeriodAnnulus A_;
};

struct PFResidual {
  Real h;
  Real residual_identity;  // derivative from the (i,-1) integrals
  Real residual_difference;  // derivative by central differences
};
// Relative residual |P X' - T X - forcing| / |X| per sample.
std::vector<PFResidual> pf_residual(const Oracle& o, const PFSystem& sys, const std::vector<Real>& h_samples);

struct ExpansionResidual {
  std::vector<std::pair<Real, Real>> table;  // (h, series - target)
  Real max_deviation;
  double slope = 0;  // least-squares slope of log|dev| against log|h - h0|
};
ExpansionResidual expansion_residual(const Series& s, const std::function<Real(const Real&)>& target,
                                     const Real& lo, const Real& hi, int samples = 8,
                                     const std::map<ParamId, Real>& point = {}, const ConstantTable* table = nullptr);

// (h, value) rows.
void write_csv(std::ostream& os, const std::vector<std::pair<Real, Real>>& rows, int digits = 30);

// Exact value of the integral of x^m (alpha + beta x)^(p/2) over [x0, x1],
// p odd, alpha > 0 and the linear factor nonnegative on the range. A log term
// that equals a rational multiple of ln((1+sqrt 5)/2) is returned through k4;
// any other log term is returned approximately.
ExactScalar linear_root_integral(int m, int p, const Rational& alpha, const Rational& beta, const Rational& x0,
                                 const Rational& x1);

}  // namespace pfkit
