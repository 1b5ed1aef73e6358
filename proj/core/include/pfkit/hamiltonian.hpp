#pragma once

#include "pfkit/series.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace pfkit {

// H = y^2/2 + F(x), F(x) = b1 x + ... + bn x^n.
class Hamiltonian {
 public:
  Hamiltonian() = default;
  explicit Hamiltonian(std::vector<Rational> b);  // b[0] = b1, ..., b[n-1] = bn
  static Hamiltonian quintic();                    // -x^4/4 + x^5/5

  int degree() const { return static_cast<int>(b_.size()); }
  // b(k) for k = 1..n, zero outside.
  Rational b(int k) const { return k >= 1 && k <= degree() ? b_[k - 1] : Rational(0); }
  const Poly& F() const { return F_; }
  Rational F(const Rational& x) const;
  Real F(const Real& x) const;
  Real dF(const Real& x) const;
  std::string to_string() const;

 private:
  std::vector<Rational> b_;
  Poly F_;
};

enum class ThetaKind { pi, half_pi, generic };

// L(x,y) = sin(t)(x - c) - cos(t) y. Generic lines are y = k (x - c), k = tan t,
// with sin t > 0.
struct SeparationLine {
  ThetaKind kind = ThetaKind::pi;
  ExactScalar tan_theta;  // generic only
  Rational c = 0;

  static SeparationLine pi(const Rational& c = 0) { return {ThetaKind::pi, {}, c}; }
  static SeparationLine half_pi(const Rational& c) { return {ThetaKind::half_pi, {}, c}; }
  static SeparationLine generic(const ExactScalar& k, const Rational& c) { return {ThetaKind::generic, k, c}; }
  // Generic line through (c, 0) and the point of the level h0 above x_a.
  static SeparationLine through_anchor(const Hamiltonian& H, const Rational& x_a, const Rational& c,
                                       const Rational& h0);
  // Sign of dL/dt along the flow at (x, y); positive means the orbit enters L > 0.
  int crossing_sign(const Hamiltonian& H, const Real& x, const Real& y) const;
  std::string kind_name() const;
};

enum class CriticalKind { center, hyperbolic_saddle, nilpotent_saddle, cusp, degenerate };
const char* critical_kind_name(CriticalKind k);

struct CriticalDatum {
  Real x;
  std::optional<Rational> x_exact;
  Real h;
  std::optional<Rational> h_exact;
  int multiplicity = 1;  // as a root of F'
  CriticalKind kind = CriticalKind::center;
};

// Real roots of a polynomial with rational coefficients, with multiplicities,
// sorted; exact where rational.
struct RealRoot {
  Real x;
  std::optional<Rational> exact;
  int multiplicity = 1;
};
std::vector<RealRoot> real_roots(const Poly& p);

std::vector<CriticalDatum> critical_data(const Hamiltonian& H);

// Period annulus around a center: energies (alpha, beta) and the bounding critical points.
struct PeriodAnnulus {
  CriticalDatum center;
  Real alpha, beta;
  std::optional<Rational> beta_exact;
  std::optional<CriticalDatum> boundary;  // critical point on the outer level, if any
  std::optional<Real> left, right;        // nearest critical abscissae around the center
};
PeriodAnnulus period_annulus(const Hamiltonian& H, size_t center_index);
PeriodAnnulus default_annulus(const Hamiltonian& H);  // first center with a bounded annulus

// Turning points xL < x_center < xR of the oval at level h (closed at h = beta).
std::pair<Real, Real> turning_points(const Hamiltonian& H, const PeriodAnnulus& A, const Real& h);

enum class Endpoint { start, end };

// Intersection of the level H = h0 with the line, together with its branch data.
struct IntersectionAnchor {
  Real x, y;
  std::optional<Rational> x_exact;
  Endpoint which = Endpoint::start;
};
// Start and end of the arc in L > 0 on the level h of the annulus (alpha < h <= beta).
std::pair<IntersectionAnchor, IntersectionAnchor> intersection_anchors(const Hamiltonian& H,
                                                                       const SeparationLine& line,
                                                                       const PeriodAnnulus& A, const Real& h,
                                                                       const std::optional<Rational>& h_exact = {});
// Annulus whose energy range contains h0 (beta included).
PeriodAnnulus annulus_containing(const Hamiltonian& H, const Rational& h0);

struct IntersectionSeries {
  Series x, y;
  int p = 1;  // series in |h - h0|^(1/p)
};
// Series of the requested endpoint about h0 (the outer energy of the annulus),
// `terms` coefficients in the branch variable.
IntersectionSeries intersection_series(const Hamiltonian& H, const SeparationLine& line, const Rational& h0,
                                       Endpoint endpoint, int terms = 12);

// Other intersection of the line through (c,0) and (x_a, y_a) with the level h0.
Real opposite_intersection(const Hamiltonian& H, const SeparationLine& line, const Real& x_a,
                           const Rational& h0 = 0);
// Quintic form with the domain check 1 < x_a < 5/4.
Real opposite_intersection_quintic(const Real& x_a);

}  // namespace pfkit
