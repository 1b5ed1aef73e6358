#pragma once

#include "pfkit/scalar.hpp"

#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace pfkit {

// Interned parameter names. Ids are assigned in first-use order.
using ParamId = std::uint32_t;
ParamId param_id(const std::string& name);
const std::string& param_name(ParamId id);

struct ParamMono {
  std::vector<std::pair<ParamId, std::uint32_t>> f;  // sorted by id, exponents > 0
  int degree() const;
  bool operator<(const ParamMono& o) const { return f < o.f; }
  bool operator==(const ParamMono& o) const { return f == o.f; }
  std::string to_string() const;
};

// Polynomial in perturbation parameters with constant-algebra coefficients.
// Melnikov coefficients are linear forms (degree <= 1); second-order terms
// produce bilinear products, so the type allows any degree.
class ParamPoly {
 public:
  using Terms = std::map<ParamMono, ExactScalar>;

  ParamPoly() = default;
  ParamPoly(const ExactScalar& c);  // NOLINT
  ParamPoly(long c) : ParamPoly(ExactScalar(c)) {}  // NOLINT
  static ParamPoly var(ParamId id, const ExactScalar& coeff = ExactScalar(1));
  static ParamPoly var(const std::string& name, const ExactScalar& coeff = ExactScalar(1)) {
    return var(param_id(name), coeff);
  }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  int degree() const;
  bool is_linear() const { return degree() <= 1; }
  ExactScalar constant() const;
  // Degree-one coefficients; throws unless linear.
  std::map<ParamId, ExactScalar> gradient() const;
  std::set<ParamId> variables() const;

  // Split into sum_d delta_d * coeff_d + rest, requiring degree <= 1 in the delta set.
  std::map<ParamId, ParamPoly> linear_in(const std::set<ParamId>& delta, ParamPoly* rest) const;

  ParamPoly operator-() const;
  friend ParamPoly operator+(const ParamPoly& a, const ParamPoly& b);
  friend ParamPoly operator-(const ParamPoly& a, const ParamPoly& b);
  friend ParamPoly operator*(const ParamPoly& a, const ParamPoly& b);
  friend ParamPoly operator*(const ExactScalar& s, const ParamPoly& a);
  ParamPoly& operator+=(const ParamPoly& o);
  ParamPoly& operator-=(const ParamPoly& o);
  friend bool operator==(const ParamPoly& a, const ParamPoly& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const ParamPoly& a, const ParamPoly& b) { return !(a == b); }

  ParamPoly substitute(const std::map<ParamId, ParamPoly>& subs) const;
  ParamPoly map_coeffs(const std::function<ExactScalar(const ExactScalar&)>& fn) const;
  // Numeric value at a parameter point (missing parameters count as zero).
  Real evaluate(const std::map<ParamId, Real>& point, const ConstantTable* table) const;

  std::string to_string() const;
  static ParamPoly parse(const std::string& s);

 private:
  void add_term(const ParamMono& m, const ExactScalar& c);
  Terms terms_;
};

using ParamLinear = ParamPoly;

}  // namespace pfkit
