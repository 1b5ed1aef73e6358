#pragma once

#include "pfkit/hamiltonian.hpp"

#include <map>
#include <string>

namespace pfkit {

enum class Family { closed, open, boundary, raw_k, raw_closed };

// closed: I_{i,1}; open: I+_{i,1}; boundary: the reduced boundary symbol Kt_i;
// raw_k: K_{i,j}; raw_closed: an unreduced I_{i,j}.
struct BasisSymbol {
  Family family = Family::closed;
  int i = 0;
  int j = 1;
  bool operator<(const BasisSymbol& o) const {
    if (family != o.family) return family < o.family;
    if (i != o.i) return i < o.i;
    return j < o.j;
  }
  bool operator==(const BasisSymbol& o) const { return family == o.family && i == o.i && j == o.j; }
  std::string to_string() const;
  static BasisSymbol parse(const std::string& s);
  static BasisSymbol I(int i) { return {Family::closed, i, 1}; }
  static BasisSymbol Iplus(int i) { return {Family::open, i, 1}; }
  static BasisSymbol Kt(int i) { return {Family::boundary, i, 0}; }
  static BasisSymbol K(int i, int j) { return {Family::raw_k, i, j}; }
  static BasisSymbol Iraw(int i, int j) { return {Family::raw_closed, i, j}; }
};

// sum over symbols of polynomial-in-h coefficients.
class IntegralExpr {
 public:
  using Terms = std::map<BasisSymbol, PolyP>;
  IntegralExpr() = default;
  static IntegralExpr symbol(const BasisSymbol& s, const PolyP& c = PolyP(ParamPoly(1)));

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  PolyP coeff(const BasisSymbol& s) const;
  void add(const BasisSymbol& s, const PolyP& c);

  friend IntegralExpr operator+(const IntegralExpr& a, const IntegralExpr& b);
  friend IntegralExpr operator-(const IntegralExpr& a, const IntegralExpr& b);
  IntegralExpr& operator+=(const IntegralExpr& o);
  IntegralExpr& operator-=(const IntegralExpr& o) { return *this = *this - o; }
  IntegralExpr scaled(const PolyP& p) const;
  IntegralExpr scaled(const ExactScalar& s) const { return scaled(PolyP(ParamPoly(s))); }
  friend bool operator==(const IntegralExpr& a, const IntegralExpr& b) { return a.terms_ == b.terms_; }
  IntegralExpr substitute(const std::map<ParamId, ParamPoly>& subs) const;
  std::set<ParamId> parameters() const;
  std::string to_string() const;

 private:
  Terms terms_;
};

// Bivariate polynomial in (x, y) with parameter coefficients.
class PlanarPoly {
 public:
  using Terms = std::map<std::pair<int, int>, ParamPoly>;
  PlanarPoly() = default;
  static PlanarPoly monomial(int i, int j, const ParamPoly& c = ParamPoly(1));
  // General degree-d polynomial sum name_{i}{j}{suffix} x^i y^j.
  static PlanarPoly generic(const std::string& name, int degree, const std::string& suffix = "");
  static PlanarPoly from_H(const Hamiltonian& H);

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int degree() const;
  ParamPoly coeff(int i, int j) const;
  void add(int i, int j, const ParamPoly& c);

  friend PlanarPoly operator+(const PlanarPoly& a, const PlanarPoly& b);
  friend PlanarPoly operator-(const PlanarPoly& a, const PlanarPoly& b);
  friend PlanarPoly operator*(const PlanarPoly& a, const PlanarPoly& b);
  PlanarPoly operator-() const;
  PlanarPoly dx() const;
  PlanarPoly dy() const;
  PlanarPoly substitute(const std::map<ParamId, ParamPoly>& subs) const;
  friend bool operator==(const PlanarPoly& a, const PlanarPoly& b) { return a.terms_ == b.terms_; }
  std::string to_string() const;
  // Polynomial expression in x, y and parameters, e.g. "a10*x + 3*b01*x*y^2".
  static PlanarPoly parse(const std::string& s);

 private:
  Terms terms_;
};

// Perturbation (P+, Q+) in L > 0 and (P-, Q-) in L < 0; Melnikov integrand Q dx - P dy.
struct PerturbationPair {
  PlanarPoly P_plus, Q_plus, P_minus, Q_minus;
  static PerturbationPair smooth(const PlanarPoly& P, const PlanarPoly& Q) { return {P, Q, P, Q}; }
};

// Memoized reductions for one Hamiltonian and separation line.
class ReductionContext {
 public:
  ReductionContext(Hamiltonian H, SeparationLine line = SeparationLine::pi());

  const Hamiltonian& hamiltonian() const { return H_; }
  const SeparationLine& line() const { return line_; }

  IntegralExpr closed(int i, int j);    // over I_{k,1}, 0 <= k <= n-2
  IntegralExpr open(int i, int j);      // over I+_{k,1} and raw K
  IntegralExpr boundary(int i, int j);  // over Kt_s
  // Replace raw K symbols by their boundary reductions; raw closed symbols by
  // closed reductions; open symbols by half closed ones when the line is y = 0.
  IntegralExpr normalize(const IntegralExpr& e);

  // Exact 1-form integrals of x^i y^j dx and x^i y^j dy over the closed oval
  // (raw symbols) and over the arc in L > 0.
  IntegralExpr closed_form(const PlanarPoly& Q, const PlanarPoly& P, bool reduce = true);
  IntegralExpr open_form(const PlanarPoly& Q, const PlanarPoly& P);

 private:
  Hamiltonian H_;
  SeparationLine line_;
  std::map<std::pair<int, int>, IntegralExpr> closed_memo_, open_memo_, boundary_memo_;
  std::vector<ExactScalar> taylor_c_;  // F about c, generic lines
};

IntegralExpr reduce_closed(const Hamiltonian& H, int i, int j);
IntegralExpr reduce_open(const Hamiltonian& H, const SeparationLine& line, int i, int j);
IntegralExpr reduce_boundary(const Hamiltonian& H, const SeparationLine& line, int i, int j);

IntegralExpr assemble_melnikov(const Hamiltonian& H, const SeparationLine& line, const PerturbationPair& pert);
// Smooth first-order function before elimination of higher closed integrals.
IntegralExpr raw_closed_melnikov(const Hamiltonian& H, const PlanarPoly& P, const PlanarPoly& Q);

struct FrancoiseResult {
  PlanarPoly r;
  bool remainder_ok = false;  // closed reduction of omega - r dH is zero
  int degree_searched = 0;
};
// omega = A dx + B dy.
FrancoiseResult francoise_decompose(const Hamiltonian& H, const PlanarPoly& A, const PlanarPoly& B,
                                    int max_degree = -1);

struct SecondOrderResult {
  FrancoiseResult francoise;
  IntegralExpr raw;      // over raw closed symbols
  IntegralExpr reduced;  // over I_{k,1}
};
// pert1 must already lie in the first-order kernel (parameters substituted).
SecondOrderResult second_order_melnikov(const Hamiltonian& H, const PlanarPoly& P1, const PlanarPoly& Q1,
                                        const PlanarPoly& P2, const PlanarPoly& Q2);

}  // namespace pfkit
