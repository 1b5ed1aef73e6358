#pragma once

#include "pfkit/number.hpp"

#include <array>
#include <map>
#include <optional>
#include <string>

namespace pfkit {

// Named analytic constants, kept as free symbols.
enum class Sym : int { k1 = 0, k2, k3, k4, At0, At2 };
constexpr int kNumSyms = 6;
const char* sym_name(Sym s);
std::optional<Sym> sym_from_name(const std::string& name);

// sqrt(radicand) * prod sym^e. radicand is squarefree, 1 for no radical.
struct Monomial {
  std::uint64_t radicand = 1;
  std::array<std::int8_t, kNumSyms> e{};

  int degree() const;
  bool radical_only() const { return degree() == 0; }
  bool operator==(const Monomial& o) const { return radicand == o.radicand && e == o.e; }
  bool operator<(const Monomial& o) const;
  std::string to_string() const;  // "" for the unit monomial
};

// Numeric values for the named constants. Missing entries make evaluation throw.
struct ConstantTable {
  std::array<std::optional<Real>, kNumSyms> value;
  void set(Sym s, const Real& v) { value[static_cast<int>(s)] = v; }
  const Real& get(Sym s) const;
};

class ExactScalar {
 public:
  using Terms = std::map<Monomial, Number>;

  ExactScalar() = default;
  ExactScalar(long v) : ExactScalar(Number(v)) {}             // NOLINT
  ExactScalar(const Rational& q) : ExactScalar(Number(q)) {}  // NOLINT
  ExactScalar(const Number& n);                               // NOLINT

  static ExactScalar symbol(Sym s, const Number& coeff = Number(1));
  static ExactScalar radical(std::uint64_t d, const Number& coeff = Number(1));
  // sqrt of a nonnegative rational as q*sqrt(d).
  static ExactScalar sqrt_of(const Rational& q);
  static ExactScalar from_monomial(const Monomial& m, const Number& coeff);

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_rational() const;
  Rational rational() const;  // throws unless is_rational() and exact
  bool radical_only() const;
  bool exact() const;
  bool has_symbol(Sym s) const;
  // Coefficient of a single monomial.
  Number coeff(const Monomial& m) const;

  ExactScalar operator-() const;
  friend ExactScalar operator+(const ExactScalar& a, const ExactScalar& b);
  friend ExactScalar operator-(const ExactScalar& a, const ExactScalar& b);
  friend ExactScalar operator*(const ExactScalar& a, const ExactScalar& b);
  friend ExactScalar operator/(const ExactScalar& a, const ExactScalar& b);
  ExactScalar& operator+=(const ExactScalar& o);
  ExactScalar& operator-=(const ExactScalar& o);
  ExactScalar& operator*=(const ExactScalar& o) { return *this = *this * o; }
  friend bool operator==(const ExactScalar& a, const ExactScalar& b);
  friend bool operator!=(const ExactScalar& a, const ExactScalar& b) { return !(a == b); }

  // Only for radical-only values: product of Galois conjugates over the norm.
  ExactScalar inverse() const;

  Real to_real(const ConstantTable* table = nullptr) const;
  // Replace named constants by given scalars (radical-only or rational).
  ExactScalar substitute(const std::array<std::optional<ExactScalar>, kNumSyms>& vals) const;
  // Drop exactness: every coefficient becomes a Real.
  ExactScalar approximate() const;
  // Approximate coefficients with magnitude below tol are removed.
  ExactScalar chop(const Real& tol) const;

  std::string to_string() const;
  static ExactScalar parse(const std::string& s);

 private:
  void add_term(const Monomial& m, const Number& c);
  Terms terms_;
};

}  // namespace pfkit
