#pragma once

#include <gmpxx.h>

#include <boost/multiprecision/mpfr.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace pfkit {

using Rational = mpq_class;
using Integer = mpz_class;

// 110 decimal digits of working precision; results are quoted to 60.
constexpr unsigned kWorkDigits = 110;
using Real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<kWorkDigits>,
                                           boost::multiprecision::et_off>;

enum class ErrorKind {
  InvalidInput,
  Unsupported,
  UnsupportedMonomialDegree,
  LogPowerOverflow,
  NotInvertible,
  RootIsolationFailure,
  BranchAmbiguity,
  OutOfRange,
  NoRoot,
  NotInRelativeCohomologyKernel,
  FirstOrderNonzero,
  SingularPencil,
  SeedUnavailable,
  UnexpectedSingularStep,
  InconsistentForcing,
  TruncationTooShort,
  NonconformingSeries,
  HypothesisViolated,
  LevelSetNotFound,
  NonconvergentQuadrature,
};

const char* error_kind_name(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// Exact rational or 110-digit approximation. Arithmetic with an approximate
// operand yields an approximate result.
class Number {
 public:
  Number() : v_(Rational(0)) {}
  Number(long v) : v_(Rational(v)) {}  // NOLINT
  Number(const Rational& q) : v_(q) { std::get<Rational>(v_).canonicalize(); }  // NOLINT
  Number(const Real& r) : v_(r) {}      // NOLINT

  bool exact() const { return std::holds_alternative<Rational>(v_); }
  const Rational& rational() const { return std::get<Rational>(v_); }
  Real to_real() const;
  bool is_zero() const;
  int sign() const;

  Number operator-() const;
  friend Number operator+(const Number& a, const Number& b);
  friend Number operator-(const Number& a, const Number& b);
  friend Number operator*(const Number& a, const Number& b);
  friend Number operator/(const Number& a, const Number& b);
  Number& operator+=(const Number& o) { return *this = *this + o; }
  Number& operator-=(const Number& o) { return *this = *this - o; }
  Number& operator*=(const Number& o) { return *this = *this * o; }

  // Exact values compare exactly; approximate ones by value, exact first.
  friend bool operator==(const Number& a, const Number& b);
  friend bool operator<(const Number& a, const Number& b);

  std::string to_string() const;

 private:
  std::variant<Rational, Real> v_;
};

// ---- integer helpers -------------------------------------------------------

// n = s^2 * d with d squarefree (trial division; n must be positive and modest).
void split_square(const Integer& n, Integer& s, Integer& d);
std::vector<std::uint64_t> prime_factors(std::uint64_t n);

// Decimal rendering of a Real with `digits` significant digits, deterministic.
std::string format_real(const Real& x, int digits = 50);
Real parse_real(const std::string& s);
Rational parse_rational(const std::string& s);

Real real_pi();
Real real_sqrt(const Real& x);

// Continued-fraction approximation with bounded denominator.
Rational best_rational(const Real& x, const Integer& max_den);

}  // namespace pfkit
