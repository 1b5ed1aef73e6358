#include "pfkit/number.hpp"

#include <boost/math/constants/constants.hpp>

#include <sstream>

namespace pfkit {

const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::Unsupported: return "Unsupported";
    case ErrorKind::UnsupportedMonomialDegree: return "UnsupportedMonomialDegree";
    case ErrorKind::LogPowerOverflow: return "LogPowerOverflow";
    case ErrorKind::NotInvertible: return "NotInvertible";
    case ErrorKind::RootIsolationFailure: return "RootIsolationFailure";
    case ErrorKind::BranchAmbiguity: return "BranchAmbiguity";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::NoRoot: return "NoRoot";
    case ErrorKind::NotInRelativeCohomologyKernel: return "NotInRelativeCohomologyKernel";
    case ErrorKind::FirstOrderNonzero: return "FirstOrderNonzero";
    case ErrorKind::SingularPencil: return "SingularPencil";
    case ErrorKind::SeedUnavailable: return "SeedUnavailable";
    case ErrorKind::UnexpectedSingularStep: return "UnexpectedSingularStep";
    case ErrorKind::InconsistentForcing: return "InconsistentForcing";
    case ErrorKind::TruncationTooShort: return "TruncationTooShort";
    case ErrorKind::NonconformingSeries: return "NonconformingSeries";
    case ErrorKind::HypothesisViolated: return "HypothesisViolated";
    case ErrorKind::LevelSetNotFound: return "LevelSetNotFound";
    case ErrorKind::NonconvergentQuadrature: return "NonconvergentQuadrature";
  }
  return "Error";
}

static Real q2r(const Rational& q) {
  Real num(q.get_num().get_str());
  Real den(q.get_den().get_str());
  return num / den;
}

Real Number::to_real() const {
  if (exact()) return q2r(rational());
  return std::get<Real>(v_);
}

bool Number::is_zero() const {
  if (exact()) return sgn(rational()) == 0;
  return std::get<Real>(v_) == 0;
}

int Number::sign() const {
  if (exact()) return sgn(rational());
  const Real& r = std::get<Real>(v_);
  return r > 0 ? 1 : (r < 0 ? -1 : 0);
}

Number Number::operator-() const {
  if (exact()) return Number(Rational(-rational()));
  return Number(Real(-std::get<Real>(v_)));
}

Number operator+(const Number& a, const Number& b) {
  if (a.exact() && b.exact()) return Number(Rational(a.rational() + b.rational()));
  return Number(Real(a.to_real() + b.to_real()));
}
Number operator-(const Number& a, const Number& b) {
  if (a.exact() && b.exact()) return Number(Rational(a.rational() - b.rational()));
  return Number(Real(a.to_real() - b.to_real()));
}
Number operator*(const Number& a, const Number& b) {
  // exact zero annihilates approximations too
  if (a.exact() && a.is_zero()) return a;
  if (b.exact() && b.is_zero()) return b;
  if (a.exact() && b.exact()) return Number(Rational(a.rational() * b.rational()));
  return Number(Real(a.to_real() * b.to_real()));
}
Number operator/(const Number& a, const Number& b) {
  if (b.is_zero()) throw Error(ErrorKind::NotInvertible, "division by zero");
  if (a.exact() && a.is_zero()) return a;
  if (a.exact() && b.exact()) return Number(Rational(a.rational() / b.rational()));
  return Number(Real(a.to_real() / b.to_real()));
}

bool operator==(const Number& a, const Number& b) {
  if (a.exact() && b.exact()) return a.rational() == b.rational();
  if (a.exact() != b.exact()) return false;
  return a.to_real() == b.to_real();
}

bool operator<(const Number& a, const Number& b) {
  if (a.exact() && b.exact()) return a.rational() < b.rational();
  return a.to_real() < b.to_real();
}

std::string Number::to_string() const {
  if (exact()) return rational().get_str();
  return format_real(std::get<Real>(v_));
}

void split_square(const Integer& n_in, Integer& s, Integer& d) {
  if (n_in <= 0) throw Error(ErrorKind::InvalidInput, "split_square needs a positive integer");
  Integer n = n_in;
  s = 1;
  d = 1;
  for (Integer p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    for (int i = 0; i < e / 2; ++i) s *= p;
    if (e % 2) d *= p;
  }
  d *= n;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    out.push_back(p);
    while (n % p == 0) n /= p;
  }
  if (n > 1) out.push_back(n);
  return out;
}

std::string format_real(const Real& x, int digits) {
  if (x == 0) return "0";
  std::ostringstream os;
  os << std::scientific << std::setprecision(digits - 1) << x;
  return os.str();
}

Real parse_real(const std::string& s) {
  try {
    return Real(s);
  } catch (const std::exception&) {
    throw Error(ErrorKind::InvalidInput, "not a number: '" + s + "'");
  }
}

Rational parse_rational(const std::string& s) {
  Rational q;
  if (s.empty() || q.set_str(s, 10) != 0) throw Error(ErrorKind::InvalidInput, "not a rational: '" + s + "'");
  q.canonicalize();
  return q;
}

Real real_pi() { return boost::math::constants::pi<Real>(); }
Real real_sqrt(const Real& x) { return sqrt(x); }

Rational best_rational(const Real& x, const Integer& max_den) {
  // convergents p/q of the continued fraction of x
  Integer p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  Real r = x;
  for (int it = 0; it < 200; ++it) {
    Real fl = floor(r);
    Integer a;
    mpfr_get_z(a.get_mpz_t(), fl.backend().data(), MPFR_RNDN);
    Integer p2 = a * p1 + p0, q2 = a * q1 + q0;
    if (q2 > max_den) break;
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    Real frac = r - fl;
    if (frac < Real("1e-90")) break;
    r = 1 / frac;
  }
  if (q1 == 0) return Rational(0);
  Rational out(p1, q1);
  out.canonicalize();
  return out;
}

}  // namespace pfkit
