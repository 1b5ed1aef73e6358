#include "pfkit/scalar.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

namespace pfkit {

namespace {
const char* kSymNames[kNumSyms] = {"k1", "k2", "k3", "k4", "At0", "At2"};

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\n");
  return s.substr(a, b - a + 1);
}

Real radical_value(std::uint64_t d) { return sqrt(Real(static_cast<unsigned long long>(d))); }
}  // namespace

const char* sym_name(Sym s) { return kSymNames[static_cast<int>(s)]; }

std::optional<Sym> sym_from_name(const std::string& name) {
  for (int i = 0; i < kNumSyms; ++i)
    if (name == kSymNames[i]) return static_cast<Sym>(i);
  return std::nullopt;
}

int Monomial::degree() const {
  int d = 0;
  for (auto x : e) d += x;
  return d;
}

bool Monomial::operator<(const Monomial& o) const {
  int da = degree(), db = o.degree();
  if (da != db) return da < db;
  if (e != o.e) return e > o.e;  // k1 before k2 at equal degree
  return radicand < o.radicand;
}

std::string Monomial::to_string() const {
  std::string out;
  if (radicand != 1) out = "sqrt(" + std::to_string(radicand) + ")";
  for (int i = 0; i < kNumSyms; ++i) {
    if (e[i] == 0) continue;
    if (!out.empty()) out += "*";
    out += kSymNames[i];
    if (e[i] > 1) out += "^" + std::to_string(e[i]);
  }
  return out;
}

const Real& ConstantTable::get(Sym s) const {
  const auto& v = value[static_cast<int>(s)];
  if (!v) throw Error(ErrorKind::InvalidInput, std::string("no numeric value for constant ") + sym_name(s));
  return *v;
}

// ---- ExactScalar -----------------------------------------------------------

ExactScalar::ExactScalar(const Number& n) {
  if (!n.is_zero()) terms_.emplace(Monomial{}, n);
}

ExactScalar ExactScalar::symbol(Sym s, const Number& coeff) {
  Monomial m;
  m.e[static_cast<int>(s)] = 1;
  return from_monomial(m, coeff);
}

ExactScalar ExactScalar::radical(std::uint64_t d, const Number& coeff) {
  if (d == 0) return ExactScalar();
  Integer s, f;
  split_square(Integer(static_cast<unsigned long>(d)), s, f);
  Monomial m;
  m.radicand = f.get_ui();
  return from_monomial(m, coeff * Number(Rational(s)));
}

ExactScalar ExactScalar::sqrt_of(const Rational& q) {
  if (sgn(q) < 0) throw Error(ErrorKind::InvalidInput, "sqrt of negative rational");
  if (sgn(q) == 0) return ExactScalar();
  // sqrt(a/b) = sqrt(a*b)/b
  Integer ab = q.get_num() * q.get_den();
  Integer s, d;
  split_square(ab, s, d);
  if (!d.fits_ulong_p()) throw Error(ErrorKind::Unsupported, "radicand too large");
  Monomial m;
  m.radicand = d.get_ui();
  Rational c(s, q.get_den());
  c.canonicalize();
  return from_monomial(m, Number(c));
}

ExactScalar ExactScalar::from_monomial(const Monomial& m, const Number& coeff) {
  ExactScalar out;
  if (!coeff.is_zero()) out.terms_.emplace(m, coeff);
  return out;
}

bool ExactScalar::is_rational() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == Monomial{});
}

Rational ExactScalar::rational() const {
  if (terms_.empty()) return Rational(0);
  if (!is_rational() || !terms_.begin()->second.exact())
    throw Error(ErrorKind::InvalidInput, "scalar is not an exact rational: " + to_string());
  return terms_.begin()->second.rational();
}

bool ExactScalar::radical_only() const {
  for (const auto& [m, c] : terms_)
    if (!m.radical_only()) return false;
  return true;
}

bool ExactScalar::exact() const {
  for (const auto& [m, c] : terms_)
    if (!c.exact()) return false;
  return true;
}

bool ExactScalar::has_symbol(Sym s) const {
  for (const auto& [m, c] : terms_)
    if (m.e[static_cast<int>(s)] != 0) return true;
  return false;
}

Number ExactScalar::coeff(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Number(0) : it->second;
}

void ExactScalar::add_term(const Monomial& m, const Number& c) {
  if (c.is_zero()) return;
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    terms_.emplace(m, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

ExactScalar ExactScalar::operator-() const {
  ExactScalar out;
  for (const auto& [m, c] : terms_) out.terms_.emplace(m, -c);
  return out;
}

ExactScalar& ExactScalar::operator+=(const ExactScalar& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}
ExactScalar& ExactScalar::operator-=(const ExactScalar& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}
ExactScalar operator+(const ExactScalar& a, const ExactScalar& b) {
  ExactScalar out = a;
  out += b;
  return out;
}
ExactScalar operator-(const ExactScalar& a, const ExactScalar& b) {
  ExactScalar out = a;
  out -= b;
  return out;
}

static Monomial mul_monomial(const Monomial& a, const Monomial& b, Integer& factor) {
  Monomial m;
  int distinct = 0;
  for (int i = 0; i < kNumSyms; ++i) {
    int e = a.e[i] + b.e[i];
    if (e > 2) throw Error(ErrorKind::UnsupportedMonomialDegree, "constant power above 2: " + a.to_string() + " * " + b.to_string());
    if (e) ++distinct;
    m.e[i] = static_cast<std::int8_t>(e);
  }
  if (distinct > 2)
    throw Error(ErrorKind::UnsupportedMonomialDegree, "more than two named constants: " + a.to_string() + " * " + b.to_string());
  std::uint64_t g = std::gcd(a.radicand, b.radicand);
  factor = static_cast<unsigned long>(g);
  m.radicand = (a.radicand / g) * (b.radicand / g);
  return m;
}

ExactScalar operator*(const ExactScalar& a, const ExactScalar& b) {
  ExactScalar out;
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) {
      Integer f;
      Monomial m = mul_monomial(ma, mb, f);
      out.add_term(m, ca * cb * Number(Rational(f)));
    }
  return out;
}

ExactScalar operator/(const ExactScalar& a, const ExactScalar& b) {
  if (b.is_rational()) {
    if (b.is_zero()) throw Error(ErrorKind::NotInvertible, "division by zero scalar");
    Number d = b.terms_.begin()->second;
    ExactScalar out;
    for (const auto& [m, c] : a.terms_) out.terms_.emplace(m, c / d);
    return out;
  }
  return a * b.inverse();
}

bool operator==(const ExactScalar& a, const ExactScalar& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  auto ia = a.terms_.begin();
  auto ib = b.terms_.begin();
  for (; ia != a.terms_.end(); ++ia, ++ib)
    if (!(ia->first == ib->first) || !(ia->second == ib->second)) return false;
  return true;
}

ExactScalar ExactScalar::inverse() const {
  if (is_zero()) throw Error(ErrorKind::NotInvertible, "zero has no inverse");
  if (!radical_only()) throw Error(ErrorKind::NotInvertible, "cannot invert a value with named constants: " + to_string());
  ExactScalar num(1);
  ExactScalar cur = *this;
  for (;;) {
    std::uint64_t p = 0;
    for (const auto& [m, c] : cur.terms_)
      if (m.radicand != 1) {
        p = prime_factors(m.radicand).front();
        break;
      }
    if (p == 0) break;
    ExactScalar conj;
    for (const auto& [m, c] : cur.terms_) conj.terms_.emplace(m, m.radicand % p == 0 ? -c : c);
    num *= conj;
    ExactScalar next = cur * conj;
    // exact cancellation can leave rounding residue in approximate mode
    cur = ExactScalar();
    for (const auto& [m, c] : next.terms_)
      if (m.radicand % p != 0) cur.terms_.emplace(m, c);
    if (cur.is_zero()) throw Error(ErrorKind::NotInvertible, "zero norm");
  }
  Number n = cur.terms_.begin()->second;
  return num / ExactScalar(n);
}

Real ExactScalar::to_real(const ConstantTable* table) const {
  Real acc = 0;
  for (const auto& [m, c] : terms_) {
    Real t = c.to_real();
    if (m.radicand != 1) t *= radical_value(m.radicand);
    for (int i = 0; i < kNumSyms; ++i) {
      if (!m.e[i]) continue;
      if (!table) throw Error(ErrorKind::InvalidInput, "named constant without value table: " + to_string());
      Real v = table->get(static_cast<Sym>(i));
      for (int k = 0; k < m.e[i]; ++k) t *= v;
    }
    acc += t;
  }
  return acc;
}

ExactScalar ExactScalar::substitute(const std::array<std::optional<ExactScalar>, kNumSyms>& vals) const {
  ExactScalar out;
  for (const auto& [m, c] : terms_) {
    Monomial base;
    base.radicand = m.radicand;
    ExactScalar t = from_monomial(base, c);
    for (int i = 0; i < kNumSyms; ++i) {
      if (!m.e[i]) continue;
      if (vals[i]) {
        for (int k = 0; k < m.e[i]; ++k) t = t * *vals[i];
      } else {
        Monomial sm;
        sm.e[i] = m.e[i];
        t = t * from_monomial(sm, Number(1));
      }
    }
    out += t;
  }
  return out;
}

ExactScalar ExactScalar::approximate() const {
  ExactScalar out;
  for (const auto& [m, c] : terms_) out.terms_.emplace(m, Number(c.to_real()));
  return out;
}

ExactScalar ExactScalar::chop(const Real& tol) const {
  ExactScalar out;
  for (const auto& [m, c] : terms_)
    if (c.exact() || abs(c.to_real()) >= tol) out.terms_.emplace(m, c);
  return out;
}

std::string ExactScalar::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    std::string ms = m.to_string();
    std::string t;
    if (ms.empty()) {
      t = c.to_string();
    } else if (c.exact() && c.rational() == 1) {
      t = ms;
    } else if (c.exact() && c.rational() == -1) {
      t = "-" + ms;
    } else {
      t = c.to_string() + "*" + ms;
    }
    if (first) {
      out = t;
      first = false;
    } else if (t[0] == '-') {
      out += " - " + t.substr(1);
    } else {
      out += " + " + t;
    }
  }
  return out;
}

static ExactScalar parse_factor(const std::string& f) {
  if (f.rfind("sqrt(", 0) == 0 && f.back() == ')') {
    std::string inner = f.substr(5, f.size() - 6);
    Rational q = parse_rational(trim(inner));
    return ExactScalar::sqrt_of(q);
  }
  std::string name = f;
  int power = 1;
  auto caret = f.find('^');
  if (caret != std::string::npos) {
    name = f.substr(0, caret);
    power = std::stoi(f.substr(caret + 1));
  }
  if (auto s = sym_from_name(trim(name))) {
    ExactScalar out(1);
    for (int i = 0; i < power; ++i) out *= ExactScalar::symbol(*s);
    return out;
  }
  if (f.find_first_of(".eE") != std::string::npos) return ExactScalar(Number(parse_real(f)));
  return ExactScalar(parse_rational(f));
}

ExactScalar ExactScalar::parse(const std::string& input) {
  std::string s = trim(input);
  if (s.empty()) throw Error(ErrorKind::InvalidInput, "empty scalar");
  ExactScalar out;
  size_t pos = 0;
  int depth = 0;
  std::vector<std::string> pieces;
  std::string cur;
  for (; pos < s.size(); ++pos) {
    char ch = s[pos];
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    bool exponent_sign = pos > 0 && (s[pos - 1] == 'e' || s[pos - 1] == 'E') && pos >= 2 && std::isdigit(static_cast<unsigned char>(s[pos - 2]));
    if (depth == 0 && (ch == '+' || ch == '-') && !exponent_sign && !trim(cur).empty()) {
      pieces.push_back(trim(cur));
      cur.clear();
    }
    cur += ch;
  }
  pieces.push_back(trim(cur));
  for (auto p : pieces) {
    int sign = 1;
    while (!p.empty() && (p[0] == '+' || p[0] == '-')) {
      if (p[0] == '-') sign = -sign;
      p = trim(p.substr(1));
    }
    if (p.empty()) throw Error(ErrorKind::InvalidInput, "malformed scalar: '" + input + "'");
    ExactScalar term(sign);
    size_t start = 0;
    depth = 0;
    for (size_t i = 0; i <= p.size(); ++i) {
      if (i < p.size() && p[i] == '(') ++depth;
      if (i < p.size() && p[i] == ')') --depth;
      if (i == p.size() || (p[i] == '*' && depth == 0)) {
        std::string f = trim(p.substr(start, i - start));
        if (f.empty()) throw Error(ErrorKind::InvalidInput, "malformed scalar: '" + input + "'");
        term *= parse_factor(f);
        start = i + 1;
      }
    }
    out += term;
  }
  return out;
}

}  // namespace pfkit
