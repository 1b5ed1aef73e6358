#include "pfkit/params.hpp"

#include <cctype>
#include <mutex>
#include <unordered_map>

namespace pfkit {

namespace {
struct Registry {
  std::mutex mu;
  std::vector<std::string> names;
  std::unordered_map<std::string, ParamId> ids;
};
Registry& registry() {
  static Registry r;
  return r;
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\n");
  return s.substr(a, b - a + 1);
}
}  // namespace

ParamId param_id(const std::string& name) {
  auto& r = registry();
  std::lock_guard<std::mutex> lock(r.mu);
  auto it = r.ids.find(name);
  if (it != r.ids.end()) return it->second;
  ParamId id = static_cast<ParamId>(r.names.size());
  r.names.push_back(name);
  r.ids.emplace(name, id);
  return id;
}

const std::string& param_name(ParamId id) {
  auto& r = registry();
  std::lock_guard<std::mutex> lock(r.mu);
  return r.names.at(id);
}

int ParamMono::degree() const {
  int d = 0;
  for (const auto& [id, e] : f) d += static_cast<int>(e);
  return d;
}

std::string ParamMono::to_string() const {
  std::string out;
  for (const auto& [id, e] : f) {
    if (!out.empty()) out += "*";
    out += param_name(id);
    if (e > 1) out += "^" + std::to_string(e);
  }
  return out;
}

static ParamMono mono_mul(const ParamMono& a, const ParamMono& b) {
  ParamMono m;
  size_t i = 0, j = 0;
  while (i < a.f.size() || j < b.f.size()) {
    if (j == b.f.size() || (i < a.f.size() && a.f[i].first < b.f[j].first)) {
      m.f.push_back(a.f[i++]);
    } else if (i == a.f.size() || b.f[j].first < a.f[i].first) {
      m.f.push_back(b.f[j++]);
    } else {
      m.f.emplace_back(a.f[i].first, a.f[i].second + b.f[j].second);
      ++i;
      ++j;
    }
  }
  return m;
}

ParamPoly::ParamPoly(const ExactScalar& c) {
  if (!c.is_zero()) terms_.emplace(ParamMono{}, c);
}

ParamPoly ParamPoly::var(ParamId id, const ExactScalar& coeff) {
  ParamPoly p;
  ParamMono m;
  m.f.emplace_back(id, 1);
  if (!coeff.is_zero()) p.terms_.emplace(m, coeff);
  return p;
}

bool ParamPoly::is_constant() const { return degree() <= 0; }

int ParamPoly::degree() const {
  int d = terms_.empty() ? -1 : 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
  return d;
}

ExactScalar ParamPoly::constant() const {
  auto it = terms_.find(ParamMono{});
  return it == terms_.end() ? ExactScalar() : it->second;
}

std::map<ParamId, ExactScalar> ParamPoly::gradient() const {
  std::map<ParamId, ExactScalar> g;
  for (const auto& [m, c] : terms_) {
    int d = m.degree();
    if (d > 1) throw Error(ErrorKind::InvalidInput, "form is not linear in parameters: " + to_string());
    if (d == 1) g.emplace(m.f[0].first, c);
  }
  return g;
}

std::set<ParamId> ParamPoly::variables() const {
  std::set<ParamId> out;
  for (const auto& [m, c] : terms_)
    for (const auto& [id, e] : m.f) out.insert(id);
  return out;
}

std::map<ParamId, ParamPoly> ParamPoly::linear_in(const std::set<ParamId>& delta, ParamPoly* rest) const {
  std::map<ParamId, ParamPoly> out;
  if (rest) *rest = ParamPoly();
  for (const auto& [m, c] : terms_) {
    ParamMono other;
    ParamId hit = 0;
    int hits = 0;
    for (const auto& [id, e] : m.f) {
      if (delta.count(id)) {
        hits += static_cast<int>(e);
        hit = id;
      } else {
        other.f.emplace_back(id, e);
      }
    }
    if (hits > 1) throw Error(ErrorKind::InvalidInput, "coefficient is not linear in the selected parameters: " + to_string());
    if (hits == 1) {
      out[hit].add_term(other, c);
      if (out[hit].is_zero()) out.erase(hit);
    } else if (rest) {
      rest->add_term(other, c);
    }
  }
  return out;
}

void ParamPoly::add_term(const ParamMono& m, const ExactScalar& c) {
  if (c.is_zero()) return;
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    terms_.emplace(m, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

ParamPoly ParamPoly::operator-() const {
  ParamPoly out;
  for (const auto& [m, c] : terms_) out.terms_.emplace(m, -c);
  return out;
}

ParamPoly& ParamPoly::operator+=(const ParamPoly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}
ParamPoly& ParamPoly::operator-=(const ParamPoly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}
ParamPoly operator+(const ParamPoly& a, const ParamPoly& b) {
  ParamPoly out = a;
  out += b;
  return out;
}
ParamPoly operator-(const ParamPoly& a, const ParamPoly& b) {
  ParamPoly out = a;
  out -= b;
  return out;
}
ParamPoly operator*(const ParamPoly& a, const ParamPoly& b) {
  ParamPoly out;
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) out.add_term(mono_mul(ma, mb), ca * cb);
  return out;
}
ParamPoly operator*(const ExactScalar& s, const ParamPoly& a) {
  ParamPoly out;
  if (s.is_zero()) return out;
  for (const auto& [m, c] : a.terms_) out.add_term(m, s * c);
  return out;
}

ParamPoly ParamPoly::substitute(const std::map<ParamId, ParamPoly>& subs) const {
  ParamPoly out;
  for (const auto& [m, c] : terms_) {
    ParamPoly t(c);
    ParamMono keep;
    for (const auto& [id, e] : m.f) {
      auto it = subs.find(id);
      if (it == subs.end()) {
        keep.f.emplace_back(id, e);
        continue;
      }
      for (std::uint32_t k = 0; k < e; ++k) t = t * it->second;
    }
    ParamPoly k;
    k.terms_.emplace(keep, ExactScalar(1));
    out += t * k;
  }
  return out;
}

ParamPoly ParamPoly::map_coeffs(const std::function<ExactScalar(const ExactScalar&)>& fn) const {
  ParamPoly out;
  for (const auto& [m, c] : terms_) out.add_term(m, fn(c));
  return out;
}

Real ParamPoly::evaluate(const std::map<ParamId, Real>& point, const ConstantTable* table) const {
  Real acc = 0;
  for (const auto& [m, c] : terms_) {
    Real t = c.to_real(table);
    for (const auto& [id, e] : m.f) {
      auto it = point.find(id);
      Real v = it == point.end() ? Real(0) : it->second;
      for (std::uint32_t k = 0; k < e; ++k) t *= v;
    }
    acc += t;
  }
  return acc;
}

std::string ParamPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [m, c] : terms_) {
    std::string t;
    std::string ms = m.to_string();
    std::string cs = c.to_string();
    bool compound = c.terms().size() > 1;
    if (ms.empty()) {
      t = compound ? "(" + cs + ")" : cs;
    } else if (cs == "1") {
      t = ms;
    } else if (cs == "-1") {
      t = "-" + ms;
    } else {
      t = (compound ? "(" + cs + ")" : cs) + "*" + ms;
    }
    if (out.empty()) {
      out = t;
    } else if (t[0] == '-') {
      out += " - " + t.substr(1);
    } else {
      out += " + " + t;
    }
  }
  return out;
}

// Grammar: sum of terms; term = factor ('*' factor)*; factor = '(' scalar ')' |
// scalar atom | param[^n].
ParamPoly ParamPoly::parse(const std::string& input) {
  std::string s = trim(input);
  if (s.empty()) throw Error(ErrorKind::InvalidInput, "empty parameter expression");
  std::vector<std::string> pieces;
  std::string cur;
  int depth = 0;
  for (size_t pos = 0; pos < s.size(); ++pos) {
    char ch = s[pos];
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    bool exponent_sign = pos >= 2 && (s[pos - 1] == 'e' || s[pos - 1] == 'E') &&
                         std::isdigit(static_cast<unsigned char>(s[pos - 2]));
    if (depth == 0 && (ch == '+' || ch == '-') && !exponent_sign && !trim(cur).empty()) {
      pieces.push_back(trim(cur));
      cur.clear();
    }
    cur += ch;
  }
  pieces.push_back(trim(cur));
  ParamPoly out;
  for (auto p : pieces) {
    int sign = 1;
    while (!p.empty() && (p[0] == '+' || p[0] == '-')) {
      if (p[0] == '-') sign = -sign;
      p = trim(p.substr(1));
    }
    if (p.empty()) throw Error(ErrorKind::InvalidInput, "malformed expression: '" + input + "'");
    ParamPoly term{ExactScalar(sign)};
    size_t start = 0;
    depth = 0;
    for (size_t i = 0; i <= p.size(); ++i) {
      if (i < p.size() && p[i] == '(') ++depth;
      if (i < p.size() && p[i] == ')') --depth;
      if (i < p.size() && !(p[i] == '*' && depth == 0)) continue;
      std::string f = trim(p.substr(start, i - start));
      start = i + 1;
      if (f.empty()) throw Error(ErrorKind::InvalidInput, "malformed expression: '" + input + "'");
      if (f.front() == '(' && f.back() == ')') {
        term = ExactScalar::parse(f.substr(1, f.size() - 2)) * term;
        continue;
      }
      std::string name = f;
      unsigned power = 1;
      auto caret = f.find('^');
      if (caret != std::string::npos) {
        name = trim(f.substr(0, caret));
        power = static_cast<unsigned>(std::stoul(f.substr(caret + 1)));
      }
      bool identifier = std::isalpha(static_cast<unsigned char>(name[0])) && name.rfind("sqrt", 0) != 0 &&
                        !sym_from_name(name);
      if (identifier) {
        for (unsigned k = 0; k < power; ++k) term = term * var(name);
      } else {
        term = ExactScalar::parse(f) * term;
      }
    }
    out += term;
  }
  return out;
}

}  // namespace pfkit
