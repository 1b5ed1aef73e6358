#include "pfkit/reduction.hpp"

#include "pfkit/linalg.hpp"

#include <regex>

namespace pfkit {

namespace {

PolyP constant(const ExactScalar& c) { return PolyP(ParamPoly(c)); }
PolyP hpoly() { return PolyP::monomial(ParamPoly(1), 1); }

ExactScalar q(const Rational& v) { return ExactScalar(v); }

ExactScalar power(const ExactScalar& x, int k) {
  ExactScalar out(1);
  ExactScalar base = k < 0 ? x.inverse() : x;
  for (int i = 0; i < std::abs(k); ++i) out *= base;
  return out;
}

Integer binomial(int n, int k) {
  Integer out;
  mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return out;
}

}  // namespace

// ---- symbols and expressions -------------------------------------------------

std::string BasisSymbol::to_string() const {
  auto ij = [&](const char* head) { return std::string(head) + "_{" + std::to_string(i) + "," + std::to_string(j) + "}"; };
  switch (family) {
    case Family::closed:
      return ij("I");
    case Family::open:
      return ij("Ip");
    case Family::boundary:
      return "Kt_{" + std::to_string(i) + "}";
    case Family::raw_k:
      return ij("K");
    case Family::raw_closed:
      return ij("Iraw");
  }
  return "?";
}

BasisSymbol BasisSymbol::parse(const std::string& s) {
  static const std::regex two(R"(^(I|Ip|K|Iraw)_\{(\d+),(\d+)\}$)");
  static const std::regex one(R"(^Kt_\{(\d+)\}$)");
  std::smatch m;
  if (std::regex_match(s, m, one)) return Kt(std::stoi(m[1]));
  if (!std::regex_match(s, m, two)) throw Error(ErrorKind::InvalidInput, "bad basis symbol '" + s + "'");
  int i = std::stoi(m[2]), j = std::stoi(m[3]);
  std::string h = m[1];
  if (h == "I") {
    if (j != 1) return Iraw(i, j);
    return I(i);
  }
  if (h == "Ip") {
    if (j != 1) throw Error(ErrorKind::InvalidInput, "open basis symbols have j = 1");
    return Iplus(i);
  }
  if (h == "K") return K(i, j);
  return Iraw(i, j);
}

IntegralExpr IntegralExpr::symbol(const BasisSymbol& s, const PolyP& c) {
  IntegralExpr e;
  e.add(s, c);
  return e;
}

PolyP IntegralExpr::coeff(const BasisSymbol& s) const {
  auto it = terms_.find(s);
  return it == terms_.end() ? PolyP() : it->second;
}

void IntegralExpr::add(const BasisSymbol& s, const PolyP& c) {
  if (c.is_zero()) return;
  auto it = terms_.find(s);
  if (it == terms_.end()) {
    terms_.emplace(s, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

IntegralExpr operator+(const IntegralExpr& a, const IntegralExpr& b) {
  IntegralExpr out = a;
  out += b;
  return out;
}

IntegralExpr operator-(const IntegralExpr& a, const IntegralExpr& b) {
  IntegralExpr out = a;
  for (const auto& [s, c] : b.terms_) out.add(s, -c);
  return out;
}

IntegralExpr& IntegralExpr::operator+=(const IntegralExpr& o) {
  for (const auto& [s, c] : o.terms_) add(s, c);
  return *this;
}

IntegralExpr IntegralExpr::scaled(const PolyP& p) const {
  IntegralExpr out;
  for (const auto& [s, c] : terms_) out.add(s, c * p);
  return out;
}

IntegralExpr IntegralExpr::substitute(const std::map<ParamId, ParamPoly>& subs) const {
  IntegralExpr out;
  for (const auto& [s, c] : terms_) out.add(s, c.map([&](const ParamPoly& v) { return v.substitute(subs); }));
  return out;
}

std::set<ParamId> IntegralExpr::parameters() const {
  std::set<ParamId> out;
  for (const auto& [s, c] : terms_)
    for (const auto& v : c.coeffs()) {
      auto vs = v.variables();
      out.insert(vs.begin(), vs.end());
    }
  return out;
}

std::string IntegralExpr::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [s, c] : terms_) {
    if (!out.empty()) out += " + ";
    out += "(" + polyp_to_string(c) + ")*" + s.to_string();
  }
  return out;
}

// ---- planar polynomials ------------------------------------------------------

PlanarPoly PlanarPoly::monomial(int i, int j, const ParamPoly& c) {
  PlanarPoly p;
  p.add(i, j, c);
  return p;
}

PlanarPoly PlanarPoly::generic(const std::string& name, int degree, const std::string& suffix) {
  PlanarPoly p;
  for (int d = 0; d <= degree; ++d)
    for (int i = 0; i <= d; ++i) {
      int j = d - i;
      p.add(i, j, ParamPoly::var(name + std::to_string(i) + std::to_string(j) + suffix));
    }
  return p;
}

PlanarPoly PlanarPoly::from_H(const Hamiltonian& H) {
  PlanarPoly p = monomial(0, 2, ParamPoly(ExactScalar(Rational(1, 2))));
  for (int k = 1; k <= H.degree(); ++k) p.add(k, 0, ParamPoly(ExactScalar(H.b(k))));
  return p;
}

int PlanarPoly::degree() const {
  int d = -1;
  for (const auto& [ij, c] : terms_) d = std::max(d, ij.first + ij.second);
  return d;
}

ParamPoly PlanarPoly::coeff(int i, int j) const {
  auto it = terms_.find({i, j});
  return it == terms_.end() ? ParamPoly() : it->second;
}

void PlanarPoly::add(int i, int j, const ParamPoly& c) {
  if (c.is_zero()) return;
  auto [it, fresh] = terms_.emplace(std::make_pair(i, j), c);
  if (fresh) return;
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

PlanarPoly operator+(const PlanarPoly& a, const PlanarPoly& b) {
  PlanarPoly out = a;
  for (const auto& [ij, c] : b.terms_) out.add(ij.first, ij.second, c);
  return out;
}

PlanarPoly PlanarPoly::operator-() const {
  PlanarPoly out;
  for (const auto& [ij, c] : terms_) out.add(ij.first, ij.second, -c);
  return out;
}

PlanarPoly operator-(const PlanarPoly& a, const PlanarPoly& b) { return a + (-b); }

PlanarPoly operator*(const PlanarPoly& a, const PlanarPoly& b) {
  PlanarPoly out;
  for (const auto& [u, cu] : a.terms_)
    for (const auto& [v, cv] : b.terms_) out.add(u.first + v.first, u.second + v.second, cu * cv);
  return out;
}

PlanarPoly PlanarPoly::dx() const {
  PlanarPoly out;
  for (const auto& [ij, c] : terms_)
    if (ij.first > 0) out.add(ij.first - 1, ij.second, ExactScalar(static_cast<long>(ij.first)) * c);
  return out;
}

PlanarPoly PlanarPoly::dy() const {
  PlanarPoly out;
  for (const auto& [ij, c] : terms_)
    if (ij.second > 0) out.add(ij.first, ij.second - 1, ExactScalar(static_cast<long>(ij.second)) * c);
  return out;
}

PlanarPoly PlanarPoly::substitute(const std::map<ParamId, ParamPoly>& subs) const {
  PlanarPoly out;
  for (const auto& [ij, c] : terms_) out.add(ij.first, ij.second, c.substitute(subs));
  return out;
}

std::string PlanarPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [ij, c] : terms_) {
    std::string mono;
    auto factor = [&](const char* v, int e) {
      if (e == 0) return;
      if (!mono.empty()) mono += "*";
      mono += e == 1 ? std::string(v) : std::string(v) + "^" + std::to_string(e);
    };
    factor("x", ij.first);
    factor("y", ij.second);
    std::string cs = c.to_string();
    bool compound = c.terms().size() > 1 || cs.find(" + ") != std::string::npos || cs.find(" - ") != std::string::npos;
    if (compound) cs = "(" + cs + ")";
    if (!out.empty()) out += " + ";
    out += mono.empty() ? cs : cs + "*" + mono;
  }
  return out;
}

PlanarPoly PlanarPoly::parse(const std::string& s) {
  ParamPoly raw = ParamPoly::parse(s);
  ParamId xid = param_id("x"), yid = param_id("y");
  PlanarPoly out;
  for (const auto& [m, c] : raw.terms()) {
    int i = 0, j = 0;
    ParamMono rest;
    for (const auto& [id, e] : m.f) {
      if (id == xid)
        i = static_cast<int>(e);
      else if (id == yid)
        j = static_cast<int>(e);
      else
        rest.f.emplace_back(id, e);
    }
    ParamPoly coeff(c);
    for (const auto& [id, e] : rest.f)
      for (std::uint32_t k = 0; k < e; ++k) coeff = coeff * ParamPoly::var(id);
    out.add(i, j, coeff);
  }
  return out;
}

// ---- reduction context -------------------------------------------------------

ReductionContext::ReductionContext(Hamiltonian H, SeparationLine line) : H_(std::move(H)), line_(std::move(line)) {
  if (H_.degree() < 2) throw Error(ErrorKind::InvalidInput, "Hamiltonian degree must be at least 2");
  if (line_.kind == ThetaKind::generic) {
    // Taylor coefficients of F about c
    std::vector<ExactScalar> c = H_.F().coeffs();
    int n = static_cast<int>(c.size()) - 1;
    ExactScalar x0(line_.c);
    for (int i = 0; i < n; ++i)
      for (int k = n - 1; k >= i; --k) c[k] += x0 * c[k + 1];
    taylor_c_ = c;
  }
}

IntegralExpr ReductionContext::closed(int i, int j) {
  if (i < 0 || j < 0) throw Error(ErrorKind::InvalidInput, "negative index in closed integral");
  if (j % 2 == 0) return {};
  auto key = std::make_pair(i, j);
  if (auto it = closed_memo_.find(key); it != closed_memo_.end()) return it->second;
  const int n = H_.degree();
  IntegralExpr out;
  if (j >= 3) {
    // lower j first
    for (int k = 1; k <= n; ++k) {
      if (sgn(H_.b(k)) == 0) continue;
      out += closed(i + k, j - 2).scaled(q(Rational(k * j, i + 1) * H_.b(k)));
    }
  } else if (i <= n - 2) {
    out = IntegralExpr::symbol(BasisSymbol::I(i));
  } else {
    int ip = i - n;
    if (ip >= 0) out += closed(ip, 1).scaled(hpoly() * constant(q(2 * ip + 2)));
    for (int k = 1; k < n; ++k) {
      if (sgn(H_.b(k)) == 0) continue;
      out -= closed(ip + k, 1).scaled(q((2 * ip + 3 * k + 2) * H_.b(k)));
    }
    out = out.scaled(q(1 / Rational((2 * ip + 3 * n + 2) * H_.b(n))));
  }
  closed_memo_[key] = out;
  return out;
}

IntegralExpr ReductionContext::open(int i, int j) {
  if (i < 0 || j < 0) throw Error(ErrorKind::InvalidInput, "negative index in open integral");
  auto key = std::make_pair(i, j);
  if (auto it = open_memo_.find(key); it != open_memo_.end()) return it->second;
  const int n = H_.degree();
  IntegralExpr out;
  if (j == 0) {
    out = IntegralExpr::symbol(BasisSymbol::K(i + 1, 0), constant(q(Rational(1, i + 1))));
  } else if (j >= 2) {
    for (int k = 1; k <= n; ++k) {
      if (sgn(H_.b(k)) == 0) continue;
      out += open(i + k, j - 2).scaled(q(Rational(k * j) * H_.b(k)));
    }
    out.add(BasisSymbol::K(i + 1, j), constant(ExactScalar(1)));
    out = out.scaled(q(Rational(1, i + 1)));
  } else if (i <= n - 2) {
    out = IntegralExpr::symbol(BasisSymbol::Iplus(i));
  } else {
    int ip = i - n;
    if (ip >= 0) out += open(ip, 1).scaled(hpoly() * constant(q(2 * ip + 2)));
    for (int k = 1; k < n; ++k) {
      if (sgn(H_.b(k)) == 0) continue;
      out -= open(ip + k, 1).scaled(q((2 * ip + 3 * k + 2) * H_.b(k)));
    }
    out.add(BasisSymbol::K(ip + 1, 3), constant(ExactScalar(-1)));
    out = out.scaled(q(1 / Rational((2 * ip + 3 * n + 2) * H_.b(n))));
  }
  open_memo_[key] = out;
  return out;
}

IntegralExpr ReductionContext::boundary(int i, int j) {
  if (i < 0 || j < 0) throw Error(ErrorKind::InvalidInput, "negative index in boundary term");
  auto key = std::make_pair(i, j);
  if (auto it = boundary_memo_.find(key); it != boundary_memo_.end()) return it->second;
  const int n = H_.degree();
  IntegralExpr out;
  switch (line_.kind) {
    case ThetaKind::pi: {
      if (j >= 1 || i == 0) break;
      if (i <= n - 1) {
        out = IntegralExpr::symbol(BasisSymbol::Kt(i - 1));
        break;
      }
      // F(x1) = F(x2) = h
      out = boundary(i - n, 0).scaled(hpoly());
      for (int m = 1; m < n; ++m) {
        if (sgn(H_.b(m)) == 0) continue;
        out -= boundary(i - n + m, 0).scaled(q(H_.b(m)));
      }
      out = out.scaled(q(1 / H_.b(n)));
      break;
    }
    case ThetaKind::half_pi: {
      if (j % 2 == 0) break;
      ExactScalar ci = power(ExactScalar(line_.c), i);
      if (j == 1) {
        out = IntegralExpr::symbol(BasisSymbol::Kt(0), constant(ci));
        break;
      }
      PolyP step = (hpoly() - constant(q(H_.F(line_.c)))).scaled(ExactScalar(2));
      out = boundary(0, j - 2).scaled(step).scaled(ci);
      break;
    }
    case ThetaKind::generic: {
      const ExactScalar& k = line_.tan_theta;
      if (i > 0) {
        // x = c + y/k
        ExactScalar c(line_.c);
        for (int s = 0; s <= i; ++s) {
          ExactScalar w = ExactScalar(Rational(binomial(i, s))) * power(c, s) * power(k, s - i);
          if (w.is_zero()) continue;
          out += boundary(0, i + j - s).scaled(w);
        }
        break;
      }
      if (j == 0) break;
      if (j <= n - 1) {
        out = IntegralExpr::symbol(BasisSymbol::Kt(j - 1));
        break;
      }
      int jj = j - n;
      ExactScalar kn = power(k, n);
      ExactScalar lead = taylor_c_[n];
      out = boundary(0, jj).scaled(hpoly() * constant(kn));
      if (n == 2)
        lead += kn * q(Rational(1, 2));
      else
        out -= boundary(0, jj + 2).scaled(kn * q(Rational(1, 2)));
      for (int m = 0; m < n; ++m) {
        if (taylor_c_[m].is_zero()) continue;
        out -= boundary(0, jj + m).scaled(taylor_c_[m] * power(k, n - m));
      }
      out = out.scaled(lead.inverse());
      break;
    }
  }
  boundary_memo_[key] = out;
  return out;
}

IntegralExpr ReductionContext::normalize(const IntegralExpr& e) {
  IntegralExpr out;
  for (const auto& [s, c] : e.terms()) {
    switch (s.family) {
      case Family::closed:
      case Family::boundary:
        out.add(s, c);
        break;
      case Family::open:
        if (line_.kind == ThetaKind::pi)
          out.add(BasisSymbol::I(s.i), c.scaled(q(Rational(1, 2))));
        else
          out.add(s, c);
        break;
      case Family::raw_k:
        out += boundary(s.i, s.j).scaled(c);
        break;
      case Family::raw_closed:
        out += closed(s.i, s.j).scaled(c);
        break;
    }
  }
  return out;
}

IntegralExpr ReductionContext::closed_form(const PlanarPoly& Q, const PlanarPoly& P, bool reduce) {
  IntegralExpr raw;
  auto put = [&](int i, int j, const ParamPoly& c) {
    if (j % 2 == 0 || c.is_zero()) return;
    raw.add(BasisSymbol::Iraw(i, j), PolyP(c));
  };
  for (const auto& [ij, c] : Q.terms()) put(ij.first, ij.second, c);
  // -P dy, with oint x^i y^j dy = -i/(j+1) I_{i-1,j+1}
  for (const auto& [ij, c] : P.terms()) {
    auto [i, j] = ij;
    if (i == 0) continue;
    put(i - 1, j + 1, ExactScalar(Rational(i, j + 1)) * c);
  }
  return reduce ? normalize(raw) : raw;
}

IntegralExpr ReductionContext::open_form(const PlanarPoly& Q, const PlanarPoly& P) {
  IntegralExpr out;
  for (const auto& [ij, c] : Q.terms()) out += open(ij.first, ij.second).scaled(PolyP(c));
  // int x^i y^j dy = K_{i,j+1}/(j+1) - i/(j+1) I+_{i-1,j+1}
  for (const auto& [ij, c] : P.terms()) {
    auto [i, j] = ij;
    ParamPoly w = ExactScalar(Rational(1, j + 1)) * c;
    out.add(BasisSymbol::K(i, j + 1), PolyP(-w));
    if (i > 0) out += open(i - 1, j + 1).scaled(PolyP(ExactScalar(static_cast<long>(i)) * w));
  }
  return normalize(out);
}

// ---- public entry points -----------------------------------------------------

IntegralExpr reduce_closed(const Hamiltonian& H, int i, int j) { return ReductionContext(H).closed(i, j); }

IntegralExpr reduce_open(const Hamiltonian& H, const SeparationLine& line, int i, int j) {
  return ReductionContext(H, line).open(i, j);
}

IntegralExpr reduce_boundary(const Hamiltonian& H, const SeparationLine& line, int i, int j) {
  return ReductionContext(H, line).boundary(i, j);
}

IntegralExpr assemble_melnikov(const Hamiltonian& H, const SeparationLine& line, const PerturbationPair& pert) {
  ReductionContext ctx(H, line);
  IntegralExpr out = ctx.closed_form(pert.Q_minus, pert.P_minus);
  out += ctx.open_form(pert.Q_plus - pert.Q_minus, pert.P_plus - pert.P_minus);
  return out;
}

IntegralExpr raw_closed_melnikov(const Hamiltonian& H, const PlanarPoly& P, const PlanarPoly& Q) {
  return ReductionContext(H).closed_form(Q, P, false);
}

FrancoiseResult francoise_decompose(const Hamiltonian& H, const PlanarPoly& A, const PlanarPoly& B, int max_degree) {
  ReductionContext ctx(H);
  // oint omega = oint A dx + B dy, i.e. Q = A, P = -B
  if (!ctx.closed_form(A, -B).is_zero())
    throw Error(ErrorKind::NotInRelativeCohomologyKernel, "closed integral of the form does not vanish");
  const int n = H.degree();
  PlanarPoly rhs = B.dx() - A.dy();
  int d0 = std::max(A.degree(), B.degree());
  if (max_degree < 0) max_degree = std::max(d0, 1) + n + 1;

  // split the right-hand side by parameter monomial
  std::map<ParamMono, std::map<std::pair<int, int>, ExactScalar>> comps;
  for (const auto& [ij, c] : rhs.terms())
    for (const auto& [m, v] : c.terms()) comps[m][ij] = v;

  FrancoiseResult res;
  for (int D = std::max(1, rhs.degree() - n + 3); D <= max_degree; ++D) {
    // unknowns x^a y^b, no pure even powers of y
    std::vector<std::pair<int, int>> unk;
    for (int d = 0; d <= D; ++d)
      for (int a = 0; a <= d; ++a) {
        int b = d - a;
        if (a == 0 && b % 2 == 0) continue;
        unk.emplace_back(a, b);
      }
    // image monomials
    std::map<std::pair<int, int>, size_t> row;
    auto row_of = [&](int a, int b) {
      auto [it, fresh] = row.emplace(std::make_pair(a, b), row.size());
      return it->second;
    };
    std::vector<std::vector<std::pair<size_t, ExactScalar>>> cols(unk.size());
    for (size_t u = 0; u < unk.size(); ++u) {
      auto [a, b] = unk[u];
      // y r_x - F'(x) r_y
      if (a > 0) cols[u].emplace_back(row_of(a - 1, b + 1), ExactScalar(static_cast<long>(a)));
      if (b > 0)
        for (int k = 1; k <= n; ++k)
          if (sgn(H.b(k)) != 0) cols[u].emplace_back(row_of(a + k - 1, b - 1), ExactScalar(-Rational(k * b) * H.b(k)));
    }
    for (const auto& [m, vec] : comps)
      for (const auto& [ij, v] : vec) row_of(ij.first, ij.second);
    size_t nc = unk.size(), nr = row.size(), nrhs = comps.size();
    ScalarMatrix M(nr, nc + nrhs);
    for (size_t u = 0; u < nc; ++u)
      for (const auto& [r, v] : cols[u]) M(r, u) += v;
    size_t col = nc;
    for (const auto& [m, vec] : comps) {
      for (const auto& [ij, v] : vec) M(row.at(ij), col) = v;
      ++col;
    }
    Rref R = rref(M);
    bool consistent = true;
    for (size_t p : R.pivots)
      if (p >= nc) consistent = false;
    res.degree_searched = D;
    if (!consistent) continue;
    PlanarPoly r;
    for (size_t k = 0; k < R.pivots.size(); ++k) {
      size_t u = R.pivots[k];
      ParamPoly val;
      size_t cc = nc;
      for (const auto& [m, vec] : comps) {
        const ExactScalar& e = R.m(k, cc++);
        if (e.is_zero()) continue;
        ParamPoly mono(e);
        for (const auto& [id, ex] : m.f)
          for (std::uint32_t t = 0; t < ex; ++t) mono = mono * ParamPoly::var(id);
        val += mono;
      }
      r.add(unk[u].first, unk[u].second, val);
    }
    res.r = r;
    // omega - r dH closed, checked exactly
    PlanarPoly dHx, dHy = PlanarPoly::monomial(0, 1);
    for (int k = 1; k <= n; ++k) dHx.add(k - 1, 0, ParamPoly(ExactScalar(Rational(k) * H.b(k))));
    PlanarPoly Ar = A - r * dHx, Br = B - r * dHy;
    res.remainder_ok = Ar.dy() == Br.dx() && ctx.closed_form(Ar, -Br).is_zero();
    if (!res.remainder_ok) throw Error(ErrorKind::NotInRelativeCohomologyKernel, "remainder is not exact");
    return res;
  }
  throw Error(ErrorKind::NotInRelativeCohomologyKernel,
              "no polynomial r up to degree " + std::to_string(max_degree));
}

SecondOrderResult second_order_melnikov(const Hamiltonian& H, const PlanarPoly& P1, const PlanarPoly& Q1,
                                        const PlanarPoly& P2, const PlanarPoly& Q2) {
  ReductionContext ctx(H);
  if (!ctx.closed_form(Q1, P1).is_zero())
    throw Error(ErrorKind::FirstOrderNonzero, "first-order Melnikov function is not identically zero");
  SecondOrderResult out;
  out.francoise = francoise_decompose(H, Q1, -P1);
  const PlanarPoly& r = out.francoise.r;
  out.raw = ctx.closed_form(Q2 + r * Q1, P2 + r * P1, false);
  out.reduced = ctx.normalize(out.raw);
  return out;
}

}  // namespace pfkit
