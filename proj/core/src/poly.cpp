#include "pfkit/poly.hpp"

namespace pfkit {

std::pair<Poly, Poly> poly_divmod(const Poly& a, const Poly& b) {
  if (b.is_zero()) throw Error(ErrorKind::NotInvertible, "polynomial division by zero");
  std::vector<ExactScalar> q(std::max(0, a.degree() - b.degree() + 1));
  Poly r = a;
  ExactScalar inv = b.lead().inverse();
  while (!r.is_zero() && r.degree() >= b.degree()) {
    int k = r.degree() - b.degree();
    ExactScalar c = r.lead() * inv;
    q[k] = c;
    Poly sub = Poly::monomial(c, k) * b;
    // force the leading term out; approximate arithmetic may leave residue
    std::vector<ExactScalar> rc = (r - sub).coeffs();
    if (static_cast<int>(rc.size()) > r.degree()) rc.resize(r.degree());
    r = Poly(std::move(rc));
  }
  return {Poly(std::move(q)), r};
}

Poly poly_monic(const Poly& a) {
  if (a.is_zero()) return a;
  return a.scaled(a.lead().inverse());
}

Poly poly_gcd(Poly a, Poly b) {
  while (!b.is_zero()) {
    Poly r = poly_divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return poly_monic(a);
}

Real poly_eval_real(const Poly& p, const Real& x, const ConstantTable* t) {
  Real acc = 0;
  for (size_t i = p.coeffs().size(); i-- > 0;) acc = acc * x + p.coeffs()[i].to_real(t);
  return acc;
}

template <class C>
static std::string render(const PolyT<C>& p, const char* var) {
  if (p.is_zero()) return "0";
  std::string out;
  for (int k = 0; k <= p.degree(); ++k) {
    const C& c = p.coeffs()[k];
    if (c.is_zero()) continue;
    std::string cs = c.to_string();
    bool compound = cs.find(" + ") != std::string::npos || cs.find(" - ") != std::string::npos;
    std::string t;
    std::string v = k == 0 ? "" : (k == 1 ? std::string(var) : std::string(var) + "^" + std::to_string(k));
    if (v.empty()) {
      t = cs;
    } else if (cs == "1") {
      t = v;
    } else if (cs == "-1") {
      t = "-" + v;
    } else {
      t = (compound ? "(" + cs + ")" : cs) + "*" + v;
    }
    if (out.empty()) {
      out = t;
    } else if (t[0] == '-' && !compound) {
      out += " - " + t.substr(1);
    } else {
      out += " + " + t;
    }
  }
  return out;
}

std::string poly_to_string(const Poly& p, const char* var) { return render(p, var); }
std::string polyp_to_string(const PolyP& p, const char* var) { return render(p, var); }

PolyP to_polyp(const Poly& p) {
  return p.map([](const ExactScalar& c) { return ParamPoly(c); });
}

}  // namespace pfkit
