#include "pfkit/picard_fuchs.hpp"

#include <numeric>
#include <sstream>

namespace pfkit {

namespace {

ScalarMatrix eval_at(const PolyMatrix& m, const ExactScalar& h) {
  ScalarMatrix out(m.rows(), m.cols());
  for (size_t i = 0; i < m.rows(); ++i)
    for (size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j).eval(h);
  return out;
}

PolyMatrix lift(const ScalarMatrix& m) {
  PolyMatrix out(m.rows(), m.cols());
  for (size_t i = 0; i < m.rows(); ++i)
    for (size_t j = 0; j < m.cols(); ++j) out(i, j) = Poly(m(i, j));
  return out;
}

PolyMatrix add(const PolyMatrix& a, const PolyMatrix& b) {
  PolyMatrix out(a.rows(), a.cols());
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j) + b(i, j);
  return out;
}

template <class S>
PolyMatrix scale(const PolyMatrix& a, const S& s) {
  PolyMatrix out(a.rows(), a.cols());
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j).scaled(s);
  return out;
}

// Newton form through (xs[k], ys[k]).
Poly interpolate(const std::vector<ExactScalar>& xs, std::vector<ExactScalar> ys) {
  size_t n = xs.size();
  for (size_t lvl = 1; lvl < n; ++lvl)
    for (size_t k = n - 1; k >= lvl; --k) ys[k] = (ys[k] - ys[k - 1]) / (xs[k] - xs[k - lvl]);
  Poly out;
  for (size_t k = n; k-- > 0;) out = out * (Poly::h() - Poly(xs[k])) + Poly(ys[k]);
  return out;
}

ScalarMatrix minor_of(const ScalarMatrix& m, size_t r, size_t c) {
  ScalarMatrix out(m.rows() - 1, m.cols() - 1);
  for (size_t i = 0, oi = 0; i < m.rows(); ++i) {
    if (i == r) continue;
    for (size_t j = 0, oj = 0; j < m.cols(); ++j) {
      if (j == c) continue;
      out(oi, oj++) = m(i, j);
    }
    ++oi;
  }
  return out;
}

Poly exact_quotient(const Poly& a, const Poly& g) {
  auto [q, r] = poly_divmod(a, g);
  if (!r.is_zero()) throw Error(ErrorKind::SingularPencil, "adjugate entries not divisible by their gcd");
  return q;
}

// Multiplies every coefficient so that the whole collection is integral and
// content-free with lead(P) > 0.
Rational normalizer(const Poly& P, const PolyMatrix& T) {
  Integer num = 0, den = 1;
  auto visit = [&](const Poly& p) {
    for (const auto& c : p.coeffs()) {
      if (c.is_zero()) continue;
      Rational q = c.rational();
      num = gcd(num, Integer(abs(q.get_num())));
      den = lcm(den, Integer(q.get_den()));
    }
  };
  visit(P);
  for (size_t i = 0; i < T.rows(); ++i)
    for (size_t j = 0; j < T.cols(); ++j) visit(T(i, j));
  Rational s(den, num);
  s.canonicalize();
  if (P.lead().rational() < 0) s = -s;
  return s;
}

struct Cleared {
  Poly P;
  PolyMatrix T;
  PolyMatrix T2T4inv;
};

Cleared clear(const Hamiltonian& H) {
  TransferMatrices tm = build_transfer_matrices(H);
  const size_t n = static_cast<size_t>(H.degree());
  ScalarMatrix t4 = eval_at(tm.T4, ExactScalar(0));
  PolyMatrix t4inv = lift(inverse(t4));
  PolyMatrix t2t4 = poly_matmul(tm.T2, t4inv);
  PolyMatrix M2 = scale(add(tm.T1, poly_matmul(t2t4, tm.T3)), ExactScalar(2));

  const size_t m = n - 1;
  std::vector<ExactScalar> xs;
  std::vector<ExactScalar> dets;
  std::vector<std::vector<ExactScalar>> adj(m * m);
  for (size_t k = 0; k <= n; ++k) {
    ExactScalar hk(static_cast<long>(k));
    ScalarMatrix v = eval_at(M2, hk);
    xs.push_back(hk);
    dets.push_back(determinant(v));
    for (size_t r = 0; r < m; ++r)
      for (size_t c = 0; c < m; ++c) {
        ExactScalar cof = m == 1 ? ExactScalar(1) : determinant(minor_of(v, r, c));
        if ((r + c) % 2) cof = -cof;
        adj[c * m + r].push_back(cof);  // transpose
      }
  }
  Poly det = interpolate(xs, dets);
  if (det.is_zero()) throw Error(ErrorKind::SingularPencil, "matrix pencil is identically singular");
  PolyMatrix A(m, m);
  Poly g = det;
  for (size_t i = 0; i < m; ++i)
    for (size_t j = 0; j < m; ++j) {
      A(i, j) = interpolate(xs, adj[i * m + j]);
      if (!A(i, j).is_zero()) g = poly_gcd(g, A(i, j));
    }
  Cleared out;
  out.P = exact_quotient(det, g);
  out.T = PolyMatrix(m, m);
  for (size_t i = 0; i < m; ++i)
    for (size_t j = 0; j < m; ++j) out.T(i, j) = exact_quotient(A(i, j), g);
  Rational s = normalizer(out.P, out.T);
  out.P = out.P.scaled(ExactScalar(s));
  out.T = scale(out.T, ExactScalar(s));
  out.T2T4inv = t2t4;
  return out;
}

}  // namespace

PolyMatrix poly_matmul(const PolyMatrix& a, const PolyMatrix& b) {
  PolyMatrix out(a.rows(), b.cols());
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t k = 0; k < a.cols(); ++k) {
      if (a(i, k).is_zero()) continue;
      for (size_t j = 0; j < b.cols(); ++j) out(i, j) += a(i, k) * b(k, j);
    }
  return out;
}

std::string poly_matrix_to_string(const PolyMatrix& m) {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < m.rows(); ++i) {
    os << (i ? "; " : "");
    for (size_t j = 0; j < m.cols(); ++j) os << (j ? ", " : "") << poly_to_string(m(i, j));
  }
  os << "]";
  return os.str();
}

TransferMatrices build_transfer_matrices(const Hamiltonian& H) {
  const int n = H.degree();
  if (n < 2 || H.b(n) == 0) throw Error(ErrorKind::InvalidInput, "need degree >= 2 with nonzero leading coefficient");
  auto B = [&](int k) { return ExactScalar(H.b(k)); };
  TransferMatrices t{PolyMatrix(n - 1, n - 1), PolyMatrix(n - 1, n), PolyMatrix(n, n - 1), PolyMatrix(n, n)};
  for (int r = 0; r < n - 1; ++r) {
    for (int c = 0; c < n - 1; ++c) {
      if (r == c) t.T1(r, c) = Poly::h();
      else if (c > r) t.T1(r, c) = Poly(-B(c - r));
    }
    for (int c = 0; c < n; ++c) t.T2(r, c) = Poly(B(c + n - 1 - r));
  }
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n - 1; ++c) {
      if (c == r - 1) t.T3(r, c) = Poly::h().scaled(ExactScalar(-2 * r));
      else if (c > r - 1) t.T3(r, c) = Poly(ExactScalar(r + c + 1) * B(c - r + 1));
    }
    for (int c = 0; c < n; ++c) t.T4(r, c) = Poly(ExactScalar(r + n + c) * B(n + c - r));
  }
  return t;
}

ScalarMatrix PFSystem::T_coeff(int k) const {
  ScalarMatrix out(T.rows(), T.cols());
  for (size_t i = 0; i < T.rows(); ++i)
    for (size_t j = 0; j < T.cols(); ++j) out(i, j) = T(i, j)[k];
  return out;
}

ScalarMatrix PFSystem::K_coeff(int k) const {
  if (!forcing_K) return ScalarMatrix();
  const PolyMatrix& F = *forcing_K;
  ScalarMatrix out(F.rows(), F.cols());
  for (size_t i = 0; i < F.rows(); ++i)
    for (size_t j = 0; j < F.cols(); ++j) out(i, j) = F(i, j)[k];
  return out;
}

PFSystem homogeneous_system(const Hamiltonian& H) {
  Cleared c = clear(H);
  PFSystem s;
  s.P = c.P;
  s.T = c.T;
  return s;
}

PFSystem inhomogeneous_system(const Hamiltonian& H, const SeparationLine& line) {
  Cleared c = clear(H);
  PFSystem s;
  s.P = c.P;
  s.T = c.T;
  if (line.kind == ThetaKind::pi) return s;
  s.forcing_K = scale(poly_matmul(c.T, c.T2T4inv), ExactScalar(-2));
  s.forcing_J_scale = c.P;
  return s;
}

}  // namespace pfkit
