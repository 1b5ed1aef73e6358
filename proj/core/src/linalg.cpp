#include "pfkit/linalg.hpp"

#include <algorithm>
#include <bit>
#include <unordered_map>

namespace pfkit {

bool ZeroTest::operator()(const ExactScalar& x) const {
  if (x.is_zero()) return true;
  if (x.exact()) return false;
  for (const auto& [m, c] : x.terms())
    if (c.exact() || abs(c.to_real()) > tol) return false;
  return true;
}

static size_t term_weight(const ExactScalar& x) { return x.terms().size(); }

Rref rref(ScalarMatrix m, const ZeroTest& zt) {
  Rref out;
  size_t row = 0;
  const size_t R = m.rows(), C = m.cols();
  for (size_t col = 0; col < C && row < R; ++col) {
    // exact: fewest terms; approximate: largest magnitude
    size_t best = R;
    Real best_mag = -1;
    size_t best_w = SIZE_MAX;
    for (size_t i = row; i < R; ++i) {
      if (zt(m(i, col))) continue;
      if (m(i, col).exact()) {
        if (term_weight(m(i, col)) < best_w && best_mag < 0) {
          best = i;
          best_w = term_weight(m(i, col));
        }
      } else {
        Real mag = abs(m(i, col).to_real());
        if (mag > best_mag) {
          best = i;
          best_mag = mag;
        }
      }
    }
    if (best == R) {
      for (size_t i = row; i < R; ++i) m(i, col) = ExactScalar();
      continue;
    }
    if (best != row)
      for (size_t j = 0; j < C; ++j) std::swap(m(best, j), m(row, j));
    ExactScalar inv = m(row, col).inverse();
    for (size_t j = col; j < C; ++j) m(row, j) = m(row, j) * inv;
    m(row, col) = ExactScalar(1);
    for (size_t i = 0; i < R; ++i) {
      if (i == row || m(i, col).is_zero()) continue;
      ExactScalar f = m(i, col);
      for (size_t j = col; j < C; ++j)
        if (!m(row, j).is_zero()) m(i, j) -= f * m(row, j);
      m(i, col) = ExactScalar();
      for (size_t j = col + 1; j < C; ++j)
        if (zt(m(i, j))) m(i, j) = ExactScalar();
    }
    out.pivots.push_back(col);
    ++row;
  }
  out.m = std::move(m);
  return out;
}

ExactScalar determinant(ScalarMatrix m, const ZeroTest& zt) {
  if (m.rows() != m.cols()) throw Error(ErrorKind::InvalidInput, "determinant of a non-square matrix");
  const size_t n = m.rows();
  ExactScalar det(1);
  for (size_t col = 0; col < n; ++col) {
    size_t p = n;
    for (size_t i = col; i < n; ++i)
      if (!zt(m(i, col))) {
        p = i;
        break;
      }
    if (p == n) return ExactScalar();
    if (p != col) {
      for (size_t j = 0; j < n; ++j) std::swap(m(p, j), m(col, j));
      det = -det;
    }
    det *= m(col, col);
    ExactScalar inv = m(col, col).inverse();
    for (size_t i = col + 1; i < n; ++i) {
      if (m(i, col).is_zero()) continue;
      ExactScalar f = m(i, col) * inv;
      for (size_t j = col; j < n; ++j) m(i, j) -= f * m(col, j);
    }
  }
  return det;
}

ScalarMatrix matmul(const ScalarMatrix& a, const ScalarMatrix& b) {
  if (a.cols() != b.rows()) throw Error(ErrorKind::InvalidInput, "matrix shape mismatch");
  ScalarMatrix out(a.rows(), b.cols());
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t k = 0; k < a.cols(); ++k) {
      if (a(i, k).is_zero()) continue;
      for (size_t j = 0; j < b.cols(); ++j)
        if (!b(k, j).is_zero()) out(i, j) += a(i, k) * b(k, j);
    }
  return out;
}

ScalarMatrix inverse(const ScalarMatrix& m, const ZeroTest& zt) {
  const size_t n = m.rows();
  ScalarMatrix aug(n, 2 * n);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = ExactScalar(1);
  }
  Rref r = rref(aug, zt);
  if (r.rank() < n || r.pivots[n - 1] != n - 1) throw Error(ErrorKind::NotInvertible, "singular matrix");
  ScalarMatrix out(n, n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) out(i, j) = r.m(i, n + j);
  return out;
}

std::vector<std::vector<ExactScalar>> nullspace(const ScalarMatrix& m, const ZeroTest& zt) {
  Rref r = rref(m, zt);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : r.pivots) is_pivot[p] = true;
  std::vector<std::vector<ExactScalar>> basis;
  for (size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    std::vector<ExactScalar> v(m.cols());
    v[f] = ExactScalar(1);
    for (size_t k = 0; k < r.pivots.size(); ++k) v[r.pivots[k]] = -r.m(k, f);
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<std::vector<ExactScalar>> solve(const ScalarMatrix& a, const std::vector<ExactScalar>& b,
                                              const ZeroTest& zt) {
  ScalarMatrix aug(a.rows(), a.cols() + 1);
  for (size_t i = 0; i < a.rows(); ++i) {
    for (size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
    aug(i, a.cols()) = b[i];
  }
  Rref r = rref(aug, zt);
  if (!r.pivots.empty() && r.pivots.back() == a.cols()) return std::nullopt;
  std::vector<ExactScalar> x(a.cols());
  for (size_t k = 0; k < r.pivots.size(); ++k) x[r.pivots[k]] = r.m(k, a.cols());
  return x;
}

size_t rank_real(RealMatrix m, const Real& rel_tol) {
  const size_t R = m.rows(), C = m.cols();
  Real scale = 0;
  for (size_t i = 0; i < R; ++i)
    for (size_t j = 0; j < C; ++j)
      if (abs(m(i, j)) > scale) scale = abs(m(i, j));
  if (scale == 0) return 0;
  Real tol = rel_tol * scale;
  size_t row = 0;
  for (size_t col = 0; col < C && row < R; ++col) {
    size_t best = row;
    for (size_t i = row + 1; i < R; ++i)
      if (abs(m(i, col)) > abs(m(best, col))) best = i;
    if (abs(m(best, col)) <= tol) continue;
    if (best != row)
      for (size_t j = 0; j < C; ++j) std::swap(m(best, j), m(row, j));
    for (size_t i = row + 1; i < R; ++i) {
      Real f = m(i, col) / m(row, col);
      if (f == 0) continue;
      for (size_t j = col; j < C; ++j) m(i, j) -= f * m(row, j);
    }
    ++row;
  }
  return row;
}

Real determinant_real(RealMatrix m) {
  const size_t n = m.rows();
  Real det = 1;
  for (size_t col = 0; col < n; ++col) {
    size_t best = col;
    for (size_t i = col + 1; i < n; ++i)
      if (abs(m(i, col)) > abs(m(best, col))) best = i;
    if (m(best, col) == 0) return 0;
    if (best != col) {
      for (size_t j = 0; j < n; ++j) std::swap(m(best, j), m(col, j));
      det = -det;
    }
    det *= m(col, col);
    for (size_t i = col + 1; i < n; ++i) {
      Real f = m(i, col) / m(col, col);
      for (size_t j = col; j < n; ++j) m(i, j) -= f * m(col, j);
    }
  }
  return det;
}

// ---- SymbolPoly ------------------------------------------------------------

std::string SymMono::to_string() const {
  std::string out;
  for (int i = 0; i < kNumSyms; ++i) {
    if (!e[i]) continue;
    if (!out.empty()) out += "*";
    out += sym_name(static_cast<Sym>(i));
    if (e[i] != 1) out += "^" + std::to_string(e[i]);
  }
  for (const auto& [id, k] : p) {
    if (!out.empty()) out += "*";
    out += param_name(id);
    if (k != 1) out += "^" + std::to_string(k);
  }
  return out;
}

static SymMono mono_mul(const SymMono& a, const SymMono& b) {
  SymMono m;
  for (int i = 0; i < kNumSyms; ++i) m.e[i] = static_cast<std::int16_t>(a.e[i] + b.e[i]);
  size_t i = 0, j = 0;
  while (i < a.p.size() || j < b.p.size()) {
    if (j == b.p.size() || (i < a.p.size() && a.p[i].first < b.p[j].first)) {
      m.p.push_back(a.p[i++]);
    } else if (i == a.p.size() || b.p[j].first < a.p[i].first) {
      m.p.push_back(b.p[j++]);
    } else {
      int e = a.p[i].second + b.p[j].second;
      if (e) m.p.emplace_back(a.p[i].first, e);
      ++i;
      ++j;
    }
  }
  return m;
}

static SymMono mono_inv(const SymMono& a) {
  SymMono m;
  for (int i = 0; i < kNumSyms; ++i) m.e[i] = static_cast<std::int16_t>(-a.e[i]);
  for (const auto& [id, k] : a.p) m.p.emplace_back(id, -k);
  return m;
}

void SymbolPoly::add_term(const SymMono& m, const ExactScalar& c) {
  if (c.is_zero()) return;
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    terms_.emplace(m, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

SymbolPoly::SymbolPoly(const ExactScalar& c) {
  for (const auto& [m, v] : c.terms()) {
    SymMono sm;
    for (int i = 0; i < kNumSyms; ++i) sm.e[i] = m.e[i];
    Monomial rad;
    rad.radicand = m.radicand;
    add_term(sm, ExactScalar::from_monomial(rad, v));
  }
}

SymbolPoly SymbolPoly::from(const ParamPoly& p) {
  SymbolPoly out;
  for (const auto& [pm, c] : p.terms()) {
    SymbolPoly part(c);
    SymMono pmono;
    for (const auto& [id, e] : pm.f) pmono.p.emplace_back(id, static_cast<std::int32_t>(e));
    for (const auto& [m, v] : part.terms()) out.add_term(mono_mul(m, pmono), v);
  }
  return out;
}

SymbolPoly SymbolPoly::operator-() const {
  SymbolPoly out;
  for (const auto& [m, c] : terms_) out.terms_.emplace(m, -c);
  return out;
}
SymbolPoly operator+(const SymbolPoly& a, const SymbolPoly& b) {
  SymbolPoly out = a;
  for (const auto& [m, c] : b.terms_) out.add_term(m, c);
  return out;
}
SymbolPoly operator-(const SymbolPoly& a, const SymbolPoly& b) { return a + (-b); }
SymbolPoly operator*(const SymbolPoly& a, const SymbolPoly& b) {
  SymbolPoly out;
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) out.add_term(mono_mul(ma, mb), ca * cb);
  return out;
}

SymbolPoly SymbolPoly::divide_term(const SymbolPoly& t) const {
  if (!t.single_term()) throw Error(ErrorKind::NotInvertible, "division by a multi-term symbolic value");
  const auto& [tm, tc] = *t.terms_.begin();
  SymMono inv = mono_inv(tm);
  ExactScalar cinv = tc.inverse();
  SymbolPoly out;
  for (const auto& [m, c] : terms_) out.add_term(mono_mul(m, inv), c * cinv);
  return out;
}

SymbolPoly SymbolPoly::chop(const Real& tol) const {
  SymbolPoly out;
  for (const auto& [m, c] : terms_) {
    ExactScalar cc = c.chop(tol);
    if (!cc.is_zero()) out.terms_.emplace(m, cc);
  }
  return out;
}

Real SymbolPoly::magnitude() const {
  Real best = 0;
  for (const auto& [m, c] : terms_) { Real a = abs(c.to_real()); if (a > best) best = a; }
  return best;
}

Real SymbolPoly::evaluate(const ConstantTable& t, const std::map<ParamId, Real>& point) const {
  Real acc = 0;
  for (const auto& [m, c] : terms_) {
    Real v = c.to_real();
    for (int i = 0; i < kNumSyms; ++i)
      if (m.e[i]) v *= boost::multiprecision::pow(t.get(static_cast<Sym>(i)), m.e[i]);
    for (const auto& [id, k] : m.p) {
      auto it = point.find(id);
      if (it == point.end()) throw Error(ErrorKind::InvalidInput, "no value for parameter " + param_name(id));
      v *= boost::multiprecision::pow(it->second, k);
    }
    acc += v;
  }
  return acc;
}

std::string SymbolPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [m, c] : terms_) {
    std::string ms = m.to_string();
    std::string cs = c.to_string();
    bool compound = c.terms().size() > 1;
    std::string t;
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

// ---- symbolic determinant --------------------------------------------------

namespace {

// Pivot preference: single term, no named constants, largest magnitude.
bool better_pivot(const SymbolPoly& cand, const SymbolPoly& cur, bool have) {
  if (!have) return true;
  auto plain = [](const SymbolPoly& s) {
    const auto& m = s.terms().begin()->first;
    for (auto e : m.e)
      if (e) return false;
    return m.p.empty();
  };
  bool pc = plain(cand), pu = plain(cur);
  if (pc != pu) return pc;
  return cand.magnitude() > cur.magnitude();
}

SymbolPoly minor_expansion(const Matrix<SymbolPoly>& m, const std::vector<size_t>& rows,
                           const std::vector<size_t>& cols) {
  const size_t n = rows.size();
  if (n == 0) return SymbolPoly(1);
  if (n > 24) throw Error(ErrorKind::Unsupported, "minor expansion block too large");
  std::unordered_map<std::uint32_t, SymbolPoly> layer{{0u, SymbolPoly(1)}};
  for (size_t r = 0; r < n; ++r) {
    std::unordered_map<std::uint32_t, SymbolPoly> next;
    for (const auto& [mask, val] : layer) {
      for (size_t c = 0; c < n; ++c) {
        if (mask & (1u << c)) continue;
        const SymbolPoly& a = m(rows[r], cols[c]);
        if (a.is_zero()) continue;
        int above = std::popcount(mask >> (c + 1));
        SymbolPoly t = val * a;
        if (above % 2) t = -t;
        auto it = next.find(mask | (1u << c));
        if (it == next.end()) {
          next.emplace(mask | (1u << c), std::move(t));
        } else {
          it->second = it->second + t;
        }
      }
    }
    layer = std::move(next);
  }
  auto it = layer.find((n >= 32) ? 0u : ((1u << n) - 1));
  return it == layer.end() ? SymbolPoly() : it->second;
}

// Eliminates single-term pivots from the given candidate rows/cols, updating
// all rows of m. Returns the pivot product with sign relative to the block.
struct PivotRun {
  SymbolPoly product{1};
  std::vector<size_t> rows_left, cols_left;
  size_t steps = 0;
};

PivotRun run_pivots(Matrix<SymbolPoly>& m, std::vector<size_t> prow, std::vector<size_t> pcol,
                    const std::vector<size_t>& all_rows, const Real& tol, bool require_all) {
  PivotRun out;
  int sign = 1;
  while (!prow.empty()) {
    size_t bi = 0, bj = 0;
    bool have = false;
    for (size_t a = 0; a < prow.size(); ++a)
      for (size_t b = 0; b < pcol.size(); ++b) {
        const SymbolPoly& x = m(prow[a], pcol[b]);
        if (x.is_zero() || !x.single_term()) continue;
        if (better_pivot(x, m(prow[bi], pcol[bj]), have)) {
          bi = a;
          bj = b;
          have = true;
        }
      }
    if (!have) {
      if (require_all) throw Error(ErrorKind::NotInvertible, "no single-term pivot in the elimination block");
      break;
    }
    if ((bi + bj) % 2) sign = -sign;
    size_t r = prow[bi], c = pcol[bj];
    SymbolPoly p = m(r, c);
    out.product = out.product * p;
    ++out.steps;
    prow.erase(prow.begin() + static_cast<long>(bi));
    pcol.erase(pcol.begin() + static_cast<long>(bj));
    for (size_t i : all_rows) {
      if (i == r || m(i, c).is_zero()) continue;
      SymbolPoly f = m(i, c).divide_term(p);
      for (size_t j = 0; j < m.cols(); ++j) {
        if (m(r, j).is_zero()) continue;
        m(i, j) = (m(i, j) - f * m(r, j)).chop(tol);
      }
      m(i, c) = SymbolPoly();
    }
    // retire the pivot row so later row operations ignore it
    for (size_t j = 0; j < m.cols(); ++j)
      if (j != c) m(r, j) = SymbolPoly();
  }
  if (sign < 0) out.product = -out.product;
  out.rows_left = prow;
  out.cols_left = pcol;
  return out;
}

}  // namespace

SymbolicDeterminant symbolic_determinant(Matrix<SymbolPoly> m, const Real& tol) {
  if (m.rows() != m.cols()) throw Error(ErrorKind::InvalidInput, "determinant of a non-square matrix");
  std::vector<size_t> idx(m.rows());
  for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  PivotRun run = run_pivots(m, idx, idx, idx, tol, false);
  SymbolicDeterminant out;
  out.pivot_steps = run.steps;
  out.expansion_block = run.rows_left.size();
  // rows_left/cols_left keep their relative order, so the sign bookkeeping of
  // run_pivots composes with the block's own Laplace sign.
  out.value = (run.product * minor_expansion(m, run.rows_left, run.cols_left)).chop(tol);
  return out;
}

SchurResult schur_complement(const Matrix<SymbolPoly>& m_in, const std::vector<size_t>& pivot_rows,
                             const std::vector<size_t>& pivot_cols, const Real& tol) {
  if (pivot_rows.size() != pivot_cols.size()) throw Error(ErrorKind::InvalidInput, "Schur block must be square");
  Matrix<SymbolPoly> m = m_in;
  std::vector<size_t> all(m.rows());
  for (size_t i = 0; i < all.size(); ++i) all[i] = i;
  PivotRun run = run_pivots(m, pivot_rows, pivot_cols, all, tol, true);
  std::vector<size_t> rest_rows, rest_cols;
  for (size_t i = 0; i < m.rows(); ++i)
    if (std::find(pivot_rows.begin(), pivot_rows.end(), i) == pivot_rows.end()) rest_rows.push_back(i);
  for (size_t j = 0; j < m.cols(); ++j)
    if (std::find(pivot_cols.begin(), pivot_cols.end(), j) == pivot_cols.end()) rest_cols.push_back(j);
  SchurResult out;
  out.complement = Matrix<SymbolPoly>(rest_rows.size(), rest_cols.size());
  for (size_t i = 0; i < rest_rows.size(); ++i)
    for (size_t j = 0; j < rest_cols.size(); ++j) out.complement(i, j) = m(rest_rows[i], rest_cols[j]);
  out.block_det = run.product;
  return out;
}

}  // namespace pfkit
