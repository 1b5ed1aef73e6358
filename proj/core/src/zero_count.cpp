#include "pfkit/zero_count.hpp"

#include <random>
#include <sstream>

namespace pfkit {

std::string ScaleTag::to_string() const {
  Frac j = e - class_start;
  Frac r = class_start;
  std::ostringstream os;
  bool any = false;
  if (j != Frac(0)) {
    os << "h";
    if (j != Frac(1)) os << "^" << j.to_string();
    any = true;
  }
  if (r != Frac(0)) {
    if (any) os << "*";
    os << "|h|^(" << r.to_string() << ")";
    any = true;
  }
  if (log) {
    if (any) os << "*";
    os << "ln|h|";
    any = true;
  }
  if (!any) os << "1";
  return os.str();
}

std::string LinearCondition::to_string() const {
  std::ostringstream os;
  os << param_name(pivot) << " = ";
  if (rhs.empty()) {
    os << "0";
    return os.str();
  }
  bool first = true;
  for (const auto& [id, c] : rhs) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.to_string() << ")*" << param_name(id);
  }
  return os.str();
}

CoefficientLadder build_ladder(const Series& s, const std::vector<ParamId>& params) {
  std::map<Frac, Frac> plain;  // class -> start
  std::optional<Frac> log_start;
  for (const auto& [k, c] : s.terms()) {
    if (k.e < Frac(0)) throw Error(ErrorKind::NonconformingSeries, "negative exponent " + k.e.to_string());
    if (k.log > 1) throw Error(ErrorKind::NonconformingSeries, "log power " + std::to_string(k.log));
    if (k.log == 1) {
      if (!log_start || k.e < *log_start) log_start = k.e;
      continue;
    }
    Frac cls = k.e.frac_part();
    auto it = plain.find(cls);
    if (it == plain.end() || k.e < it->second) plain[cls] = k.e;
  }
  if (log_start)
    for (const auto& [k, c] : s.terms())
      if (k.log == 1 && !(k.e - *log_start).is_integer())
        throw Error(ErrorKind::NonconformingSeries, "log term off the log family at " + k.e.to_string());
  if (s.trunc().is_inf()) throw Error(ErrorKind::NonconformingSeries, "series without truncation order");

  CoefficientLadder out;
  out.parameters = params;
  out.trunc = s.trunc();
  std::vector<ScaleTag> tags;
  for (const auto& [cls, start] : plain)
    for (Frac e = start; e < s.trunc(); e = e + Frac(1)) tags.push_back({e, 0, start});
  if (log_start)
    for (Frac e = *log_start; e < s.trunc(); e = e + Frac(1)) tags.push_back({e, 1, log_start->frac_part()});
  out.period = static_cast<int>(plain.size()) + (log_start ? 1 : 0);
  std::sort(tags.begin(), tags.end(),
            [](const ScaleTag& a, const ScaleTag& b) { return SeriesKey{a.e, a.log} < SeriesKey{b.e, b.log}; });
  for (const auto& t : tags) {
    ParamPoly c = s.coeff(t.e, t.log);
    if (s.display_sign(t.e, t.class_start) < 0) c = -c;
    out.entries.push_back({t, c});
  }
  return out;
}

namespace {

using Row = std::vector<ExactScalar>;

std::vector<Row> coefficient_rows(const CoefficientLadder& L) {
  std::map<ParamId, size_t> col;
  for (size_t j = 0; j < L.parameters.size(); ++j) col[L.parameters[j]] = j;
  std::vector<Row> rows;
  for (size_t i = 0; i < L.entries.size(); ++i) {
    const ParamPoly& c = L.entries[i].coeff;
    if (!c.is_linear() || !c.constant().is_zero())
      throw Error(ErrorKind::HypothesisViolated, "coefficient " + std::to_string(i) + " is not linear in the parameters");
    Row r(L.parameters.size());
    for (const auto& [id, v] : c.gradient()) {
      auto it = col.find(id);
      if (it == col.end())
        throw Error(ErrorKind::HypothesisViolated,
                    "coefficient " + std::to_string(i) + " involves " + param_name(id) + " outside the parameter list");
      r[it->second] = v;
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

using Substitution = std::array<std::optional<ExactScalar>, kNumSyms>;

std::vector<Substitution> substitutions(const RankOptions& opt) {
  std::mt19937_64 rng(opt.seed);
  std::uniform_int_distribution<long> num(-1000, 1000), den(1, 97);
  std::vector<Substitution> out;
  for (int t = 0; t < opt.trials; ++t) {
    Substitution s;
    for (int k = 0; k < kNumSyms; ++k) {
      long n = 0;
      while (n == 0) n = num(rng);
      s[k] = ExactScalar(Rational(n, den(rng)));
    }
    out.push_back(s);
  }
  return out;
}

bool rows_exact(const std::vector<Row>& rows) {
  for (const auto& r : rows)
    for (const auto& x : r)
      if (!x.exact()) return false;
  return true;
}

ScalarMatrix at_point(const std::vector<Row>& rows, const std::vector<size_t>& idx, const Substitution& s) {
  size_t n = rows.empty() ? 0 : rows[0].size();
  ScalarMatrix m(idx.size(), n);
  for (size_t a = 0; a < idx.size(); ++a)
    for (size_t j = 0; j < n; ++j)
      if (!rows[idx[a]][j].is_zero()) m(a, j) = rows[idx[a]][j].substitute(s);
  return m;
}

RealMatrix real_at(const std::vector<Row>& rows, const std::vector<size_t>& idx, const Substitution* s,
                   const ConstantTable* t) {
  size_t n = rows.empty() ? 0 : rows[0].size();
  RealMatrix m(idx.size(), n);
  for (size_t a = 0; a < idx.size(); ++a)
    for (size_t j = 0; j < n; ++j) {
      const ExactScalar& x = rows[idx[a]][j];
      m(a, j) = x.is_zero() ? Real(0) : (s ? x.substitute(*s).to_real() : x.to_real(t));
    }
  return m;
}

// Least-squares-free solve of sum lambda_a A_a = b for the rows of A; nullopt if b is not in the span.
std::optional<std::vector<Real>> real_combination(const RealMatrix& A, const std::vector<Real>& b,
                                                  const Real& rel_tol, Real* residual) {
  const size_t k = A.rows(), n = A.cols();
  // columns = selected rows, rows = parameters
  RealMatrix M(n, k + 1);
  Real scale = 0;
  for (size_t j = 0; j < n; ++j) {
    for (size_t a = 0; a < k; ++a) {
      M(j, a) = A(a, j);
      if (abs(A(a, j)) > scale) scale = abs(A(a, j));
    }
    M(j, k) = b[j];
  }
  std::vector<size_t> piv;
  size_t row = 0;
  for (size_t col = 0; col < k && row < n; ++col) {
    size_t best = row;
    for (size_t i = row + 1; i < n; ++i)
      if (abs(M(i, col)) > abs(M(best, col))) best = i;
    if (abs(M(best, col)) <= rel_tol * scale) return std::nullopt;
    for (size_t j = 0; j <= k; ++j) std::swap(M(best, j), M(row, j));
    for (size_t i = 0; i < n; ++i) {
      if (i == row || M(i, col) == 0) continue;
      Real f = M(i, col) / M(row, col);
      for (size_t j = col; j <= k; ++j) M(i, j) -= f * M(row, j);
    }
    piv.push_back(col);
    ++row;
  }
  std::vector<Real> lam(k, Real(0));
  for (size_t r = 0; r < piv.size(); ++r) lam[piv[r]] = M(r, k) / M(r, piv[r]);
  Real res = 0, bn = 0;
  for (size_t j = 0; j < n; ++j) {
    Real acc = -b[j];
    for (size_t a = 0; a < k; ++a) acc += lam[a] * A(a, j);
    if (abs(acc) > res) res = abs(acc);
    if (abs(b[j]) > bn) bn = abs(b[j]);
  }
  if (residual) *residual = res;
  if (res > rel_tol * (scale + bn) * 1e6) return std::nullopt;
  return lam;
}

bool uses_symbols(const std::vector<Row>& rows) {
  for (const auto& r : rows)
    for (const auto& x : r)
      for (const auto& [m, c] : x.terms())
        if (!m.radical_only()) return true;
  return false;
}

}  // namespace

BoundCertificate max_zero_bound(const CoefficientLadder& L, const RankOptions& opt) {
  std::vector<Row> rows = coefficient_rows(L);
  const bool exact = rows_exact(rows);
  const auto subs = substitutions(opt);
  const bool symbolic = uses_symbols(rows);
  const ConstantTable* table = &opt.constants;

  auto rank_of = [&](const std::vector<size_t>& idx) {
    size_t best = 0;
    for (const auto& s : subs) {
      size_t r = exact ? rref(at_point(rows, idx, s)).rank() : rank_real(real_at(rows, idx, &s, nullptr), opt.numeric_rel_tol);
      if (r > best) best = r;
      if (!symbolic) break;  // every point is the same point
    }
    return best;
  };

  BoundCertificate cert;
  cert.exact_arithmetic = exact;
  cert.seed = opt.seed;
  cert.trials = symbolic ? opt.trials : 1;
  cert.inferred_block_period = L.period;
  std::vector<size_t> numeric_sel;
  for (size_t i = 0; i < rows.size(); ++i) {
    std::vector<size_t> trial = cert.selected;
    trial.push_back(i);
    if (rank_of(trial) > cert.selected.size()) {
      cert.selected.push_back(i);
    } else {
      SpanWitness w;
      w.index = i;
      // exact combination at the first substitution point
      if (exact) {
        ScalarMatrix A = at_point(rows, cert.selected, subs[0]);
        ScalarMatrix At(A.cols(), A.rows());
        for (size_t a = 0; a < A.rows(); ++a)
          for (size_t j = 0; j < A.cols(); ++j) At(j, a) = A(a, j);
        ScalarMatrix b = at_point(rows, {i}, subs[0]);
        std::vector<ExactScalar> rhs(b.cols());
        for (size_t j = 0; j < b.cols(); ++j) rhs[j] = b(0, j);
        auto lam = solve(At, rhs);
        if (!lam)
          throw Error(ErrorKind::HypothesisViolated,
                      "coefficient " + std::to_string(i) + " is not in the span of the earlier selected ones");
        w.at_substitution = *lam;
      }
      cert.span_witnesses.push_back(std::move(w));
    }
    std::vector<size_t> ntrial = numeric_sel;
    ntrial.push_back(i);
    if (rank_real(real_at(rows, ntrial, nullptr, table), opt.numeric_rel_tol) > numeric_sel.size())
      numeric_sel.push_back(i);
  }
  cert.rank = cert.selected.size();
  cert.bound = static_cast<int>(cert.rank) - 1;
  cert.numeric_rank = numeric_sel.size();
  cert.full_parameter_rank = cert.rank == L.parameters.size();

  // numeric witnesses at the true constants
  RealMatrix S = real_at(rows, cert.selected, nullptr, table);
  for (auto& w : cert.span_witnesses) {
    RealMatrix b = real_at(rows, {w.index}, nullptr, table);
    std::vector<Real> rhs(b.cols());
    for (size_t j = 0; j < b.cols(); ++j) rhs[j] = b(0, j);
    // only earlier selected rows take part
    std::vector<size_t> earlier;
    for (size_t a = 0; a < cert.selected.size() && cert.selected[a] < w.index; ++a) earlier.push_back(a);
    RealMatrix A(earlier.size(), S.cols());
    for (size_t a = 0; a < earlier.size(); ++a)
      for (size_t j = 0; j < S.cols(); ++j) A(a, j) = S(earlier[a], j);
    Real res = 0;
    auto lam = real_combination(A, rhs, opt.numeric_rel_tol, &res);
    if (!lam)
      throw Error(ErrorKind::HypothesisViolated,
                  "coefficient " + std::to_string(w.index) + " leaves the span at the numeric constants");
    w.at_constants = *lam;
    w.residual = res;
  }

  std::ostringstream os;
  if (exact)
    os << "exact elimination over Q(radicals)";
  else
    os << "elimination in " << kWorkDigits << "-digit arithmetic, relative tolerance " << opt.numeric_rel_tol.str(3);
  if (symbolic) os << " at " << cert.trials << " rational substitutions of the named constants (seed " << opt.seed << ")";
  os << "; rank " << cert.rank << "; rank at the numeric constants " << cert.numeric_rank;
  if (numeric_sel != cert.selected) os << " (selection differs)";
  cert.independence_witness = os.str();

  if (cert.full_parameter_rank) {
    Matrix<SymbolPoly> m(cert.rank, cert.rank);
    for (size_t a = 0; a < cert.rank; ++a)
      for (size_t j = 0; j < cert.rank; ++j) m(a, j) = SymbolPoly(rows[cert.selected[a]][j]);
    cert.determinant = symbolic_determinant(m, Real("1e-40")).value;
  }
  return cert;
}

VanishingLocus vanishing_locus(const CoefficientLadder& L, const RankOptions& opt) {
  std::vector<Row> rows = coefficient_rows(L);
  std::vector<size_t> all(rows.size());
  for (size_t i = 0; i < all.size(); ++i) all[i] = i;
  VanishingLocus out;
  auto conditions_of = [&](const ScalarMatrix& m) {
    Rref r = rref(m);
    std::vector<LinearCondition> cs;
    for (size_t row = 0; row < r.pivots.size(); ++row) {
      LinearCondition c{L.parameters[r.pivots[row]], {}};
      for (size_t j = 0; j < m.cols(); ++j)
        if (j != r.pivots[row] && !r.m(row, j).is_zero()) c.rhs[L.parameters[j]] = -r.m(row, j);
      cs.push_back(std::move(c));
    }
    return cs;
  };
  auto same = [](const std::vector<LinearCondition>& a, const std::vector<LinearCondition>& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
      if (a[i].pivot != b[i].pivot || a[i].rhs != b[i].rhs) return false;
    return true;
  };
  if (rows.empty()) return out;
  if (rows_exact(rows)) {
    const auto subs = substitutions(opt);
    std::vector<LinearCondition> first = conditions_of(at_point(rows, all, subs[0]));
    bool stable = true;
    for (size_t t = 1; t < subs.size() && stable; ++t) stable = same(first, conditions_of(at_point(rows, all, subs[t])));
    if (stable) {
      out.conditions = first;
      return out;
    }
  }
  // constants enter the reduced system: reduce at the numeric constants
  RealMatrix R = real_at(rows, all, nullptr, &opt.constants);
  ScalarMatrix m(R.rows(), R.cols());
  for (size_t i = 0; i < R.rows(); ++i) {
    Real scale = 0;
    for (size_t j = 0; j < R.cols(); ++j)
      if (abs(R(i, j)) > scale) scale = abs(R(i, j));
    for (size_t j = 0; j < R.cols(); ++j)
      if (scale > 0) m(i, j) = ExactScalar(Number(Real(R(i, j) / scale))).chop(Real("1e-40"));
  }
  out.conditions = conditions_of(m);
  out.exact = false;
  return out;
}

Matrix<SymbolPoly> ladder_jacobian(const CoefficientLadder& L, const std::vector<size_t>& rows,
                                   const std::vector<ParamId>& delta) {
  std::set<ParamId> ds(delta.begin(), delta.end());
  Matrix<SymbolPoly> m(rows.size(), delta.size());
  for (size_t a = 0; a < rows.size(); ++a) {
    if (rows[a] >= L.entries.size()) throw Error(ErrorKind::InvalidInput, "ladder row out of range");
    ParamPoly rest;
    auto lin = L.entries[rows[a]].coeff.linear_in(ds, &rest);
    for (size_t j = 0; j < delta.size(); ++j) {
      auto it = lin.find(delta[j]);
      if (it != lin.end()) m(a, j) = SymbolPoly::from(it->second);
    }
  }
  return m;
}

BlockCertificate block_determinant(const Matrix<SymbolPoly>& jac, size_t block) {
  if (jac.rows() != jac.cols() || block > jac.rows())
    throw Error(ErrorKind::InvalidInput, "block determinant needs a square matrix");
  std::vector<size_t> idx(block);
  for (size_t i = 0; i < block; ++i) idx[i] = i;
  SchurResult s = schur_complement(jac, idx, idx);
  BlockCertificate out;
  out.block_det = s.block_det;
  out.complement_det = symbolic_determinant(s.complement).value;
  return out;
}

}  // namespace pfkit
