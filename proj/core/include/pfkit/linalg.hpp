#pragma once

#include "pfkit/params.hpp"

#include <optional>
#include <vector>

namespace pfkit {

template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(size_t r, size_t c) : r_(r), c_(c), a_(r * c) {}
  size_t rows() const { return r_; }
  size_t cols() const { return c_; }
  T& operator()(size_t i, size_t j) { return a_[i * c_ + j]; }
  const T& operator()(size_t i, size_t j) const { return a_[i * c_ + j]; }
  static Matrix identity(size_t n) {
    Matrix m(n, n);
    for (size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }
  friend bool operator==(const Matrix& x, const Matrix& y) { return x.r_ == y.r_ && x.c_ == y.c_ && x.a_ == y.a_; }

 private:
  size_t r_ = 0, c_ = 0;
  std::vector<T> a_;
};

using ScalarMatrix = Matrix<ExactScalar>;
using RealMatrix = Matrix<Real>;

// Zero test used during elimination over the radical field. Exact entries are
// compared exactly; approximate ones against tol.
struct ZeroTest {
  Real tol = Real("1e-60");
  bool operator()(const ExactScalar& x) const;
};

struct Rref {
  ScalarMatrix m;
  std::vector<size_t> pivots;  // pivot column of each nonzero row
  size_t rank() const { return pivots.size(); }
};

// Reduced row echelon form over Q(sqrt d, ...); entries must be radical-only.
Rref rref(ScalarMatrix m, const ZeroTest& zt = {});
ExactScalar determinant(ScalarMatrix m, const ZeroTest& zt = {});
ScalarMatrix inverse(const ScalarMatrix& m, const ZeroTest& zt = {});
ScalarMatrix matmul(const ScalarMatrix& a, const ScalarMatrix& b);
// Basis of the right null space.
std::vector<std::vector<ExactScalar>> nullspace(const ScalarMatrix& m, const ZeroTest& zt = {});
// Least index solution of A x = b, nullopt if inconsistent.
std::optional<std::vector<ExactScalar>> solve(const ScalarMatrix& a, const std::vector<ExactScalar>& b,
                                              const ZeroTest& zt = {});

// Partial-pivot elimination on reals; singular values below rel_tol*max count as zero.
size_t rank_real(RealMatrix m, const Real& rel_tol);
Real determinant_real(RealMatrix m);

// ---- symbolic determinants -------------------------------------------------

// Laurent monomial in the named constants times a monomial in parameters.
struct SymMono {
  std::array<std::int16_t, kNumSyms> e{};
  std::vector<std::pair<ParamId, std::int32_t>> p;
  bool operator<(const SymMono& o) const { return e != o.e ? e < o.e : p < o.p; }
  bool operator==(const SymMono& o) const { return e == o.e && p == o.p; }
  std::string to_string() const;
};

// Polynomial in named constants (negative powers allowed) and parameters with
// radical-only coefficients. Uncapped; used only for determinant certificates.
class SymbolPoly {
 public:
  using Terms = std::map<SymMono, ExactScalar>;
  SymbolPoly() = default;
  SymbolPoly(const ExactScalar& c);  // NOLINT (splits off named constants)
  SymbolPoly(long c) : SymbolPoly(ExactScalar(c)) {}  // NOLINT
  static SymbolPoly from(const ParamPoly& p);

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool single_term() const { return terms_.size() == 1; }

  SymbolPoly operator-() const;
  friend SymbolPoly operator+(const SymbolPoly& a, const SymbolPoly& b);
  friend SymbolPoly operator-(const SymbolPoly& a, const SymbolPoly& b);
  friend SymbolPoly operator*(const SymbolPoly& a, const SymbolPoly& b);
  friend bool operator==(const SymbolPoly& a, const SymbolPoly& b) { return a.terms_ == b.terms_; }
  // Division by a single term.
  SymbolPoly divide_term(const SymbolPoly& t) const;
  SymbolPoly chop(const Real& tol) const;
  Real magnitude() const;  // largest |coefficient|
  Real evaluate(const ConstantTable& t, const std::map<ParamId, Real>& point = {}) const;
  std::string to_string() const;

 private:
  void add_term(const SymMono& m, const ExactScalar& c);
  Terms terms_;
};

struct SymbolicDeterminant {
  SymbolPoly value;
  size_t pivot_steps = 0;       // single-term pivots used
  size_t expansion_block = 0;   // size of the block expanded by minors
};

// Elimination on single-term pivots, minor expansion on what remains.
// tol chops approximate residue.
SymbolicDeterminant symbolic_determinant(Matrix<SymbolPoly> m, const Real& tol = Real("1e-70"));

// Schur complement of the block (pivot_rows x pivot_cols), both index lists
// of equal length; returns the complement on the remaining rows/cols and the
// determinant of the pivot block.
struct SchurResult {
  Matrix<SymbolPoly> complement;
  SymbolPoly block_det;
};
SchurResult schur_complement(const Matrix<SymbolPoly>& m, const std::vector<size_t>& pivot_rows,
                             const std::vector<size_t>& pivot_cols, const Real& tol = Real("1e-70"));

}  // namespace pfkit
