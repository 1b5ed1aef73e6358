#pragma once

#include "pfkit/expansion.hpp"

#include <cstdint>

namespace pfkit {

// |h|^e (ln|h|)^log, displayed as h^j |h|^(e - j) with j counted from the class start.
struct ScaleTag {
  Frac e;
  int log = 0;
  Frac class_start;
  std::string to_string() const;
  bool operator==(const ScaleTag& o) const { return e == o.e && log == o.log; }
};

struct LadderEntry {
  ScaleTag tag;
  ParamPoly coeff;  // displayed convention
};

// Coefficients in order of asymptotic dominance as h -> h0 from below.
struct CoefficientLadder {
  std::vector<LadderEntry> entries;
  std::vector<ParamId> parameters;
  int period = 0;  // scales per unit of exponent
  Frac trunc;
};

// Every scale of the admissible family below the truncation is an entry,
// including those whose coefficient vanishes. Families: one per fractional
// class of exponents starting at its first occurrence, plus one log family
// (log power one) at integer exponents from its first occurrence.
CoefficientLadder build_ladder(const Series& s, const std::vector<ParamId>& params);

// pivot = sum rhs[id] * id
struct LinearCondition {
  ParamId pivot;
  std::map<ParamId, ExactScalar> rhs;
  std::string to_string() const;
};

struct RankOptions {
  std::uint64_t seed = 20240917;
  int trials = 3;
  Real numeric_rel_tol = Real("1e-30");
  ConstantTable constants;  // values for the numeric confirmation
};

struct VanishingLocus {
  std::vector<LinearCondition> conditions;
  bool exact = true;  // reduced system identical at every substitution point
};
VanishingLocus vanishing_locus(const CoefficientLadder& ladder, const RankOptions& opt = {});

struct SpanWitness {
  size_t index = 0;
  // coefficient of each selected entry at the first substitution point (exact
  // ladders) and at the true constants
  std::vector<ExactScalar> at_substitution;
  std::vector<Real> at_constants;
  Real residual = 0;  // numeric reproduction error at the true constants
};

struct BoundCertificate {
  std::vector<size_t> selected;
  size_t rank = 0;
  int bound = -1;
  std::vector<SpanWitness> span_witnesses;
  std::string independence_witness;
  bool exact_arithmetic = true;  // false when coefficients carry approximate numbers
  size_t numeric_rank = 0;       // at the true constants
  std::uint64_t seed = 0;
  int trials = 0;
  // block period standing in for the undefined N of the index bookkeeping
  int inferred_block_period = 0;
  bool full_parameter_rank = false;  // rank equals the parameter count
  std::optional<SymbolPoly> determinant;  // square selection only
  std::string sharpness = "the bound is attained for suitable parameters (not constructed)";
};

BoundCertificate max_zero_bound(const CoefficientLadder& ladder, const RankOptions& opt = {});

// Jacobian of the given ladder rows with respect to delta. Coefficients must
// be linear in delta; other parameters stay symbolic.
Matrix<SymbolPoly> ladder_jacobian(const CoefficientLadder& ladder, const std::vector<size_t>& rows,
                                   const std::vector<ParamId>& delta);

// Rows split as (first block, rest), columns likewise; determinant of the
// complement of the first block.
struct BlockCertificate {
  SymbolPoly block_det;
  SymbolPoly complement_det;
};
BlockCertificate block_determinant(const Matrix<SymbolPoly>& jac, size_t block);

}  // namespace pfkit
