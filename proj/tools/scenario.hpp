#pragma once

#include "pfkit/zero_count.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace pfkit::cli {

using Json = nlohmann::ordered_json;

enum class Command { derive, reduce, expand, bound, verify };
Command parse_command(const std::string& s);
const char* command_name(Command c);

// Malformed scenario file or flag value.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LineSpec {
  std::string kind = "pi";  // pi | half_pi | generic | through_anchor
  Rational c = 0;
  ExactScalar tan_theta;  // generic
  Rational x_anchor = 0;  // through_anchor
};

struct JacobianSpec {
  size_t rows = 0;
  std::vector<std::string> delta;
  size_t block = 0;
};

struct PerturbationSpec {
  std::string kind = "expression";  // expression | smooth | second_order | piecewise
  // expression
  std::vector<std::pair<std::string, std::vector<std::string>>> terms;
  std::vector<std::string> parameters;  // ladder order; empty means order of appearance
  // smooth and second_order
  int degree = 0;
  std::string P = "a", Q = "b";
  std::string suffix = "1", second_suffix = "2";
  std::vector<std::pair<std::string, std::string>> kernel;  // first-order kernel, second_order only
  // piecewise
  std::string P_plus, Q_plus, P_minus, Q_minus;
};

struct VerifySpec {
  int samples = 10;
  Real tolerance = Real("1e-8");
  Frac series_order = Frac(3);
  int random_reductions = 5;
  std::uint64_t seed = 20240917;
};

struct Scenario {
  std::string name;
  std::string description;
  std::vector<Rational> b;  // b1..bn
  Rational h0 = 0;
  std::string loop = "homoclinic";
  LineSpec line;
  PerturbationSpec perturbation;
  Command target = Command::bound;
  Frac order = Frac(3);
  int precision = 60;
  std::vector<std::string> monomials;  // extra reductions to report, "I_{i,j}" | "Ip_{i,j}" | "K_{i,j}"
  bool locus = false;
  std::optional<JacobianSpec> jacobian;
  VerifySpec verify;

  Hamiltonian hamiltonian() const { return Hamiltonian(b); }
  SeparationLine separation_line() const;
};

Scenario parse_scenario(const Json& j);
Scenario load_scenario(const std::filesystem::path& path);

struct Overrides {
  std::optional<std::string> order;
  std::optional<int> precision;
  std::optional<int> samples;
  std::optional<std::string> tolerance;
};
void apply(Scenario& s, const Overrides& o);

// ---- pipeline -------------------------------------------------------------

struct Pipeline {
  IntegralExpr expr;
  std::vector<ParamId> parameters;  // ladder order
};
// Melnikov function of the scenario in the reduced basis.
Pipeline melnikov_pipeline(const Scenario& s);

struct BoundOutcome {
  CoefficientLadder ladder;
  BoundCertificate certificate;
  std::optional<VanishingLocus> locus;
  std::optional<BlockCertificate> block;
  ConstantTable constants;
};
BoundOutcome compute_bound(const Scenario& s);

// Reduction of one requested monomial; `spec` as in Scenario::monomials.
IntegralExpr reduce_monomial(const Scenario& s, const std::string& spec);
// Direct quadrature of the same monomial.
Real quadrature_monomial(const Oracle& o, const std::string& spec, const Real& h);

// Energies inside the annulus near the loop, spread evenly.
std::vector<Real> sample_energies(const Scenario& s, int n);

struct SeriesCheck {
  std::string label;
  ExpansionResidual residual;
  double expected_slope = 0;
  bool ok = false;
};
// Melnikov series at a seeded rational parameter point against quadrature.
SeriesCheck melnikov_series_check(const Scenario& s);

struct ReductionCheck {
  std::string monomial;
  Real h;
  Real relative_error;
};
// Requested monomials plus `count` seeded random ones, at the first sample energy.
std::vector<ReductionCheck> reduction_checks(const Scenario& s, int count, std::uint64_t seed);

// ---- reports --------------------------------------------------------------

struct RunResult {
  int exit_code = 0;
  Json report;
  std::vector<std::pair<std::string, std::string>> files;  // extra outputs, name -> content
};
RunResult run(Command c, const Scenario& s);

// 1 malformed input, 3 unsupported configuration or a pipeline failure.
int exit_code_for(const std::exception& e);

Json matrix_json(const ScalarMatrix& m);
Json expr_json(const IntegralExpr& e);

}  // namespace pfkit::cli
