#include "scenario.hpp"

#include <algorithm>
#include <fstream>
#include <future>
#include <iomanip>
#include <random>
#include <regex>
#include <sstream>

namespace pfkit::cli {

namespace {

const Json& need(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InputError(std::string("missing field '") + key + "'");
  return j.at(key);
}

std::string str(const Json& j, const char* what) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  throw InputError(std::string(what) + ": expected a string");
}

Rational rational(const Json& j, const char* what) {
  try {
    return parse_rational(str(j, what));
  } catch (const Error&) {
    throw InputError(std::string(what) + ": not a rational number");
  }
}

std::vector<std::string> strings(const Json& j, const char* what) {
  if (!j.is_array()) throw InputError(std::string(what) + ": expected an array");
  std::vector<std::string> out;
  for (const auto& x : j) out.push_back(str(x, what));
  return out;
}

std::vector<std::pair<std::string, std::string>> string_map(const Json& j, const char* what) {
  if (!j.is_object()) throw InputError(std::string(what) + ": expected an object");
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [k, v] : j.items()) out.emplace_back(k, str(v, what));
  return out;
}

// Real values in reports: fixed significant digits so reruns are byte-identical.
std::string real_str(const Real& x, int digits = 30) { return format_real(x, digits); }

std::string poly_str(const ScalarMatrix& m, size_t i, size_t j) { return m(i, j).to_string(); }

Real to_real(const Rational& q) { return Real(q.get_num().get_str()) / Real(q.get_den().get_str()); }

// raw engine output reduced by modulus; no distribution objects, so
// the sequence does not depend on the standard library
struct Draw {
  std::mt19937_64 eng;
  explicit Draw(std::uint64_t seed) : eng(seed) {}
  std::uint64_t below(std::uint64_t n) { return eng() % n; }
  // nonzero rational with small numerator and denominator
  Rational small() {
    long num = static_cast<long>(below(17)) - 8;
    if (num == 0) num = 9;
    return Rational(num, static_cast<long>(below(6)) + 1);
  }
};

}  // namespace

Command parse_command(const std::string& s) {
  if (s == "derive") return Command::derive;
  if (s == "reduce") return Command::reduce;
  if (s == "expand") return Command::expand;
  if (s == "bound") return Command::bound;
  if (s == "verify") return Command::verify;
  throw InputError("unknown target '" + s + "'");
}

const char* command_name(Command c) {
  switch (c) {
    case Command::derive: return "derive";
    case Command::reduce: return "reduce";
    case Command::expand: return "expand";
    case Command::bound: return "bound";
    case Command::verify: return "verify";
  }
  return "?";
}

SeparationLine Scenario::separation_line() const {
  if (line.kind == "pi") return SeparationLine::pi(line.c);
  if (line.kind == "half_pi") return SeparationLine::half_pi(line.c);
  if (line.kind == "generic") return SeparationLine::generic(line.tan_theta, line.c);
  if (line.kind == "through_anchor") return SeparationLine::through_anchor(hamiltonian(), line.x_anchor, line.c, h0);
  throw InputError("unknown line kind '" + line.kind + "'");
}

Scenario parse_scenario(const Json& j) {
  if (!j.is_object()) throw InputError("scenario must be a JSON object");
  static const std::set<std::string> known{"name",  "description", "hamiltonian", "energy",     "loop",
                                           "line",  "perturbation", "target",     "order",      "precision",
                                           "monomials", "locus",    "jacobian",   "verify",     "$schema"};
  for (const auto& [k, v] : j.items())
    if (!known.count(k)) throw InputError("unknown field '" + k + "'");

  Scenario s;
  s.name = str(need(j, "name"), "name");
  if (s.name.empty() || s.name.find_first_of("/\\") != std::string::npos) throw InputError("name: bad file stem");
  if (j.contains("description")) s.description = str(j["description"], "description");
  for (const auto& x : strings(need(j, "hamiltonian"), "hamiltonian")) {
    try {
      s.b.push_back(parse_rational(x));
    } catch (const Error&) {
      throw InputError("hamiltonian: not a rational number '" + x + "'");
    }
  }
  if (s.b.size() < 2) throw InputError("hamiltonian: need at least b1, b2");
  if (s.b.back() == 0) throw InputError("hamiltonian: leading coefficient is zero");
  if (s.b.size() > 12) throw InputError("hamiltonian: degree above 12");
  if (j.contains("energy")) s.h0 = rational(j["energy"], "energy");
  if (j.contains("loop")) s.loop = str(j["loop"], "loop");
  if (s.loop != "homoclinic" && s.loop != "heteroclinic") throw InputError("loop: homoclinic | heteroclinic");

  if (j.contains("line")) {
    const Json& l = j["line"];
    s.line.kind = str(need(l, "kind"), "line.kind");
    if (l.contains("c")) s.line.c = rational(l["c"], "line.c");
    if (s.line.kind == "generic") {
      try {
        s.line.tan_theta = ExactScalar::parse(str(need(l, "tan_theta"), "line.tan_theta"));
      } catch (const Error&) {
        throw InputError("line.tan_theta: not a scalar");
      }
    } else if (s.line.kind == "through_anchor") {
      s.line.x_anchor = rational(need(l, "x_anchor"), "line.x_anchor");
    } else if (s.line.kind != "pi" && s.line.kind != "half_pi") {
      throw InputError("line.kind: pi | half_pi | generic | through_anchor");
    }
  }

  const Json& p = need(j, "perturbation");
  PerturbationSpec& ps = s.perturbation;
  ps.kind = str(need(p, "kind"), "perturbation.kind");
  if (ps.kind == "expression") {
    const Json& t = need(p, "terms");
    if (!t.is_object() || t.empty()) throw InputError("perturbation.terms: expected a nonempty object");
    for (const auto& [sym, cs] : t.items()) ps.terms.emplace_back(sym, strings(cs, "perturbation.terms"));
  } else if (ps.kind == "smooth" || ps.kind == "second_order") {
    const Json& d = need(p, "degree");
    if (!d.is_number_integer() || d.get<int>() < 1 || d.get<int>() > 8)
      throw InputError("perturbation.degree: integer in [1, 8]");
    ps.degree = d.get<int>();
    if (p.contains("P")) ps.P = str(p["P"], "perturbation.P");
    if (p.contains("Q")) ps.Q = str(p["Q"], "perturbation.Q");
    if (p.contains("suffix")) ps.suffix = str(p["suffix"], "perturbation.suffix");
    if (ps.kind == "second_order") {
      if (p.contains("second_suffix")) ps.second_suffix = str(p["second_suffix"], "perturbation.second_suffix");
      ps.kernel = string_map(need(p, "kernel"), "perturbation.kernel");
    }
  } else if (ps.kind == "piecewise") {
    ps.P_plus = str(need(p, "P_plus"), "perturbation.P_plus");
    ps.Q_plus = str(need(p, "Q_plus"), "perturbation.Q_plus");
    ps.P_minus = str(need(p, "P_minus"), "perturbation.P_minus");
    ps.Q_minus = str(need(p, "Q_minus"), "perturbation.Q_minus");
  } else {
    throw InputError("perturbation.kind: expression | smooth | second_order | piecewise");
  }
  if (p.contains("parameters")) ps.parameters = strings(p["parameters"], "perturbation.parameters");

  if (j.contains("target")) s.target = parse_command(str(j["target"], "target"));
  if (j.contains("order")) {
    try {
      s.order = Frac::parse(str(j["order"], "order"));
    } catch (const Error&) {
      throw InputError("order: not a fraction");
    }
  }
  if (j.contains("precision")) {
    if (!j["precision"].is_number_integer()) throw InputError("precision: expected an integer");
    s.precision = j["precision"].get<int>();
  }
  if (j.contains("monomials")) s.monomials = strings(j["monomials"], "monomials");
  if (j.contains("locus")) {
    if (!j["locus"].is_boolean()) throw InputError("locus: expected a boolean");
    s.locus = j["locus"].get<bool>();
  }
  if (j.contains("jacobian")) {
    const Json& jj = j["jacobian"];
    JacobianSpec js;
    js.rows = need(jj, "rows").get<size_t>();
    js.delta = strings(need(jj, "delta"), "jacobian.delta");
    js.block = need(jj, "block").get<size_t>();
    if (js.delta.size() != js.rows || js.block == 0 || js.block >= js.rows)
      throw InputError("jacobian: need rows == |delta| and 0 < block < rows");
    s.jacobian = js;
  }
  if (j.contains("verify")) {
    const Json& v = j["verify"];
    if (v.contains("samples")) s.verify.samples = v["samples"].get<int>();
    if (v.contains("tolerance")) s.verify.tolerance = parse_real(str(v["tolerance"], "verify.tolerance"));
    if (v.contains("series_order")) s.verify.series_order = Frac::parse(str(v["series_order"], "verify.series_order"));
    if (v.contains("random_reductions")) s.verify.random_reductions = v["random_reductions"].get<int>();
    if (v.contains("seed")) s.verify.seed = v["seed"].get<std::uint64_t>();
  }
  Overrides none;
  apply(s, none);
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path.string());
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(path.string() + ": " + e.what());
  }
  try {
    return parse_scenario(j);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

void apply(Scenario& s, const Overrides& o) {
  try {
    if (o.order) s.order = Frac::parse(*o.order);
    if (o.tolerance) s.verify.tolerance = parse_real(*o.tolerance);
  } catch (const Error& e) {
    throw InputError(e.what());
  }
  if (o.precision) s.precision = *o.precision;
  if (o.samples) s.verify.samples = *o.samples;
  if (s.order.num <= 0 || s.order.den > 64 || Frac(40) < s.order) throw InputError("order: must lie in (0, 40]");
  if (s.precision < 30 || s.precision > 100) throw InputError("precision: digits in [30, 100]");
  if (s.verify.samples < 1 || s.verify.samples > 1000) throw InputError("samples: in [1, 1000]");
  if (!(s.verify.tolerance > 0)) throw InputError("tolerance: must be positive");
  if (s.verify.series_order.num <= 0 || Frac(12) < s.verify.series_order)
    throw InputError("verify.series_order: in (0, 12]");
  if (s.verify.random_reductions < 0 || s.verify.random_reductions > 500)
    throw InputError("verify.random_reductions: in [0, 500]");
}

// ---- pipeline -------------------------------------------------------------------

namespace {

void check_supported(const Scenario& s) {
  if (s.loop == "heteroclinic")
    throw Error(ErrorKind::Unsupported, "only homoclinic loops are supported; heteroclinic request rejected");
}

PlanarPoly planar(const std::string& text, const char* what) {
  try {
    return PlanarPoly::parse(text);
  } catch (const Error&) {
    throw InputError(std::string(what) + ": not a polynomial in x, y");
  }
}

}  // namespace

Pipeline melnikov_pipeline(const Scenario& s) {
  check_supported(s);
  const Hamiltonian H = s.hamiltonian();
  const PerturbationSpec& ps = s.perturbation;
  Pipeline out;
  if (ps.kind == "expression") {
    for (const auto& [sym, cs] : ps.terms) {
      BasisSymbol b;
      std::vector<ParamPoly> coeffs;
      try {
        b = BasisSymbol::parse(sym);
        for (const auto& c : cs) coeffs.push_back(ParamPoly::parse(c));
      } catch (const Error& e) {
        throw InputError(std::string("perturbation.terms: ") + e.what());
      }
      if (b.family == Family::raw_k || b.family == Family::raw_closed)
        throw InputError("perturbation.terms: use reduced symbols I_{i,1}, Ip_{i,1}, Kt_{s}");
      out.expr.add(b, PolyP(std::move(coeffs)));
    }
    if (s.separation_line().kind == ThetaKind::pi)
      for (const auto& [b, c] : out.expr.terms())
        if (b.family == Family::open) throw InputError("perturbation.terms: open symbols need a line other than y = 0");
  } else if (ps.kind == "smooth") {
    out.expr = ReductionContext(H).normalize(
        raw_closed_melnikov(H, PlanarPoly::generic(ps.P, ps.degree, ps.suffix), PlanarPoly::generic(ps.Q, ps.degree, ps.suffix)));
  } else if (ps.kind == "second_order") {
    std::map<ParamId, ParamPoly> kernel;
    try {
      for (const auto& [k, v] : ps.kernel) kernel[param_id(k)] = ParamPoly::parse(v);
    } catch (const Error& e) {
      throw InputError(std::string("perturbation.kernel: ") + e.what());
    }
    PlanarPoly P1 = PlanarPoly::generic(ps.P, ps.degree, ps.suffix).substitute(kernel);
    PlanarPoly Q1 = PlanarPoly::generic(ps.Q, ps.degree, ps.suffix).substitute(kernel);
    out.expr = second_order_melnikov(H, P1, Q1, PlanarPoly::generic(ps.P, ps.degree, ps.second_suffix),
                                     PlanarPoly::generic(ps.Q, ps.degree, ps.second_suffix))
                   .reduced;
  } else {
    PerturbationPair pair{planar(ps.P_plus, "perturbation.P_plus"), planar(ps.Q_plus, "perturbation.Q_plus"),
                          planar(ps.P_minus, "perturbation.P_minus"), planar(ps.Q_minus, "perturbation.Q_minus")};
    SeparationLine L = s.separation_line();
    out.expr = ReductionContext(H, L).normalize(assemble_melnikov(H, L, pair));
  }

  // listed parameters first, the rest in order of first use
  std::set<ParamId> present = out.expr.parameters();
  for (const auto& n : ps.parameters) {
    ParamId id = param_id(n);
    if (std::find(out.parameters.begin(), out.parameters.end(), id) != out.parameters.end())
      throw InputError("perturbation.parameters: duplicate '" + n + "'");
    out.parameters.push_back(id);
  }
  for (ParamId id : present)
    if (std::find(out.parameters.begin(), out.parameters.end(), id) == out.parameters.end()) out.parameters.push_back(id);
  return out;
}

BoundOutcome compute_bound(const Scenario& s) {
  Pipeline pl = melnikov_pipeline(s);
  const Hamiltonian H = s.hamiltonian();
  SeparationLine L = s.perturbation.kind == "expression" || s.perturbation.kind == "piecewise" ? s.separation_line()
                                                                                                 : SeparationLine::pi();
  ExpansionBundle b = expansion_bundle(H, L, s.h0, s.order, s.precision);
  BoundOutcome out;
  out.ladder = build_ladder(melnikov_expansion(pl.expr, b), pl.parameters);
  out.constants = b.constants;
  RankOptions opt;
  opt.constants = b.constants;
  opt.seed = s.verify.seed;
  // the second-order ladder is bilinear in the parameters; only its Jacobian is certified
  if (s.perturbation.kind != "second_order") {
    out.certificate = max_zero_bound(out.ladder, opt);
    if (s.locus) out.locus = vanishing_locus(out.ladder, opt);
  }
  if (s.jacobian) {
    if (out.ladder.entries.size() < s.jacobian->rows)
      throw Error(ErrorKind::TruncationTooShort, "ladder shorter than the requested Jacobian");
    std::vector<size_t> rows(s.jacobian->rows);
    for (size_t i = 0; i < rows.size(); ++i) rows[i] = i;
    std::vector<ParamId> delta;
    for (const auto& n : s.jacobian->delta) delta.push_back(param_id(n));
    out.block = block_determinant(ladder_jacobian(out.ladder, rows, delta), s.jacobian->block);
  }
  return out;
}

namespace {

struct MonoSpec {
  std::string head;
  int i, j;
};

MonoSpec parse_mono(const std::string& spec) {
  static const std::regex re(R"(^(I|Ip|K)_\{(\d+),(\d+)\}$)");
  std::smatch m;
  if (!std::regex_match(spec, m, re)) throw InputError("monomial '" + spec + "': expected I_{i,j}, Ip_{i,j} or K_{i,j}");
  MonoSpec out{m[1], std::stoi(m[2]), std::stoi(m[3])};
  if (out.i > 30 || out.j > 15) throw InputError("monomial '" + spec + "': indices too large");
  return out;
}

}  // namespace

IntegralExpr reduce_monomial(const Scenario& s, const std::string& spec) {
  check_supported(s);
  MonoSpec m = parse_mono(spec);
  ReductionContext ctx(s.hamiltonian(), s.separation_line());
  if (m.head == "I") return ctx.closed(m.i, m.j);
  if (m.head == "Ip") return ctx.normalize(ctx.open(m.i, m.j));
  return ctx.boundary(m.i, m.j);
}

Real quadrature_monomial(const Oracle& o, const std::string& spec, const Real& h) {
  MonoSpec m = parse_mono(spec);
  if (m.head == "I") return o.integral(Region::closed, m.i, m.j, h);
  if (m.head == "Ip") return o.integral(Region::open_plus, m.i, m.j, h);
  return o.K(m.i, m.j, h);
}

std::vector<Real> sample_energies(const Scenario& s, int n) {
  PeriodAnnulus A = annulus_containing(s.hamiltonian(), s.h0);
  Real w = A.beta - A.alpha;
  Real lo = A.alpha + w / 10, hi = A.beta - w / 50;
  std::vector<Real> out;
  for (int k = 0; k < n; ++k) out.push_back(n == 1 ? (lo + hi) / 2 : lo + (hi - lo) * k / (n - 1));
  return out;
}

SeriesCheck melnikov_series_check(const Scenario& s) {
  Pipeline pl = melnikov_pipeline(s);
  const Hamiltonian H = s.hamiltonian();
  SeparationLine L = s.perturbation.kind == "expression" || s.perturbation.kind == "piecewise" ? s.separation_line()
                                                                                                 : SeparationLine::pi();
  const Frac ord = s.verify.series_order;
  ExpansionBundle b = expansion_bundle(H, L, s.h0, ord, s.precision);
  Series m = melnikov_expansion(pl.expr, b).truncated(ord);

  Draw draw(s.verify.seed);
  std::map<ParamId, Real> point;
  for (ParamId id : pl.parameters) point[id] = to_real(draw.small());
  QuadratureConfig cfg;
  cfg.precision = s.precision;
  Oracle o(H, L, cfg);
  Real w = o.annulus().beta - o.annulus().alpha;
  Real h0 = to_real(s.h0);

  SeriesCheck out;
  out.label = "melnikov";
  out.residual = expansion_residual(
      m, [&](const Real& h) { return o.evaluate(pl.expr, h, point, &b.constants); }, h0 - w / 50, h0 - w / 5000, 8,
      point, &b.constants);
  out.expected_slope = ord.to_real().convert_to<double>();
  out.ok = std::abs(out.residual.slope - out.expected_slope) <= 0.1 * out.expected_slope;
  return out;
}

std::vector<ReductionCheck> reduction_checks(const Scenario& s, int count, std::uint64_t seed) {
  check_supported(s);
  std::vector<std::string> specs = s.monomials;
  const bool pi = s.separation_line().kind == ThetaKind::pi;
  Draw draw(seed ^ 0x9e3779b97f4a7c15ULL);
  for (int k = 0; k < count; ++k) {
    int i = static_cast<int>(draw.below(8));
    int fam = pi ? 0 : static_cast<int>(draw.below(3));
    int j = fam == 2 ? static_cast<int>(draw.below(4)) : 1 + 2 * static_cast<int>(draw.below(3));
    const char* head = fam == 0 ? "I" : fam == 1 ? "Ip" : "K";
    specs.push_back(std::string(head) + "_{" + std::to_string(i) + "," + std::to_string(j) + "}");
  }
  QuadratureConfig cfg;
  cfg.precision = s.precision;
  Oracle o(s.hamiltonian(), s.separation_line(), cfg);
  auto hs = sample_energies(s, 3);
  std::vector<IntegralExpr> reduced;
  for (const auto& sp : specs) reduced.push_back(reduce_monomial(s, sp));
  std::vector<ReductionCheck> out(specs.size());
  std::vector<std::future<void>> jobs;
  for (size_t k = 0; k < specs.size(); ++k)
    jobs.push_back(std::async(std::launch::async, [&, k] {
      const Real& h = hs[k % hs.size()];
      Real direct = quadrature_monomial(o, specs[k], h);
      Real via = o.evaluate(reduced[k], h);
      Real scale = std::max<Real>(abs(direct), Real("1e-30"));
      out[k] = {specs[k], h, abs(via - direct) / scale};
    }));
  for (auto& f : jobs) f.get();
  return out;
}

// ---- reports ------------------------------------------------------------------

Json matrix_json(const ScalarMatrix& m) {
  Json rows = Json::array();
  for (size_t i = 0; i < m.rows(); ++i) {
    Json r = Json::array();
    for (size_t j = 0; j < m.cols(); ++j) r.push_back(poly_str(m, i, j));
    rows.push_back(r);
  }
  return rows;
}

Json expr_json(const IntegralExpr& e) {
  Json out = Json::object();
  for (const auto& [sym, c] : e.terms()) {
    Json cs = Json::array();
    for (const auto& x : c.coeffs()) cs.push_back(x.to_string());
    out[sym.to_string()] = cs;
  }
  return out;
}

namespace {

Json header(Command c, const Scenario& s) {
  Json j;
  j["command"] = command_name(c);
  j["scenario"] = s.name;
  j["hamiltonian"] = s.hamiltonian().to_string();
  j["energy"] = s.h0.get_str();
  j["line"] = s.separation_line().kind_name();
  return j;
}

Json constants_json(const ConstantTable& t) {
  static const std::pair<Sym, const char*> names[] = {{Sym::k1, "k1"}, {Sym::k2, "k2"},   {Sym::k3, "k3"},
                                                      {Sym::k4, "k4"}, {Sym::At0, "At0"}, {Sym::At2, "At2"}};
  Json j = Json::object();
  for (const auto& [sym, n] : names)
    if (t.value[static_cast<int>(sym)]) j[n] = real_str(*t.value[static_cast<int>(sym)], 40);
  return j;
}

Json ladder_json(const CoefficientLadder& L) {
  Json j;
  j["period"] = L.period;
  j["truncation"] = L.trunc.to_string();
  Json ps = Json::array();
  for (ParamId id : L.parameters) ps.push_back(param_name(id));
  j["parameters"] = ps;
  Json es = Json::array();
  for (const auto& e : L.entries) {
    Json x;
    x["scale"] = e.tag.to_string();
    x["coefficient"] = e.coeff.to_string();
    es.push_back(x);
  }
  j["entries"] = es;
  return j;
}

Json certificate_json(const BoundCertificate& c) {
  Json j;
  j["bound"] = c.bound;
  j["rank"] = c.rank;
  j["selected"] = c.selected;
  j["exact_arithmetic"] = c.exact_arithmetic;
  j["numeric_rank"] = c.numeric_rank;
  j["full_parameter_rank"] = c.full_parameter_rank;
  j["inferred_block_period"] = c.inferred_block_period;
  j["seed"] = c.seed;
  j["trials"] = c.trials;
  j["independence_witness"] = c.independence_witness;
  if (c.determinant) j["determinant"] = c.determinant->to_string();
  Json ws = Json::array();
  for (const auto& w : c.span_witnesses) {
    Json x;
    x["index"] = w.index;
    Json ex = Json::array();
    for (const auto& v : w.at_substitution) ex.push_back(v.to_string());
    x["at_substitution"] = ex;
    Json nm = Json::array();
    for (const auto& v : w.at_constants) nm.push_back(real_str(v, 25));
    x["at_constants"] = nm;
    x["residual"] = real_str(w.residual, 6);
    ws.push_back(x);
  }
  j["span_witnesses"] = ws;
  j["sharpness"] = c.sharpness;
  return j;
}

std::string csv(const std::vector<std::pair<Real, Real>>& rows) {
  std::ostringstream os;
  write_csv(os, rows, 30);
  return os.str();
}

RunResult run_derive(const Scenario& s) {
  check_supported(s);
  const Hamiltonian H = s.hamiltonian();
  RunResult r;
  r.report = header(Command::derive, s);
  // forcing coefficients do not depend on the line; a vertical one exposes them
  SeparationLine L = s.separation_line();
  PFSystem sys = inhomogeneous_system(H, L.kind == ThetaKind::pi ? SeparationLine::half_pi(0) : L);
  r.report["P"] = poly_to_string(sys.P);
  int tdeg = 0;
  for (size_t i = 0; i < sys.T.rows(); ++i)
    for (size_t j = 0; j < sys.T.cols(); ++j) tdeg = std::max(tdeg, sys.T(i, j).degree());
  Json mats = Json::object();
  int idx = 0;
  for (int k = 0; k <= tdeg; ++k) mats["A" + std::to_string(idx++)] = matrix_json(sys.T_coeff(k));
  r.report["homogeneous"] = mats;
  Json forcing = Json::object();
  forcing["applies"] = L.kind != ThetaKind::pi;
  int kdeg = 0;
  for (size_t i = 0; i < sys.forcing_K->rows(); ++i)
    for (size_t j = 0; j < sys.forcing_K->cols(); ++j) kdeg = std::max(kdeg, (*sys.forcing_K)(i, j).degree());
  for (int k = 0; k <= kdeg; ++k) forcing["A" + std::to_string(idx++)] = matrix_json(sys.K_coeff(k));
  forcing["J_scale"] = poly_to_string(*sys.forcing_J_scale);
  r.report["forcing"] = forcing;
  return r;
}

RunResult run_reduce(const Scenario& s) {
  RunResult r;
  r.report = header(Command::reduce, s);
  Pipeline pl = melnikov_pipeline(s);
  r.report["melnikov"] = expr_json(pl.expr);
  r.report["melnikov_text"] = pl.expr.to_string();
  Json ms = Json::object();
  for (const auto& m : s.monomials) ms[m] = expr_json(reduce_monomial(s, m));
  r.report["monomials"] = ms;
  return r;
}

RunResult run_expand(const Scenario& s) {
  RunResult r;
  r.report = header(Command::expand, s);
  r.report["order"] = s.order.to_string();
  Pipeline pl = melnikov_pipeline(s);
  SeparationLine L = s.perturbation.kind == "expression" || s.perturbation.kind == "piecewise" ? s.separation_line()
                                                                                                 : SeparationLine::pi();
  ExpansionBundle b = expansion_bundle(s.hamiltonian(), L, s.h0, s.order, s.precision);
  r.report["constants"] = constants_json(b.constants);
  Json cl = Json::array(), op = Json::array();
  for (const auto& x : b.closed) cl.push_back(x.to_string());
  for (const auto& x : b.open) op.push_back(x.to_string());
  r.report["closed"] = cl;
  r.report["open"] = op;
  Series m = melnikov_expansion(pl.expr, b);
  r.report["melnikov"] = m.to_string();
  r.report["ladder"] = ladder_json(build_ladder(m, pl.parameters));
  return r;
}

RunResult run_bound(const Scenario& s) {
  RunResult r;
  r.report = header(Command::bound, s);
  r.report["order"] = s.order.to_string();
  BoundOutcome b = compute_bound(s);
  r.report["constants"] = constants_json(b.constants);
  r.report["ladder"] = ladder_json(b.ladder);
  if (s.perturbation.kind != "second_order") r.report["certificate"] = certificate_json(b.certificate);
  if (b.locus) {
    Json cs = Json::array();
    for (const auto& c : b.locus->conditions) cs.push_back(c.to_string());
    r.report["vanishing_locus"] = {{"exact", b.locus->exact}, {"conditions", cs}};
  }
  if (b.block) {
    Json bj;
    bj["rows"] = s.jacobian->rows;
    bj["delta"] = s.jacobian->delta;
    bj["block"] = s.jacobian->block;
    bj["block_determinant"] = b.block->block_det.to_string();
    bj["complement_determinant"] = b.block->complement_det.to_string();
    bool nz = !b.block->block_det.is_zero() && !b.block->complement_det.is_zero();
    bj["jacobian_rank"] = nz ? s.jacobian->rows : 0;
    if (nz) r.report["bound"] = static_cast<int>(s.jacobian->rows) - 1;
    r.report["jacobian"] = bj;
  } else {
    r.report["bound"] = b.certificate.bound;
  }
  return r;
}

RunResult run_verify(const Scenario& s) {
  check_supported(s);
  RunResult r;
  r.report = header(Command::verify, s);
  const Real tol = s.verify.tolerance;
  r.report["precision"] = s.precision;
  r.report["tolerance"] = real_str(tol, 6);
  r.report["seed"] = s.verify.seed;
  bool ok = true;

  const Hamiltonian H = s.hamiltonian();
  SeparationLine L = s.separation_line();
  QuadratureConfig cfg;
  cfg.precision = s.precision;
  Oracle o(H, L, cfg);
  PFSystem sys = inhomogeneous_system(H, L);
  auto hs = sample_energies(s, s.verify.samples);
  std::vector<PFResidual> res(hs.size());
  {
    std::vector<std::future<void>> jobs;
    for (size_t k = 0; k < hs.size(); ++k)
      jobs.push_back(std::async(std::launch::async, [&, k] { res[k] = pf_residual(o, sys, {hs[k]}).front(); }));
    for (auto& f : jobs) f.get();
  }
  Json pf = Json::array();
  std::vector<std::pair<Real, Real>> pf_rows;
  Real worst = 0;
  for (const auto& x : res) {
    Real m = std::max(x.residual_identity, x.residual_difference);
    worst = std::max(worst, m);
    pf.push_back({{"h", real_str(x.h, 20)}, {"identity", real_str(x.residual_identity, 6)},
                  {"difference", real_str(x.residual_difference, 6)}});
    pf_rows.emplace_back(x.h, m);
  }
  bool pf_ok = worst < tol;
  ok = ok && pf_ok;
  r.report["pf_residuals"] = {{"max", real_str(worst, 6)}, {"pass", pf_ok}, {"samples", pf}};
  r.files.emplace_back(s.name + ".pf_residual.csv", csv(pf_rows));

  auto red = reduction_checks(s, s.verify.random_reductions, s.verify.seed);
  Json rj = Json::array();
  Real rworst = 0;
  for (const auto& x : red) {
    rworst = std::max(rworst, x.relative_error);
    rj.push_back({{"monomial", x.monomial}, {"h", real_str(x.h, 20)}, {"relative_error", real_str(x.relative_error, 6)}});
  }
  bool red_ok = rworst < tol;
  ok = ok && red_ok;
  r.report["reductions"] = {{"max", real_str(rworst, 6)}, {"pass", red_ok}, {"checks", rj}};

  SeriesCheck sc = melnikov_series_check(s);
  ok = ok && sc.ok;
  std::vector<std::pair<Real, Real>> dev_rows;
  for (const auto& [h, d] : sc.residual.table) dev_rows.emplace_back(h, d);
  std::ostringstream slope;
  slope << std::setprecision(6) << sc.residual.slope;
  r.report["series"] = {{"order", s.verify.series_order.to_string()},
                        {"max_deviation", real_str(sc.residual.max_deviation, 6)},
                        {"slope", slope.str()},
                        {"expected_slope", sc.expected_slope},
                        {"pass", sc.ok}};
  r.files.emplace_back(s.name + ".series_deviation.csv", csv(dev_rows));
  r.report["pass"] = ok;
  r.exit_code = ok ? 0 : 2;
  return r;
}

}  // namespace

RunResult run(Command c, const Scenario& s) {
  switch (c) {
    case Command::derive: return run_derive(s);
    case Command::reduce: return run_reduce(s);
    case Command::expand: return run_expand(s);
    case Command::bound: return run_bound(s);
    case Command::verify: return run_verify(s);
  }
  throw InputError("unknown command");
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const InputError*>(&e)) return 1;
  if (dynamic_cast<const nlohmann::json::exception*>(&e)) return 1;
  if (const auto* pe = dynamic_cast<const Error*>(&e)) {
    switch (pe->kind()) {
      case ErrorKind::InvalidInput:
      case ErrorKind::OutOfRange:
        return 1;
      default:
        return 3;
    }
  }
  return 1;
}

}  // namespace pfkit::cli
