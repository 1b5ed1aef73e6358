#pragma once

#include "pfkit/oracle.hpp"

#include <map>
#include <optional>

namespace pfkit {

// Low-order coefficient vectors of the closed basis at the loop, in the
// displayed convention: a_k of h^k, b_1 of h ln|h|, c_0 of |h|^(3/4), d_0 of |h|^(5/4).
struct SeedSet {
  std::vector<ExactScalar> a0, a1, b1, c0, d0;
  ConstantTable constants;  // k1..k4, At0, At2
  int precision = 60;
};

// Normalisation of the free kernel direction at each singular exponent of the
// Frobenius recursion: value of the first nonzero kernel component (|s| convention).
using KernelNormalisation = std::map<Frac, ExactScalar>;

// Numeric constants for the quintic loop: At0, At2 by quadrature, k1 = 4 At0,
// k3 = 84/25 At2, k4 = asinh(1/2)/sqrt 5. k2 is fitted separately.
ConstantTable quintic_constants(int precision = 60);

// Exact h0-level integrals when 2(h0 - F) = x^4 (alpha + beta x).
struct QuarticLinearLevel {
  Rational alpha, beta;
};
std::optional<QuarticLinearLevel> quartic_linear_level(const Hamiltonian& H, const Rational& h0);

SeedSet seed_coefficients(const Hamiltonian& H, const Rational& h0, int precision = 60);

// Solution of P X' = T X at a regular singular point h0 (P(h0) = 0), on the side h < h0.
std::vector<Series> frobenius_solve(const PFSystem& sys, const Rational& h0, const KernelNormalisation& norms,
                                    const Frac& order);

std::vector<Series> closed_expansion(const Hamiltonian& H, const Rational& h0, const Frac& order);

struct BoundarySeries {
  IntersectionSeries start, end;
  SeparationLine line;
  Frac order;
  Series K(int i, int j) const;  // x_e^i y_e^j - x_s^i y_s^j
  Series J(int i) const;         // x_e^i y_e x_e' - x_s^i y_s x_s'
  Series Kt(int s) const;        // value of the reduced boundary symbol
};
BoundarySeries boundary_series(const Hamiltonian& H, const SeparationLine& line, const Rational& h0, const Frac& order);

// Initial data (value and h-derivative at h0) of the open basis.
struct OpenInitialData {
  std::vector<ExactScalar> value, slope;
};
OpenInitialData open_initial_data(const Hamiltonian& H, const SeparationLine& line, const Rational& h0,
                                  int precision = 60);

std::vector<Series> open_expansion(const Hamiltonian& H, const SeparationLine& line, const Rational& h0,
                                   const Frac& order, const std::vector<Series>* closed = nullptr);

struct ExpansionBundle {
  Hamiltonian H;
  SeparationLine line;
  Rational h0;
  Frac order;
  std::vector<Series> closed, open;
  BoundarySeries boundary;
  ConstantTable constants;
};
ExpansionBundle expansion_bundle(const Hamiltonian& H, const SeparationLine& line, const Rational& h0,
                                 const Frac& order, int precision = 60);

Series melnikov_expansion(const IntegralExpr& expr, const ExpansionBundle& bundle);

// k2 from quadrature: I_{0,1}(h) against the closed series at a small |h|.
Real fit_k2(const Series& I01, const ConstantTable& constants, int precision = 90);

}  // namespace pfkit
