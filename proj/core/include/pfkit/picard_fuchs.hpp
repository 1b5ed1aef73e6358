#pragma once

#include "pfkit/hamiltonian.hpp"
#include "pfkit/linalg.hpp"

#include <optional>

namespace pfkit {

using PolyMatrix = Matrix<Poly>;

// Blocks of the linear relations tying the closed integrals I_{i,1} to their h-derivatives.
struct TransferMatrices {
  PolyMatrix T1;  // (n-1) x (n-1)
  PolyMatrix T2;  // (n-1) x n
  PolyMatrix T3;  // n x (n-1)
  PolyMatrix T4;  // n x n, constant, lower triangular
};
TransferMatrices build_transfer_matrices(const Hamiltonian& H);

// P X' = T X [+ K_forcing * (K_{0,1}..K_{n-1,1}) + J_scale * (J_0..J_{n-2})].
struct PFSystem {
  Poly P;
  PolyMatrix T;
  std::optional<PolyMatrix> forcing_K;  // (n-1) x n
  std::optional<Poly> forcing_J_scale;
  // Coefficient matrix of h^k in T (or in forcing_K).
  ScalarMatrix T_coeff(int k) const;
  ScalarMatrix K_coeff(int k) const;
};

PFSystem homogeneous_system(const Hamiltonian& H);
// Forcing is omitted for y = 0 lines, where K and J vanish identically.
PFSystem inhomogeneous_system(const Hamiltonian& H, const SeparationLine& line);

PolyMatrix poly_matmul(const PolyMatrix& a, const PolyMatrix& b);
std::string poly_matrix_to_string(const PolyMatrix& m);

}  // namespace pfkit
