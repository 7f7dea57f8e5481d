#pragma once
#include "heliflow/background.hpp"
#include "heliflow/boundary.hpp"
#include "heliflow/grid.hpp"

namespace heliflow {

// Laplace problem for the curl potential: (d_rr + d_ee) phi1 = G2,
// phi1(r0,.) = 0, d_r phi1(r1,.) = 0, eta-periodic. Per-mode complex
// tridiagonal solves; the one-sided Neumann row is eliminated through the
// adjacent interior row to keep the matrix tridiagonal.
Field2D solve_poisson(const Field2D& G2);

struct PotentialSolution {
  Field2D phi_hat;   // in (y1, y2) coordinates
  Field2D phi;       // mapped back to (r, eta)
  Field2D dphi_dr;   // chain rule: d_y1 phi_hat + f' d_y2 phi_hat at y2 = f+eta
  Field2D dphi_deta; // = d_y2 phi_hat at y2 = f+eta
};

// Variable-coefficient potential equation in sheared coordinates:
// d_y1^2 phi_hat + k22 d_y2^2 phi_hat + k1 d_y1 phi_hat + k2 d_y2 phi_hat = G3/A11,
// oblique Robin row at r0, Dirichlet at r1 from the q3 antiderivative.
PotentialSolution solve_potential(const Field2D& G3, const CoefficientTable& coeffs,
                                  const HelicalBC& bc);

}  // namespace heliflow
