#pragma once
#include <optional>
#include <string>
#include <vector>

#include "heliflow/spline.hpp"

namespace heliflow {

// Gas constants and inflow state at the outer cylinder r1.
struct GasInflow {
  double gamma = 2.0;
  double A0 = 1.0;
  double rho0 = 1.0;
  double U10 = -0.3;
  double U20 = 0.5;
  double r0 = 1.2;
  double r1 = 2.0;

  void validate() const;  // throws std::invalid_argument naming the field
};

// Radial profiles of the cylindrically symmetric transonic flow, tabulated
// on a uniform grid, plus splines for off-grid queries along characteristics.
struct BackgroundFlow {
  GasInflow inflow;
  std::vector<double> r_grid;
  std::vector<double> rho_bar, U1_bar, U2_bar, c2_bar, M1_sq, M2_sq;
  double kappa1 = 0, kappa2 = 0, B0 = 0;
  double r_c = 0;                       // sonic radius (bisection, cross-checked)
  std::optional<double> r_sharp_u10zero;

  CubicSpline<double> rho_spline, U1_spline;

  double h() const { return r_grid[1] - r_grid[0]; }
  double rho(double r) const { return rho_spline.eval(r); }
  double U1(double r) const { return U1_spline.eval(r); }
  double U2(double r) const { return kappa2 / r; }
  double c2(double r) const;
  double M1sq(double r) const;
  double M2sq(double r) const;
  double Msq(double r) const { return M1sq(r) + M2sq(r); }
  // dU1/dr and drho/dr from the ODE right sides (exact given the profile)
  double U1_prime(double r) const;
  double rho_prime(double r) const;
};

// sigma-dependent linearization coefficients on the background grid.
struct CoefficientTable {
  double sigma = 0;
  std::vector<double> r_grid;
  std::vector<double> A11, A13, A33, e1, e3, f, f_prime, k1, k2, k22;
  double sigma_star = 0;
  double sigma_star_argmin = 0;

  CubicSpline<double> f_spline, fp_spline;
  double f_at(double r) const { return f_spline.eval(r); }
  double fp_at(double r) const { return fp_spline.eval(r); }
};

// Fixed-step RK4 integration of the radial ODE system from r1 down to r0.
BackgroundFlow solve_background(const GasInflow& inflow, std::size_t N_r);

// Bisection on |M(r)|^2 = 1; cross-checked against the closed form.
double find_sonic_radius(const BackgroundFlow& bg);

// Closed-form sonic radius (direct algebraic evaluation).
double sonic_radius_closed_form(const GasInflow& inflow);

// min over supersonic radii of 2*pi*r*sqrt((1-M1^2)/(|M|^2-1)).
struct CriticalStep {
  double sigma_star;
  double argmin_radius;
};
CriticalStep critical_step(const BackgroundFlow& bg);

CoefficientTable coefficient_table(const BackgroundFlow& bg, double sigma);

void write_background_csv(const std::string& path, const BackgroundFlow& bg,
                          const CoefficientTable& ct);

}  // namespace heliflow
