#pragma once
// Shared fixtures for the test suite.  The transonic reference run (gamma = 2
// annulus [1.2, 1.4]) is the configuration all frozen numbers below refer to.
#include "heliflow/background.hpp"
#include "heliflow/boundary.hpp"

namespace testcfg {

// transonic reference: kappa1 = -0.84, kappa2 = 1.4, B0 = 2.68,
// r_c = 1.2616977907251565 (interior), sigma* ~ 10.437 attained at r0
inline heliflow::GasInflow reference_inflow() {
  heliflow::GasInflow gi;
  gi.gamma = 2.0;
  gi.A0 = 1.0;
  gi.rho0 = 1.0;
  gi.U10 = -0.6;
  gi.U20 = 1.0;
  gi.r0 = 1.2;
  gi.r1 = 1.4;
  return gi;
}

// mild subcritical-inlet case used for kernel-level checks
inline heliflow::GasInflow mild_inflow() {
  heliflow::GasInflow gi;
  gi.gamma = 2.0;
  gi.A0 = 1.0;
  gi.rho0 = 1.0;
  gi.U10 = -0.3;
  gi.U20 = 0.5;
  gi.r0 = 1.2;
  gi.r1 = 2.0;
  return gi;
}

// purely rotational case: U1 = 0 everywhere, closed forms are exact
inline heliflow::GasInflow rotational_inflow() {
  heliflow::GasInflow gi;
  gi.gamma = 3.0;
  gi.A0 = 1.25;
  gi.rho0 = 1.0;
  gi.U10 = 0.0;
  gi.U20 = 0.5;
  gi.r0 = 0.6;
  gi.r1 = 2.0;
  return gi;
}

inline heliflow::HelicalBC reference_bc(double sigma, double eps) {
  heliflow::HelicalBC bc;
  bc.sigma = sigma;
  bc.eps = eps;
  bc.q_c = heliflow::FourierSeries(sigma, {0.0, 1.0}, {0.0, 0.0});
  bc.q1 = heliflow::FourierSeries(sigma, {0.0, 0.7}, {0.0, 0.3});
  bc.q3 = heliflow::FourierSeries(sigma, {0.0, 0.5}, {0.0, 0.8});
  bc.A_tilde = heliflow::FourierSeries(sigma, {0.0, 0.4}, {0.0, 0.0});
  bc.B_tilde = heliflow::FourierSeries(sigma, {0.0, 0.0}, {0.0, 0.6});
  return bc;
}

}  // namespace testcfg
