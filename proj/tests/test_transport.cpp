// Characteristic transport: exact traces, convergence, upwind cross-check.
#include <cmath>
#include <functional>

#include "doctest.h"
#include "heliflow/calculus.hpp"
#include "heliflow/errors.hpp"
#include "heliflow/transport.hpp"
#include "heliflow/verify.hpp"
#include "test_helpers.hpp"

using namespace heliflow;

namespace {

// Build a state whose characteristic slope equals a prescribed S(r, eta):
// W1 = c0 - U1bar makes the denominator constant, W3 = 0, and W2 absorbs S.
PerturbationState state_with_slope(const AnnulusGrid& g, const BackgroundFlow& bg,
                                   double sigma, double c0,
                                   const std::function<double(double, double)>& S) {
  PerturbationState W(g);
  for (std::size_t i = 0; i < g.N_r; ++i) {
    double r = g.r(i);
    for (std::size_t j = 0; j < g.N_eta; ++j) {
      W.W1.at(i, j) = c0 - bg.U1(r);
      W.W2.at(i, j) = -bg.kappa2 +
                      2.0 * M_PI * r * r / sigma * c0 * S(r, g.eta(j));
    }
  }
  return W;
}

}  // namespace

TEST_CASE("constant slope: trace is an exact straight line") {
  BackgroundFlow bg = solve_background(testcfg::reference_inflow(), 65);
  const double sigma = 1.0, lam = 0.37, c0 = -0.5;
  AnnulusGrid g(bg.inflow.r0, bg.inflow.r1, 65, sigma, 32);
  PerturbationState W = state_with_slope(g, bg, sigma, c0,
                                         [&](double, double) { return lam; });
  for (double r : {1.2, 1.27, 1.333, 1.4})
    for (double eta : {0.0, 0.21, 0.6}) {
      double exit = trace_characteristic(W, bg, sigma, r, eta);
      CHECK(exit == doctest::Approx(eta + lam * (bg.inflow.r1 - r)).epsilon(1e-11));
    }
}

TEST_CASE("exit map converges at fourth order for a smooth slope") {
  auto S = [](double r, double eta) {
    return 0.3 + 0.1 * std::sin(2.0 * M_PI * r) * std::cos(2.0 * M_PI * eta);
  };
  const double sigma = 1.0, c0 = -0.5;
  auto exit_at = [&](std::size_t N_r) {
    BackgroundFlow bg = solve_background(testcfg::reference_inflow(), N_r);
    AnnulusGrid g(bg.inflow.r0, bg.inflow.r1, N_r, sigma, 32);
    PerturbationState W = state_with_slope(g, bg, sigma, c0, S);
    return trace_characteristic(W, bg, sigma, g.r0, 0.1);
  };
  double ref = exit_at(513);
  double e1 = std::abs(exit_at(33) - ref);
  double e2 = std::abs(exit_at(65) - ref);
  CHECK(e1 / e2 > 8.0);
  CHECK(e1 / e2 < 40.0);
}

TEST_CASE("zero boundary amplitude gives identically zero transport fields") {
  BackgroundFlow bg = solve_background(testcfg::reference_inflow(), 65);
  AnnulusGrid g(bg.inflow.r0, bg.inflow.r1, 65, 0.5, 32);
  PerturbationState Wbar(g);
  HelicalBC bc = testcfg::reference_bc(0.5, 0.0);
  TransportFields tf = solve_transport(Wbar, bc, bg);
  CHECK(max_abs(tf.W2) == 0.0);
  CHECK(max_abs(tf.W4) == 0.0);
  CHECK(max_abs(tf.W5) == 0.0);
}

TEST_CASE("boundary row reproduces the data exactly") {
  BackgroundFlow bg = solve_background(testcfg::reference_inflow(), 65);
  AnnulusGrid g(bg.inflow.r0, bg.inflow.r1, 65, 0.5, 32);
  PerturbationState Wbar(g);
  HelicalBC bc = testcfg::reference_bc(0.5, 1e-3);
  TransportFields tf = solve_transport(Wbar, bc, bg);
  std::size_t last = g.N_r - 1;
  for (std::size_t j = 0; j < g.N_eta; ++j) {
    double eta = g.eta(j);
    CHECK(tf.W2.at(last, j) == doctest::Approx(bc.eps * bc.q_c.eval(eta)).epsilon(1e-13));
    CHECK(tf.W4.at(last, j) == doctest::Approx(bc.eps * bc.A_tilde.eval(eta)).epsilon(1e-13));
    CHECK(tf.W5.at(last, j) == doctest::Approx(bc.eps * bc.B_tilde.eval(eta)).epsilon(1e-13));
  }
}

TEST_CASE("transported invariants satisfy the advection equation discretely") {
  BackgroundFlow bg = solve_background(testcfg::reference_inflow(), 513);
  HelicalBC bc = testcfg::reference_bc(2.0, 1e-3);
  auto defect = [&](std::size_t N_r) {
    AnnulusGrid g(bg.inflow.r0, bg.inflow.r1, N_r, bc.sigma, 64);
    BackgroundFlow bgn = solve_background(testcfg::reference_inflow(), N_r);
    PerturbationState Wbar(g);
    TransportFields tf = solve_transport(Wbar, bc, bgn);
    Field2D dr = d_r(tf.W2), de = d_eta(tf.W2);
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < g.N_r; ++i) {
      double r = g.r(i);
      double adv = bc.sigma * bg.kappa2 / (2.0 * M_PI * r * r);
      for (std::size_t j = 0; j < g.N_eta; ++j)
        worst = std::max(worst, std::abs(bgn.U1_bar[i] * dr.at(i, j) + adv * de.at(i, j)));
    }
    return worst;
  };
  double d1 = defect(129), d2 = defect(257);
  CHECK(d1 < 1e-4);          // O(h^2) at eps = 1e-3
  CHECK(d1 / d2 > 3.0);
  CHECK(d1 / d2 < 5.0);
}

TEST_CASE("characteristic solve agrees with the first-order upwind oracle") {
  HelicalBC bc = testcfg::reference_bc(2.0, 1e-3);
  auto diff = [&](std::size_t N_r, std::size_t N_eta) {
    BackgroundFlow bg = solve_background(testcfg::reference_inflow(), N_r);
    AnnulusGrid g(bg.inflow.r0, bg.inflow.r1, N_r, bc.sigma, N_eta);
    PerturbationState Wbar(g);
    TransportFields a = solve_transport(Wbar, bc, bg);
    TransportFields b = transport_upwind_oracle(Wbar, bc, bg);
    return max_abs(a.W2 - b.W2);
  };
  double d1 = diff(129, 32), d2 = diff(257, 64);
  CHECK(d1 < 0.2 * bc.eps);  // both schemes converge to the same transport
  CHECK(d1 / d2 > 1.4);      // oracle is first order
  CHECK(d1 / d2 < 3.2);
}

TEST_CASE("vanishing radial velocity in the slope is rejected") {
  BackgroundFlow bg = solve_background(testcfg::reference_inflow(), 65);
  AnnulusGrid g(bg.inflow.r0, bg.inflow.r1, 65, 0.5, 32);
  PerturbationState Wbar(g);
  for (std::size_t i = 0; i < g.N_r; ++i)
    for (std::size_t j = 0; j < g.N_eta; ++j) Wbar.W1.at(i, j) = -bg.U1(g.r(i));
  CHECK_THROWS_AS(CharacteristicSlope(Wbar, bg, 0.5), DegenerateRadialVelocity);
}
