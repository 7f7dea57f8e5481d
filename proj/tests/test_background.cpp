// Background profile: frozen constants, sonic radius oracles, invariants,
// critical step, coefficient table identities.
#include <cmath>

#include "doctest.h"
#include "heliflow/background.hpp"
#include "heliflow/errors.hpp"
#include "heliflow/verify.hpp"
#include "test_helpers.hpp"

using namespace heliflow;

TEST_CASE("mild case: frozen integral constants and sonic radius") {
  BackgroundFlow bg = solve_background(testcfg::mild_inflow(), 513);
  CHECK(bg.kappa1 == doctest::Approx(-0.6).epsilon(1e-14));
  CHECK(bg.kappa2 == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(bg.B0 == doctest::Approx(2.17).epsilon(1e-14));
  // frozen oracle (independent algebraic evaluation)
  double rc = sonic_radius_closed_form(testcfg::mild_inflow());
  CHECK(rc == doctest::Approx(1.0802133629186).epsilon(1e-10));
  // annulus [1.2, 2] is entirely subsonic: no bisection root reported
  CHECK(bg.r_c == 0.0);
  CHECK_THROWS_AS(find_sonic_radius(bg), NoSonicPoint);
}

TEST_CASE("reference case: bisection agrees with the closed form") {
  BackgroundFlow bg = solve_background(testcfg::reference_inflow(), 1025);
  double closed = sonic_radius_closed_form(testcfg::reference_inflow());
  CHECK(closed == doctest::Approx(1.2616977908).epsilon(1e-9));  // frozen oracle
  CHECK(bg.r_c > 0.0);
  CHECK(std::abs(bg.r_c - closed) / closed < 1e-7);
}

TEST_CASE("rotational case (U1 = 0): closed forms are exact") {
  GasInflow gi = testcfg::rotational_inflow();
  BackgroundFlow bg = solve_background(gi, 1025);
  // with U1 = 0 the sonic condition solves in closed form:
  // c^2 = 2(gamma-1)B0/(gamma+1), r_c = |kappa2|/c
  double c2 = 2.0 * (gi.gamma - 1.0) * bg.B0 / (gi.gamma + 1.0);
  double rc_exact = std::abs(bg.kappa2) / std::sqrt(c2);
  CHECK(rc_exact == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-13));
  CHECK(sonic_radius_closed_form(gi) == doctest::Approx(rc_exact).epsilon(1e-12));
  CHECK(std::abs(bg.r_c - rc_exact) / rc_exact < 1e-7);
  for (std::size_t i = 0; i < bg.r_grid.size(); ++i) CHECK(bg.U1_bar[i] == 0.0);
  REQUIRE(bg.r_sharp_u10zero.has_value());
  CHECK(*bg.r_sharp_u10zero == doctest::Approx(std::abs(bg.kappa2) / std::sqrt(2.0 * bg.B0)));
}

TEST_CASE("profile invariants: mass flux, Bernoulli, entropy, Mach monotone") {
  BackgroundFlow bg = solve_background(testcfg::reference_inflow(), 513);
  const GasInflow& gi = bg.inflow;
  double prev_m = 1e300;
  for (std::size_t i = 0; i < bg.r_grid.size(); ++i) {
    double r = bg.r_grid[i], rho = bg.rho_bar[i], u1 = bg.U1_bar[i], u2 = bg.U2_bar[i];
    CHECK(std::abs(r * rho * u1 - bg.kappa1) / std::abs(bg.kappa1) < 1e-10);
    double Bern = 0.5 * (u1 * u1 + u2 * u2) +
                  gi.gamma / (gi.gamma - 1.0) * gi.A0 * std::pow(rho, gi.gamma - 1.0);
    CHECK(std::abs(Bern - bg.B0) / bg.B0 < 1e-10);
    CHECK(bg.c2_bar[i] == doctest::Approx(gi.gamma * gi.A0 * std::pow(rho, gi.gamma - 1.0)));
    double m = bg.M1_sq[i] + bg.M2_sq[i];
    CHECK(m < prev_m);  // |M|^2 strictly decreasing in r
    prev_m = m;
  }
  // ODE-exact derivative accessors agree with finite differences of the spline
  double r = 0.5 * (gi.r0 + gi.r1), h = 1e-5;
  CHECK(bg.U1_prime(r) == doctest::Approx((bg.U1(r + h) - bg.U1(r - h)) / (2 * h)).epsilon(1e-7));
  CHECK(bg.rho_prime(r) == doctest::Approx((bg.rho(r + h) - bg.rho(r - h)) / (2 * h)).epsilon(1e-7));
}

TEST_CASE("critical step matches a brute-force scan") {
  BackgroundFlow bg = solve_background(testcfg::reference_inflow(), 2049);
  CriticalStep cs = critical_step(bg);
  CHECK(cs.sigma_star > 0.0);
  // dense scan of 2*pi*r*sqrt((1-M1^2)/(|M|^2-1)) over the supersonic band
  double best = 1e300, bestr = 0.0;
  std::size_t n = 400000;
  for (std::size_t k = 0; k <= n; ++k) {
    double r = bg.inflow.r0 + (bg.r_c - 1e-6 - bg.inflow.r0) * double(k) / double(n);
    double M = bg.Msq(r);
    if (M <= 1.0) continue;
    double v = 2.0 * M_PI * r * std::sqrt((1.0 - bg.M1sq(r)) / (M - 1.0));
    if (v < best) { best = v; bestr = r; }
  }
  CHECK(std::abs(cs.sigma_star - best) / best < 1e-6);
  CHECK(std::abs(cs.argmin_radius - bestr) < 1e-4);
  // subsonic annulus: no admissible band
  BackgroundFlow sub = solve_background(testcfg::mild_inflow(), 257);
  CHECK_THROWS_AS(critical_step(sub), NoSupersonicRegion);
}

TEST_CASE("coefficient table: sheared map and dual-route identities") {
  BackgroundFlow bg = solve_background(testcfg::reference_inflow(), 257);
  double sigma = 0.5 * critical_step(bg).sigma_star;
  CoefficientTable ct = coefficient_table(bg, sigma);
  CHECK(ct.f[0] == 0.0);
  for (std::size_t i = 0; i < ct.r_grid.size(); ++i) {
    CHECK(ct.f_prime[i] == doctest::Approx(-ct.A13[i] / ct.A11[i]).epsilon(1e-13));
    CHECK(ct.A11[i] > 0.0);   // M1^2 < 1 throughout
    CHECK(ct.k22[i] > 0.0);   // elliptic for sigma < sigma*
  }
  // f from the spline matches the tabulated cumulative integral
  CHECK(ct.f_at(ct.r_grid[100]) == doctest::Approx(ct.f[100]).epsilon(1e-12));
  for (const auto& rec : identity_checks(bg, sigma)) {
    INFO(rec.name, " measured ", rec.measured, " tol ", rec.tol);
    CHECK(rec.pass);
  }
}

TEST_CASE("ellipticity flips exactly at the critical step") {
  BackgroundFlow bg = solve_background(testcfg::reference_inflow(), 513);
  double sstar = critical_step(bg).sigma_star;
  auto min_k22 = [&](double sigma) {
    CoefficientTable ct = coefficient_table(bg, sigma);
    double m = 1e300;
    for (double v : ct.k22) m = std::min(m, v);
    return m;
  };
  CHECK(min_k22(0.999 * sstar) > 0.0);
  CHECK(min_k22(1.001 * sstar) < 0.0);
}

TEST_CASE("input validation and failure modes") {
  GasInflow bad = testcfg::reference_inflow();
  bad.gamma = 1.0;
  CHECK_THROWS_AS(solve_background(bad, 257), std::invalid_argument);
  bad = testcfg::reference_inflow();
  bad.U20 = 0.0;
  CHECK_THROWS_AS(solve_background(bad, 257), std::invalid_argument);
  bad = testcfg::reference_inflow();
  bad.U10 = 0.1;
  CHECK_THROWS_AS(solve_background(bad, 257), std::invalid_argument);
  bad = testcfg::reference_inflow();
  bad.U10 = -1.4;  // supersonic inflow
  CHECK_THROWS_AS(solve_background(bad, 257), std::invalid_argument);
  // integrating past the radial sonic blow-up
  GasInflow deep = testcfg::reference_inflow();
  deep.r0 = 1.05;
  CHECK_THROWS_AS(solve_background(deep, 257), SonicRadialVelocity);
}
