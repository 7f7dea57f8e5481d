// Fixed-point solver: degenerate cases, convergence, reports.
#include <cmath>
#include <cstdio>
#include <fstream>

#include "doctest.h"
#include "heliflow/calculus.hpp"
#include "heliflow/errors.hpp"
#include "heliflow/solver.hpp"
#include "heliflow/verify.hpp"
#include "json.hpp"
#include "test_helpers.hpp"

using namespace heliflow;

namespace {

SolverConfig small_config(double sigma, double eps) {
  SolverConfig cfg;
  cfg.inflow = testcfg::reference_inflow();
  cfg.bc = testcfg::reference_bc(sigma, eps);
  cfg.N_r = 65;
  cfg.N_eta = 32;
  return cfg;
}

}  // namespace

TEST_CASE("zero amplitude: the background is a fixed point") {
  SolverConfig cfg = small_config(0.5, 0.0);
  SolveResult res = fixed_point_solve(cfg);
  CHECK(res.report.converged);
  CHECK(res.report.iterations <= 2);
  CHECK(state_c0_norm(res.W) == 0.0);
  for (std::size_t i = 0; i < res.flow.V1.grid.N_r; ++i)
    CHECK(res.flow.V3.at(i, 0) == 0.0);
}

TEST_CASE("step size at or beyond the critical value is rejected") {
  BackgroundFlow bg = solve_background(testcfg::reference_inflow(), 257);
  double sstar = critical_step(bg).sigma_star;
  SolverConfig cfg = small_config(1.1 * sstar, 1e-3);
  cfg.N_r = 257;
  CHECK_THROWS_AS(build_context(cfg), StepTooLarge);
  cfg.bc.sigma = sstar;
  CHECK_THROWS_AS(build_context(cfg), StepTooLarge);
  cfg.bc.sigma = 0.9 * sstar;
  CHECK_NOTHROW(build_context(cfg));
}

TEST_CASE("config validation") {
  SolverConfig cfg = small_config(0.5, 1e-3);
  cfg.bc.eps = 0.5;  // above eps_max
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = small_config(0.5, 1e-3);
  cfg.N_eta = 20;  // not a power of two
  CHECK_THROWS_AS(fixed_point_solve(cfg), std::invalid_argument);
  cfg = small_config(-0.5, 1e-3);
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("small run converges geometrically and is a discrete fixed point") {
  SolverConfig cfg = small_config(0.5, 1e-3);
  SolveResult res = fixed_point_solve(cfg);
  CHECK(res.report.converged);
  CHECK(res.report.iterations <= 12);
  REQUIRE(res.report.ratios.size() >= 2);
  for (double q : res.report.ratios) CHECK(q < 1.0);
  CHECK(res.report.c_star_empirical > 1.0);
  CHECK(res.report.c_star_empirical < 1e3);

  // re-applying the map moves the state by at most a few tolerances
  SolveContext ctx = build_context(cfg);
  PerturbationState next = apply_map_once(res.W, ctx, cfg.bc);
  double move = 0.0;
  const Field2D* a[5] = {&res.W.W1, &res.W.W2, &res.W.W3, &res.W.W4, &res.W.W5};
  const Field2D* b[5] = {&next.W1, &next.W2, &next.W3, &next.W4, &next.W5};
  for (int k = 0; k < 5; ++k) move = std::max(move, max_abs(*a[k] - *b[k]));
  CHECK(move < 10.0 * cfg.tol_fixed_point);

  // residual levels consistent with the grid truncation
  CHECK(res.report.res_continuity < 1e-3);
  CHECK(res.report.res_entropy < 1e-6);
}

TEST_CASE("converged amplitude is grid-converged at the percent level") {
  SolverConfig cfg = small_config(0.5, 1e-3);
  SolveResult coarse = fixed_point_solve(cfg);
  cfg.N_r = 129;
  cfg.N_eta = 64;
  SolveResult fine = fixed_point_solve(cfg);
  double nc = state_c0_norm(coarse.W), nf = state_c0_norm(fine.W);
  CHECK(std::abs(nc - nf) / nf < 0.02);
}

TEST_CASE("report JSON round-trips") {
  SolverConfig cfg = small_config(0.5, 1e-3);
  SolveResult res = fixed_point_solve(cfg);
  const char* path = "report_test.json";
  write_report_json(path, res.report);
  std::ifstream in(path);
  REQUIRE(in.good());
  nlohmann::json j;
  in >> j;
  CHECK(j.at("iterations").get<std::size_t>() == res.report.iterations);
  CHECK(j.at("converged").get<bool>());
  CHECK(j.at("sigma_star").get<double>() == doctest::Approx(res.report.sigma_star));
  CHECK(j.at("deltas").size() == res.report.deltas.size());
  std::remove(path);
}

TEST_CASE("scaling study: response is linear in the boundary amplitude") {
  SolverConfig cfg = small_config(0.5, 1e-3);
  auto rows = scaling_study(cfg, {0.0, 1e-4, 1e-3});
  REQUIRE(rows.size() == 3);
  for (int k = 0; k < 5; ++k) CHECK(rows[0].c0[k] == 0.0);
  for (int k = 0; k < 5; ++k) {
    double r1 = rows[1].ratio_c0[k], r2 = rows[2].ratio_c0[k];
    CHECK(r1 > 0.0);
    CHECK(std::abs(r1 - r2) / std::max(r1, r2) < 0.1);
  }
}
