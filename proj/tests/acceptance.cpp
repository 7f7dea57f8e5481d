// Acceptance gate: one pass/fail line per criterion, nonzero exit on any
// failure. All runs use the transonic reference configuration (gamma = 2,
// annulus [1.2, 1.4], U1 = -0.6 and U2 = 1.0 at the outer wall).
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <string>
#include <vector>

#include "heliflow/background.hpp"
#include "heliflow/solver.hpp"
#include "heliflow/verify.hpp"
#include "test_helpers.hpp"

using namespace heliflow;

namespace {

int g_failures = 0;

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double s() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

void report(int id, const char* title, bool pass, const std::string& detail, double secs) {
  std::printf("criterion %d (%s): %s  [%s; %.1fs]\n", id, title,
              pass ? "PASS" : "FAIL", detail.c_str(), secs);
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof(buf), f, ap);
  va_end(ap);
  return buf;
}

SolverConfig reference_solver_config(double sigma, double eps, std::size_t N_r) {
  SolverConfig cfg;
  cfg.inflow = testcfg::reference_inflow();
  cfg.bc = testcfg::reference_bc(sigma, eps);
  cfg.N_r = N_r;
  cfg.N_eta = 64;
  cfg.tol_fixed_point = 1e-11;
  cfg.max_iters = 30;
  return cfg;
}

}  // namespace

int main() {
  const GasInflow gi = testcfg::reference_inflow();

  // --- 1: background fidelity ---------------------------------------------
  double sigma_star = 0.0;
  {
    Timer t;
    BackgroundFlow bg = solve_background(gi, 1024);
    double closed = sonic_radius_closed_form(gi);
    double rc_rel = std::abs(bg.r_c - closed) / closed;
    double inv = 0.0;
    for (std::size_t i = 0; i < bg.r_grid.size(); ++i) {
      double r = bg.r_grid[i], rho = bg.rho_bar[i], u1 = bg.U1_bar[i], u2 = bg.U2_bar[i];
      inv = std::max(inv, std::abs(r * rho * u1 - bg.kappa1) / std::abs(bg.kappa1));
      double Bern = 0.5 * (u1 * u1 + u2 * u2) +
                    gi.gamma / (gi.gamma - 1.0) * gi.A0 * std::pow(rho, gi.gamma - 1.0);
      inv = std::max(inv, std::abs(Bern - bg.B0) / bg.B0);
      double ent = bg.c2_bar[i] / (gi.gamma * std::pow(rho, gi.gamma - 1.0));
      inv = std::max(inv, std::abs(ent - gi.A0) / gi.A0);
    }
    bool pass = rc_rel <= 1e-7 && inv <= 1e-9;
    report(1, "background fidelity", pass,
           fmt("sonic radius rel err %.2e (tol 1e-7), invariant drift %.2e (tol 1e-9)",
               rc_rel, inv),
           t.s());
    sigma_star = critical_step(bg).sigma_star;
  }

  // --- 2: coefficient identities at three step sizes ----------------------
  {
    Timer t;
    BackgroundFlow bg = solve_background(gi, 1024);
    bool pass = true;
    double worst = 0.0;
    for (double f : {0.25, 0.5, 0.9})
      for (const auto& rec : identity_checks(bg, f * sigma_star)) {
        pass = pass && rec.pass;
        if (rec.name != "k1_positive") worst = std::max(worst, rec.measured);
      }
    report(2, "coefficient identities", pass,
           fmt("worst dual-route gap %.2e (tol 1e-6) at 0.25/0.5/0.9 sigma*", worst),
           t.s());
  }

  // --- 3: ellipticity boundary --------------------------------------------
  {
    Timer t;
    BackgroundFlow bg = solve_background(gi, 1024);
    auto min_k22 = [&](double sigma) {
      CoefficientTable ct = coefficient_table(bg, sigma);
      double m = 1e300;
      for (double v : ct.k22) m = std::min(m, v);
      return m;
    };
    double below = min_k22(0.999 * sigma_star), above = min_k22(1.001 * sigma_star);
    bool pass = below > 0.0 && above < 0.0;
    report(3, "ellipticity flips at sigma*", pass,
           fmt("min k22 = %+.3e at 0.999 sigma*, %+.3e at 1.001 sigma*", below, above),
           t.s());
  }

  // --- 4: elliptic solvers against manufactured solutions ------------------
  {
    Timer t;
    MmsResult m = mms_study(gi, 0.5 * sigma_star, {129, 257, 513}, 64);
    bool pass = true;
    double lo = 1e300, hi = 0.0;
    for (const auto& v : {m.ratio_poisson, m.ratio_potential})
      for (double r : v) {
        pass = pass && r >= 3.5 && r <= 4.5;
        lo = std::min(lo, r);
        hi = std::max(hi, r);
      }
    report(4, "manufactured-solution convergence", pass,
           fmt("error ratios in [%.2f, %.2f] (required [3.5, 4.5])", lo, hi), t.s());
  }

  // --- 5: equivalence of formulations --------------------------------------
  {
    Timer t;
    AnnulusGrid grid(1.0, 2.0, 257, 1.0, 64);
    EquivalenceReport eq = equivalence_check(32, grid);
    double worst_ratio = 0.0;
    for (const auto& tr : eq.trials)
      worst_ratio = std::max(worst_ratio, tr.mismatch / std::max(tr.disc_error, 1e-300));
    report(5, "equivalence of formulations", eq.pass,
           fmt("32 seeded trials, worst mismatch/discretization = %.2f (tol 5)",
               worst_ratio),
           t.s());
  }

  // --- 6: fixed-point convergence at the reference resolution --------------
  SolveResult sol257;
  bool have257 = false;
  {
    Timer t;
    SolverConfig cfg = reference_solver_config(0.5 * sigma_star, 1e-3, 257);
    std::string detail;
    bool pass = false;
    try {
      sol257 = fixed_point_solve(cfg);
      have257 = true;
      const SolveReport& rep = sol257.report;
      bool contracting = true, monotone = true;
      for (double q : rep.ratios) contracting = contracting && q < 1.0;
      // monotone non-increasing after iteration 3; ratios whose numerator
      // has hit the roundoff floor (delta < 1e4 * tol) carry no signal and
      // are excluded
      double prev = -1.0;
      for (std::size_t k = 2; k < rep.ratios.size(); ++k) {
        if (rep.deltas[k + 1] < 1e4 * cfg.tol_fixed_point) continue;
        if (prev >= 0.0 && rep.ratios[k] > prev * (1.0 + 1e-9)) monotone = false;
        prev = rep.ratios[k];
      }
      pass = rep.converged && rep.iterations <= 30 && contracting && monotone;
      detail = fmt("converged in %zu iters, final delta %.2e, ratios < 1 %s, "
                   "monotone above noise floor %s",
                   rep.iterations, rep.deltas.back(), contracting ? "yes" : "NO",
                   monotone ? "yes" : "NO");
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    report(6, "fixed-point convergence", pass, detail, t.s());
  }

  // --- 7: linear response in the boundary amplitude ------------------------
  {
    Timer t;
    SolverConfig cfg = reference_solver_config(0.5 * sigma_star, 1e-3, 257);
    std::string detail;
    bool pass = false;
    try {
      auto rows = scaling_study(cfg, {0.0, 1e-4, 1e-3, 1e-2});
      bool zero_ok = true;
      for (int k = 0; k < 5; ++k) zero_ok = zero_ok && rows[0].c0[k] == 0.0;
      double spread = 0.0;
      for (int k = 0; k < 5; ++k) {
        double lo = 1e300, hi = 0.0;
        for (std::size_t rI = 1; rI < rows.size(); ++rI) {
          lo = std::min(lo, rows[rI].ratio_c0[k]);
          hi = std::max(hi, rows[rI].ratio_c0[k]);
        }
        spread = std::max(spread, (hi - lo) / hi);
      }
      pass = zero_ok && spread <= 0.10;
      detail = fmt("eps=0 exactly zero: %s; max amplitude/eps spread %.1f%% (tol 10%%)",
                   zero_ok ? "yes" : "NO", 100.0 * spread);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    report(7, "linear response scaling", pass, detail, t.s());
  }

  // --- 8: transport defects shrink under refinement -------------------------
  ResidualReport res257{};
  {
    Timer t;
    std::string detail;
    bool pass = false;
    try {
      SolverConfig cfg = reference_solver_config(0.5 * sigma_star, 1e-3, 129);
      SolveResult sol129 = fixed_point_solve(cfg);
      ResidualReport r129 = euler_residual(sol129.flow, cfg.bc.sigma);
      if (!have257) throw std::runtime_error("criterion 6 solve unavailable");
      res257 = euler_residual(sol257.flow, cfg.bc.sigma);
      double q1 = r129.defect_B / res257.defect_B;
      double q2 = r129.defect_A / res257.defect_A;
      double q3 = r129.defect_Vc / res257.defect_Vc;
      pass = q1 >= 3.0 && q2 >= 3.0 && q3 >= 3.0;
      detail = fmt("defect shrink B %.2f, A %.2f, Vc %.2f (each >= 3 required)", q1, q2,
                   q3);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    report(8, "transport defect refinement", pass, detail, t.s());
  }

  // --- 9: full-system residuals converge at second order --------------------
  {
    Timer t;
    std::string detail;
    bool pass = false;
    try {
      SolverConfig cfg = reference_solver_config(0.5 * sigma_star, 1e-3, 513);
      SolveResult sol513 = fixed_point_solve(cfg);
      const SolveReport& a = sol257.report;
      const SolveReport& b = sol513.report;
      double q[5] = {a.res_continuity / b.res_continuity,
                     a.res_r_momentum / b.res_r_momentum,
                     a.res_theta_momentum / b.res_theta_momentum,
                     a.res_z_momentum / b.res_z_momentum,
                     a.res_entropy / b.res_entropy};
      pass = have257;
      double lo = 1e300, hi = 0.0;
      for (double v : q) {
        pass = pass && v >= 3.5 && v <= 4.5;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      detail = fmt("residual ratios 257->513 in [%.2f, %.2f] (required [3.5, 4.5])", lo,
                   hi);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    report(9, "full-system residual refinement", pass, detail, t.s());
  }

  if (g_failures == 0)
    std::printf("acceptance: all 9 criteria passed\n");
  else
    std::printf("acceptance: %d criterion(s) FAILED\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
