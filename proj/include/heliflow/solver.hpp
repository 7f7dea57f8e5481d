#pragma once
#include <string>
#include <vector>

#include "heliflow/assembly.hpp"
#include "heliflow/background.hpp"
#include "heliflow/boundary.hpp"
#include "heliflow/state.hpp"

namespace heliflow {

struct SolverConfig {
  GasInflow inflow;
  HelicalBC bc;
  std::size_t N_r = 257;
  std::size_t N_eta = 64;
  double tol_fixed_point = 1e-11;
  std::size_t max_iters = 100;
  double eps_max = 1e-2;

  void validate() const;  // field-level checks only; sigma < sigma* is
                          // checked against the computed background
};

// Precomputed per-solve context shared by all iterations.
struct SolveContext {
  BackgroundFlow bg;
  CoefficientTable ct;
  AnnulusGrid grid;
};

SolveContext build_context(const SolverConfig& cfg);

struct SolveReport {
  std::size_t iterations = 0;
  bool converged = false;
  std::vector<double> deltas;     // C1-proxy successive differences
  std::vector<double> deltas_c0;  // C0 companions
  std::vector<double> ratios;     // deltas[k]/deltas[k-1]
  // max-norm residuals of the full system on the reconstructed flow
  double res_continuity = 0, res_r_momentum = 0, res_theta_momentum = 0;
  double res_z_momentum = 0, res_entropy = 0;
  double sigma = 0, sigma_star = 0, r_c = 0, eps = 0;
  double c_star_empirical = 0;  // first-iterate C1 norm / eps
  double wall_time_s = 0;
};

// One application of the iteration map: transport solve for (W2,W4,W5),
// curl source + Poisson for phi1, divergence source + potential solve,
// then W1 = d_r phi - d_eta phi1, W3 = d_eta phi + d_r phi1.
PerturbationState apply_map_once(const PerturbationState& Wbar, const SolveContext& ctx,
                                 const HelicalBC& bc);

struct SolveResult {
  PerturbationState W;
  FlowField flow;
  SolveReport report;
};

SolveResult fixed_point_solve(const SolverConfig& cfg);

// C1-proxy norm of a five-field state (max over fields).
double state_c1_norm(const PerturbationState& s);
double state_c0_norm(const PerturbationState& s);

void write_report_json(const std::string& path, const SolveReport& rep);

}  // namespace heliflow
