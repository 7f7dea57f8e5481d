#include "heliflow/solver.hpp"

#include <chrono>
#include <fstream>
#include <stdexcept>
#include <string>

#include "heliflow/calculus.hpp"
#include "heliflow/elliptic.hpp"
#include "heliflow/errors.hpp"
#include "heliflow/transport.hpp"
#include "heliflow/verify.hpp"
#include "json.hpp"

namespace heliflow {

void SolverConfig::validate() const {
  inflow.validate();
  bc.validate();
  if (bc.eps < 0.0 || bc.eps > eps_max)
    throw std::invalid_argument("SolverConfig: eps outside [0, eps_max]");
  if (tol_fixed_point <= 0.0)
    throw std::invalid_argument("SolverConfig: tol_fixed_point must be positive");
  if (max_iters == 0) throw std::invalid_argument("SolverConfig: max_iters must be >= 1");
  // grid sanity is enforced by the AnnulusGrid constructor
}

SolveContext build_context(const SolverConfig& cfg) {
  SolveContext ctx;
  ctx.bg = solve_background(cfg.inflow, cfg.N_r);
  ctx.ct = coefficient_table(ctx.bg, cfg.bc.sigma);
  ctx.grid = AnnulusGrid(cfg.inflow.r0, cfg.inflow.r1, cfg.N_r, cfg.bc.sigma, cfg.N_eta);
  // sigma_star == 0 marks a background with no supersonic band (no constraint)
  if (ctx.ct.sigma_star > 0.0 && cfg.bc.sigma >= ctx.ct.sigma_star)
    throw StepTooLarge("sigma >= sigma_star: first-order system not elliptic");
  return ctx;
}

namespace {

template <typename F>
auto run_stage(const char* name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string(name) + ": " + e.what());
  }
}

}  // namespace

PerturbationState apply_map_once(const PerturbationState& Wbar, const SolveContext& ctx,
                                 const HelicalBC& bc) {
  TransportFields tf =
      run_stage("transport", [&] { return solve_transport(Wbar, bc, ctx.bg); });

  // mixed argument list: lagged (W1, W3), fresh (W2, W4, W5)
  PerturbationState mixed = Wbar;
  mixed.W2 = tf.W2;
  mixed.W4 = tf.W4;
  mixed.W5 = tf.W5;

  Field2D G2 = run_stage("curl source", [&] { return assemble_G2(mixed, ctx.bg, bc.sigma); });
  Field2D phi1 = run_stage("poisson", [&] { return solve_poisson(G2); });
  Field2D G1 =
      run_stage("divergence source", [&] { return assemble_G1(mixed, ctx.bg, bc.sigma); });
  Field2D G3 =
      run_stage("shear source", [&] { return assemble_G3(G1, phi1, ctx.ct, ctx.bg, bc.sigma); });
  PotentialSolution pot =
      run_stage("potential", [&] { return solve_potential(G3, ctx.ct, bc); });

  PerturbationState out(Wbar.grid());
  out.W1 = pot.dphi_dr - d_eta(phi1);
  out.W3 = pot.dphi_deta + d_r(phi1);
  out.W2 = tf.W2;
  out.W4 = tf.W4;
  out.W5 = tf.W5;
  return out;
}

double state_c1_norm(const PerturbationState& s) {
  double m = 0.0;
  for (const Field2D* f : {&s.W1, &s.W2, &s.W3, &s.W4, &s.W5})
    m = std::max(m, c_norms(*f).second);
  return m;
}

double state_c0_norm(const PerturbationState& s) {
  double m = 0.0;
  for (const Field2D* f : {&s.W1, &s.W2, &s.W3, &s.W4, &s.W5})
    m = std::max(m, max_abs(*f));
  return m;
}

SolveResult fixed_point_solve(const SolverConfig& cfg) {
  cfg.validate();
  auto t0 = std::chrono::steady_clock::now();

  SolveContext ctx = build_context(cfg);

  SolveResult res;
  SolveReport& rep = res.report;
  rep.sigma = cfg.bc.sigma;
  rep.sigma_star = ctx.ct.sigma_star;
  rep.r_c = ctx.bg.r_c;
  rep.eps = cfg.bc.eps;

  PerturbationState W(ctx.grid);
  for (std::size_t it = 1; it <= cfg.max_iters; ++it) {
    PerturbationState Wn = apply_map_once(W, ctx, cfg.bc);
    PerturbationState diff(ctx.grid);
    diff.W1 = Wn.W1 - W.W1;
    diff.W2 = Wn.W2 - W.W2;
    diff.W3 = Wn.W3 - W.W3;
    diff.W4 = Wn.W4 - W.W4;
    diff.W5 = Wn.W5 - W.W5;
    double d1 = state_c1_norm(diff);
    rep.deltas.push_back(d1);
    rep.deltas_c0.push_back(state_c0_norm(diff));
    if (rep.deltas.size() >= 2) {
      std::size_t k = rep.deltas.size() - 1;
      rep.ratios.push_back(rep.deltas[k] / std::max(rep.deltas[k - 1], 1e-300));
    }
    if (it == 1 && cfg.bc.eps > 0.0) rep.c_star_empirical = d1 / cfg.bc.eps;
    W = Wn;
    rep.iterations = it;
    if (d1 < cfg.tol_fixed_point) {
      rep.converged = true;
      break;
    }
  }
  if (!rep.converged && !rep.ratios.empty() && rep.ratios.back() >= 1.0)
    throw NoConvergence("fixed_point_solve: max_iters reached with non-contracting ratio");

  res.W = W;
  res.flow = run_stage("reconstruction",
                       [&] { return reconstruct_flow(W, ctx.bg, cfg.bc.sigma); });

  ResidualReport rr = euler_residual(res.flow, cfg.bc.sigma);
  rep.res_continuity = rr.continuity;
  rep.res_r_momentum = rr.r_momentum;
  rep.res_theta_momentum = rr.theta_momentum;
  rep.res_z_momentum = rr.z_momentum;
  rep.res_entropy = rr.entropy;

  rep.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

void write_report_json(const std::string& path, const SolveReport& rep) {
  nlohmann::json j;
  j["iterations"] = rep.iterations;
  j["converged"] = rep.converged;
  j["deltas"] = rep.deltas;
  j["deltas_c0"] = rep.deltas_c0;
  j["ratios"] = rep.ratios;
  j["residuals"] = {{"continuity", rep.res_continuity},
                    {"r_momentum", rep.res_r_momentum},
                    {"theta_momentum", rep.res_theta_momentum},
                    {"z_momentum", rep.res_z_momentum},
                    {"entropy", rep.res_entropy}};
  j["sigma"] = rep.sigma;
  j["sigma_star"] = rep.sigma_star;
  j["r_c"] = rep.r_c;
  j["eps"] = rep.eps;
  j["c_star_empirical"] = rep.c_star_empirical;
  j["wall_time_s"] = rep.wall_time_s;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_report_json: cannot open " + path);
  out << j.dump(2) << "\n";
}

}  // namespace heliflow
