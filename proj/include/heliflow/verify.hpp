#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "heliflow/background.hpp"
#include "heliflow/solver.hpp"
#include "heliflow/state.hpp"
#include "heliflow/transport.hpp"

namespace heliflow {

// Max-norm residuals of the full helical Euler system on interior radial
// nodes, plus transport defects of the three conserved quantities.
struct ResidualReport {
  double continuity = 0, r_momentum = 0, theta_momentum = 0, z_momentum = 0,
         entropy = 0;
  double defect_B = 0, defect_A = 0, defect_Vc = 0;
  std::size_t N_r = 0, N_eta = 0;

  double max_residual() const;
};

ResidualReport euler_residual(const FlowField& flow, double sigma);

// Equivalence-of-formulations oracle on random smooth fields: each primitive
// residual must be the documented pointwise combination of the reformulated
// residuals, up to radial FD truncation. The truncation scale is measured by
// re-running the same analytic fields on a 2x-coarser radial grid.
struct EquivalenceTrial {
  std::uint32_t seed = 0;
  double mismatch = 0;         // fine grid
  double mismatch_coarse = 0;  // radial grid coarsened 2x
  double disc_error = 0;       // Richardson estimate: mismatch_coarse / 4
  bool pass = false;
};

struct EquivalenceReport {
  std::vector<EquivalenceTrial> trials;
  double max_mismatch = 0;
  bool pass = false;
};

EquivalenceReport equivalence_check(std::size_t n_trials, const AnnulusGrid& grid,
                                    std::uint32_t base_seed = 2024u);

// Perturbation-size scaling of the converged solution (linear-response check).
struct ScalingRow {
  double eps = 0;
  // quantities: V1-U1bar, V2-kappa2/r, V3, A-Abar, B-Bbar
  double c0[5] = {0, 0, 0, 0, 0};
  double c1[5] = {0, 0, 0, 0, 0};
  double ratio_c0[5] = {0, 0, 0, 0, 0};  // c0/eps (0 when eps == 0)
  std::size_t iterations = 0;
};

std::vector<ScalingRow> scaling_study(SolverConfig cfg, const std::vector<double>& eps_list);

// Dual-route coefficient identities on the background table.
struct CheckRecord {
  std::string name;
  double measured = 0;
  double tol = 0;
  bool pass = false;
};

std::vector<CheckRecord> identity_checks(const BackgroundFlow& bg, double sigma);

void write_verify_json(const std::string& path, const std::vector<CheckRecord>& records);

// Manufactured-solution refinement study for the two elliptic solvers.
struct MmsResult {
  std::vector<std::size_t> N_r_levels;
  std::vector<double> err_poisson, err_potential;
  std::vector<double> ratio_poisson, ratio_potential;  // err[l-1]/err[l]
};

MmsResult mms_study(const GasInflow& inflow, double sigma,
                    const std::vector<std::size_t>& N_r_levels, std::size_t N_eta);

// First-order upwind marcher for the transport stage; independent of the
// characteristic tracer, used only as a cross-check oracle.
TransportFields transport_upwind_oracle(const PerturbationState& Wbar,
                                        const HelicalBC& bc, const BackgroundFlow& bg);

}  // namespace heliflow
