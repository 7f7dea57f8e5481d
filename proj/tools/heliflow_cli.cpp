// Command-line front end: JSON config in, CSV/JSON artifacts out.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "heliflow/background.hpp"
#include "heliflow/errors.hpp"
#include "heliflow/solver.hpp"
#include "heliflow/verify.hpp"
#include "json.hpp"

using nlohmann::json;
namespace hf = heliflow;

namespace {

void reject_unknown(const json& obj, const std::vector<std::string>& allowed,
                    const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const auto& k : allowed) ok = ok || (it.key() == k);
    if (!ok)
      throw std::invalid_argument("config: unknown key '" + where + "." + it.key() + "'");
  }
}

std::vector<double> doubles(const json& j) { return j.get<std::vector<double>>(); }

// series object {cos: [...], sin: [...]}; when mode0 is false the arrays
// start at mode 1 (q3: zero mean by schema)
hf::FourierSeries series_from(const json& j, double sigma, bool mode0,
                              const std::string& where) {
  reject_unknown(j, {"cos", "sin"}, where);
  std::vector<double> c = j.contains("cos") ? doubles(j["cos"]) : std::vector<double>{};
  std::vector<double> s = j.contains("sin") ? doubles(j["sin"]) : std::vector<double>{};
  if (!mode0) {
    c.insert(c.begin(), 0.0);
    s.insert(s.begin(), 0.0);
  }
  if (c.empty()) c.push_back(0.0);
  if (s.empty()) s.push_back(0.0);
  return hf::FourierSeries(sigma, c, s);
}

struct RunConfig {
  hf::SolverConfig solver;
};

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw std::invalid_argument("config: parse error in " + path + ": " + e.what());
  }

  reject_unknown(j, {"gas", "inflow", "annulus", "helical", "boundary", "grid", "solver"},
                 "");
  RunConfig cfg;
  hf::GasInflow& gi = cfg.solver.inflow;

  const json& gas = j.at("gas");
  reject_unknown(gas, {"gamma", "A0"}, "gas");
  gi.gamma = gas.at("gamma").get<double>();
  gi.A0 = gas.at("A0").get<double>();

  const json& inflow = j.at("inflow");
  reject_unknown(inflow, {"rho0", "U10", "U20"}, "inflow");
  gi.rho0 = inflow.at("rho0").get<double>();
  gi.U10 = inflow.at("U10").get<double>();
  gi.U20 = inflow.at("U20").get<double>();

  const json& ann = j.at("annulus");
  reject_unknown(ann, {"r0", "r1"}, "annulus");
  gi.r0 = ann.at("r0").get<double>();
  gi.r1 = ann.at("r1").get<double>();

  const json& hel = j.at("helical");
  reject_unknown(hel, {"sigma", "eps"}, "helical");
  double sigma = hel.at("sigma").get<double>();
  cfg.solver.bc.sigma = sigma;
  cfg.solver.bc.eps = hel.at("eps").get<double>();

  const json& bnd = j.at("boundary");
  reject_unknown(bnd, {"qc", "q1", "q3", "Atilde", "Btilde"}, "boundary");
  auto get = [&](const char* key, bool mode0) {
    return bnd.contains(key) ? series_from(bnd[key], sigma, mode0, std::string("boundary.") + key)
                             : hf::FourierSeries(sigma, {0.0}, {0.0});
  };
  cfg.solver.bc.q_c = get("qc", true);
  cfg.solver.bc.q1 = get("q1", true);
  cfg.solver.bc.q3 = get("q3", false);
  cfg.solver.bc.A_tilde = get("Atilde", true);
  cfg.solver.bc.B_tilde = get("Btilde", true);

  const json& grid = j.at("grid");
  reject_unknown(grid, {"N_r", "N_eta"}, "grid");
  cfg.solver.N_r = grid.at("N_r").get<std::size_t>();
  cfg.solver.N_eta = grid.at("N_eta").get<std::size_t>();

  if (j.contains("solver")) {
    const json& sv = j["solver"];
    reject_unknown(sv, {"tol", "max_iters"}, "solver");
    if (sv.contains("tol")) cfg.solver.tol_fixed_point = sv["tol"].get<double>();
    if (sv.contains("max_iters")) cfg.solver.max_iters = sv["max_iters"].get<std::size_t>();
  }
  return cfg;
}

json scaling_to_json(const std::vector<hf::ScalingRow>& rows) {
  static const char* names[5] = {"V1_minus_U1bar", "V2_minus_kappa2_over_r", "V3",
                                 "A_minus_Abar", "B_minus_Bbar"};
  json out = json::array();
  for (const auto& r : rows) {
    json row;
    row["eps"] = r.eps;
    row["iterations"] = r.iterations;
    for (int k = 0; k < 5; ++k) {
      row["c0"][names[k]] = r.c0[k];
      row["c1"][names[k]] = r.c1[k];
      row["ratio_c0"][names[k]] = r.ratio_c0[k];
    }
    out.push_back(row);
  }
  return out;
}

void emit(const json& j, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot open " + out_path);
    out << j.dump(2) << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"helical transonic annulus solver"};
  app.require_subcommand(1);

  std::string config_path, out_path, report_path, eps_arg = "1e-4,1e-3,1e-2";
  std::size_t refine = 3;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON run configuration")->required();
  };
  CLI::App* cmd_bg = app.add_subcommand("background", "tabulate the radial profile");
  add_common(cmd_bg);
  cmd_bg->add_option("--out", out_path, "CSV output path");
  CLI::App* cmd_ss = app.add_subcommand("sigma-star", "print the critical step");
  add_common(cmd_ss);
  CLI::App* cmd_solve = app.add_subcommand("solve", "run the fixed-point iteration");
  add_common(cmd_solve);
  cmd_solve->add_option("--out", out_path, "solution CSV path");
  cmd_solve->add_option("--report", report_path, "report JSON path");
  CLI::App* cmd_verify = app.add_subcommand("verify", "run the oracle ledger");
  add_common(cmd_verify);
  cmd_verify->add_option("--out", out_path, "verify.json path");
  CLI::App* cmd_mms = app.add_subcommand("mms", "manufactured-solution refinement study");
  add_common(cmd_mms);
  cmd_mms->add_option("--refine", refine, "number of refinement levels");
  cmd_mms->add_option("--out", out_path, "result JSON path");
  CLI::App* cmd_scaling = app.add_subcommand("scaling", "perturbation-size scaling study");
  add_common(cmd_scaling);
  cmd_scaling->add_option("--eps", eps_arg, "comma-separated eps list");
  cmd_scaling->add_option("--out", out_path, "result JSON path");

  CLI11_PARSE(app, argc, argv);

  try {
    RunConfig cfg = load_config(config_path);
    const double sigma = cfg.solver.bc.sigma;

    if (cmd_bg->parsed()) {
      hf::BackgroundFlow bg = hf::solve_background(cfg.solver.inflow, cfg.solver.N_r);
      hf::CoefficientTable ct = hf::coefficient_table(bg, sigma);
      if (!out_path.empty()) hf::write_background_csv(out_path, bg, ct);
      json j{{"r_c", bg.r_c}, {"kappa1", bg.kappa1}, {"kappa2", bg.kappa2},
             {"B0", bg.B0},   {"sigma_star", ct.sigma_star}};
      std::cout << j.dump() << "\n";
    } else if (cmd_ss->parsed()) {
      hf::BackgroundFlow bg = hf::solve_background(cfg.solver.inflow, cfg.solver.N_r);
      hf::CriticalStep cs = hf::critical_step(bg);
      json j{{"sigma_star", cs.sigma_star},
             {"argmin_radius", cs.argmin_radius},
             {"r_c", bg.r_c}};
      std::cout << j.dump() << "\n";
    } else if (cmd_solve->parsed()) {
      hf::SolveResult res = hf::fixed_point_solve(cfg.solver);
      if (!out_path.empty()) hf::write_solution_csv(out_path, res.flow);
      if (!report_path.empty()) hf::write_report_json(report_path, res.report);
      json j{{"iterations", res.report.iterations},
             {"converged", res.report.converged},
             {"final_delta", res.report.deltas.empty() ? 0.0 : res.report.deltas.back()}};
      std::cout << j.dump() << "\n";
    } else if (cmd_verify->parsed()) {
      hf::BackgroundFlow bg = hf::solve_background(cfg.solver.inflow, cfg.solver.N_r);
      auto records = hf::identity_checks(bg, sigma);
      hf::AnnulusGrid grid(cfg.solver.inflow.r0, cfg.solver.inflow.r1, cfg.solver.N_r,
                           sigma, cfg.solver.N_eta);
      hf::EquivalenceReport eq = hf::equivalence_check(32, grid);
      double worst_ratio = 0.0;
      for (const auto& t : eq.trials)
        worst_ratio = std::max(worst_ratio, t.mismatch / std::max(t.disc_error, 1e-300));
      records.push_back({"equivalence_32_trials", worst_ratio, 5.0, eq.pass});
      hf::write_verify_json(out_path.empty() ? "verify.json" : out_path, records);
      bool all = true;
      for (const auto& r : records) all = all && r.pass;
      json j{{"checks", records.size()}, {"pass", all}};
      std::cout << j.dump() << "\n";
      if (!all) return 2;
    } else if (cmd_mms->parsed()) {
      std::vector<std::size_t> levels;
      for (std::size_t l = 0, n = 129; l < refine; ++l, n = 2 * n - 1) levels.push_back(n);
      hf::MmsResult m = hf::mms_study(cfg.solver.inflow, sigma, levels, cfg.solver.N_eta);
      json j{{"N_r", m.N_r_levels},
             {"err_poisson", m.err_poisson},
             {"err_potential", m.err_potential},
             {"ratio_poisson", m.ratio_poisson},
             {"ratio_potential", m.ratio_potential}};
      emit(j, out_path);
    } else if (cmd_scaling->parsed()) {
      std::vector<double> eps_list;
      std::stringstream ss(eps_arg);
      std::string tok;
      while (std::getline(ss, tok, ',')) eps_list.push_back(std::stod(tok));
      auto rows = hf::scaling_study(cfg.solver, eps_list);
      emit(scaling_to_json(rows), out_path);
    }
  } catch (const hf::StepTooLarge& e) {
    std::cerr << "error: helical.sigma: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
