#include "heliflow/assembly.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "heliflow/calculus.hpp"
#include "heliflow/errors.hpp"

namespace heliflow {

namespace {

struct BgProfiles {
  std::vector<double> rho, u1, c2, u1p;
};

BgProfiles bg_on_grid(const BackgroundFlow& bg, const AnnulusGrid& g) {
  BgProfiles p;
  p.rho.resize(g.N_r);
  p.u1.resize(g.N_r);
  p.c2.resize(g.N_r);
  p.u1p.resize(g.N_r);
  bool aligned = bg.r_grid.size() == g.N_r &&
                 std::abs(bg.r_grid.front() - g.r0) < 1e-12 &&
                 std::abs(bg.r_grid.back() - g.r1) < 1e-12;
  for (std::size_t i = 0; i < g.N_r; ++i) {
    double r = g.r(i);
    p.rho[i] = aligned ? bg.rho_bar[i] : bg.rho(r);
    p.u1[i] = aligned ? bg.U1_bar[i] : bg.U1(r);
    p.c2[i] = aligned ? bg.c2_bar[i]
                      : bg.inflow.gamma * bg.inflow.A0 * std::pow(p.rho[i], bg.inflow.gamma - 1.0);
    p.u1p[i] = bg.U1_prime(r);
  }
  return p;
}

// Bernoulli bracket B - |u|^2/2 in (V1, Vc, V3) variables
inline double bernoulli_bracket(double B, double V1, double Vc, double V3, double r,
                                double sigma) {
  double a = 1.0 + sigma * sigma / (4.0 * M_PI * M_PI * r * r);
  return B - 0.5 * (V1 * V1 + Vc * Vc / (r * r) +
                    sigma * Vc * V3 / (M_PI * r * r) + a * V3 * V3);
}

}  // namespace

Field2D sound_speed_sq(const PerturbationState& s, const BackgroundFlow& bg,
                       double sigma) {
  const AnnulusGrid& g = s.grid();
  BgProfiles p = bg_on_grid(bg, g);
  double gam = bg.inflow.gamma;
  // vacuum guard threshold: a fraction of the background bracket minimum
  double bmin = 1e300;
  for (double c2 : p.c2) bmin = std::min(bmin, c2 / (gam - 1.0));
  Field2D out(g);
  for (std::size_t i = 0; i < g.N_r; ++i) {
    double r = g.r(i);
    for (std::size_t j = 0; j < g.N_eta; ++j) {
      double br = bernoulli_bracket(bg.B0 + s.W5.at(i, j), p.u1[i] + s.W1.at(i, j),
                                    bg.kappa2 + s.W2.at(i, j), s.W3.at(i, j), r, sigma);
      if (!(br > 0.1 * bmin))
        throw VacuumState("sound_speed_sq: Bernoulli bracket too small at r = " +
                          std::to_string(r));
      out.at(i, j) = (gam - 1.0) * br;
    }
  }
  return out;
}

Field2D density(const PerturbationState& s, const BackgroundFlow& bg, double sigma) {
  const AnnulusGrid& g = s.grid();
  double gam = bg.inflow.gamma;
  Field2D c2 = sound_speed_sq(s, bg, sigma);
  Field2D out(g);
  for (std::size_t i = 0; i < g.N_r; ++i)
    for (std::size_t j = 0; j < g.N_eta; ++j) {
      double A = bg.inflow.A0 + s.W4.at(i, j);
      if (!(A > 0.0)) throw VacuumState("density: nonpositive entropy function");
      // rho^(gamma-1) = c^2/(gamma A)
      out.at(i, j) = std::pow(c2.at(i, j) / (gam * A), 1.0 / (gam - 1.0));
    }
  return out;
}

Field2D assemble_J(const PerturbationState& s, const BackgroundFlow& bg, double sigma) {
  const AnnulusGrid& g = s.grid();
  double gam = bg.inflow.gamma, k2c = bg.kappa2;
  Field2D out(g);
  for (std::size_t i = 0; i < g.N_r; ++i) {
    double r = g.r(i);
    double a = 1.0 + sigma * sigma / (4.0 * M_PI * M_PI * r * r);
    for (std::size_t j = 0; j < g.N_eta; ++j) {
      double W1 = s.W1.at(i, j), W2 = s.W2.at(i, j), W3 = s.W3.at(i, j),
             W5 = s.W5.at(i, j);
      out.at(i, j) =
          (gam - 1.0) *
          (W5 - k2c * W2 / (r * r) -
           0.5 * (W1 * W1 + W2 * W2 / (r * r) + a * W3 * W3 +
                  sigma * W2 * W3 / (M_PI * r * r)));
    }
  }
  return out;
}

Field2D assemble_G2(const PerturbationState& s, const BackgroundFlow& bg, double sigma) {
  const AnnulusGrid& g = s.grid();
  BgProfiles p = bg_on_grid(bg, g);
  double gam = bg.inflow.gamma, k2c = bg.kappa2, A0 = bg.inflow.A0;
  Field2D c2 = sound_speed_sq(s, bg, sigma);
  Field2D dW2e = d_eta(s.W2), dW4e = d_eta(s.W4), dW5e = d_eta(s.W5);
  Field2D out(g);
  for (std::size_t i = 0; i < g.N_r; ++i) {
    double r = g.r(i);
    for (std::size_t j = 0; j < g.N_eta; ++j) {
      double den = p.u1[i] + s.W1.at(i, j);
      if (std::abs(den) < 1e-8)
        throw DegenerateRadialVelocity("assemble_G2: |U1 + W1| below floor");
      double rV2 = s.W2.at(i, j) + k2c + sigma * s.W3.at(i, j) / (2.0 * M_PI);
      double rhog = c2.at(i, j) / ((gam - 1.0));  // Bernoulli bracket
      out.at(i, j) = (-dW5e.at(i, j) + rV2 / (r * r) * dW2e.at(i, j) +
                      rhog / (gam * (A0 + s.W4.at(i, j))) * dW4e.at(i, j)) /
                     den;
    }
  }
  return out;
}

Field2D assemble_G1(const PerturbationState& s, const BackgroundFlow& bg, double sigma) {
  const AnnulusGrid& g = s.grid();
  BgProfiles p = bg_on_grid(bg, g);
  double gam = bg.inflow.gamma, k2c = bg.kappa2, A0 = bg.inflow.A0;

  Field2D c2 = sound_speed_sq(s, bg, sigma);
  Field2D J = assemble_J(s, bg, sigma);
  Field2D dW1r = d_r(s.W1), dW1e = d_eta(s.W1);
  Field2D dW3r = d_r(s.W3), dW3e = d_eta(s.W3);
  Field2D dW2e = d_eta(s.W2), dW4e = d_eta(s.W4), dW5e = d_eta(s.W5);

  Field2D out(g);
  for (std::size_t i = 0; i < g.N_r; ++i) {
    double r = g.r(i);
    double a = 1.0 + sigma * sigma / (4.0 * M_PI * M_PI * r * r);
    double sc = sigma / (2.0 * M_PI * r * r);
    double u1 = p.u1[i], u1p = p.u1p[i], u2 = k2c / r;
    for (std::size_t j = 0; j < g.N_eta; ++j) {
      double W1 = s.W1.at(i, j), W2 = s.W2.at(i, j), W3 = s.W3.at(i, j),
             W4 = s.W4.at(i, j);
      double cc = c2.at(i, j), Jv = J.at(i, j);
      double g1 = 0.0;
      // term-by-term, one accumulation per display line
      g1 += -sc * cc * dW2e.at(i, j);
      g1 += a * (u1 + W1) * W3 * dW1e.at(i, j);
      g1 += sc * a * (k2c + W2) * W3 * dW3e.at(i, j);
      g1 += a * W3 * ((u1 + W1) * dW3r.at(i, j) + a * W3 * dW3e.at(i, j));
      g1 += -sc * (k2c + W2) *
            (dW5e.at(i, j) - cc * dW4e.at(i, j) / ((gam - 1.0) * (A0 + W4)) -
             a * W3 * dW3e.at(i, j) -
             ((k2c + W2) / (r * r) + sc * W3) * dW2e.at(i, j));
      g1 += u1p * W1 * W1 - u1p * Jv - u1 * Jv / r;
      g1 += ((gam + 1.0) * u1 * W1 + (gam - 1.0) * sc * k2c * W3 + W1 * W1 - Jv) *
            dW1r.at(i, j);
      g1 += W1 / r * ((gam - 1.0) * u1 * W1 + (gam - 1.0) * sc * k2c * W3 - Jv);
      g1 += a * ((gam - 1.0) * u1 * W1 + (gam - 1.0) * sc * k2c * W3 - Jv) *
            dW3e.at(i, j);
      g1 += sc * (k2c * W1 * dW3r.at(i, j) + (u1 + W1) * W2 * dW3r.at(i, j));
      g1 += sc * W2 * ((u1 + W1) * dW1e.at(i, j) + sc * (k2c + W2) * dW3e.at(i, j)) +
            sc * k2c * (W1 * dW1e.at(i, j) + sc * W2 * dW3e.at(i, j));

      // correction so that (frozen-coefficient lhs) - G1 is exactly the transformed
      // continuity equation in full variables (see verify's identity oracle)
      double V1 = u1 + W1, Vc = k2c + W2;
      double V2 = (Vc + sigma * W3 / (2.0 * M_PI)) / r;
      double rg = cc / (gam * (A0 + W4));  // rho^(gamma-1)
      double delta = sc * V1 * Vc * (dW1e.at(i, j) - dW3r.at(i, j)) +
                     2.0 * sc * Vc * V2 / r * dW2e.at(i, j) -
                     2.0 * sc * Vc * dW5e.at(i, j) +
                     (gam + 1.0) / (gam - 1.0) * sc * Vc * rg * dW4e.at(i, j) +
                     (V1 * V2 * V2 - u1 * u2 * u2) / r;
      out.at(i, j) = g1 - delta;
    }
  }
  return out;
}

Field2D assemble_G3(const Field2D& G1, const Field2D& phi1, const CoefficientTable& ct,
                    const BackgroundFlow& bg, double sigma) {
  const AnnulusGrid& g = G1.grid;
  BgProfiles p = bg_on_grid(bg, g);
  double k2c = bg.kappa2;
  Field2D dre = d_r(d_eta(phi1));
  Field2D drr = d_r2(phi1);
  Field2D dee = d_eta2(phi1);
  Field2D dr1 = d_r(phi1), de1 = d_eta(phi1);
  Field2D out(g);
  for (std::size_t i = 0; i < g.N_r; ++i) {
    double r = g.r(i);
    double u2 = k2c / r;
    double brk = p.u1[i] * p.u1[i] +
                 sigma * sigma / (4.0 * M_PI * M_PI * r * r) * (p.c2[i] - u2 * u2);
    for (std::size_t j = 0; j < g.N_eta; ++j) {
      out.at(i, j) = G1.at(i, j) - brk * dre.at(i, j) -
                     ct.A13[i] * (drr.at(i, j) - dee.at(i, j)) +
                     ct.e1[i] * de1.at(i, j) - ct.e3[i] * dr1.at(i, j);
    }
  }
  return out;
}

FlowField reconstruct_flow(const PerturbationState& W, const BackgroundFlow& bg,
                           double sigma) {
  const AnnulusGrid& g = W.grid();
  BgProfiles p = bg_on_grid(bg, g);
  double gam = bg.inflow.gamma, k2c = bg.kappa2, A0 = bg.inflow.A0;
  Field2D rho = density(W, bg, sigma);
  Field2D c2 = sound_speed_sq(W, bg, sigma);
  FlowField f;
  f.sigma = sigma;
  f.V1 = Field2D(g); f.V2 = Field2D(g); f.V3 = Field2D(g);
  f.rho = rho; f.p = Field2D(g); f.A = Field2D(g); f.B = Field2D(g);
  f.mach = Field2D(g);
  for (std::size_t i = 0; i < g.N_r; ++i) {
    double r = g.r(i);
    for (std::size_t j = 0; j < g.N_eta; ++j) {
      double Vc = k2c + W.W2.at(i, j), V3 = W.W3.at(i, j);
      double V1 = p.u1[i] + W.W1.at(i, j);
      double A = A0 + W.W4.at(i, j);
      f.V1.at(i, j) = V1;
      f.V3.at(i, j) = V3;
      f.V2.at(i, j) = (Vc + sigma * V3 / (2.0 * M_PI)) / r;
      f.A.at(i, j) = A;
      f.B.at(i, j) = bg.B0 + W.W5.at(i, j);
      f.p.at(i, j) = A * std::pow(rho.at(i, j), gam);
      double V2 = f.V2.at(i, j);
      f.mach.at(i, j) = std::sqrt((V1 * V1 + V2 * V2 + V3 * V3) / c2.at(i, j));
    }
  }
  return f;
}

void write_solution_csv(const std::string& path, const FlowField& flow) {
  std::FILE* fp = std::fopen(path.c_str(), "w");
  if (!fp) throw std::runtime_error("cannot open " + path);
  std::fprintf(fp, "r,eta,V1,V2,V3,rho,p,A,B,mach\n");
  const AnnulusGrid& g = flow.V1.grid;
  for (std::size_t i = 0; i < g.N_r; ++i)
    for (std::size_t j = 0; j < g.N_eta; ++j)
      std::fprintf(fp, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                   g.r(i), g.eta(j), flow.V1.at(i, j), flow.V2.at(i, j),
                   flow.V3.at(i, j), flow.rho.at(i, j), flow.p.at(i, j),
                   flow.A.at(i, j), flow.B.at(i, j), flow.mach.at(i, j));
  std::fclose(fp);
}

}  // namespace heliflow
