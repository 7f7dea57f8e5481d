#include "heliflow/background.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "heliflow/errors.hpp"

namespace heliflow {

namespace {
constexpr double kSonicMargin = 1e-6;  // guard for the 1-M1^2 denominator

struct OdeState {
  double rho, U1;
};

// Right side of the radial system: rho' and U1' (regular while M1^2 < 1).
OdeState ode_rhs(double r, const OdeState& s, const GasInflow& gi, double kappa2) {
  double c2 = gi.gamma * gi.A0 * std::pow(s.rho, gi.gamma - 1.0);
  double P = s.U1 * s.U1 / c2;
  double Q = kappa2 * kappa2 / (r * r * c2);
  if (P >= 1.0 - kSonicMargin)
    throw SonicRadialVelocity("background: M1^2 -> 1 at r = " + std::to_string(r));
  if (!(s.rho > 0.0))
    throw VacuumOrInvalid("background: nonpositive density at r = " + std::to_string(r));
  double denom = r * (1.0 - P);
  return {(P + Q) / denom * s.rho, -(1.0 + Q) / denom * s.U1};
}
}  // namespace

void GasInflow::validate() const {
  if (!(gamma > 1.0)) throw std::invalid_argument("gas.gamma must be > 1");
  if (!(rho0 > 0.0)) throw std::invalid_argument("inflow.rho0 must be > 0");
  if (U20 == 0.0) throw std::invalid_argument("inflow.U20 must be nonzero");
  if (U10 > 0.0) throw std::invalid_argument("inflow.U10 must be <= 0");
  if (!(0.0 < r0 && r0 < r1)) throw std::invalid_argument("annulus: need 0 < r0 < r1");
  double c2_in = A0 * gamma * std::pow(rho0, gamma - 1.0);
  if (!(c2_in > U10 * U10 + U20 * U20))
    throw std::invalid_argument("inflow must be subsonic: A0*gamma*rho0^(gamma-1) > U10^2+U20^2");
}

double BackgroundFlow::c2(double r) const {
  return inflow.gamma * inflow.A0 * std::pow(rho(r), inflow.gamma - 1.0);
}
double BackgroundFlow::M1sq(double r) const {
  double u = U1(r);
  return u * u / c2(r);
}
double BackgroundFlow::M2sq(double r) const {
  return kappa2 * kappa2 / (r * r * c2(r));
}
double BackgroundFlow::U1_prime(double r) const {
  double P = M1sq(r), Q = M2sq(r);
  return -(1.0 + Q) / (r * (1.0 - P)) * U1(r);
}
double BackgroundFlow::rho_prime(double r) const {
  double P = M1sq(r), Q = M2sq(r);
  return (P + Q) / (r * (1.0 - P)) * rho(r);
}

BackgroundFlow solve_background(const GasInflow& gi, std::size_t N_r) {
  gi.validate();
  if (N_r < 16) throw std::invalid_argument("solve_background: N_r >= 16 required");

  BackgroundFlow bg;
  bg.inflow = gi;
  bg.kappa1 = gi.r1 * gi.rho0 * gi.U10;
  bg.kappa2 = gi.r1 * gi.U20;
  bg.B0 = 0.5 * (gi.U10 * gi.U10 + gi.U20 * gi.U20) +
          gi.gamma / (gi.gamma - 1.0) * gi.A0 * std::pow(gi.rho0, gi.gamma - 1.0);

  bg.r_grid.resize(N_r);
  bg.rho_bar.resize(N_r);
  bg.U1_bar.resize(N_r);
  bg.U2_bar.resize(N_r);
  bg.c2_bar.resize(N_r);
  bg.M1_sq.resize(N_r);
  bg.M2_sq.resize(N_r);
  double h = (gi.r1 - gi.r0) / double(N_r - 1);
  for (std::size_t i = 0; i < N_r; ++i) bg.r_grid[i] = gi.r0 + double(i) * h;

  // integrate downward from r1 (index N_r-1) to r0 (index 0)
  OdeState s{gi.rho0, gi.U10};
  auto store = [&](std::size_t i, const OdeState& st) {
    double r = bg.r_grid[i];
    bg.rho_bar[i] = st.rho;
    bg.U1_bar[i] = st.U1;
    bg.U2_bar[i] = bg.kappa2 / r;
    double c2 = gi.gamma * gi.A0 * std::pow(st.rho, gi.gamma - 1.0);
    bg.c2_bar[i] = c2;
    bg.M1_sq[i] = st.U1 * st.U1 / c2;
    bg.M2_sq[i] = bg.kappa2 * bg.kappa2 / (r * r * c2);
  };
  store(N_r - 1, s);
  for (std::size_t i = N_r - 1; i > 0; --i) {
    double r = bg.r_grid[i];
    double dt = -h;  // marching toward smaller radius
    OdeState k1 = ode_rhs(r, s, gi, bg.kappa2);
    OdeState s2{s.rho + 0.5 * dt * k1.rho, s.U1 + 0.5 * dt * k1.U1};
    OdeState k2 = ode_rhs(r + 0.5 * dt, s2, gi, bg.kappa2);
    OdeState s3{s.rho + 0.5 * dt * k2.rho, s.U1 + 0.5 * dt * k2.U1};
    OdeState k3 = ode_rhs(r + 0.5 * dt, s3, gi, bg.kappa2);
    OdeState s4{s.rho + dt * k3.rho, s.U1 + dt * k3.U1};
    OdeState k4 = ode_rhs(r + dt, s4, gi, bg.kappa2);
    s.rho += dt / 6.0 * (k1.rho + 2.0 * k2.rho + 2.0 * k3.rho + k4.rho);
    s.U1 += dt / 6.0 * (k1.U1 + 2.0 * k2.U1 + 2.0 * k3.U1 + k4.U1);
    if (gi.U10 == 0.0) s.U1 = 0.0;
    store(i - 1, s);
  }

  bg.rho_spline = CubicSpline<double>(gi.r0, h, bg.rho_bar);
  bg.U1_spline = CubicSpline<double>(gi.r0, h, bg.U1_bar);
  if (gi.U10 == 0.0) bg.r_sharp_u10zero = std::abs(bg.kappa2) / std::sqrt(2.0 * bg.B0);

  bool has_super = false, has_sub = false;
  for (std::size_t i = 0; i < N_r; ++i) {
    double m = bg.M1_sq[i] + bg.M2_sq[i];
    (m > 1.0 ? has_super : has_sub) = true;
  }
  if (has_super && has_sub) bg.r_c = find_sonic_radius(bg);
  return bg;
}

double sonic_radius_closed_form(const GasInflow& gi) {
  double rho_c = std::pow(2.0 * (gi.gamma - 1.0) *
                              (0.5 * (gi.U10 * gi.U10 + gi.U20 * gi.U20) +
                               gi.gamma / (gi.gamma - 1.0) * gi.A0 * std::pow(gi.rho0, gi.gamma - 1.0)) /
                              ((gi.gamma + 1.0) * gi.gamma * gi.A0),
                          1.0 / (gi.gamma - 1.0));
  double kappa1 = gi.r1 * gi.rho0 * gi.U10;
  double kappa2 = gi.r1 * gi.U20;
  double B0 = 0.5 * (gi.U10 * gi.U10 + gi.U20 * gi.U20) +
              gi.gamma / (gi.gamma - 1.0) * gi.A0 * std::pow(gi.rho0, gi.gamma - 1.0);
  return std::sqrt((gi.gamma + 1.0) * (kappa1 * kappa1 + kappa2 * kappa2 * rho_c * rho_c) /
                   (2.0 * (gi.gamma - 1.0) * B0 * rho_c * rho_c));
}

double find_sonic_radius(const BackgroundFlow& bg) {
  const auto& r = bg.r_grid;
  std::size_t n = r.size();
  auto g = [&](double rr) { return bg.Msq(rr) - 1.0; };
  // locate the grid cell with a sign change (|M|^2 is decreasing in r)
  std::size_t cell = n;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    double a = bg.M1_sq[i] + bg.M2_sq[i] - 1.0;
    double b = bg.M1_sq[i + 1] + bg.M2_sq[i + 1] - 1.0;
    if (a == 0.0) return r[i];
    if (a * b < 0.0) { cell = i; break; }
  }
  if (cell == n) throw NoSonicPoint("find_sonic_radius: |M|^2 - 1 does not change sign");
  double lo = r[cell], hi = r[cell + 1];
  for (int it = 0; it < 200 && (hi - lo) > 1e-10 * lo; ++it) {
    double mid = 0.5 * (lo + hi);
    if (g(lo) * g(mid) <= 0.0) hi = mid;
    else lo = mid;
  }
  return 0.5 * (lo + hi);
}

CriticalStep critical_step(const BackgroundFlow& bg) {
  const auto& r = bg.r_grid;
  auto sstar = [&](double rr) {
    double P = bg.M1sq(rr), M = bg.Msq(rr);
    return 2.0 * M_PI * rr * std::sqrt((1.0 - P) / (M - 1.0));
  };
  // grid scan over strictly supersonic nodes
  double best = 0.0, bestr = 0.0;
  bool found = false;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (bg.M1_sq[i] + bg.M2_sq[i] <= 1.0 + 1e-12) continue;
    double v = sstar(r[i]);
    if (!found || v < best) { best = v; bestr = r[i]; found = true; }
  }
  if (!found) throw NoSupersonicRegion("critical_step: flow is subsonic everywhere");
  // golden-section refinement on the bracketing cells (clipped to supersonic r)
  double h = bg.h();
  double lo = std::max(r.front(), bestr - h);
  double hi = std::min(r.back(), bestr + h);
  if (bg.Msq(hi) <= 1.0 + 1e-9) hi = bestr;  // stay clear of the sonic blow-up
  if (bg.Msq(lo) <= 1.0 + 1e-9) lo = bestr;
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = sstar(x1), f2 = sstar(x2);
  while (b - a > 1e-10) {
    if (f1 < f2) { b = x2; x2 = x1; f2 = f1; x1 = b - gr * (b - a); f1 = sstar(x1); }
    else { a = x1; x1 = x2; f1 = f2; x2 = a + gr * (b - a); f2 = sstar(x2); }
  }
  double xm = 0.5 * (a + b), fm = sstar(xm);
  if (fm < best) { best = fm; bestr = xm; }
  return {best, bestr};
}

CoefficientTable coefficient_table(const BackgroundFlow& bg, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("coefficient_table: sigma > 0 required");
  const auto& r = bg.r_grid;
  std::size_t n = r.size();
  const GasInflow& gi = bg.inflow;
  double gam = gi.gamma, k2c = bg.kappa2;

  CoefficientTable ct;
  ct.sigma = sigma;
  ct.r_grid = r;
  ct.A11.resize(n); ct.A13.resize(n); ct.A33.resize(n);
  ct.e1.resize(n); ct.e3.resize(n);
  ct.f.resize(n); ct.f_prime.resize(n);
  ct.k1.resize(n); ct.k2.resize(n); ct.k22.resize(n);

  auto fprime = [&](double rr) {
    double c2 = bg.c2(rr), u1 = bg.U1(rr);
    double A11 = c2 - u1 * u1;
    double A13 = -sigma * k2c * u1 / (2.0 * M_PI * rr * rr);
    return -A13 / A11;
  };

  for (std::size_t i = 0; i < n; ++i) {
    double rr = r[i];
    double c2 = bg.c2_bar[i], u1 = bg.U1_bar[i];
    double u1p = bg.U1_prime(rr);
    double s2pi = sigma / (2.0 * M_PI * rr * rr);
    ct.A11[i] = c2 - u1 * u1;
    ct.A13[i] = -s2pi * k2c * u1;
    double aa = 1.0 + sigma * sigma / (4.0 * M_PI * M_PI * rr * rr);
    ct.A33[i] = aa * c2 - sigma * sigma * k2c * k2c / (4.0 * M_PI * M_PI * rr * rr * rr * rr);
    ct.e1[i] = c2 / rr - (gam + 1.0) * u1 * u1p - (gam - 1.0) * u1 * u1 / rr;
    ct.e3[i] = -(gam - 1.0) * s2pi * k2c * (u1 / rr + u1p);
    ct.f_prime[i] = -ct.A13[i] / ct.A11[i];
    ct.k1[i] = ct.e1[i] / ct.A11[i];
  }

  // f(r): cumulative Simpson of f' (midpoints from the background splines)
  ct.f[0] = 0.0;
  double h = bg.h();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    double fm = fprime(r[i] + 0.5 * h);
    ct.f[i + 1] = ct.f[i] + h / 6.0 * (ct.f_prime[i] + 4.0 * fm + ct.f_prime[i + 1]);
  }

  for (std::size_t i = 0; i < n; ++i) {
    double rr = r[i];
    double P = bg.M1_sq[i], Q = bg.M2_sq[i];
    // f'' via the logarithmic derivative of f' = (sigma/2pi) M1 M2 / ((1-M1^2) r);
    // every ratio below is regular even when U1 == 0.
    double den = rr * (1.0 - P);
    double dlog_u1 = -(1.0 + Q) / den;                       // U1'/U1
    double dlog_c2 = (gam - 1.0) * (P + Q) / den;            // (c^2)'/c^2
    double dPdr = P * (2.0 * dlog_u1 - dlog_c2);             // (M1^2)'
    double fpp = ct.f_prime[i] *
                 (dlog_u1 - 2.0 / rr - dlog_c2 + dPdr / (1.0 - P));
    ct.k2[i] = fpp + (ct.e1[i] * ct.f_prime[i] + ct.e3[i]) / ct.A11[i];
    ct.k22[i] = (ct.A33[i] + 2.0 * ct.A13[i] * ct.f_prime[i]) / ct.A11[i] +
                ct.f_prime[i] * ct.f_prime[i];
  }

  try {
    CriticalStep cs = critical_step(bg);
    ct.sigma_star = cs.sigma_star;
    ct.sigma_star_argmin = cs.argmin_radius;
  } catch (const NoSupersonicRegion&) {
    ct.sigma_star = 0.0;  // subsonic profile: no ellipticity threshold
    ct.sigma_star_argmin = 0.0;
  }

  ct.f_spline = CubicSpline<double>(r.front(), h, ct.f);
  ct.fp_spline = CubicSpline<double>(r.front(), h, ct.f_prime);
  return ct;
}

void write_background_csv(const std::string& path, const BackgroundFlow& bg,
                          const CoefficientTable& ct) {
  std::FILE* fp = std::fopen(path.c_str(), "w");
  if (!fp) throw std::runtime_error("cannot open " + path);
  std::fprintf(fp, "r,rho,U1,U2,c2,M1sq,M2sq,A11,A13,A33,e1,e3,f,k1,k2,k22\n");
  for (std::size_t i = 0; i < bg.r_grid.size(); ++i) {
    std::fprintf(fp,
                 "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,"
                 "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                 bg.r_grid[i], bg.rho_bar[i], bg.U1_bar[i], bg.U2_bar[i], bg.c2_bar[i],
                 bg.M1_sq[i], bg.M2_sq[i], ct.A11[i], ct.A13[i], ct.A33[i], ct.e1[i],
                 ct.e3[i], ct.f[i], ct.k1[i], ct.k2[i], ct.k22[i]);
  }
  std::fclose(fp);
}

}  // namespace heliflow
