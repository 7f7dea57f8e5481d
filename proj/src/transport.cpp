#include "heliflow/transport.hpp"

#include <cmath>

#include "heliflow/errors.hpp"
#include "heliflow/threads.hpp"

namespace heliflow {

Interp2D::Interp2D(const Field2D& f, double prune_rel) {
  const std::size_t Nr = f.grid.N_r, Ne = f.grid.N_eta;
  omega_ = 2.0 * M_PI / f.grid.sigma;
  // per-row spectra, normalized so C_n are Fourier coefficients
  std::vector<std::vector<cplx>> C(Ne / 2 + 1, std::vector<cplx>(Nr));
  std::vector<cplx> a(Ne);
  std::vector<double> amp(Ne / 2 + 1, 0.0);
  for (std::size_t i = 0; i < Nr; ++i) {
    for (std::size_t j = 0; j < Ne; ++j) a[j] = f.at(i, j);
    fft(a, false);
    for (std::size_t n = 0; n <= Ne / 2; ++n) {
      C[n][i] = a[n] / double(Ne);
      amp[n] = std::max(amp[n], std::abs(C[n][i]));
    }
  }
  double amax = 0.0;
  for (double v : amp) amax = std::max(amax, v);
  double cutoff = prune_rel * amax;
  for (std::size_t n = 0; n <= Ne / 2; ++n) {
    if (amp[n] <= cutoff && n > 0) continue;  // always keep the mean
    mode_.push_back(long(n));
    weight_.push_back((n == 0 || n == Ne / 2) ? 1.0 : 2.0);
    coef_.emplace_back(f.grid.r0, f.grid.h_r(), C[n]);
  }
}

Interp2D::Slice Interp2D::slice(double r) const {
  Slice s;
  s.owner = this;
  s.c.resize(coef_.size());
  for (std::size_t k = 0; k < coef_.size(); ++k) s.c[k] = coef_[k].eval(r);
  return s;
}

double Interp2D::Slice::eval(double eta) const {
  // incremental powers of exp(i w eta): one transcendental pair per call
  double ph = owner->omega_ * eta;
  cplx base(std::cos(ph), std::sin(ph)), cur(1.0, 0.0);
  long curn = 0;
  double v = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) {
    long n = owner->mode_[k];
    for (; curn < n; ++curn) cur *= base;
    v += owner->weight_[k] * (c[k] * cur).real();
  }
  return v;
}

double Interp2D::eval(double r, double eta) const { return slice(r).eval(eta); }

CharacteristicSlope::CharacteristicSlope(const PerturbationState& Wbar,
                                         const BackgroundFlow& bg, double sigma) {
  const AnnulusGrid& g = Wbar.grid();
  Field2D S(g);
  for (std::size_t i = 0; i < g.N_r; ++i) {
    double r = g.r(i);
    double a = 1.0 + sigma * sigma / (4.0 * M_PI * M_PI * r * r);
    double s2 = sigma / (2.0 * M_PI * r * r);
    double u1 = bg.U1_bar.size() == g.N_r ? bg.U1_bar[i] : bg.U1(r);
    for (std::size_t j = 0; j < g.N_eta; ++j) {
      double den = Wbar.W1.at(i, j) + u1;
      if (std::abs(den) < 1e-8)
        throw DegenerateRadialVelocity("transport: |U1 + W1| below floor at r = " +
                                       std::to_string(r));
      S.at(i, j) = (s2 * (Wbar.W2.at(i, j) + bg.kappa2) + a * Wbar.W3.at(i, j)) / den;
    }
  }
  S_ = Interp2D(S);
}

double trace_characteristic(const CharacteristicSlope& slope, const AnnulusGrid& grid,
                            double r, double eta) {
  if (r >= grid.r1) return eta;
  double span = grid.r1 - r;
  double hmax = grid.h_r() / 4.0;
  std::size_t n = std::size_t(std::ceil(span / hmax));
  double h = span / double(n);
  double tau = r, y = eta;
  for (std::size_t s = 0; s < n; ++s) {
    double k1 = slope(tau, y);
    double k2 = slope(tau + 0.5 * h, y + 0.5 * h * k1);
    double k3 = slope(tau + 0.5 * h, y + 0.5 * h * k2);
    double k4 = slope(tau + h, y + h * k3);
    y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    tau += h;
  }
  return y;
}

double trace_characteristic(const PerturbationState& Wbar, const BackgroundFlow& bg,
                            double sigma, double r, double eta) {
  CharacteristicSlope slope(Wbar, bg, sigma);
  return trace_characteristic(slope, Wbar.grid(), r, eta);
}

TransportFields solve_transport(const PerturbationState& Wbar, const HelicalBC& bc,
                                const BackgroundFlow& bg) {
  const AnnulusGrid& g = Wbar.grid();
  TransportFields out{Field2D(g), Field2D(g), Field2D(g)};
  if (bc.eps == 0.0) return out;
  CharacteristicSlope slope(Wbar, bg, bc.sigma);
  const Interp2D& S = slope.field();
  parallel_for(g.N_r, [&](std::size_t i) {
    const std::size_t Ne = g.N_eta;
    double r = g.r(i);
    std::vector<double> y(Ne);
    for (std::size_t j = 0; j < Ne; ++j) y[j] = g.eta(j);
    if (r < g.r1) {
      // all nodes of the row share the same tau ladder; freeze the radial
      // spline coefficients once per RK4 stage instead of once per node
      double span = g.r1 - r;
      std::size_t n = std::size_t(std::ceil(span / (g.h_r() / 4.0)));
      double h = span / double(n);
      double tau = r;
      for (std::size_t st = 0; st < n; ++st) {
        Interp2D::Slice s0 = S.slice(tau);
        Interp2D::Slice sh = S.slice(tau + 0.5 * h);
        Interp2D::Slice s1 = S.slice(tau + h);
        for (std::size_t j = 0; j < Ne; ++j) {
          double k1 = s0.eval(y[j]);
          double k2 = sh.eval(y[j] + 0.5 * h * k1);
          double k3 = sh.eval(y[j] + 0.5 * h * k2);
          double k4 = s1.eval(y[j] + h * k3);
          y[j] += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        tau += h;
      }
    }
    for (std::size_t j = 0; j < Ne; ++j) {
      out.W2.at(i, j) = bc.eps * bc.q_c.eval(y[j]);
      out.W4.at(i, j) = bc.eps * bc.A_tilde.eval(y[j]);
      out.W5.at(i, j) = bc.eps * bc.B_tilde.eval(y[j]);
    }
  });
  return out;
}

}  // namespace heliflow
