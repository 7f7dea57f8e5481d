#include "heliflow/elliptic.hpp"

#include <cmath>
#include <stdexcept>

#include "heliflow/errors.hpp"
#include "heliflow/fft.hpp"
#include "heliflow/threads.hpp"

namespace heliflow {

namespace {

// Thomas solve, in place; throws on tiny pivots (assembly bug canary).
void thomas(std::vector<cplx>& lo, std::vector<cplx>& di, std::vector<cplx>& up,
            std::vector<cplx>& rhs) {
  const std::size_t n = di.size();
  double scale = 0.0;
  for (const auto& v : di) scale = std::max(scale, std::abs(v));
  for (std::size_t i = 1; i < n; ++i) {
    if (std::abs(di[i - 1]) < 1e-14 * std::max(1.0, scale))
      throw SingularMode("elliptic: tridiagonal pivot underflow");
    cplx w = lo[i] / di[i - 1];
    di[i] -= w * up[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  if (std::abs(di[n - 1]) < 1e-14 * std::max(1.0, scale))
    throw SingularMode("elliptic: tridiagonal pivot underflow");
  rhs[n - 1] /= di[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] = (rhs[i] - up[i] * rhs[i + 1]) / di[i];
}

// row-wise forward FFT, coefficients normalized; returns spectra[mode][radius]
std::vector<std::vector<cplx>> row_spectra(const Field2D& f) {
  const std::size_t Nr = f.grid.N_r, Ne = f.grid.N_eta;
  std::vector<std::vector<cplx>> C(Ne, std::vector<cplx>(Nr));
  std::vector<cplx> a(Ne);
  for (std::size_t i = 0; i < Nr; ++i) {
    for (std::size_t j = 0; j < Ne; ++j) a[j] = f.at(i, j);
    fft(a, false);
    for (std::size_t k = 0; k < Ne; ++k) C[k][i] = a[k] / double(Ne);
  }
  return C;
}

Field2D rows_from_spectra(const AnnulusGrid& g, const std::vector<std::vector<cplx>>& C) {
  Field2D out(g);
  std::vector<cplx> a(g.N_eta);
  for (std::size_t i = 0; i < g.N_r; ++i) {
    for (std::size_t k = 0; k < g.N_eta; ++k) a[k] = C[k][i] * double(g.N_eta);
    fft(a, true);
    for (std::size_t j = 0; j < g.N_eta; ++j) out.at(i, j) = a[j].real();
  }
  return out;
}

bool all_zero(const std::vector<cplx>& v) {
  for (const auto& z : v)
    if (z != cplx(0.0, 0.0)) return false;
  return true;
}

// complex mode coefficients of a boundary Fourier series, sampled on the
// grid's eta nodes (exact: the series is band-limited)
std::vector<cplx> series_modes(const FourierSeries& s, const AnnulusGrid& g,
                               bool antiderivative) {
  std::vector<cplx> a(g.N_eta);
  for (std::size_t j = 0; j < g.N_eta; ++j) {
    double eta = g.eta(j);
    a[j] = antiderivative ? s.eval_antiderivative(eta) : s.eval(eta);
  }
  fft(a, false);
  for (auto& z : a) z /= double(g.N_eta);
  return a;
}

}  // namespace

Field2D solve_poisson(const Field2D& G2) {
  const AnnulusGrid& g = G2.grid;
  const std::size_t Nr = g.N_r, Ne = g.N_eta;
  const double h = g.h_r(), w0 = 2.0 * M_PI / g.sigma;

  auto C = row_spectra(G2);
  std::vector<std::vector<cplx>> sol(Ne, std::vector<cplx>(Nr, cplx(0, 0)));

  parallel_for(Ne / 2 + 1, [&](std::size_t k) {
    if (all_zero(C[k])) return;
    double w = w0 * double((k <= Ne / 2) ? long(k) : long(k) - long(Ne));
    std::vector<cplx> lo(Nr), di(Nr), up(Nr), rhs(Nr);
    // Dirichlet at r0
    di[0] = 1.0; up[0] = 0.0; rhs[0] = 0.0;
    for (std::size_t i = 1; i + 1 < Nr; ++i) {
      lo[i] = 1.0 / (h * h);
      di[i] = -2.0 / (h * h) - w * w;
      up[i] = 1.0 / (h * h);
      rhs[i] = C[k][i];
    }
    // Neumann at r1 via one-sided stencil, phi_{N-3} eliminated through the
    // interior row at N-2: 2 phi_{N-1} + (h^2 w^2 - 2) phi_{N-2} = -h^2 G_{N-2}
    lo[Nr - 1] = (h * h * w * w - 2.0);
    di[Nr - 1] = 2.0;
    rhs[Nr - 1] = -h * h * C[k][Nr - 2];
    thomas(lo, di, up, rhs);
    sol[k] = rhs;
    if (k > 0 && k < Ne / 2) {  // conjugate-symmetric partner
      for (std::size_t i = 0; i < Nr; ++i) sol[Ne - k][i] = std::conj(rhs[i]);
    }
  });
  return rows_from_spectra(g, sol);
}

PotentialSolution solve_potential(const Field2D& G3, const CoefficientTable& ct,
                                  const HelicalBC& bc) {
  const AnnulusGrid& g = G3.grid;
  const std::size_t Nr = g.N_r, Ne = g.N_eta;
  const double h = g.h_r(), w0 = 2.0 * M_PI / g.sigma;

  if (ct.r_grid.size() != Nr || std::abs(ct.r_grid.front() - g.r0) > 1e-12 ||
      std::abs(ct.r_grid.back() - g.r1) > 1e-12)
    throw std::invalid_argument("solve_potential: coefficient table grid mismatch");
  for (double v : ct.k22)
    if (v <= 0.0) throw NotElliptic("solve_potential: k22 <= 0 on the grid (sigma >= sigma*?)");
  if (std::abs(bc.q3.mean()) > 1e-12)
    throw ZeroMeanViolation("solve_potential: q3 must have zero eta-mean");

  // right side in sheared coordinates: modes shifted by exp(-i w n f(r))
  auto C = row_spectra(G3);
  for (std::size_t k = 0; k <= Ne / 2; ++k) {
    double w = w0 * double(k);
    for (std::size_t i = 0; i < Nr; ++i) {
      double ph = -w * ct.f[i];
      C[k][i] = C[k][i] / ct.A11[i] * cplx(std::cos(ph), std::sin(ph));
    }
  }

  auto q1m = series_modes(bc.q1, g, false);
  // Dirichlet datum at r1: eps * int_0^{y2 - f(r1)} q3; build it as a function
  // of y2 by phase-shifting the antiderivative's modes by f(r1) and adjusting
  // the constant term.
  auto q3im = series_modes(bc.q3, g, true);
  double fr1 = ct.f[Nr - 1];
  for (std::size_t k = 0; k <= Ne / 2; ++k) {
    double w = w0 * double(k);
    double ph = -w * fr1;
    q3im[k] *= cplx(std::cos(ph), std::sin(ph));
  }
  // constant shift: Q(y2) = F(y2 - f(r1)) where F is the antiderivative;
  // the mode-0 coefficient of y2 -> F(y2 - fr1) is mean(F) (unchanged by shift),
  // already handled above (ph = 0 for k = 0).

  std::vector<std::vector<cplx>> sol(Ne, std::vector<cplx>(Nr, cplx(0, 0)));
  double fpr0 = ct.f_prime[0];

  parallel_for(Ne / 2 + 1, [&](std::size_t k) {
    double w = w0 * double(k);
    cplx qrob = (k < q1m.size()) ? bc.eps * q1m[k] : cplx(0, 0);
    cplx qdir = (k < q3im.size()) ? bc.eps * q3im[k] : cplx(0, 0);
    if (all_zero(C[k]) && qrob == cplx(0, 0) && qdir == cplx(0, 0)) return;
    if (k == Ne / 2 && Ne > 2) {
      // unpaired Nyquist mode carries no smooth content; skip
      return;
    }
    std::vector<cplx> lo(Nr), di(Nr), up(Nr), rhs(Nr);
    for (std::size_t i = 1; i + 1 < Nr; ++i) {
      cplx beta = cplx(-ct.k22[i] * w * w, ct.k2[i] * w);
      lo[i] = 1.0 / (h * h) - ct.k1[i] / (2.0 * h);
      di[i] = -2.0 / (h * h) + beta;
      up[i] = 1.0 / (h * h) + ct.k1[i] / (2.0 * h);
      rhs[i] = C[k][i];
    }
    // Robin row at r0: (-3 p0 + 4 p1 - p2)/(2h) + i w f'(r0) p0 = qrob,
    // with p2 eliminated through the interior row at i = 1.
    {
      cplx beta1 = cplx(-ct.k22[1] * w * w, ct.k2[1] * w);
      cplx A = 1.0 / (h * h) - ct.k1[1] / (2.0 * h);
      cplx Cc = 1.0 / (h * h) + ct.k1[1] / (2.0 * h);
      cplx Bm = -2.0 / (h * h) + beta1;
      // p2 = (g1 - A p0 - Bm p1)/Cc
      di[0] = cplx(-3.0, 0.0) + A / Cc + cplx(0.0, 2.0 * h * w * fpr0);
      up[0] = cplx(4.0, 0.0) + Bm / Cc;
      rhs[0] = 2.0 * h * qrob + C[k][1] / Cc;
    }
    // Dirichlet at r1
    lo[Nr - 1] = 0.0;
    di[Nr - 1] = 1.0;
    rhs[Nr - 1] = qdir;
    thomas(lo, di, up, rhs);
    sol[k] = rhs;
    if (k > 0 && k < Ne / 2) {
      for (std::size_t i = 0; i < Nr; ++i) sol[Ne - k][i] = std::conj(rhs[i]);
    }
  });

  PotentialSolution out;
  out.phi_hat = rows_from_spectra(g, sol);

  // d_y1 phi_hat by 2nd-order FD on the mode coefficients, d_y2 spectrally
  std::vector<std::vector<cplx>> dy1(Ne, std::vector<cplx>(Nr, cplx(0, 0)));
  std::vector<std::vector<cplx>> dy2(Ne, std::vector<cplx>(Nr, cplx(0, 0)));
  for (std::size_t k = 0; k < Ne; ++k) {
    double w = w0 * double((k <= Ne / 2) ? long(k) : long(k) - long(Ne));
    dy1[k][0] = (-3.0 * sol[k][0] + 4.0 * sol[k][1] - sol[k][2]) / (2.0 * h);
    dy1[k][Nr - 1] =
        (3.0 * sol[k][Nr - 1] - 4.0 * sol[k][Nr - 2] + sol[k][Nr - 3]) / (2.0 * h);
    for (std::size_t i = 1; i + 1 < Nr; ++i)
      dy1[k][i] = (sol[k][i + 1] - sol[k][i - 1]) / (2.0 * h);
    for (std::size_t i = 0; i < Nr; ++i) dy2[k][i] = cplx(0.0, w) * sol[k][i];
  }

  // map back to (r, eta): every mode picks up the phase exp(+i w n f(r))
  auto shift_back = [&](const std::vector<std::vector<cplx>>& M) {
    std::vector<std::vector<cplx>> S(Ne, std::vector<cplx>(Nr));
    for (std::size_t k = 0; k < Ne; ++k) {
      double w = w0 * double((k <= Ne / 2) ? long(k) : long(k) - long(Ne));
      for (std::size_t i = 0; i < Nr; ++i) {
        double ph = w * ct.f[i];
        S[k][i] = M[k][i] * cplx(std::cos(ph), std::sin(ph));
      }
    }
    return S;
  };
  out.phi = rows_from_spectra(g, shift_back(sol));
  out.dphi_deta = rows_from_spectra(g, shift_back(dy2));
  // chain rule: d_r phi = d_y1 phi_hat + f' d_y2 phi_hat (then shift back)
  std::vector<std::vector<cplx>> dr(Ne, std::vector<cplx>(Nr));
  for (std::size_t k = 0; k < Ne; ++k)
    for (std::size_t i = 0; i < Nr; ++i)
      dr[k][i] = dy1[k][i] + ct.f_prime[i] * dy2[k][i];
  out.dphi_dr = rows_from_spectra(g, shift_back(dr));
  return out;
}

}  // namespace heliflow
