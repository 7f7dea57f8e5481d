#include "heliflow/calculus.hpp"

#include <cmath>
#include <cstdlib>

#include "heliflow/fft.hpp"

namespace heliflow {

namespace {

// signed wavenumber index for bin k of an n-point transform
inline long mode_index(std::size_t k, std::size_t n) {
  return (k <= n / 2) ? long(k) : long(k) - long(n);
}

Field2D spectral_eta_multiply(const Field2D& f, bool second) {
  const std::size_t Nr = f.grid.N_r, Ne = f.grid.N_eta;
  const double w0 = 2.0 * M_PI / f.grid.sigma;
  Field2D out(f.grid);
  std::vector<cplx> a(Ne);
  for (std::size_t i = 0; i < Nr; ++i) {
    for (std::size_t j = 0; j < Ne; ++j) a[j] = f.at(i, j);
    fft(a, false);
    for (std::size_t k = 0; k < Ne; ++k) {
      long n = mode_index(k, Ne);
      double w = w0 * double(n);
      if (second) {
        a[k] *= -w * w;
      } else {
        // drop the unpaired Nyquist mode for the first derivative
        if (k == Ne / 2) a[k] = 0.0;
        else a[k] *= cplx(0.0, w);
      }
    }
    fft(a, true);
    for (std::size_t j = 0; j < Ne; ++j) out.at(i, j) = a[j].real();
  }
  return out;
}

}  // namespace

Field2D d_eta(const Field2D& f) { return spectral_eta_multiply(f, false); }
Field2D d_eta2(const Field2D& f) { return spectral_eta_multiply(f, true); }

Field2D d_r(const Field2D& f) {
  const std::size_t Nr = f.grid.N_r, Ne = f.grid.N_eta;
  const double h = f.grid.h_r();
  Field2D out(f.grid);
  for (std::size_t j = 0; j < Ne; ++j) {
    out.at(0, j) = (-3.0 * f.at(0, j) + 4.0 * f.at(1, j) - f.at(2, j)) / (2.0 * h);
    out.at(Nr - 1, j) =
        (3.0 * f.at(Nr - 1, j) - 4.0 * f.at(Nr - 2, j) + f.at(Nr - 3, j)) / (2.0 * h);
  }
  for (std::size_t i = 1; i + 1 < Nr; ++i)
    for (std::size_t j = 0; j < Ne; ++j)
      out.at(i, j) = (f.at(i + 1, j) - f.at(i - 1, j)) / (2.0 * h);
  return out;
}

Field2D d_r2(const Field2D& f) {
  const std::size_t Nr = f.grid.N_r, Ne = f.grid.N_eta;
  const double h2 = f.grid.h_r() * f.grid.h_r();
  Field2D out(f.grid);
  for (std::size_t j = 0; j < Ne; ++j) {
    out.at(0, j) =
        (2.0 * f.at(0, j) - 5.0 * f.at(1, j) + 4.0 * f.at(2, j) - f.at(3, j)) / h2;
    out.at(Nr - 1, j) = (2.0 * f.at(Nr - 1, j) - 5.0 * f.at(Nr - 2, j) +
                         4.0 * f.at(Nr - 3, j) - f.at(Nr - 4, j)) / h2;
  }
  for (std::size_t i = 1; i + 1 < Nr; ++i)
    for (std::size_t j = 0; j < Ne; ++j)
      out.at(i, j) = (f.at(i + 1, j) - 2.0 * f.at(i, j) + f.at(i - 1, j)) / h2;
  return out;
}

double max_abs(const Field2D& f) {
  double m = 0.0;
  for (double v : f.values) m = std::max(m, std::abs(v));
  return m;
}

std::pair<double, double> c_norms(const Field2D& f) {
  double c0 = max_abs(f);
  double c1 = c0 + max_abs(d_r(f)) + max_abs(d_eta(f));
  return {c0, c1};
}

}  // namespace heliflow
