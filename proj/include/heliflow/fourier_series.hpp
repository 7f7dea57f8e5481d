#pragma once
#include <cmath>
#include <cstddef>
#include <vector>

namespace heliflow {

// Finite Fourier series g(eta) = c0 + sum_n (cos_n cos(w n eta) + sin_n sin(w n eta)),
// w = 2*pi/sigma. Boundary data live here: C-infinity periodic by construction.
struct FourierSeries {
  double sigma = 1.0;
  std::vector<double> cosc;  // cosc[0] = mean
  std::vector<double> sinc;  // sinc[0] ignored

  FourierSeries() : cosc(1, 0.0), sinc(1, 0.0) {}
  FourierSeries(double sigma_, std::vector<double> c, std::vector<double> s)
      : sigma(sigma_), cosc(std::move(c)), sinc(std::move(s)) {
    std::size_t n = std::max(cosc.size(), sinc.size());
    cosc.resize(std::max<std::size_t>(n, 1), 0.0);
    sinc.resize(std::max<std::size_t>(n, 1), 0.0);
  }

  double omega() const { return 2.0 * M_PI / sigma; }
  std::size_t n_max() const { return cosc.size() - 1; }
  double mean() const { return cosc[0]; }

  double eval(double eta) const {
    double w = omega(), v = cosc[0];
    for (std::size_t n = 1; n < cosc.size(); ++n)
      v += cosc[n] * std::cos(w * n * eta) + sinc[n] * std::sin(w * n * eta);
    return v;
  }

  double eval_derivative(double eta) const {
    double w = omega(), v = 0.0;
    for (std::size_t n = 1; n < cosc.size(); ++n) {
      double wn = w * double(n);
      v += wn * (-cosc[n] * std::sin(wn * eta) + sinc[n] * std::cos(wn * eta));
    }
    return v;
  }

  // int_0^y g(s) ds, termwise; only meaningful as a periodic function when
  // the mean vanishes (the q3 constraint).
  double eval_antiderivative(double y) const {
    double w = omega();
    double v = cosc[0] * y;
    for (std::size_t n = 1; n < cosc.size(); ++n) {
      double wn = w * double(n);
      v += cosc[n] / wn * std::sin(wn * y) + sinc[n] / wn * (1.0 - std::cos(wn * y));
    }
    return v;
  }
};

}  // namespace heliflow
