#pragma once
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace heliflow {

// Not-a-knot cubic spline on a uniform abscissa grid. Value type T is
// double or std::complex<double> (characteristic tracing splines the
// complex Fourier coefficients of each field against r).
template <typename T>
class CubicSpline {
 public:
  CubicSpline() = default;

  // x uniform ascending, y same length (>= 4 for not-a-knot).
  CubicSpline(double x0, double dx, std::vector<T> y) : x0_(x0), dx_(dx), y_(std::move(y)) {
    const std::size_t n = y_.size();
    if (n < 4) throw std::invalid_argument("CubicSpline: need >= 4 points");
    // Solve for second derivatives m_i with not-a-knot end conditions
    // (third derivative continuous across x1 and x_{n-2}).
    m_.assign(n, T(0));
    solve_not_a_knot(n);
  }

  T eval(double x) const {
    const std::size_t n = y_.size();
    double t = (x - x0_) / dx_;
    long i = static_cast<long>(t);
    if (i < 0) i = 0;
    if (i > long(n) - 2) i = long(n) - 2;
    double s = (x - (x0_ + double(i) * dx_)) / dx_;
    T A = y_[i], B = y_[i + 1];
    T mA = m_[i], mB = m_[i + 1];
    double h2 = dx_ * dx_;
    // standard cubic in terms of node values and second derivatives
    return A * (1.0 - s) + B * s +
           (h2 / 6.0) * (mA * ((1.0 - s) * (1.0 - s) * (1.0 - s) - (1.0 - s)) +
                         mB * (s * s * s - s));
  }

 private:
  void solve_not_a_knot(std::size_t n) {
    // Express m0, m_{n-1} via interior unknowns (m0 = 2 m1 - m2,
    // m_{n-1} = 2 m_{n-2} - m_{n-3}), substitute into rows 1 and n-2,
    // solve the interior tridiagonal (size n-2), back-substitute.
    const std::size_t k = n - 2;  // unknowns m1..m_{n-2}
    std::vector<T> lo(k), di(k), up(k), rhs(k);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      std::size_t j = i - 1;
      lo[j] = T(1); di[j] = T(4); up[j] = T(1);
      rhs[j] = (y_[i - 1] - 2.0 * y_[i] + y_[i + 1]) * (6.0 / (dx_ * dx_));
    }
    // row for i=1 with m0 = 2 m1 - m2: (1)(2m1 - m2) + 4 m1 + m2 = rhs
    di[0] = T(6); up[0] = T(0);
    // row for i=n-2 with m_{n-1} = 2 m_{n-2} - m_{n-3}
    di[k - 1] = T(6); lo[k - 1] = T(0);
    // Thomas
    for (std::size_t j = 1; j < k; ++j) {
      T w = lo[j] / di[j - 1];
      di[j] -= w * up[j - 1];
      rhs[j] -= w * rhs[j - 1];
    }
    std::vector<T> m(k);
    m[k - 1] = rhs[k - 1] / di[k - 1];
    for (std::size_t j = k - 1; j-- > 0;) m[j] = (rhs[j] - up[j] * m[j + 1]) / di[j];
    for (std::size_t j = 0; j < k; ++j) m_[j + 1] = m[j];
    m_[0] = 2.0 * m_[1] - m_[2];
    m_[n - 1] = 2.0 * m_[n - 2] - m_[n - 3];
  }

  double x0_ = 0, dx_ = 1;
  std::vector<T> y_;
  std::vector<T> m_;  // second derivatives at nodes
};

}  // namespace heliflow
