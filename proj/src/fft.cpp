#include "heliflow/fft.hpp"

#include <cassert>
#include <cmath>

namespace heliflow {

bool is_power_of_two(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

void fft(std::vector<cplx>& a, bool inverse) {
  const std::size_t n = a.size();
  assert(is_power_of_two(n));
  // bit-reversal permutation
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    double ang = 2.0 * M_PI / double(len) * (inverse ? 1.0 : -1.0);
    cplx wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      cplx w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        cplx u = a[i + k];
        cplx v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
  if (inverse) {
    for (auto& z : a) z /= double(n);
  }
}

std::vector<cplx> fft_forward_real(const std::vector<double>& x) {
  std::vector<cplx> a(x.begin(), x.end());
  fft(a, false);
  return a;
}

std::vector<double> fft_inverse_to_real(std::vector<cplx> spec) {
  fft(spec, true);
  std::vector<double> out(spec.size());
  for (std::size_t i = 0; i < spec.size(); ++i) out[i] = spec[i].real();
  return out;
}

}  // namespace heliflow
