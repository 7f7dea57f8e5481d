#pragma once
#include <complex>
#include <vector>

namespace heliflow {

using cplx = std::complex<double>;

// In-place radix-2 Cooley-Tukey. n must be a power of two.
void fft(std::vector<cplx>& a, bool inverse);

// Forward DFT of real samples; returns full complex spectrum (length n),
// unnormalized: X[k] = sum_j x[j] exp(-2*pi*i*j*k/n).
std::vector<cplx> fft_forward_real(const std::vector<double>& x);

// Inverse of fft_forward_real (takes the full spectrum, returns real parts).
std::vector<double> fft_inverse_to_real(std::vector<cplx> spec);

bool is_power_of_two(std::size_t n);

}  // namespace heliflow
