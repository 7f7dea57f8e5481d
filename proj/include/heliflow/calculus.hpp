#pragma once
#include <utility>

#include "heliflow/grid.hpp"

namespace heliflow {

// Spectral d/deta per radial row (period sigma); exact below Nyquist.
Field2D d_eta(const Field2D& f);

// Spectral second derivative in eta.
Field2D d_eta2(const Field2D& f);

// 2nd-order FD d/dr: centered interior, one-sided 3-point at r0 and r1.
Field2D d_r(const Field2D& f);

// 2nd-order FD d2/dr2: centered interior, one-sided 4-point at the ends.
Field2D d_r2(const Field2D& f);

// (max|f|, max|f| + max|d_r f| + max|d_eta f|)
std::pair<double, double> c_norms(const Field2D& f);

double max_abs(const Field2D& f);

}  // namespace heliflow
