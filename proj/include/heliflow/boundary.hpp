#pragma once
#include "heliflow/fourier_series.hpp"

namespace heliflow {

// Boundary data of the perturbation problem: eps * (Fourier series) on the
// two cylinder surfaces. q3 must have zero eta-mean (potential Dirichlet
// datum must be periodic).
struct HelicalBC {
  double sigma = 0;
  double eps = 0;
  FourierSeries q_c;  // swirl invariant datum at r1
  FourierSeries q1;   // radial velocity datum at r0
  FourierSeries q3;   // axial velocity datum at r1 (zero mean)
  FourierSeries A_tilde;
  FourierSeries B_tilde;

  void validate() const;  // throws ZeroMeanViolation / invalid_argument
};

}  // namespace heliflow
