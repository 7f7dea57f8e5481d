#pragma once
#include <vector>

#include "heliflow/background.hpp"
#include "heliflow/boundary.hpp"
#include "heliflow/fft.hpp"
#include "heliflow/grid.hpp"
#include "heliflow/spline.hpp"
#include "heliflow/state.hpp"

namespace heliflow {

// Trigonometric-in-eta x cubic-spline-in-r interpolant of a gridded field.
// Rows are FFT'd once; modes below prune_rel * max amplitude are dropped
// (smooth small perturbations carry only a handful of active modes).
class Interp2D {
 public:
  Interp2D() = default;
  explicit Interp2D(const Field2D& f, double prune_rel = 1e-14);
  double eval(double r, double eta) const;

  // Radial slice: mode coefficients frozen at one radius, so a whole row of
  // traces passing through the same tau ladder shares the spline work.
  struct Slice {
    const Interp2D* owner = nullptr;
    std::vector<cplx> c;
    double eval(double eta) const;
  };
  Slice slice(double r) const;

 private:
  double omega_ = 0;
  std::vector<long> mode_;              // retained mode indices, 0..N/2
  std::vector<double> weight_;          // 1 for n=0 and Nyquist, else 2
  std::vector<CubicSpline<cplx>> coef_;
};

// Right side of the characteristic ODE, shared read-only across traces.
class CharacteristicSlope {
 public:
  CharacteristicSlope(const PerturbationState& Wbar, const BackgroundFlow& bg,
                      double sigma);
  double operator()(double tau, double eta) const { return S_.eval(tau, eta); }
  const Interp2D& field() const { return S_; }

 private:
  Interp2D S_;
};

// Backward RK4 trace from (r, eta) to the outer boundary; step <= h_r/4.
// Returns the unwrapped exit ordinate eta_bar(r1; r, eta).
double trace_characteristic(const CharacteristicSlope& slope, const AnnulusGrid& grid,
                            double r, double eta);

// Convenience overload matching the operation contract.
double trace_characteristic(const PerturbationState& Wbar, const BackgroundFlow& bg,
                            double sigma, double r, double eta);

struct TransportFields {
  Field2D W2, W4, W5;
};

// Evaluate the boundary series at the characteristic exit ordinate.
TransportFields solve_transport(const PerturbationState& Wbar, const HelicalBC& bc,
                                const BackgroundFlow& bg);

}  // namespace heliflow
