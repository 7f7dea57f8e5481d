#pragma once
#include <cstddef>
#include <vector>

namespace heliflow {

// Uniform tensor grid on [r0,r1] x T_sigma. The eta direction is periodic
// with no duplicated seam column; index arithmetic wraps mod N_eta.
struct AnnulusGrid {
  double r0 = 0, r1 = 0;
  std::size_t N_r = 0;
  double sigma = 0;
  std::size_t N_eta = 0;

  AnnulusGrid() = default;
  AnnulusGrid(double r0_, double r1_, std::size_t Nr, double sigma_, std::size_t Neta);

  double h_r() const { return (r1 - r0) / double(N_r - 1); }
  double h_eta() const { return sigma / double(N_eta); }
  double r(std::size_t i) const { return r0 + double(i) * h_r(); }
  double eta(std::size_t j) const { return double(j) * h_eta(); }
};

// Row-major N_r x N_eta array of samples; row i = radius node.
struct Field2D {
  AnnulusGrid grid;
  std::vector<double> values;  // size N_r*N_eta

  Field2D() = default;
  explicit Field2D(const AnnulusGrid& g) : grid(g), values(g.N_r * g.N_eta, 0.0) {}

  double& at(std::size_t i, std::size_t j) { return values[i * grid.N_eta + j]; }
  double at(std::size_t i, std::size_t j) const { return values[i * grid.N_eta + j]; }
  const double* row(std::size_t i) const { return values.data() + i * grid.N_eta; }
  double* row(std::size_t i) { return values.data() + i * grid.N_eta; }

  Field2D& operator+=(const Field2D& o);
  Field2D& operator-=(const Field2D& o);
  Field2D& operator*=(double s);
};

Field2D operator+(Field2D a, const Field2D& b);
Field2D operator-(Field2D a, const Field2D& b);
Field2D operator*(double s, Field2D a);

}  // namespace heliflow
