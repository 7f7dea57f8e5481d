#include "heliflow/grid.hpp"

#include <stdexcept>

#include "heliflow/fft.hpp"

namespace heliflow {

AnnulusGrid::AnnulusGrid(double r0_, double r1_, std::size_t Nr, double sigma_,
                         std::size_t Neta)
    : r0(r0_), r1(r1_), N_r(Nr), sigma(sigma_), N_eta(Neta) {
  if (!(r0 < r1)) throw std::invalid_argument("AnnulusGrid: need r0 < r1");
  if (N_r < 16) throw std::invalid_argument("AnnulusGrid: N_r >= 16 required");
  if (N_eta < 8 || !is_power_of_two(N_eta))
    throw std::invalid_argument("AnnulusGrid: N_eta must be a power of two >= 8");
  if (!(sigma > 0)) throw std::invalid_argument("AnnulusGrid: sigma > 0 required");
}

Field2D& Field2D::operator+=(const Field2D& o) {
  for (std::size_t k = 0; k < values.size(); ++k) values[k] += o.values[k];
  return *this;
}
Field2D& Field2D::operator-=(const Field2D& o) {
  for (std::size_t k = 0; k < values.size(); ++k) values[k] -= o.values[k];
  return *this;
}
Field2D& Field2D::operator*=(double s) {
  for (auto& v : values) v *= s;
  return *this;
}

Field2D operator+(Field2D a, const Field2D& b) { a += b; return a; }
Field2D operator-(Field2D a, const Field2D& b) { a -= b; return a; }
Field2D operator*(double s, Field2D a) { a *= s; return a; }

}  // namespace heliflow
