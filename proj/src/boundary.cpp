#include "heliflow/boundary.hpp"

#include <cmath>
#include <stdexcept>

#include "heliflow/errors.hpp"

namespace heliflow {

void HelicalBC::validate() const {
  if (!(sigma > 0.0)) throw std::invalid_argument("helical.sigma must be > 0");
  if (!(eps >= 0.0)) throw std::invalid_argument("helical.eps must be >= 0");
  if (std::abs(q3.mean()) > 1e-12)
    throw ZeroMeanViolation("boundary.q3 must have zero eta-mean");
  for (const FourierSeries* s : {&q_c, &q1, &q3, &A_tilde, &B_tilde})
    if (s->sigma != sigma)
      throw std::invalid_argument("boundary series period must equal helical.sigma");
}

}  // namespace heliflow
