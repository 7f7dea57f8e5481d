#pragma once
#include <stdexcept>
#include <string>

namespace heliflow {

// One exception type per failure mode named in the module contracts, so
// callers (and tests) can catch precisely.
struct SonicRadialVelocity : std::runtime_error {
  explicit SonicRadialVelocity(const std::string& m) : std::runtime_error(m) {}
};
struct VacuumOrInvalid : std::runtime_error {
  explicit VacuumOrInvalid(const std::string& m) : std::runtime_error(m) {}
};
struct VacuumState : std::runtime_error {
  explicit VacuumState(const std::string& m) : std::runtime_error(m) {}
};
struct NoSonicPoint : std::runtime_error {
  explicit NoSonicPoint(const std::string& m) : std::runtime_error(m) {}
};
struct NoSupersonicRegion : std::runtime_error {
  explicit NoSupersonicRegion(const std::string& m) : std::runtime_error(m) {}
};
struct DegenerateRadialVelocity : std::runtime_error {
  explicit DegenerateRadialVelocity(const std::string& m) : std::runtime_error(m) {}
};
struct SingularMode : std::runtime_error {
  explicit SingularMode(const std::string& m) : std::runtime_error(m) {}
};
struct NotElliptic : std::runtime_error {
  explicit NotElliptic(const std::string& m) : std::runtime_error(m) {}
};
struct ZeroMeanViolation : std::runtime_error {
  explicit ZeroMeanViolation(const std::string& m) : std::runtime_error(m) {}
};
struct StepTooLarge : std::runtime_error {
  explicit StepTooLarge(const std::string& m) : std::runtime_error(m) {}
};
struct NoConvergence : std::runtime_error {
  explicit NoConvergence(const std::string& m) : std::runtime_error(m) {}
};

}  // namespace heliflow
