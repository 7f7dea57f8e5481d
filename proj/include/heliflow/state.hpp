#pragma once
#include <string>

#include "heliflow/grid.hpp"

namespace heliflow {

// The five unknown perturbation fields on a shared grid.
struct PerturbationState {
  Field2D W1, W2, W3, W4, W5;

  PerturbationState() = default;
  explicit PerturbationState(const AnnulusGrid& g)
      : W1(g), W2(g), W3(g), W4(g), W5(g) {}

  const AnnulusGrid& grid() const { return W1.grid; }
};

// Reconstructed physical flow.
struct FlowField {
  Field2D V1, V2, V3, rho, p, A, B, mach;
  double sigma = 0;
};

void write_solution_csv(const std::string& path, const FlowField& flow);

}  // namespace heliflow
