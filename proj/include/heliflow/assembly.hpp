#pragma once
#include "heliflow/background.hpp"
#include "heliflow/grid.hpp"
#include "heliflow/state.hpp"

namespace heliflow {

// Squared sound speed c^2(B, V) at the state's arguments. For the iteration
// the state packs (W1bar, W2, W3bar, W4, W5) -- the mixed argument list.
Field2D sound_speed_sq(const PerturbationState& s, const BackgroundFlow& bg,
                       double sigma);

// Bernoulli-closure density.
Field2D density(const PerturbationState& s, const BackgroundFlow& bg, double sigma);

// Curl source. Arguments as prescribed by the iteration (lagged W1, W3).
Field2D assemble_G2(const PerturbationState& s, const BackgroundFlow& bg, double sigma);

// Divergence-equation source. Assembled so that the frozen-coefficient left
// side minus this G1 is identically the transformed continuity equation in
// full variables (the algebraic-identity oracle in the verification suite
// pins this down).
Field2D assemble_G1(const PerturbationState& s, const BackgroundFlow& bg, double sigma);

// J closure used inside G1.
Field2D assemble_J(const PerturbationState& s, const BackgroundFlow& bg, double sigma);

Field2D assemble_G3(const Field2D& G1, const Field2D& phi1, const CoefficientTable& ct,
                    const BackgroundFlow& bg, double sigma);

FlowField reconstruct_flow(const PerturbationState& W, const BackgroundFlow& bg,
                           double sigma);

}  // namespace heliflow
