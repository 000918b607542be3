#pragma once

#include "hydride/ledger.hpp"
#include "hydride/material.hpp"
#include "hydride/mesh.hpp"
#include "hydride/state.hpp"

#include <vector>

namespace hydride {

struct StepDiagnostics {
    int mech_iterations = 0;
    double mech_residual = 0.0;
    int chi_iterations = 0;
    double chi_residual = 0.0;
    int w_iterations = 0;
    double w_update = 0.0;
};

/// States at t = k tau, k = 0..N, with the per-step ledger rows.
struct Trajectory {
    Mesh mesh;
    MaterialModel material;
    double tau = 0.0;
    std::vector<State> states;
    std::vector<LedgerRow> ledger;
    std::vector<StepDiagnostics> diagnostics;  // one per step, index k-1

    int steps() const { return static_cast<int>(states.size()) - 1; }
    double horizon() const { return tau * steps(); }
};

enum class InterpolantKind { affine, backward, forward, velocity_affine };

/// Time interpolants of a nodal field:
///   affine    piecewise affine through the states,
///   backward  value of state k on ((k-1) tau, k tau],
///   forward   value of state k-1 on [(k-1) tau, k tau),
///   velocity_affine  piecewise affine through the velocities (u only).
Vector interpolant_eval(const Trajectory& traj, Field field, InterpolantKind kind, double t);

/// Discrete time derivative (f^k - f^{k-1}) / tau, the derivative of the
/// affine interpolant on the k-th interval.
Vector rate(const Trajectory& traj, Field field, int k);

}  // namespace hydride
