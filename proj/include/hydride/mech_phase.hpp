#pragma once

#include "hydride/material.hpp"
#include "hydride/mesh.hpp"

#include <cmath>

namespace hydride {

/// Exact minimiser of  a/2 (v - b)^2 + kappa |v - p| + indicator_[lo, hi](v).
///
/// Ties at the edge of the stick band resolve to v = p.
template <typename Scalar>
Scalar phase_nodal_prox(Scalar a_quad, Scalar b, Scalar p, Scalar kappa, Scalar lo, Scalar hi)
{
    const Scalar band = kappa / a_quad;
    Scalar v;
    if (b - p > band) v = b - band;
    else if (p - b > band) v = b + band;
    else v = p;
    // The objective is convex in v, so clipping the unconstrained minimiser is exact.
    if (v < lo) v = lo;
    if (v > hi) v = hi;
    return v;
}

/// Largest step for which the incremental functional stays convex in m:
/// alpha^2 / |inf d2phi1/dm2|^2 when the infimum is negative, +inf otherwise.
double stability_limit(const MaterialModel& mat, double chi_max);

/// min(T, stability_limit).
double tau_max(const MaterialModel& mat, double horizon, double chi_max);

/// Data of one displacement/phase increment. Fields are nodal; `u_*` and
/// `load` are dim-interleaved.
struct MechPhaseProblem {
    const Mesh& mesh;
    const MaterialModel& mat;
    Vector u_prev;   // u^{k-1}
    Vector u_prev2;  // u^{k-2}
    Vector m_prev;
    Vector chi_prev;
    Vector w_prev;
    double tau = 0.0;
    Vector load;  // discrete load functional (body force and traction) at t^k
};

struct MechPhaseOptions {
    double cg_tol = 1e-12;
    double opt_tol = 1e-10;
    int opt_max = 200;
    int prox_max = 5000;
    double chi_max = 3.0;
};

struct MechPhaseSolution {
    Vector u;
    Vector m;
    Vector xi;          // normal-cone multiplier density
    Vector activation;  // recovered element of r d|m - m_prev| (density)
    double residual = 0.0;
    int iterations = 0;
    double objective_before = 0.0;
    double objective_after = 0.0;
};

/// Holds the step-independent operators for a fixed mesh, material and tau.
class MechPhaseSolver {
public:
    MechPhaseSolver(const Mesh& mesh, const MaterialModel& mat, double tau, MechPhaseOptions options = {});

    MechPhaseSolution solve(const MechPhaseProblem& problem) const;

    /// The incremental functional at (u, m), including the activation and
    /// box terms; +inf outside the box.
    double objective(const MechPhaseProblem& problem, const Vector& u, const Vector& m) const;

    const Vector& lumped() const { return lumped_; }
    const SparseMatrix& laplacian() const { return laplacian_; }

private:
    struct Frozen;
    Frozen freeze(const MechPhaseProblem& problem) const;
    double evaluate(const Frozen& fr, const Vector& u, const Vector& m) const;
    Vector u_rhs(const Frozen& fr, const Vector& m) const;
    Vector smooth_gradient(const Frozen& fr, const Vector& u, const Vector& m) const;
    Vector prox_step(const Frozen& fr, const Vector& y, const Vector& grad, double step) const;
    double prox_residual(const Frozen& fr, const Vector& u, const Vector& m) const;
    void minimise_phase(const Frozen& fr, const Vector& u, Vector& m) const;

    const Mesh& mesh_;
    const MaterialModel& mat_;
    double tau_;
    MechPhaseOptions options_;
    Vector lumped_;
    SparseMatrix laplacian_;
    SparseMatrix elastic_;
    SparseMatrix viscous_;
    SparseMatrix system_;
    double lipschitz_ = 0.0;
};

/// One-shot convenience wrapper around MechPhaseSolver.
MechPhaseSolution solve_mech_phase_step(const MechPhaseProblem& problem, const MechPhaseOptions& options = {});

}  // namespace hydride
