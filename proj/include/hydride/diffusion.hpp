#pragma once

#include "hydride/material.hpp"
#include "hydride/mesh.hpp"

#include <vector>

namespace hydride {

/// Hydrogen step: lumped P1 discretisation of
///   (chi - chi_prev)/tau - div(M grad mu) = 0,   mu = dphi1/dchi(m, chi),
/// with prescribed boundary influx h_s. The flux uses the gradient of the
/// nodal interpolant of mu.
struct DiffusionProblem {
    const Mesh& mesh;
    const MaterialModel& mat;
    Vector u;         // u^k (unused by the default transport law, kept for the coefficient signature)
    Vector m;         // m^k
    Vector w_prev;    // w^{k-1}
    Vector chi_prev;  // chi^{k-1}
    double tau = 0.0;
    Vector influx;    // boundary functional of h_s^k
};

struct DiffusionOptions {
    double cg_tol = 1e-12;
    double picard_tol = 1e-10;
    int picard_max = 200;
    double damping = 0.7;
};

struct DiffusionSolution {
    Vector chi;
    Vector mu;
    int iterations = 0;
    double update_norm = 0.0;
    double residual = 0.0;  // tau * |R| / lumped mass, root mean square
    std::vector<double> update_history;
};

DiffusionSolution solve_chi_step(const DiffusionProblem& problem, const DiffusionOptions& options = {});

/// Nodal mu and its element gradient by the chain rule
/// grad mu = d2phi1/dchidm grad m + d2phi1/dchi2 grad chi at element midpoints.
struct MuField {
    Vector nodal;
    std::vector<Point> gradient;
};

MuField assemble_mu(const Mesh& mesh, const MaterialModel& mat, const Vector& m, const Vector& chi);

/// Stiffness with the hydrogen mobility evaluated per element.
SparseMatrix mobility_stiffness(const Mesh& mesh, const MaterialModel& mat, const Vector& u, const Vector& m,
                                const Vector& chi, const Vector& w);

}  // namespace hydride
