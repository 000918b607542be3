#pragma once

#include "hydride/material.hpp"
#include "hydride/mesh.hpp"

#include <vector>

namespace hydride {

/// Enthalpy step: lumped P1 discretisation of
///   (w - w_prev)/tau - div(K grad w + L grad m) = heat production + supply.
struct HeatProblem {
    const Mesh& mesh;
    const MaterialModel& mat;
    Vector u;        // u^k
    Vector u_prev;   // u^{k-1}
    Vector m;        // m^k
    Vector m_prev;   // m^{k-1}
    Vector chi;      // chi^k
    Vector mu;       // mu^k, nodal
    std::vector<Point> grad_mu;  // element gradient of mu^k
    Vector w_prev;
    double tau = 0.0;
    Vector supply;   // integrated external heat: lumped q plus boundary q_s
};

/// Nodal heat production rates, each already integrated against the nodal
/// basis function.
struct HeatBreakdown {
    Vector viscous;
    Vector adiabatic;
    Vector phase;
    Vector activation;
    Vector diffusional;
    Vector external;

    Vector total() const { return viscous + adiabatic + phase + activation + diffusional + external; }
};

struct HeatOptions {
    double cg_tol = 1e-12;
    double picard_tol = 1e-10;
    int picard_max = 200;
    double damping = 1.0;
};

struct HeatSolution {
    Vector w;
    int iterations = 0;
    double update_norm = 0.0;
    HeatBreakdown production;
};

HeatBreakdown dissipation_rhs(const HeatProblem& problem, const Vector& w_iterate);

HeatSolution solve_w_step(const HeatProblem& problem, const HeatOptions& options = {});

/// Largest eigenvalue of the viscosity tensor on symmetric strains.
double viscous_norm(const MaterialModel& mat);

}  // namespace hydride
