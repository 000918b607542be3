#pragma once

#include "hydride/energy_audit.hpp"
#include "hydride/fields.hpp"
#include "hydride/material.hpp"
#include "hydride/trajectory.hpp"

#include <functional>
#include <string>
#include <vector>

namespace hydride {

struct DomainSettings {
    int dim = 1;
    std::vector<double> lengths{1.0};
    std::vector<int> resolution{50};
};

struct InitialData {
    std::vector<FieldExpr> u0{FieldExpr::ramp(FieldExpr::Axis::x, 0.0, 0.1)};
    std::vector<FieldExpr> v0{FieldExpr::constant(0.0)};
    FieldExpr m0 = FieldExpr::constant(0.0);
    FieldExpr chi0 = FieldExpr::constant(0.5);
    FieldExpr theta0 = FieldExpr::constant(1.0);
};

struct SolverSettings {
    double cg_tol = 1e-12;
    double picard_tol = 1e-10;
    int picard_max = 200;
    double opt_tol = 1e-10;
    int opt_max = 200;
};

struct OutputSettings {
    std::string dir = "out";
    int every_n = 10;
    bool vtk = false;
};

struct RunConfig {
    DomainSettings domain;
    MaterialModel material = MaterialModel::desk_default(1);
    double chi_max = 3.0;  // upper end of the sampled chi range for validation
    double horizon = 0.05;  // T
    double tau = 1e-3;
    InitialData initial;
    SourceTerms sources = SourceTerms::none(1);
    SolverSettings solver;
    OutputSettings output;

    /// Desk default: 1D, 50 nodes, T = 0.05, tau = 1e-3, charging h_s = 0.5
    /// on the left end, stress-free initial state.
    static RunConfig desk_default();

    int steps() const;
};

/// Checks every invariant of the configuration that does not need a run:
/// shapes, the time grid, the material assumptions, the stability threshold
/// and the admissibility of the initial data and sources. Throws ConfigError
/// or ValidationError.
void check_config(const RunConfig& config);

Mesh build_mesh(const DomainSettings& domain);

/// Initial state: w0 = omega(m0, theta0), mu0 = dphi1/dchi(m0, chi0).
State initial_state(const Mesh& mesh, const RunConfig& config);

using StepObserver = std::function<void(const Trajectory&, int step)>;

/// Staggered scheme: for each k, the (u, m) minimisation with frozen
/// (chi^{k-1}, w^{k-1}), the chi step with (u^k, m^k, w^{k-1}) and the w step
/// with (u^k, m^k, chi^k). Invariants are asserted every step.
Trajectory run(const RunConfig& config, const StepObserver& observer = {});

struct RefineLevel {
    double tau = 0.0;
    double defect_nu1 = 0.0;   // terminal total-energy defect
    double min_slack_nu05 = 0.0;
    AprioriMonitor monitor;
};

struct RefinePair {
    double strain_rate = 0.0;  // || eps(u_dot) ||_{L2(Q)}
    double m_rate = 0.0;       // || m_dot ||_{L2(Q)}
    double grad_mu = 0.0;      // || grad mu ||_{L2(Q)}, backward interpolants
    double w = 0.0;            // || w ||_{L2(Q)}, affine interpolants

    std::vector<std::pair<std::string, double>> entries() const;
};

struct RefineReport {
    std::vector<RefineLevel> levels;
    std::vector<RefinePair> differences;  // between levels i and i+1

    /// Successive differences decrease for every field.
    bool monotone() const;
    /// Largest relative spread (max - min) / max of each monitored norm.
    std::vector<std::pair<std::string, double>> monitor_spread() const;
};

/// Differences of the interpolants of two trajectories on the same mesh
/// whose steps are nested (coarse tau an integer multiple of fine tau).
RefinePair interpolant_difference(const Trajectory& coarse, const Trajectory& fine);

/// Runs config at tau, tau/2, ..., tau/2^(levels-1) with T fixed.
RefineReport refine_study(const RunConfig& config, int levels);

/// Same for an explicit list of steps, each dividing the previous one.
RefineReport refine_study(const RunConfig& config, const std::vector<double>& taus);

}  // namespace hydride
