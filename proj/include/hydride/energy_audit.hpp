#pragma once

#include "hydride/fields.hpp"
#include "hydride/ledger.hpp"
#include "hydride/trajectory.hpp"

#include <string>
#include <utility>
#include <vector>

namespace hydride {

/// Energies and hydrogen content of a single state (the level part of a row).
LedgerRow energy_levels(const Mesh& mesh, const MaterialModel& mat, const State& state);

/// Full row for the step prev -> cur, assembled with the solvers' quadrature.
/// `loads` are the load vectors of the new time level.
LedgerRow ledger_step(const Mesh& mesh, const MaterialModel& mat, const State& prev, const State& cur, double tau,
                      const StepLoads& loads);

/// Per-step contributions to the nu-weighted balance. For nu = 0 this is the
/// defect of the mechanical/chemical identity including numerical
/// dissipation; for nu = 1 the total-energy defect; for 0 < nu < 1 the
/// slack of the estimate obtained by adding nu times the tested heat
/// equation and dropping the numerical dissipation.
double balance_increment(const LedgerRow& prev, const LedgerRow& cur, double nu);

/// Accumulated balance_increment from t = 0 to every time level.
std::vector<double> balance_residual(const std::vector<LedgerRow>& ledger, double nu);
std::vector<double> balance_residual(const Trajectory& traj, double nu);

/// Norms that stay bounded uniformly in tau.
struct AprioriMonitor {
    double u_sup_l2 = 0.0;
    double velocity_sup_l2 = 0.0;
    double strain_rate_l2q = 0.0;
    double m_sup_h1 = 0.0;
    double m_rate_l2q = 0.0;
    double m_sup = 0.0;
    double chi_sup_l2 = 0.0;
    double chi_l2_h1 = 0.0;
    double mu_l2_h1 = 0.0;
    double w_sup_l1 = 0.0;
    double grad_w_lr = 0.0;  // || grad w ||_{L^r(Q)} with r = 9/8

    std::vector<std::pair<std::string, double>> entries() const;
};

AprioriMonitor apriori_monitor(const Trajectory& traj, double r = 9.0 / 8.0);

}  // namespace hydride
