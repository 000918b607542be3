#pragma once

#include "hydride/driver.hpp"
#include "hydride/trajectory.hpp"

#include <string>
#include <vector>

namespace hydride {

/// Column order of energy.csv. Energies are levels at t, dissipation and
/// work are increments over the step ending at t, and the three balance
/// columns are accumulated from t = 0.
const std::vector<std::string>& energy_columns();

std::string energy_csv(const Trajectory& traj);

/// Every ledger term, the accumulated balances and the solver diagnostics.
std::string ledger_csv(const Trajectory& traj);

/// Nodal snapshot of level k: node id, coordinates, u components, m, chi,
/// mu, w and theta.
std::string fields_csv(const Trajectory& traj, int k);

/// Same data as fields_csv in legacy VTK (unstructured grid, point data).
std::string fields_vtk(const Trajectory& traj, int k);

/// Levels that receive a snapshot: 0, every n-th step and the last one.
std::vector<int> snapshot_steps(int steps, int every_n);

/// Writes energy.csv, ledger.csv, the snapshots, optional VTK files and
/// run_manifest.ini into dir (created if needed). Returns the written paths.
std::vector<std::string> write_outputs(const Trajectory& traj, const RunConfig& config,
                                       const std::vector<std::string>& defaulted, const std::string& dir);

}  // namespace hydride
