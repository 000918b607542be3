#pragma once

namespace hydride {

/// Energy bookkeeping of one time level. Energies are values at t; every
/// other entry is the increment over the step ending at t (zero on row 0).
struct LedgerRow {
    int step = 0;
    double t = 0.0;

    double kinetic = 0.0;
    double stored_chemical = 0.0;
    double stored_elastic = 0.0;
    double gradient = 0.0;
    double thermal = 0.0;
    double mass_chi = 0.0;
    double min_chi = 0.0;
    double min_w = 0.0;

    double diss_viscous = 0.0;
    double diss_viscous_heat = 0.0;  // regularised copy fed to the heat equation
    double diss_phase = 0.0;
    double diss_activation = 0.0;
    double diss_diffusion = 0.0;
    double diss_diffusion_heat = 0.0;
    double adiabatic_old = 0.0;  // sigma_a, s_a at w^{k-1}: mechanical side
    double adiabatic_new = 0.0;  // sigma_a, s_a at w^k: heat side

    double nd_inertia = 0.0;
    double nd_elastic = 0.0;
    double nd_gradient = 0.0;
    double gap_phase = 0.0;
    double gap_multiplier = 0.0;
    double gap_chi = 0.0;

    double work_mech = 0.0;
    double work_chem = 0.0;
    double work_heat = 0.0;
    double influx = 0.0;  // hydrogen supplied through the boundary

    double stored() const { return stored_chemical + stored_elastic; }
    double total_energy() const { return kinetic + stored() + gradient + thermal; }
    double work() const { return work_mech + work_chem + work_heat; }
    double numerical_dissipation() const
    {
        return nd_inertia + nd_elastic + nd_gradient + gap_phase + gap_multiplier;
    }
};

}  // namespace hydride
