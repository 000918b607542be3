#pragma once

#include "hydride/material.hpp"

#include <string>
#include <vector>

namespace hydride {

// Swelling curve a(chi) and its derivatives.
double swelling(const MaterialModel& mat, double chi);
double swelling_d1(const MaterialModel& mat, double chi);
double swelling_d2(const MaterialModel& mat, double chi);

// Chemical part of the stored energy and its derivatives.
double phi1(const MaterialModel& mat, double m, double chi);
double dphi1_dm(const MaterialModel& mat, double m, double chi);
double d2phi1_dm2(const MaterialModel& mat, double m, double chi);
double d2phi1_dchi2(const MaterialModel& mat, double m, double chi);
double d2phi1_dchidm(const MaterialModel& mat, double m, double chi);

/// mu = d phi1 / d chi = -k (m - a(chi)) a'(chi) + kappa chi. Requires chi >= 0.
double chemical_potential(const MaterialModel& mat, double m, double chi);

/// Elastic part 1/2 C(e - eps_tr m):(e - eps_tr m), without the box indicator.
double phi2(const MaterialModel& mat, const Tensor2& strain, double m);

// Thermal part of the free energy, phi3(m, theta), for the built-in laws.
double phi3(const MaterialModel& mat, double m, double theta);
double dphi3_dm(const MaterialModel& mat, double m, double theta);
double dphi3_dtheta(const MaterialModel& mat, double m, double theta);

/// Enthalpy w = phi3 - theta d(phi3)/d(theta). Throws DomainError for theta < 0.
double omega_of_theta(const MaterialModel& mat, double m, double theta);
double domega_dtheta(const MaterialModel& mat, double m, double theta);

/// Temperature recovered from enthalpy. Throws DomainError for w < 0.
double theta_of_w(const MaterialModel& mat, double m, double w);
double dtheta_dm(const MaterialModel& mat, double m, double w);

/// Adiabatic stress -theta(m, w) C alpha_th. Zero at w = 0.
Tensor2 sigma_a(const MaterialModel& mat, double m, double w);

/// Adiabatic microforce d(phi3)/dm at theta(m, w). Zero at w = 0.
double s_a(const MaterialModel& mat, double m, double w);

/// Total non-viscous stress C(e - eps_tr m) + sigma_a(m, w).
Tensor2 stress(const MaterialModel& mat, const Tensor2& strain, double m, double w);

struct TransportCoefficients {
    double heat = 0.0;       // K
    double heat_phase = 0.0; // L = K dtheta/dm
    double hydrogen = 0.0;   // M
    double hydrogen_chi = 0.0;    // M1 = M d2phi1/dchi2
    double hydrogen_phase = 0.0;  // M2 = M d2phi1/dchidm
};

TransportCoefficients transport_coeffs(const MaterialModel& mat, const Tensor2& strain, double m, double chi,
                                       double w);

/// Monotone inversion of an increasing function on [0, inf): returns x with
/// f(x) = target by safeguarded Newton steps inside an expanding bracket.
double invert_increasing(const std::function<double(double)>& f, const std::function<double(double)>& df,
                         double target, double rel_tol = 1e-12);

struct AssumptionCheck {
    std::string name;
    std::string description;
    bool passed = true;
    double worst_margin = 0.0;
    double at_m = 0.0;
    double at_chi = 0.0;
    double at_w = 0.0;
};

struct ValidationReport {
    std::vector<AssumptionCheck> checks;

    bool ok() const;
    const AssumptionCheck* find(const std::string& name) const;
    std::string summary() const;
};

/// Samples the structural assumptions of the model on K x [0, chi_max].
ValidationReport validate_material(const MaterialModel& mat, double chi_max, int n_samples);

/// Throws ValidationError naming every failed check.
void require_valid(const ValidationReport& report);

/// Sampled infimum of d2phi1/dm2 over K x [0, chi_max].
double inf_d2phi1_dm2(const MaterialModel& mat, double chi_max, int n_samples = 4000);

}  // namespace hydride
