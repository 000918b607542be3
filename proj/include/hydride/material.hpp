#pragma once

#include "hydride/types.hpp"

#include <functional>
#include <string>

namespace hydride {

/// Isotropic fourth-order tensor, C e = 2 mu e + lambda tr(e) I.
///
/// In 1D a Young-type modulus E is represented as {lambda = 0, mu = E/2},
/// so that C e = E e on the single strain component.
struct Isotropic {
    double lambda = 0.0;
    double mu = 0.0;

    static Isotropic uniaxial(double modulus) { return {0.0, 0.5 * modulus}; }

    Tensor2 apply(const Tensor2& e, int dim) const
    {
        return 2.0 * mu * e + lambda * e.trace() * identity_tensor(dim);
    }

    /// Representation on the Mandel basis (xx, yy, sqrt2 xy); 1x1 in 1D.
    Eigen::MatrixXd mandel(int dim) const;
};

/// Enthalpy law w = omega(m, theta).
///
/// The capacity may depend affinely on the phase, c(m) = c0 + c0_slope * m.
/// `quadratic` gives omega = c(m) theta^2 / 2 and `linear` gives
/// omega = c(m) theta. `custom` takes a phase-independent user law and is
/// inverted numerically.
struct HeatLaw {
    enum class Kind { quadratic, linear, custom };

    Kind kind = Kind::quadratic;
    double c0 = 2.0;
    double c0_slope = 0.0;

    std::function<double(double)> custom_omega;
    std::function<double(double)> custom_domega;

    double capacity(double m) const { return c0 + c0_slope * m; }

    static HeatLaw custom(std::function<double(double)> omega, std::function<double(double)> domega)
    {
        HeatLaw law;
        law.kind = Kind::custom;
        law.c0_slope = 0.0;
        law.custom_omega = std::move(omega);
        law.custom_domega = std::move(domega);
        return law;
    }
};

std::string to_string(HeatLaw::Kind kind);
HeatLaw::Kind heat_law_from_string(const std::string& name);

/// Every constitutive parameter of the metal/hydride model.
///
/// Stored energy (temperature independent part):
///   phi1(m, chi) = k/2 (m - a(chi))^2 + kappa/2 chi^2 + d0 m^2 (1-m)^2
///   phi2(e, m)   = 1/2 C(e - eps_tr m) : (e - eps_tr m)
/// with swelling curve a(chi) = a1 chi^2 / (1 + chi^2). The double-well term
/// d0 is an optional add-on (zero by default) used to probe semiconvexity.
struct MaterialModel {
    int dim = 1;

    Isotropic elastic = Isotropic::uniaxial(1.0);
    Isotropic viscous = Isotropic::uniaxial(0.1);
    double density = 1.0;
    double phase_viscosity = 1.0;      // alpha
    double gradient_coeff = 1e-3;      // lambda
    double coupling = 10.0;            // k
    double swelling_amplitude = 0.2;   // a1
    double chem_stiffness = 5.0;       // kappa in phi1_hat = kappa/2 chi^2
    double double_well = 0.0;          // d0
    double activation_threshold = 0.05;  // r, zeta(v) = r |v|
    double m_lo = 0.0;
    double m_hi = 1.0;
    Tensor2 eps_tr = 0.1 * identity_tensor(1);
    Tensor2 alpha_th = 0.1 * identity_tensor(1);
    HeatLaw heat_law;
    double conductivity = 1.0;  // K0
    double mobility = 1.0;      // M0

    /// Desk defaults in `dim` dimensions (isotropic tensors rebuilt for dim).
    static MaterialModel desk_default(int dim = 1);

    /// C alpha_th.
    Tensor2 thermal_stress_tensor() const { return elastic.apply(alpha_th, dim); }
};

}  // namespace hydride
