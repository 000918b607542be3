#include "hydride/constitutive.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace hydride {

namespace {

// Chemical fields are allowed to sit this far below zero, matching the
// tolerance of the non-negativity assertions in the step solvers.
constexpr double kNegativeTolerance = 1e-12;

void require_nonnegative(double value, const char* what)
{
    if (!(value >= -kNegativeTolerance))
        throw DomainError(std::string(what) + " must be non-negative, got " + std::to_string(value));
}

double scalar_coupling(const MaterialModel& mat)
{
    // C alpha_th : eps_tr
    return contract(mat.thermal_stress_tensor(), mat.eps_tr);
}

}  // namespace

double swelling(const MaterialModel& mat, double chi)
{
    const double c2 = chi * chi;
    return mat.swelling_amplitude * c2 / (1.0 + c2);
}

double swelling_d1(const MaterialModel& mat, double chi)
{
    const double d = 1.0 + chi * chi;
    return 2.0 * mat.swelling_amplitude * chi / (d * d);
}

double swelling_d2(const MaterialModel& mat, double chi)
{
    const double c2 = chi * chi;
    const double d = 1.0 + c2;
    return mat.swelling_amplitude * (2.0 - 6.0 * c2) / (d * d * d);
}

double phi1(const MaterialModel& mat, double m, double chi)
{
    const double gap = m - swelling(mat, chi);
    const double well = m * (1.0 - m);
    return 0.5 * mat.coupling * gap * gap + 0.5 * mat.chem_stiffness * chi * chi + mat.double_well * well * well;
}

double dphi1_dm(const MaterialModel& mat, double m, double chi)
{
    return mat.coupling * (m - swelling(mat, chi)) + 2.0 * mat.double_well * m * (1.0 - m) * (1.0 - 2.0 * m);
}

double d2phi1_dm2(const MaterialModel& mat, double m, double /*chi*/)
{
    return mat.coupling + mat.double_well * (12.0 * m * m - 12.0 * m + 2.0);
}

double d2phi1_dchi2(const MaterialModel& mat, double m, double chi)
{
    const double a1 = swelling_d1(mat, chi);
    return mat.coupling * ((swelling(mat, chi) - m) * swelling_d2(mat, chi) + a1 * a1) + mat.chem_stiffness;
}

double d2phi1_dchidm(const MaterialModel& mat, double /*m*/, double chi)
{
    return -mat.coupling * swelling_d1(mat, chi);
}

double chemical_potential(const MaterialModel& mat, double m, double chi)
{
    require_nonnegative(chi, "hydrogen concentration");
    return -mat.coupling * (m - swelling(mat, chi)) * swelling_d1(mat, chi) + mat.chem_stiffness * chi;
}

double phi2(const MaterialModel& mat, const Tensor2& strain, double m)
{
    const Tensor2 e = strain - mat.eps_tr * m;
    return 0.5 * contract(mat.elastic.apply(e, mat.dim), e);
}

// With c(m) the heat capacity and B = C alpha_th : eps_tr the built-in laws use
//   quadratic: phi3 = theta B m - c(m) theta^2 / 2        -> omega = c theta^2 / 2
//   linear:    phi3 = theta B m - c(m) theta log(theta)   -> omega = c theta
// i.e. the theta^2 C alpha:alpha / 2 part of the free energy is absorbed by phi3_hat.

double phi3(const MaterialModel& mat, double m, double theta)
{
    if (theta < 0.0) throw DomainError("temperature must be non-negative");
    const double c = mat.heat_law.capacity(m);
    const double coupling = theta * scalar_coupling(mat) * m;
    switch (mat.heat_law.kind) {
    case HeatLaw::Kind::quadratic: return coupling - 0.5 * c * theta * theta;
    case HeatLaw::Kind::linear: return coupling - (theta > 0.0 ? c * theta * std::log(theta) : 0.0);
    case HeatLaw::Kind::custom: break;
    }
    throw std::logic_error("phi3 is not available for a custom heat law");
}

double dphi3_dm(const MaterialModel& mat, double m, double theta)
{
    if (theta < 0.0) throw DomainError("temperature must be non-negative");
    const double slope = mat.heat_law.c0_slope;
    const double base = theta * scalar_coupling(mat);
    (void)m;
    switch (mat.heat_law.kind) {
    case HeatLaw::Kind::quadratic: return base - 0.5 * slope * theta * theta;
    case HeatLaw::Kind::linear: return base - (theta > 0.0 ? slope * theta * std::log(theta) : 0.0);
    case HeatLaw::Kind::custom: return base;
    }
    return base;
}

double dphi3_dtheta(const MaterialModel& mat, double m, double theta)
{
    if (theta < 0.0) throw DomainError("temperature must be non-negative");
    const double c = mat.heat_law.capacity(m);
    const double coupling = scalar_coupling(mat) * m;
    switch (mat.heat_law.kind) {
    case HeatLaw::Kind::quadratic: return coupling - c * theta;
    case HeatLaw::Kind::linear:
        if (theta == 0.0) return -std::numeric_limits<double>::infinity();
        return coupling - c * (std::log(theta) + 1.0);
    case HeatLaw::Kind::custom: break;
    }
    throw std::logic_error("phi3 is not available for a custom heat law");
}

double omega_of_theta(const MaterialModel& mat, double m, double theta)
{
    if (!(theta >= 0.0)) throw DomainError("temperature must be non-negative, got " + std::to_string(theta));
    const double c = mat.heat_law.capacity(m);
    switch (mat.heat_law.kind) {
    case HeatLaw::Kind::quadratic: return 0.5 * c * theta * theta;
    case HeatLaw::Kind::linear: return c * theta;
    case HeatLaw::Kind::custom: return mat.heat_law.custom_omega(theta);
    }
    return 0.0;
}

double domega_dtheta(const MaterialModel& mat, double m, double theta)
{
    if (!(theta >= 0.0)) throw DomainError("temperature must be non-negative");
    const double c = mat.heat_law.capacity(m);
    switch (mat.heat_law.kind) {
    case HeatLaw::Kind::quadratic: return c * theta;
    case HeatLaw::Kind::linear: return c;
    case HeatLaw::Kind::custom: return mat.heat_law.custom_domega(theta);
    }
    return 0.0;
}

double theta_of_w(const MaterialModel& mat, double m, double w)
{
    if (!(w >= 0.0)) throw DomainError("enthalpy must be non-negative, got " + std::to_string(w));
    const double c = mat.heat_law.capacity(m);
    switch (mat.heat_law.kind) {
    case HeatLaw::Kind::quadratic: return std::sqrt(2.0 * w / c);
    case HeatLaw::Kind::linear: return w / c;
    case HeatLaw::Kind::custom:
        return invert_increasing(mat.heat_law.custom_omega, mat.heat_law.custom_domega, w);
    }
    return 0.0;
}

double dtheta_dm(const MaterialModel& mat, double m, double w)
{
    const double slope = mat.heat_law.c0_slope;
    if (slope == 0.0 || mat.heat_law.kind == HeatLaw::Kind::custom) return 0.0;
    const double theta = theta_of_w(mat, m, w);
    const double c = mat.heat_law.capacity(m);
    return mat.heat_law.kind == HeatLaw::Kind::quadratic ? -0.5 * theta * slope / c : -theta * slope / c;
}

Tensor2 sigma_a(const MaterialModel& mat, double m, double w)
{
    return -theta_of_w(mat, m, w) * mat.thermal_stress_tensor();
}

double s_a(const MaterialModel& mat, double m, double w)
{
    return dphi3_dm(mat, m, theta_of_w(mat, m, w));
}

Tensor2 stress(const MaterialModel& mat, const Tensor2& strain, double m, double w)
{
    return mat.elastic.apply(strain - mat.eps_tr * m, mat.dim) + sigma_a(mat, m, w);
}

TransportCoefficients transport_coeffs(const MaterialModel& mat, const Tensor2& /*strain*/, double m, double chi,
                                       double w)
{
    TransportCoefficients t;
    t.heat = mat.conductivity;
    t.heat_phase = mat.conductivity * dtheta_dm(mat, m, w);
    t.hydrogen = mat.mobility;
    t.hydrogen_chi = mat.mobility * d2phi1_dchi2(mat, m, chi);
    t.hydrogen_phase = mat.mobility * d2phi1_dchidm(mat, m, chi);
    return t;
}

double invert_increasing(const std::function<double(double)>& f, const std::function<double(double)>& df,
                         double target, double rel_tol)
{
    const double f0 = f(0.0);
    if (target <= f0) return 0.0;
    double lo = 0.0;
    double hi = 1.0;
    int expansions = 0;
    while (f(hi) < target) {
        lo = hi;
        hi *= 2.0;
        if (++expansions > 1100 || !std::isfinite(hi))
            throw SolverFailure("monotone inversion: target " + std::to_string(target) + " is not bracketed");
    }
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        const double fx = f(x) - target;
        if (std::abs(fx) <= rel_tol * std::abs(target)) return x;
        if (fx > 0.0) hi = x; else lo = x;
        const double slope = df(x);
        double next = slope > 0.0 ? x - fx / slope : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (hi - lo <= rel_tol * hi) return next;
        x = next;
    }
    throw SolverFailure("monotone inversion did not converge");
}

// -----------------------------------------------------------------------------
// Validation

bool ValidationReport::ok() const
{
    return std::all_of(checks.begin(), checks.end(), [](const AssumptionCheck& c) { return c.passed; });
}

const AssumptionCheck* ValidationReport::find(const std::string& name) const
{
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

std::string ValidationReport::summary() const
{
    std::ostringstream os;
    for (const auto& c : checks) {
        os << (c.passed ? "pass  " : "FAIL  ") << c.name << "  margin=" << c.worst_margin;
        if (!c.passed) os << "  at (m=" << c.at_m << ", chi=" << c.at_chi << ", w=" << c.at_w << ")";
        os << "  -- " << c.description << '\n';
    }
    return os.str();
}

namespace {

AssumptionCheck positive_definite_check(const std::string& name, const std::string& description,
                                        const Isotropic& tensor, int dim)
{
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(tensor.mandel(dim), Eigen::EigenvaluesOnly);
    AssumptionCheck c{name, description};
    c.worst_margin = eig.eigenvalues().minCoeff();
    c.passed = c.worst_margin > 0.0;
    return c;
}

// Odd so that the midpoint of each sampled interval is hit exactly.
int samples_per_axis(int n_samples)
{
    const int n = std::max(3, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n_samples)))));
    return n % 2 == 1 ? n : n + 1;
}

// |f(w)| <= C sqrt(1 + w) on [0, 1e6]: compares the worst ratio over the top
// three decades against the worst ratio below them.
template <typename F>
AssumptionCheck sqrt_growth_check(const std::string& name, const std::string& description,
                                  const MaterialModel& mat, F&& f)
{
    AssumptionCheck c{name, description};
    double worst = std::numeric_limits<double>::infinity();
    for (double m : {mat.m_lo, 0.5 * (mat.m_lo + mat.m_hi), mat.m_hi}) {
        double low = 0.0;
        double high = 0.0;
        double high_w = 0.0;
        for (int i = 0; i <= 120; ++i) {
            const double w = i == 0 ? 0.0 : std::pow(10.0, -6.0 + 12.0 * (i - 1) / 119.0);
            const double ratio = std::abs(f(m, w)) / std::sqrt(1.0 + w);
            if (w <= 1e3) {
                low = std::max(low, ratio);
            } else if (ratio > high) {
                high = ratio;
                high_w = w;
            }
        }
        const double margin = 2.0 * low - high;
        if (margin < worst) {
            worst = margin;
            c.at_m = m;
            c.at_w = high_w;
        }
    }
    c.worst_margin = worst;
    c.passed = worst >= -1e-14;
    return c;
}

}  // namespace

ValidationReport validate_material(const MaterialModel& mat, double chi_max, int n_samples)
{
    if (!(chi_max > 0.0)) throw std::invalid_argument("validate_material: chi_max must be positive");
    if (n_samples < 4) throw std::invalid_argument("validate_material: need at least 4 samples");

    ValidationReport report;
    const int dim = mat.dim;

    report.checks.push_back(
        positive_definite_check("elastic_positive", "elastic moduli C positive definite", mat.elastic, dim));
    report.checks.push_back(
        positive_definite_check("viscous_positive", "viscosity moduli D positive definite", mat.viscous, dim));

    {
        AssumptionCheck c{"rate_parameters_positive", "density, phase viscosity and gradient coefficient positive"};
        c.worst_margin = std::min({mat.density, mat.phase_viscosity, mat.gradient_coeff});
        c.passed = c.worst_margin > 0.0;
        report.checks.push_back(c);
    }
    {
        AssumptionCheck c{"transport_positive", "conductivity and mobility positive"};
        c.worst_margin = std::min(mat.conductivity, mat.mobility);
        c.passed = c.worst_margin > 0.0;
        report.checks.push_back(c);
    }
    {
        AssumptionCheck c{"phase_box", "phase box K = [m_lo, m_hi] bounded, closed and non-empty"};
        c.worst_margin = mat.m_hi - mat.m_lo;
        c.passed = std::isfinite(mat.m_lo) && std::isfinite(mat.m_hi) && c.worst_margin >= 0.0;
        report.checks.push_back(c);
    }
    {
        AssumptionCheck c{"activation_convex_homogeneous", "activation potential r|v| convex and 1-homogeneous (r >= 0)"};
        c.worst_margin = mat.activation_threshold;
        c.passed = mat.activation_threshold >= 0.0;
        report.checks.push_back(c);
    }

    const int per_axis = samples_per_axis(n_samples);
    AssumptionCheck convex{"chi_convexity", "d2phi1/dchi2 uniformly positive (uniform convexity in chi)"};
    AssumptionCheck coercive{"chem_coercivity", "phi1(m, chi) >= eps chi^2 for some eps > 0"};
    AssumptionCheck mixed{"mixed_derivative", "d2phi1/dchidm bounded and zero at chi = 0"};
    AssumptionCheck semiconvex{"m_semiconvexity", "d2phi1/dm2 bounded from below"};
    convex.worst_margin = coercive.worst_margin = std::numeric_limits<double>::infinity();
    semiconvex.worst_margin = std::numeric_limits<double>::infinity();
    double mixed_at_zero = 0.0;
    double mixed_max = 0.0;
    for (int i = 0; i < per_axis; ++i) {
        const double m = mat.m_lo + (mat.m_hi - mat.m_lo) * i / (per_axis - 1);
        for (int j = 0; j < per_axis; ++j) {
            const double chi = chi_max * j / (per_axis - 1);
            const double h = d2phi1_dchi2(mat, m, chi);
            if (h < convex.worst_margin) {
                convex.worst_margin = h;
                convex.at_m = m;
                convex.at_chi = chi;
            }
            if (chi > 0.0) {
                const double ratio = phi1(mat, m, chi) / (chi * chi);
                if (ratio < coercive.worst_margin) {
                    coercive.worst_margin = ratio;
                    coercive.at_m = m;
                    coercive.at_chi = chi;
                }
            }
            const double mix = std::abs(d2phi1_dchidm(mat, m, chi));
            mixed_max = std::max(mixed_max, mix);
            if (chi == 0.0 && mix > mixed_at_zero) {
                mixed_at_zero = mix;
                mixed.at_m = m;
            }
            semiconvex.worst_margin = std::min(semiconvex.worst_margin, d2phi1_dm2(mat, m, chi));
        }
    }
    convex.passed = convex.worst_margin > 0.0;
    coercive.passed = coercive.worst_margin > 0.0;
    mixed.worst_margin = -mixed_at_zero;
    mixed.passed = mixed_at_zero <= 1e-14 && std::isfinite(mixed_max);
    semiconvex.passed = std::isfinite(semiconvex.worst_margin);
    report.checks.push_back(convex);
    report.checks.push_back(coercive);
    report.checks.push_back(mixed);
    report.checks.push_back(semiconvex);

    {
        AssumptionCheck c{"heat_capacity_positive", "d(omega)/d(theta) > 0 for theta > 0"};
        c.worst_margin = std::numeric_limits<double>::infinity();
        for (int i = 0; i < per_axis; ++i) {
            const double m = mat.m_lo + (mat.m_hi - mat.m_lo) * i / (per_axis - 1);
            for (int j = 1; j <= 100; ++j) {
                const double theta = std::pow(10.0, -4.0 + 6.0 * (j - 1) / 99.0);
                const double cap = domega_dtheta(mat, m, theta);
                if (cap < c.worst_margin) {
                    c.worst_margin = cap;
                    c.at_m = m;
                    c.at_w = theta;
                }
            }
        }
        c.passed = c.worst_margin > 0.0;
        report.checks.push_back(c);
    }
    if (report.checks.back().passed) {
        report.checks.push_back(sqrt_growth_check("adiabatic_stress_growth", "|sigma_a(m, w)| <= C sqrt(1 + w)", mat,
                                                  [&](double m, double w) { return sigma_a(mat, m, w).norm(); }));
        report.checks.push_back(sqrt_growth_check("adiabatic_microforce_growth", "|s_a(m, w)| <= C sqrt(1 + w)", mat,
                                                  [&](double m, double w) { return s_a(mat, m, w); }));
        report.checks.push_back(sqrt_growth_check(
            "thermal_coupling_growth", "|L(m, w)| <= C sqrt(1 + w)", mat,
            [&](double m, double w) { return mat.conductivity * dtheta_dm(mat, m, w); }));
    }
    return report;
}

void require_valid(const ValidationReport& report)
{
    if (report.ok()) return;
    std::ostringstream os;
    os << "material violates structural assumptions:\n";
    for (const auto& c : report.checks) {
        if (c.passed) continue;
        os << "  " << c.name << " (" << c.description << "): worst margin " << c.worst_margin << " at m=" << c.at_m
           << ", chi=" << c.at_chi << ", w=" << c.at_w << '\n';
    }
    throw ValidationError(os.str());
}

double inf_d2phi1_dm2(const MaterialModel& mat, double chi_max, int n_samples)
{
    const int per_axis = samples_per_axis(n_samples);
    double inf = std::numeric_limits<double>::infinity();
    for (int i = 0; i < per_axis; ++i) {
        const double m = mat.m_lo + (mat.m_hi - mat.m_lo) * i / (per_axis - 1);
        for (int j = 0; j < per_axis; ++j) {
            const double chi = chi_max * j / (per_axis - 1);
            inf = std::min(inf, d2phi1_dm2(mat, m, chi));
        }
    }
    return inf;
}

}  // namespace hydride
