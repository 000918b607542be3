#include "hydride/energy_audit.hpp"

#include "hydride/constitutive.hpp"

#include <algorithm>
#include <cmath>

namespace hydride {

LedgerRow energy_levels(const Mesh& mesh, const MaterialModel& mat, const State& s)
{
    const Vector lumped = lumped_mass(mesh);
    const SparseMatrix lap = stiffness(mesh, Vector::Ones(mesh.num_elements()));
    const int dim = mesh.dim();
    LedgerRow row;
    row.t = s.t;
    for (int i = 0; i < mesh.num_nodes(); ++i) {
        row.kinetic += 0.5 * mat.density * lumped[i] * s.v.segment(i * dim, dim).squaredNorm();
        row.stored_chemical += lumped[i] * phi1(mat, s.m[i], std::max(s.chi[i], 0.0));
    }
    for (int e = 0; e < mesh.num_elements(); ++e)
        row.stored_elastic += mesh.volume(e) * phi2(mat, element_strain(mesh, e, s.u), element_average(mesh, e, s.m));
    row.gradient = 0.5 * mat.gradient_coeff * s.m.dot(lap * s.m);
    row.thermal = lumped.dot(s.w);
    row.mass_chi = lumped.dot(s.chi);
    row.min_chi = s.chi.minCoeff();
    row.min_w = s.w.minCoeff();
    return row;
}

LedgerRow ledger_step(const Mesh& mesh, const MaterialModel& mat, const State& prev, const State& cur, double tau,
                      const StepLoads& loads)
{
    LedgerRow row = energy_levels(mesh, mat, cur);
    const Vector lumped = lumped_mass(mesh);
    const SparseMatrix lap = stiffness(mesh, Vector::Ones(mesh.num_elements()));
    const int dim = mesh.dim();
    const int n = mesh.num_nodes();
    const int npe = mesh.nodes_per_element();

    const Vector du = cur.u - prev.u;
    const Vector dm = cur.m - prev.m;

    std::vector<Tensor2> sig_old(n);
    std::vector<Tensor2> sig_new(n);
    for (int i = 0; i < n; ++i) {
        const double w_old = std::max(prev.w[i], 0.0);
        const double w_new = std::max(cur.w[i], 0.0);
        const double chi_old = std::max(prev.chi[i], 0.0);
        const double chi_new = std::max(cur.chi[i], 0.0);
        sig_old[i] = sigma_a(mat, prev.m[i], w_old);
        sig_new[i] = sigma_a(mat, prev.m[i], w_new);
        row.adiabatic_old += lumped[i] * s_a(mat, prev.m[i], w_old) * dm[i];
        row.adiabatic_new += lumped[i] * s_a(mat, prev.m[i], w_new) * dm[i];

        const double rate = dm[i] / tau;
        row.diss_phase += tau * lumped[i] * mat.phase_viscosity * rate * rate;
        row.diss_activation += tau * lumped[i] * mat.activation_threshold * std::abs(rate);
        row.nd_inertia += 0.5 * mat.density * lumped[i] *
                          (cur.v.segment(i * dim, dim) - prev.v.segment(i * dim, dim)).squaredNorm();

        const double phi_prev = phi1(mat, prev.m[i], chi_old);
        const double phi_mid = phi1(mat, cur.m[i], chi_old);
        const double phi_cur = phi1(mat, cur.m[i], chi_new);
        row.gap_phase += lumped[i] * (phi_prev - phi_mid + dphi1_dm(mat, cur.m[i], chi_old) * dm[i]);
        row.gap_multiplier += lumped[i] * cur.xi[i] * dm[i];
        row.gap_chi += lumped[i] * (phi_mid - phi_cur + cur.mu[i] * (chi_new - chi_old));
    }
    row.nd_gradient = 0.5 * mat.gradient_coeff * dm.dot(lap * dm);

    for (int e = 0; e < mesh.num_elements(); ++e) {
        const auto& el = mesh.element(e);
        const double vol = mesh.volume(e);
        const Tensor2 d_eps = element_strain(mesh, e, du);
        const Tensor2 rate = d_eps / tau;
        const double rate_sq = contract(rate, rate);
        const double power = contract(mat.viscous.apply(rate, dim), rate);
        row.diss_viscous += tau * vol * power;
        row.diss_viscous_heat += tau * vol * power / (1.0 + tau * rate_sq);

        const Tensor2 de = d_eps - mat.eps_tr * element_average(mesh, e, dm);
        row.nd_elastic += 0.5 * vol * contract(mat.elastic.apply(de, dim), de);

        for (int a = 0; a < npe; ++a) {
            row.adiabatic_old += vol / npe * contract(sig_old[el[a]], d_eps);
            row.adiabatic_new += vol / npe * contract(sig_new[el[a]], d_eps);
        }

        const Point grad_mu = element_gradient(mesh, e, cur.mu);
        const double mob = transport_coeffs(mat, element_strain(mesh, e, cur.u), element_average(mesh, e, cur.m),
                                            std::max(element_average(mesh, e, cur.chi), 0.0),
                                            std::max(element_average(mesh, e, prev.w), 0.0))
                               .hydrogen;
        const double g2 = grad_mu.squaredNorm();
        row.diss_diffusion += tau * vol * mob * g2;
        row.diss_diffusion_heat += tau * vol * mob * g2 / (1.0 + tau * g2);
    }

    row.work_mech = loads.force.dot(du);
    row.work_chem = tau * loads.hydrogen.dot(cur.mu);
    row.work_heat = tau * loads.heat.sum();
    row.influx = tau * loads.hydrogen.sum();
    return row;
}

double balance_increment(const LedgerRow& prev, const LedgerRow& cur, double nu)
{
    if (!(nu >= 0.0 && nu <= 1.0)) throw std::invalid_argument("balance: nu must lie in [0, 1]");
    const double d_kin = cur.kinetic - prev.kinetic;
    const double d_stored = cur.stored() + cur.gradient - prev.stored() - prev.gradient;
    const double d_thermal = cur.thermal - prev.thermal;
    const double dissipation = cur.diss_viscous + cur.diss_phase + cur.diss_activation + cur.diss_diffusion;

    if (nu == 0.0) {
        const double lhs = d_kin + d_stored + cur.numerical_dissipation() + cur.gap_chi + dissipation +
                           cur.adiabatic_old;
        return lhs - (cur.work_mech + cur.work_chem);
    }
    if (nu == 1.0) return (cur.total_energy() - prev.total_energy()) - cur.work();

    const double lhs = d_kin + d_stored + nu * d_thermal + (1.0 - nu) * dissipation + cur.adiabatic_old -
                       nu * cur.adiabatic_new;
    return cur.work_mech + cur.work_chem + nu * cur.work_heat - lhs;
}

std::vector<double> balance_residual(const std::vector<LedgerRow>& ledger, double nu)
{
    std::vector<double> out(ledger.size(), 0.0);
    for (std::size_t k = 1; k < ledger.size(); ++k) {
        if (ledger[k].step != ledger[k - 1].step + 1)
            throw std::invalid_argument("balance: ledger rows are not consecutive");
        out[k] = out[k - 1] + balance_increment(ledger[k - 1], ledger[k], nu);
    }
    return out;
}

std::vector<double> balance_residual(const Trajectory& traj, double nu)
{
    if (traj.ledger.size() != traj.states.size())
        throw std::invalid_argument("balance: ledger and state counts differ");
    return balance_residual(traj.ledger, nu);
}

std::vector<std::pair<std::string, double>> AprioriMonitor::entries() const
{
    return {{"u_sup_l2", u_sup_l2},     {"velocity_sup_l2", velocity_sup_l2}, {"strain_rate_l2q", strain_rate_l2q},
            {"m_sup_h1", m_sup_h1},     {"m_rate_l2q", m_rate_l2q},           {"m_sup", m_sup},
            {"chi_sup_l2", chi_sup_l2}, {"chi_l2_h1", chi_l2_h1},             {"mu_l2_h1", mu_l2_h1},
            {"w_sup_l1", w_sup_l1},     {"grad_w_lr", grad_w_lr}};
}

AprioriMonitor apriori_monitor(const Trajectory& traj, double r)
{
    const Mesh& mesh = traj.mesh;
    const Vector lumped = lumped_mass(mesh);
    const SparseMatrix lap = stiffness(mesh, Vector::Ones(mesh.num_elements()));
    const int dim = mesh.dim();
    const double tau = traj.tau;

    auto l2sq_vec = [&](const Vector& v) {
        double s = 0.0;
        for (int i = 0; i < mesh.num_nodes(); ++i) s += lumped[i] * v.segment(i * dim, dim).squaredNorm();
        return s;
    };
    auto l2sq = [&](const Vector& f) { return lumped.dot(f.cwiseAbs2()); };
    auto h1sq = [&](const Vector& f) { return l2sq(f) + f.dot(lap * f); };

    AprioriMonitor mon;
    double strain = 0.0, m_rate = 0.0, chi_h1 = 0.0, mu_h1 = 0.0, grad_w = 0.0;
    for (int k = 0; k <= traj.steps(); ++k) {
        const State& s = traj.states[k];
        mon.u_sup_l2 = std::max(mon.u_sup_l2, std::sqrt(l2sq_vec(s.u)));
        mon.velocity_sup_l2 = std::max(mon.velocity_sup_l2, std::sqrt(l2sq_vec(s.v)));
        mon.m_sup_h1 = std::max(mon.m_sup_h1, std::sqrt(h1sq(s.m)));
        mon.m_sup = std::max(mon.m_sup, s.m.cwiseAbs().maxCoeff());
        mon.chi_sup_l2 = std::max(mon.chi_sup_l2, std::sqrt(l2sq(s.chi)));
        mon.w_sup_l1 = std::max(mon.w_sup_l1, lumped.dot(s.w.cwiseAbs()));
        if (k == 0) continue;
        const Vector mdot = rate(traj, Field::m, k);
        m_rate += tau * l2sq(mdot);
        chi_h1 += tau * h1sq(s.chi);
        mu_h1 += tau * h1sq(s.mu);
        for (int e = 0; e < mesh.num_elements(); ++e) {
            const Tensor2 eps = element_strain(mesh, e, s.v);
            strain += tau * mesh.volume(e) * contract(eps, eps);
            grad_w += tau * mesh.volume(e) * std::pow(element_gradient(mesh, e, s.w).norm(), r);
        }
    }
    mon.strain_rate_l2q = std::sqrt(strain);
    mon.m_rate_l2q = std::sqrt(m_rate);
    mon.chi_l2_h1 = std::sqrt(chi_h1);
    mon.mu_l2_h1 = std::sqrt(mu_h1);
    mon.grad_w_lr = std::pow(grad_w, 1.0 / r);
    return mon;
}

}  // namespace hydride
