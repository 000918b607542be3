#include "hydride/heat.hpp"

#include "hydride/constitutive.hpp"
#include "hydride/linear_solve.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace hydride {

namespace {

constexpr double kNegativeTolerance = 1e-12;

double rms(const Vector& lumped, const Vector& density)
{
    return std::sqrt(lumped.dot(density.cwiseAbs2()) / lumped.sum());
}

void check_sizes(const HeatProblem& p)
{
    const int n = p.mesh.num_nodes();
    const int nu = p.mesh.dim() * n;
    if (p.u.size() != nu || p.u_prev.size() != nu || p.m.size() != n || p.m_prev.size() != n ||
        p.chi.size() != n || p.mu.size() != n || p.w_prev.size() != n || p.supply.size() != n ||
        static_cast<int>(p.grad_mu.size()) != p.mesh.num_elements())
        throw std::invalid_argument("HeatProblem: field sizes do not match the mesh");
    if (!(p.tau > 0.0)) throw std::invalid_argument("HeatProblem: tau must be positive");
}

}  // namespace

double viscous_norm(const MaterialModel& mat)
{
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(mat.viscous.mandel(mat.dim), Eigen::EigenvaluesOnly);
    return eig.eigenvalues().maxCoeff();
}

HeatBreakdown dissipation_rhs(const HeatProblem& p, const Vector& w_iterate)
{
    check_sizes(p);
    const Mesh& mesh = p.mesh;
    const MaterialModel& mat = p.mat;
    const int n = mesh.num_nodes();
    const int npe = mesh.nodes_per_element();
    const double tau = p.tau;
    const Vector lumped = lumped_mass(mesh);
    const double d_bound = viscous_norm(mat) / tau;

    HeatBreakdown out;
    out.viscous = Vector::Zero(n);
    out.adiabatic = Vector::Zero(n);
    out.diffusional = Vector::Zero(n);
    out.phase = Vector(n);
    out.activation = Vector(n);
    out.external = p.supply;

    std::vector<Tensor2> sig(n);
    for (int i = 0; i < n; ++i) {
        const double w = std::max(w_iterate[i], 0.0);
        sig[i] = sigma_a(mat, p.m_prev[i], w);
        const double rate = (p.m[i] - p.m_prev[i]) / tau;
        out.adiabatic[i] = lumped[i] * s_a(mat, p.m_prev[i], w) * rate;
        out.phase[i] = lumped[i] * mat.phase_viscosity * rate * rate;
        out.activation[i] = lumped[i] * mat.activation_threshold * std::abs(rate);
    }

    for (int e = 0; e < mesh.num_elements(); ++e) {
        const auto& el = mesh.element(e);
        const double share = mesh.volume(e) / npe;
        const Tensor2 rate = (element_strain(mesh, e, p.u) - element_strain(mesh, e, p.u_prev)) / tau;
        const double rate_sq = contract(rate, rate);
        const double viscous = contract(mat.viscous.apply(rate, mat.dim), rate) / (1.0 + tau * rate_sq);
        if (viscous > d_bound * (1.0 + 1e-12))
            throw InvariantViolation("regularised viscous heating exceeds its 1/tau bound in element " +
                                     std::to_string(e));

        const double mob = transport_coeffs(mat, element_strain(mesh, e, p.u), element_average(mesh, e, p.m),
                                            std::max(element_average(mesh, e, p.chi), 0.0),
                                            std::max(element_average(mesh, e, p.w_prev), 0.0))
                               .hydrogen;
        const double g2 = p.grad_mu[e].squaredNorm();
        const double diffusional = mob * g2 / (1.0 + tau * g2);
        if (diffusional > mob / tau * (1.0 + 1e-12))
            throw InvariantViolation("regularised diffusional heating exceeds its 1/tau bound in element " +
                                     std::to_string(e));

        for (int a = 0; a < npe; ++a) {
            const int i = el[a];
            out.viscous[i] += share * viscous;
            out.diffusional[i] += share * diffusional;
            out.adiabatic[i] += share * contract(sig[i], rate);
        }
    }
    return out;
}

HeatSolution solve_w_step(const HeatProblem& p, const HeatOptions& options)
{
    check_sizes(p);
    const Mesh& mesh = p.mesh;
    const MaterialModel& mat = p.mat;
    const int n = mesh.num_nodes();
    for (int i = 0; i < n; ++i) {
        if (p.w_prev[i] < -kNegativeTolerance)
            throw InvariantViolation("heat step received negative enthalpy at node " + std::to_string(i));
        if (p.supply[i] < 0.0)
            throw InvariantViolation("heat step received a negative heat supply at node " + std::to_string(i));
    }

    const Vector lumped = lumped_mass(mesh);
    HeatSolution sol;
    sol.w = p.w_prev;
    bool converged = false;
    for (int it = 1; it <= options.picard_max; ++it) {
        Vector k_coeff(mesh.num_elements());
        Vector l_coeff(mesh.num_elements());
        for (int e = 0; e < mesh.num_elements(); ++e) {
            const auto t = transport_coeffs(mat, element_strain(mesh, e, p.u), element_average(mesh, e, p.m),
                                            std::max(element_average(mesh, e, p.chi), 0.0),
                                            std::max(element_average(mesh, e, sol.w), 0.0));
            k_coeff[e] = t.heat;
            l_coeff[e] = t.heat_phase;
        }
        SparseMatrix a = stiffness(mesh, k_coeff);
        for (int i = 0; i < n; ++i) a.coeffRef(i, i) += lumped[i] / p.tau;
        Vector rhs = lumped.cwiseProduct(p.w_prev) / p.tau + dissipation_rhs(p, sol.w).total();
        if (l_coeff.cwiseAbs().maxCoeff() > 0.0) rhs -= stiffness(mesh, l_coeff) * p.m;

        const Vector next = solve_spd(a, rhs, sol.w, options.cg_tol, "heat step");
        const Vector delta = options.damping * (next - sol.w);
        sol.w += delta;
        sol.iterations = it;
        sol.update_norm = rms(lumped, delta);
        if (sol.update_norm <= options.picard_tol * std::max(1.0, rms(lumped, sol.w))) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw SolverFailure("heat step did not converge in " + std::to_string(options.picard_max) +
                            " iterations (update " + std::to_string(sol.update_norm) + ")");
    for (int i = 0; i < n; ++i)
        if (sol.w[i] < -kNegativeTolerance)
            throw InvariantViolation("enthalpy became negative at node " + std::to_string(i) +
                                     " (w = " + std::to_string(sol.w[i]) + ")");
    sol.production = dissipation_rhs(p, sol.w);
    return sol;
}

}  // namespace hydride
