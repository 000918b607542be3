#include "hydride/diffusion.hpp"

#include "hydride/constitutive.hpp"
#include "hydride/linear_solve.hpp"

#include <cmath>

namespace hydride {

namespace {

constexpr double kNegativeTolerance = 1e-12;

double rms(const Vector& lumped, const Vector& density)
{
    return std::sqrt(lumped.dot(density.cwiseAbs2()) / lumped.sum());
}

Vector nodal_mu(const MaterialModel& mat, const Vector& m, const Vector& chi)
{
    Vector mu(chi.size());
    for (Eigen::Index i = 0; i < chi.size(); ++i) mu[i] = chemical_potential(mat, m[i], std::max(chi[i], 0.0));
    return mu;
}

void require_nonnegative(const Vector& chi, const char* when)
{
    for (Eigen::Index i = 0; i < chi.size(); ++i)
        if (chi[i] < -kNegativeTolerance)
            throw InvariantViolation(std::string("hydrogen concentration became negative ") + when + " at node " +
                                     std::to_string(i) + " (chi = " + std::to_string(chi[i]) + ")");
}

}  // namespace

SparseMatrix mobility_stiffness(const Mesh& mesh, const MaterialModel& mat, const Vector& u, const Vector& m,
                                const Vector& chi, const Vector& w)
{
    Vector coeff(mesh.num_elements());
    for (int e = 0; e < mesh.num_elements(); ++e) {
        const Tensor2 strain = element_strain(mesh, e, u);
        coeff[e] = transport_coeffs(mat, strain, element_average(mesh, e, m), std::max(element_average(mesh, e, chi), 0.0),
                                    std::max(element_average(mesh, e, w), 0.0))
                       .hydrogen;
    }
    return stiffness(mesh, coeff);
}

MuField assemble_mu(const Mesh& mesh, const MaterialModel& mat, const Vector& m, const Vector& chi)
{
    if (m.size() != mesh.num_nodes() || chi.size() != mesh.num_nodes())
        throw std::invalid_argument("assemble_mu: field sizes do not match the mesh");
    MuField out;
    out.nodal = Vector(mesh.num_nodes());
    for (int i = 0; i < mesh.num_nodes(); ++i) out.nodal[i] = chemical_potential(mat, m[i], chi[i]);
    out.gradient.resize(mesh.num_elements());
    for (int e = 0; e < mesh.num_elements(); ++e) {
        const double me = element_average(mesh, e, m);
        const double ce = std::max(element_average(mesh, e, chi), 0.0);
        out.gradient[e] = d2phi1_dchidm(mat, me, ce) * element_gradient(mesh, e, m) +
                          d2phi1_dchi2(mat, me, ce) * element_gradient(mesh, e, chi);
    }
    return out;
}

DiffusionSolution solve_chi_step(const DiffusionProblem& p, const DiffusionOptions& options)
{
    const Mesh& mesh = p.mesh;
    const int n = mesh.num_nodes();
    if (p.m.size() != n || p.chi_prev.size() != n || p.w_prev.size() != n || p.influx.size() != n ||
        p.u.size() != mesh.dim() * n)
        throw std::invalid_argument("DiffusionProblem: field sizes do not match the mesh");
    if (!(p.tau > 0.0)) throw std::invalid_argument("DiffusionProblem: tau must be positive");
    require_nonnegative(p.chi_prev, "before the diffusion step");

    const Vector lumped = lumped_mass(mesh);
    DiffusionSolution sol;
    sol.chi = p.chi_prev;
    bool converged = false;
    for (int it = 0; it <= options.picard_max; ++it) {
        const SparseMatrix k = mobility_stiffness(mesh, p.mat, p.u, p.m, sol.chi, p.w_prev);
        const Vector mu = nodal_mu(p.mat, p.m, sol.chi);
        const Vector residual = lumped.cwiseProduct(sol.chi - p.chi_prev) / p.tau + k * mu - p.influx;
        sol.residual = rms(lumped, p.tau * residual.cwiseQuotient(lumped));
        if (sol.residual <= options.picard_tol) {
            converged = true;
            break;
        }
        if (it == options.picard_max) break;

        // Linearise mu about the iterate, mu ~ mu_n + c (chi - chi_n), and solve
        // for y = c delta so that the system stays symmetric.
        Vector curvature(n);
        for (int i = 0; i < n; ++i) curvature[i] = d2phi1_dchi2(p.mat, p.m[i], std::max(sol.chi[i], 0.0));
        if (curvature.minCoeff() <= 0.0)
            throw SolverFailure("diffusion step: d2phi1/dchi2 is not positive; the material is not admissible");
        SparseMatrix a = k;
        for (int i = 0; i < n; ++i) a.coeffRef(i, i) += lumped[i] / (p.tau * curvature[i]);
        const Vector y = solve_spd(a, -residual, Vector::Zero(n), options.cg_tol, "diffusion step");
        const Vector delta = options.damping * y.cwiseQuotient(curvature);
        sol.chi += delta;
        sol.iterations = it + 1;
        sol.update_norm = rms(lumped, delta);
        sol.update_history.push_back(sol.update_norm);
        require_nonnegative(sol.chi, "during the diffusion iteration");
    }
    if (!converged)
        throw SolverFailure("diffusion step did not converge in " + std::to_string(options.picard_max) +
                            " iterations (residual " + std::to_string(sol.residual) + ")");

    // Remove the sub-tolerance drift of the constant mode so that the discrete
    // mass balance holds to round-off.
    const double defect = p.tau * p.influx.sum() - lumped.dot(sol.chi - p.chi_prev);
    sol.chi.array() += defect / lumped.sum();
    require_nonnegative(sol.chi, "after the diffusion step");
    sol.mu = nodal_mu(p.mat, p.m, sol.chi);
    return sol;
}

}  // namespace hydride
