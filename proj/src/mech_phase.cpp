#include "hydride/mech_phase.hpp"

#include "hydride/constitutive.hpp"
#include "hydride/linear_solve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace hydride {

double stability_limit(const MaterialModel& mat, double chi_max)
{
    const double inf = inf_d2phi1_dm2(mat, chi_max);
    if (inf >= 0.0) return std::numeric_limits<double>::infinity();
    return mat.phase_viscosity * mat.phase_viscosity / (inf * inf);
}

double tau_max(const MaterialModel& mat, double horizon, double chi_max)
{
    return std::min(horizon, stability_limit(mat, chi_max));
}

namespace {

// Root-mean-square of a nodal density with respect to the lumped mass.
double rms(const Vector& lumped, const Vector& density)
{
    return std::sqrt(lumped.dot(density.cwiseAbs2()) / lumped.sum());
}

// Same for a dim-interleaved vector of integrated nodal forces.
double rms_force(const Vector& lumped, int dim, const Vector& force)
{
    double s = 0.0;
    for (Eigen::Index i = 0; i < force.size(); ++i) {
        const double m = lumped[i / dim];
        s += force[i] * force[i] / m;
    }
    return std::sqrt(s / lumped.sum());
}

double max_row_ratio(const SparseMatrix& a, const Vector& lumped)
{
    double best = 0.0;
    Vector rows = Vector::Zero(a.rows());
    for (int k = 0; k < a.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(a, k); it; ++it) rows[it.row()] += std::abs(it.value());
    for (Eigen::Index i = 0; i < rows.size(); ++i) best = std::max(best, rows[i] / lumped[i]);
    return best;
}

}  // namespace

struct MechPhaseSolver::Frozen {
    const MechPhaseProblem& problem;
    Vector swell;        // a(chi^{k-1})
    Vector s_adiabatic;  // s_a(m^{k-1}, w^{k-1})
    Vector base_rhs;     // inertia, viscosity, adiabatic stress and load
    Vector sigma_load;   // int sigma_a : eps(N_p)
    SparseMatrix couple; // u-dofs x nodes: int C eps_tr m : eps(N_p)
    SparseMatrix swell_mass;  // nodes x nodes: int C eps_tr : eps_tr m m'
};

MechPhaseSolver::MechPhaseSolver(const Mesh& mesh, const MaterialModel& mat, double tau, MechPhaseOptions options)
    : mesh_(mesh), mat_(mat), tau_(tau), options_(options)
{
    if (!(tau > 0.0)) throw ConfigError("time step must be positive");
    if (mat.dim != mesh.dim()) throw ConfigError("material and mesh dimensions differ");
    const double limit = stability_limit(mat, options.chi_max);
    if (tau > limit) {
        std::ostringstream os;
        os << "time step " << tau << " exceeds the stability threshold alpha^2/|inf d2phi1/dm2|^2 = " << limit
           << "; the incremental problem loses convexity";
        throw ConfigError(os.str());
    }
    lumped_ = lumped_mass(mesh);
    laplacian_ = stiffness(mesh, Vector::Ones(mesh.num_elements()));
    elastic_ = elasticity_stiffness(mesh, mat.elastic);
    viscous_ = elasticity_stiffness(mesh, mat.viscous);

    const int dim = mesh.dim();
    Vector inertia(dim * mesh.num_nodes());
    for (int i = 0; i < mesh.num_nodes(); ++i)
        inertia.segment(i * dim, dim).setConstant(mat.density * lumped_[i] / (tau * tau));
    system_ = elastic_ + viscous_ / tau;
    SparseMatrix diag(inertia.size(), inertia.size());
    diag.setIdentity();
    diag = inertia.asDiagonal() * diag;
    system_ += diag;
    system_.makeCompressed();

    const Tensor2 c_eps = mat.elastic.apply(mat.eps_tr, dim);
    const double swell_curv = contract(c_eps, mat.eps_tr);
    lipschitz_ = mat.gradient_coeff * max_row_ratio(laplacian_, lumped_) + swell_curv +
                 2.0 * std::abs(mat.double_well);
    lipschitz_ = std::max(lipschitz_, 1e-12);
}

MechPhaseSolver::Frozen MechPhaseSolver::freeze(const MechPhaseProblem& p) const
{
    const int n = mesh_.num_nodes();
    const int dim = mesh_.dim();
    const int npe = mesh_.nodes_per_element();
    if (p.u_prev.size() != dim * n || p.u_prev2.size() != dim * n || p.load.size() != dim * n ||
        p.m_prev.size() != n || p.chi_prev.size() != n || p.w_prev.size() != n)
        throw std::invalid_argument("MechPhaseProblem: field sizes do not match the mesh");
    if (std::abs(p.tau - tau_) > 1e-15 * tau_) throw std::invalid_argument("MechPhaseProblem: tau mismatch");
    for (int i = 0; i < n; ++i) {
        if (p.w_prev[i] < -1e-12 || p.chi_prev[i] < -1e-12)
            throw InvariantViolation("mech/phase step received negative chi or w at node " + std::to_string(i));
        if (p.m_prev[i] < mat_.m_lo || p.m_prev[i] > mat_.m_hi)
            throw InvariantViolation("mech/phase step received m outside the phase box at node " +
                                     std::to_string(i));
    }

    Frozen fr{p, {}, {}, {}, {}, {}, {}};
    fr.swell.resize(n);
    fr.s_adiabatic.resize(n);
    std::vector<Tensor2> sig(n);
    for (int i = 0; i < n; ++i) {
        const double w = std::max(p.w_prev[i], 0.0);
        fr.swell[i] = swelling(mat_, std::max(p.chi_prev[i], 0.0));
        fr.s_adiabatic[i] = s_a(mat_, p.m_prev[i], w);
        sig[i] = sigma_a(mat_, p.m_prev[i], w);
    }

    const Tensor2 c_eps = mat_.elastic.apply(mat_.eps_tr, dim);
    const double swell_curv = contract(c_eps, mat_.eps_tr);
    std::vector<Triplet> ct;
    std::vector<Triplet> qt;
    fr.sigma_load = Vector::Zero(dim * n);
    for (int e = 0; e < mesh_.num_elements(); ++e) {
        const auto basis = basis_strains(mesh_, e);
        const auto& el = mesh_.element(e);
        const double share = mesh_.volume(e) / npe;
        Tensor2 sig_e = Tensor2::Zero();
        for (int a = 0; a < npe; ++a) sig_e += sig[el[a]];
        sig_e /= npe;
        for (int q = 0; q < dim * npe; ++q) {
            const int row = el[q / dim] * dim + q % dim;
            const double proj = contract(c_eps, basis[q]);
            fr.sigma_load[row] += mesh_.volume(e) * contract(sig_e, basis[q]);
            for (int a = 0; a < npe; ++a) ct.emplace_back(row, el[a], share * proj);
        }
        for (int a = 0; a < npe; ++a)
            for (int b = 0; b < npe; ++b) qt.emplace_back(el[a], el[b], share / npe * swell_curv);
    }
    fr.couple.resize(dim * n, n);
    fr.couple.setFromTriplets(ct.begin(), ct.end());
    fr.swell_mass.resize(n, n);
    fr.swell_mass.setFromTriplets(qt.begin(), qt.end());

    Vector inertia_base(dim * n);
    for (int i = 0; i < n; ++i)
        inertia_base.segment(i * dim, dim) = (mat_.density * lumped_[i] / (tau_ * tau_)) *
                                             (2.0 * p.u_prev.segment(i * dim, dim) - p.u_prev2.segment(i * dim, dim));
    fr.base_rhs = inertia_base + viscous_ * p.u_prev / tau_ - fr.sigma_load + p.load;
    return fr;
}

Vector MechPhaseSolver::u_rhs(const Frozen& fr, const Vector& m) const { return fr.base_rhs + fr.couple * m; }

Vector MechPhaseSolver::smooth_gradient(const Frozen& fr, const Vector& u, const Vector& m) const
{
    Vector g = fr.swell_mass * m - fr.couple.transpose() * u + mat_.gradient_coeff * (laplacian_ * m);
    const double d0 = mat_.double_well;
    for (Eigen::Index i = 0; i < m.size(); ++i) {
        const double mi = m[i];
        g[i] += lumped_[i] * (2.0 * d0 * mi * (1.0 - mi) * (1.0 - 2.0 * mi) + fr.s_adiabatic[i]);
    }
    return g;
}

Vector MechPhaseSolver::prox_step(const Frozen& fr, const Vector& y, const Vector& grad, double step) const
{
    const double c = mat_.coupling + mat_.phase_viscosity / tau_;
    const double a = 1.0 / step + c;
    Vector out(y.size());
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        const double p = fr.problem.m_prev[i];
        const double b0 = (mat_.coupling * fr.swell[i] + mat_.phase_viscosity / tau_ * p) / c;
        const double z = y[i] - step * grad[i] / lumped_[i];
        const double b = (z / step + c * b0) / a;
        out[i] = phase_nodal_prox(a, b, p, mat_.activation_threshold, mat_.m_lo, mat_.m_hi);
    }
    return out;
}

double MechPhaseSolver::prox_residual(const Frozen& fr, const Vector& u, const Vector& m) const
{
    const double step = 1.0 / lipschitz_;
    const Vector next = prox_step(fr, m, smooth_gradient(fr, u, m), step);
    return rms(lumped_, next - m) / step;
}

void MechPhaseSolver::minimise_phase(const Frozen& fr, const Vector& u, Vector& m) const
{
    const double step = 1.0 / lipschitz_;
    const double tol = 0.1 * options_.opt_tol;
    Vector x = m;
    Vector y = m;
    double theta = 1.0;
    for (int it = 0; it < options_.prox_max; ++it) {
        const Vector x_next = prox_step(fr, y, smooth_gradient(fr, u, y), step);
        const double mapping = rms(lumped_, x_next - y) / step;
        // Gradient-based restart keeps the accelerated scheme monotone in practice.
        if ((y - x_next).dot(lumped_.asDiagonal() * (x_next - x)) > 0.0) {
            theta = 1.0;
            y = x_next;
        } else {
            const double theta_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * theta * theta));
            y = x_next + ((theta - 1.0) / theta_next) * (x_next - x);
            theta = theta_next;
        }
        x = x_next;
        if (mapping <= tol) {
            m = x;
            return;
        }
    }
    m = x;
    throw SolverFailure("phase block: accelerated proximal gradient did not converge in " +
                        std::to_string(options_.prox_max) + " iterations");
}

double MechPhaseSolver::objective(const MechPhaseProblem& p, const Vector& u, const Vector& m) const
{
    return evaluate(freeze(p), u, m);
}

double MechPhaseSolver::evaluate(const Frozen& fr, const Vector& u, const Vector& m) const
{
    const MechPhaseProblem& p = fr.problem;
    const int dim = mesh_.dim();
    for (Eigen::Index i = 0; i < m.size(); ++i)
        if (m[i] < mat_.m_lo || m[i] > mat_.m_hi) return std::numeric_limits<double>::infinity();

    double j = 0.0;
    for (int i = 0; i < mesh_.num_nodes(); ++i) {
        const auto acc = u.segment(i * dim, dim) - 2.0 * p.u_prev.segment(i * dim, dim) + p.u_prev2.segment(i * dim, dim);
        j += 0.5 * mat_.density * lumped_[i] / (tau_ * tau_) * acc.squaredNorm();
    }
    const Vector du = u - p.u_prev;
    j += 0.5 * u.dot(elastic_ * u) - u.dot(fr.couple * m) + 0.5 * m.dot(fr.swell_mass * m);
    j += 0.5 / tau_ * du.dot(viscous_ * du);
    j += u.dot(fr.sigma_load) - p.load.dot(u);
    j += 0.5 * mat_.gradient_coeff * m.dot(laplacian_ * m);
    for (int i = 0; i < mesh_.num_nodes(); ++i) {
        const double dm = m[i] - p.m_prev[i];
        j += lumped_[i] * (phi1(mat_, m[i], std::max(p.chi_prev[i], 0.0)) +
                           0.5 * mat_.phase_viscosity / tau_ * dm * dm + mat_.activation_threshold * std::abs(dm) +
                           fr.s_adiabatic[i] * m[i]);
    }
    return j;
}

MechPhaseSolution MechPhaseSolver::solve(const MechPhaseProblem& p) const
{
    const Frozen fr = freeze(p);
    const int dim = mesh_.dim();

    MechPhaseSolution sol;
    sol.u = 2.0 * p.u_prev - p.u_prev2;
    sol.m = p.m_prev;
    bool converged = false;
    for (int it = 1; it <= options_.opt_max; ++it) {
        sol.iterations = it;
        const Vector rhs = u_rhs(fr, sol.m);
        sol.u = solve_spd(system_, rhs, sol.u, options_.cg_tol, "displacement block");
        minimise_phase(fr, sol.u, sol.m);
        const Vector rhs_new = u_rhs(fr, sol.m);
        const double scale = std::max(1.0, rms_force(lumped_, dim, rhs_new));
        const double r_u = rms_force(lumped_, dim, system_ * sol.u - rhs_new) / scale;
        const double r_m = prox_residual(fr, sol.u, sol.m);
        sol.residual = std::max(r_u, r_m);
        if (sol.residual <= options_.opt_tol) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw SolverFailure("mech/phase alternation did not converge: first-order residual " +
                            std::to_string(sol.residual) + " after " + std::to_string(sol.iterations) +
                            " sweeps");

    // Split the m-stationarity defect into the activation subgradient and the
    // normal-cone multiplier.
    const int n = mesh_.num_nodes();
    const Vector grad = smooth_gradient(fr, sol.u, sol.m);
    sol.xi.resize(n);
    sol.activation.resize(n);
    const double r = mat_.activation_threshold;
    for (int i = 0; i < n; ++i) {
        const double dm = sol.m[i] - p.m_prev[i];
        const double local = mat_.coupling * (sol.m[i] - fr.swell[i]) + mat_.phase_viscosity / tau_ * dm;
        const double g = -(grad[i] / lumped_[i] + local);
        const double rho = dm > 0.0 ? r : (dm < 0.0 ? -r : std::clamp(g, -r, r));
        sol.activation[i] = rho;
        sol.xi[i] = g - rho;
    }

    sol.objective_before = evaluate(fr, p.u_prev, p.m_prev);
    sol.objective_after = evaluate(fr, sol.u, sol.m);
    const double slack = 1e-10 * (1.0 + std::abs(sol.objective_before));
    if (sol.objective_after > sol.objective_before + slack)
        throw InvariantViolation("incremental functional increased: " + std::to_string(sol.objective_before) +
                                 " -> " + std::to_string(sol.objective_after));
    return sol;
}

MechPhaseSolution solve_mech_phase_step(const MechPhaseProblem& problem, const MechPhaseOptions& options)
{
    return MechPhaseSolver(problem.mesh, problem.mat, problem.tau, options).solve(problem);
}

}  // namespace hydride
