#include "hydride/driver.hpp"
#include "hydride/mech_phase.hpp"

#include <doctest.h>

#include <limits>
#include <random>

using namespace hydride;
using doctest::Approx;

TEST_CASE("phase prox oracle values")
{
    CHECK(phase_nodal_prox(1.0, 0.3, 0.0, 0.05, 0.0, 1.0) == Approx(0.25).epsilon(1e-15));
    CHECK(phase_nodal_prox(1.0, 0.03, 0.0, 0.05, 0.0, 1.0) == 0.0);
    CHECK(phase_nodal_prox(1.0, 1.5, 1.0, 0.05, 0.0, 1.0) == 1.0);
    CHECK(phase_nodal_prox(1.0, -0.4, 0.5, 0.0, 0.0, 1.0) == 0.0);
    CHECK(phase_nodal_prox(1.0, 0.4, 0.5, 0.0, 0.0, 1.0) == Approx(0.4));
    CHECK(phase_nodal_prox<float>(1.0f, 0.3f, 0.0f, 0.05f, 0.0f, 1.0f) == Approx(0.25f));
}

TEST_CASE("prox satisfies its optimality condition")
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int n = 0; n < 500; ++n) {
        const double a = 0.1 + 10.0 * unit(rng);
        const double b = 3.0 * unit(rng) - 1.0;
        const double p = unit(rng);
        const double kappa = unit(rng);
        const double v = phase_nodal_prox(a, b, p, kappa, 0.0, 1.0);
        auto f = [&](double x) { return 0.5 * a * (x - b) * (x - b) + kappa * std::abs(x - p); };
        for (double d : {1e-4, -1e-4}) {
            const double x = std::clamp(v + d, 0.0, 1.0);
            CHECK(f(v) <= f(x) + 1e-14);
        }
    }
}

TEST_CASE("stability limit and tau_max")
{
    auto mat = MaterialModel::desk_default(1);
    CHECK(stability_limit(mat, 3.0) == std::numeric_limits<double>::infinity());
    CHECK(tau_max(mat, 0.05, 3.0) == 0.05);
    mat.double_well = 26.0;
    CHECK(stability_limit(mat, 3.0) == Approx(1.0 / 256.0).epsilon(1e-10));
    CHECK(tau_max(mat, 0.05, 3.0) == Approx(1.0 / 256.0).epsilon(1e-10));
    CHECK(tau_max(mat, 0.001, 3.0) == 0.001);
    const Mesh mesh = build_mesh(1, {1.0}, {5});
    CHECK_THROWS_AS(MechPhaseSolver(mesh, mat, 0.01), ConfigError);
}

namespace {

struct StepFixture {
    Mesh mesh = build_mesh(1, {1.0}, {21});
    MaterialModel mat = MaterialModel::desk_default(1);

    MechPhaseProblem problem(double u_slope, double chi, double w) const
    {
        MechPhaseProblem p{mesh, mat};
        const int n = mesh.num_nodes();
        p.u_prev.resize(n);
        for (int i = 0; i < n; ++i) p.u_prev[i] = u_slope * mesh.node(i).x();
        p.u_prev2 = p.u_prev;
        p.m_prev = Vector::Zero(n);
        p.chi_prev = Vector::Constant(n, chi);
        p.w_prev = Vector::Constant(n, w);
        p.tau = 1e-3;
        p.load = Vector::Zero(n);
        return p;
    }
};

}  // namespace

TEST_CASE_FIXTURE(StepFixture, "mechanical step decreases the incremental functional and respects the box")
{
    const auto p = problem(0.1, 0.5, 1.0);
    const MechPhaseSolver solver(mesh, mat, p.tau);
    const auto sol = solver.solve(p);
    CHECK(sol.objective_after <= sol.objective_before + 1e-10 * (1.0 + std::abs(sol.objective_before)));
    CHECK(sol.m.minCoeff() >= 0.0);
    CHECK(sol.m.maxCoeff() <= 1.0);
    CHECK(sol.residual <= 1e-10);
    CHECK(solver.objective(p, sol.u, sol.m) == Approx(sol.objective_after).epsilon(1e-12));

    // Random admissible perturbations never beat the minimiser.
    std::mt19937_64 rng(5);
    std::normal_distribution<double> noise(0.0, 1e-3);
    for (int trial = 0; trial < 20; ++trial) {
        Vector u = sol.u;
        Vector m = sol.m;
        for (int i = 0; i < u.size(); ++i) u[i] += noise(rng);
        for (int i = 0; i < m.size(); ++i) m[i] = std::clamp(m[i] + noise(rng), 0.0, 1.0);
        CHECK(solver.objective(p, u, m) >= sol.objective_after - 1e-12);
    }
}

TEST_CASE_FIXTURE(StepFixture, "equilibrium state is a fixed point")
{
    // m = 0 = a(0), no strain, no temperature: nothing drives the system.
    const auto p = problem(0.0, 0.0, 0.0);
    const auto sol = solve_mech_phase_step(p);
    CHECK(sol.u.norm() < 1e-12);
    CHECK(sol.m.norm() < 1e-12);
    CHECK(sol.iterations >= 1);
}

TEST_CASE_FIXTURE(StepFixture, "activation threshold pins small driving forces")
{
    // With chi = 0.1 the driving force k(m - a) is below r and m must stick.
    mat.activation_threshold = 1.0;
    const auto p = problem(0.0, 0.1, 0.0);
    const auto sol = solve_mech_phase_step(p);
    CHECK(sol.m.cwiseAbs().maxCoeff() < 1e-14);
    CHECK(sol.activation.cwiseAbs().maxCoeff() <= 1.0 + 1e-12);
}
