#include "hydride/constitutive.hpp"
#include "hydride/diffusion.hpp"
#include "hydride/heat.hpp"

#include <doctest.h>

#include <random>

using namespace hydride;
using doctest::Approx;

namespace {

Vector affine(const Mesh& mesh, double slope, double offset = 0.0)
{
    Vector v(mesh.num_nodes());
    for (int i = 0; i < mesh.num_nodes(); ++i) v[i] = offset + slope * mesh.node(i).x();
    return v;
}

}  // namespace

TEST_CASE("constant hydrogen state is a fixed point")
{
    const Mesh mesh = build_mesh(1, {1.0}, {11});
    const auto mat = MaterialModel::desk_default(1);
    const int n = mesh.num_nodes();
    DiffusionProblem p{mesh, mat, affine(mesh, 0.1), Vector::Constant(n, 0.3), Vector::Ones(n),
                       Vector::Constant(n, 0.5), 1e-3, Vector::Zero(n)};
    const auto sol = solve_chi_step(p);
    CHECK((sol.chi - p.chi_prev).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("boundary influx is conserved exactly")
{
    const Mesh mesh = build_mesh(2, {1.0, 1.0}, {7, 7});
    const auto mat = MaterialModel::desk_default(2);
    const int n = mesh.num_nodes();
    const Vector mass = lumped_mass(mesh);
    const Vector influx = boundary_functional(mesh, [](const Facet&, const Point&) { return 0.25; });
    const double tau = 1e-3;
    Vector chi = Vector::Constant(n, 0.5);
    const double start = mass.dot(chi);
    for (int k = 0; k < 10; ++k) {
        DiffusionProblem p{mesh, mat, Vector::Zero(2 * n), Vector::Zero(n), Vector::Ones(n), chi, tau, influx};
        chi = solve_chi_step(p).chi;
    }
    CHECK(std::abs(mass.dot(chi) - start - 10 * tau * 0.25 * 4.0) < 1e-12);
}

TEST_CASE("chi stays non-negative and conserved from rough data")
{
    const Mesh mesh = build_mesh(1, {1.0}, {41});
    const auto mat = MaterialModel::desk_default(1);
    const int n = mesh.num_nodes();
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Vector chi(n);
    Vector m(n);
    for (int i = 0; i < n; ++i) {
        chi[i] = (i % 3 == 0) ? 0.0 : 2.0 * unit(rng);
        m[i] = unit(rng);
    }
    const Vector mass = lumped_mass(mesh);
    DiffusionProblem p{mesh, mat, Vector::Zero(n), m, Vector::Ones(n), chi, 1e-3, Vector::Zero(n)};
    const auto sol = solve_chi_step(p);
    CHECK(sol.chi.minCoeff() >= -1e-12);
    CHECK(std::abs(mass.dot(sol.chi) - mass.dot(chi)) < 1e-12);
    for (int i = 0; i < n; ++i) CHECK(sol.mu[i] == Approx(chemical_potential(mat, m[i], std::max(sol.chi[i], 0.0))));
}

TEST_CASE("chemical potential gradients")
{
    const Mesh mesh = build_mesh(1, {1.0}, {9});
    const auto mat = MaterialModel::desk_default(1);
    const int n = mesh.num_nodes();
    const auto flat = assemble_mu(mesh, mat, Vector::Constant(n, 0.2), Vector::Constant(n, 0.7));
    for (const auto& g : flat.gradient) CHECK(g.norm() < 1e-14);
    const auto dry = assemble_mu(mesh, mat, affine(mesh, 0.8), Vector::Zero(n));
    for (const auto& g : dry.gradient) CHECK(g.norm() < 1e-14);
}

namespace {

struct HeatFixture {
    Mesh mesh = build_mesh(1, {1.0}, {11});
    MaterialModel mat = MaterialModel::desk_default(1);

    HeatProblem problem(const Vector& w_prev) const
    {
        const int n = mesh.num_nodes();
        HeatProblem p{mesh, mat};
        p.u = p.u_prev = Vector::Zero(n);
        p.m = p.m_prev = Vector::Zero(n);
        p.chi = Vector::Zero(n);
        p.mu = Vector::Zero(n);
        p.grad_mu.assign(mesh.num_elements(), Point::Zero());
        p.w_prev = w_prev;
        p.tau = 1e-2;
        p.supply = Vector::Zero(n);
        return p;
    }
};

}  // namespace

TEST_CASE_FIXTURE(HeatFixture, "heat step without production keeps a constant enthalpy")
{
    const auto p = problem(Vector::Constant(mesh.num_nodes(), 0.8));
    const auto sol = solve_w_step(p);
    CHECK((sol.w - p.w_prev).cwiseAbs().maxCoeff() < 1e-13);
    CHECK(dissipation_rhs(p, p.w_prev).total().norm() == 0.0);
}

TEST_CASE_FIXTURE(HeatFixture, "phase and activation heating")
{
    auto p = problem(Vector::Zero(mesh.num_nodes()));
    p.m = Vector::Constant(mesh.num_nodes(), 0.2 * p.tau);
    const auto h = dissipation_rhs(p, p.w_prev);
    // alpha |m_dot|^2 + r |m_dot| = 0.04 + 0.01 per unit volume
    CHECK((h.phase + h.activation).sum() == Approx(0.05).epsilon(1e-12));
    CHECK(h.adiabatic.norm() == 0.0);
}

TEST_CASE_FIXTURE(HeatFixture, "tested with one, the heat step balances its production")
{
    auto p = problem(Vector::Constant(mesh.num_nodes(), 0.5));
    const Vector x = [&] {
        Vector v(mesh.num_nodes());
        for (int i = 0; i < mesh.num_nodes(); ++i) v[i] = mesh.node(i).x();
        return v;
    }();
    p.u = 0.02 * x;  // uniform strain rate 2
    const auto sol = solve_w_step(p);
    const Vector mass = lumped_mass(mesh);
    const double gained = mass.dot(sol.w - p.w_prev);
    CHECK(sol.production.viscous.sum() > 0.0);
    CHECK(gained == Approx(p.tau * sol.production.total().sum()).epsilon(1e-9));
    CHECK(sol.w.minCoeff() >= 0.0);
}
