#include "hydride/driver.hpp"
#include "hydride/energy_audit.hpp"

#include <doctest.h>

#include <cmath>

using namespace hydride;
using doctest::Approx;

namespace {

RunConfig equilibrium_config()
{
    RunConfig c = RunConfig::desk_default();
    c.initial.u0 = {FieldExpr::constant(0.0)};
    c.initial.chi0 = FieldExpr::constant(0.0);
    c.initial.theta0 = FieldExpr::constant(0.0);
    c.sources = SourceTerms::none(1);
    c.horizon = 0.02;
    return c;
}

const Trajectory& desk_run()
{
    static const Trajectory traj = run(RunConfig::desk_default());
    return traj;
}

}  // namespace

TEST_CASE("repeated equilibrium state has zero increments")
{
    const RunConfig c = equilibrium_config();
    const Mesh mesh = build_mesh(c.domain);
    const State s = initial_state(mesh, c);
    const StepLoads loads = assemble_loads(mesh, c.sources, 0.0);
    const LedgerRow prev = energy_levels(mesh, c.material, s);
    const LedgerRow row = ledger_step(mesh, c.material, s, s, c.tau, loads);
    for (double v : {row.diss_viscous, row.diss_phase, row.diss_activation, row.diss_diffusion, row.work(),
                     row.numerical_dissipation()})
        CHECK(v == 0.0);
    for (double nu : {0.0, 0.5, 1.0}) CHECK(balance_increment(prev, row, nu) == Approx(0.0));
}

TEST_CASE("viscous increment of a single element")
{
    RunConfig c = equilibrium_config();
    c.domain.resolution = {2};
    const Mesh mesh = build_mesh(c.domain);
    const State prev = initial_state(mesh, c);
    State cur = prev;
    const double tau = 0.1;
    cur.t = tau;
    cur.u << 0.0, 0.01;
    cur.v = (cur.u - prev.u) / tau;
    const auto row = ledger_step(mesh, c.material, prev, cur, tau, assemble_loads(mesh, c.sources, tau));
    // tau D eps_dot^2 |e| with D = 0.1, eps_dot = 0.1
    CHECK(row.diss_viscous == Approx(1e-4).epsilon(1e-12));
}

TEST_CASE("global equilibrium is constant in time")
{
    const Trajectory traj = run(equilibrium_config());
    CHECK(traj.steps() == 20);
    for (const auto& s : traj.states) {
        CHECK((s.u - traj.states[0].u).norm() == Approx(0.0));
        CHECK((s.m - traj.states[0].m).norm() == Approx(0.0));
        CHECK((s.chi - traj.states[0].chi).norm() == Approx(0.0));
        CHECK((s.w - traj.states[0].w).norm() == Approx(0.0));
    }
    for (double nu : {0.0, 0.5, 1.0})
        for (double r : balance_residual(traj, nu)) CHECK(r == Approx(0.0));
    for (const auto& [name, value] : apriori_monitor(traj).entries())
        if (name != "u_sup_l2" && name != "w_sup_l1") CHECK(value == Approx(0.0));
}

TEST_CASE("desk run invariants")
{
    const Trajectory& traj = desk_run();
    CHECK(traj.steps() == 50);
    CHECK(traj.states.size() == 51);
    for (int k = 0; k <= traj.steps(); ++k) CHECK(traj.states[k].t == Approx(k * 1e-3).epsilon(1e-14));
    for (std::size_t k = 1; k < traj.ledger.size(); ++k) {
        const auto& r = traj.ledger[k];
        CHECK(r.diss_viscous >= 0.0);
        CHECK(r.diss_phase >= 0.0);
        CHECK(r.diss_activation >= 0.0);
        CHECK(r.diss_diffusion >= 0.0);
        CHECK(r.min_chi >= -1e-12);
        CHECK(r.min_w >= -1e-12);
        for (int i = 0; i < traj.states[k].m.size(); ++i) {
            CHECK(traj.states[k].m[i] >= 0.0);
            CHECK(traj.states[k].m[i] <= 1.0);
        }
    }
    for (double r : balance_residual(traj, 0.0)) CHECK(std::abs(r) < 1e-8);
    for (double s : balance_residual(traj, 0.5)) CHECK(s >= -1e-9);
    const double gained = traj.ledger.back().mass_chi - traj.ledger.front().mass_chi;
    CHECK(std::abs(gained - 0.05 * 0.5) < 1e-12);
}

TEST_CASE("charging raises the phase toward the swelling curve near the charged end")
{
    const Trajectory& traj = desk_run();
    const State& last = traj.states.back();
    const int n = static_cast<int>(last.m.size());
    CHECK(last.chi[0] > last.chi[n - 1]);
    CHECK(last.m[0] > last.m[n - 1]);
    CHECK(last.m[0] > 0.0);
}

TEST_CASE("time interpolants")
{
    const Trajectory& traj = desk_run();
    const double tau = traj.tau;
    for (int k : {1, 7, 50}) {
        const Vector& s = traj.states[k].m;
        CHECK((interpolant_eval(traj, Field::m, InterpolantKind::affine, k * tau) - s).norm() < 1e-14);
        CHECK((interpolant_eval(traj, Field::m, InterpolantKind::backward, k * tau) - s).norm() < 1e-14);
        const Vector mid = 0.5 * (traj.states[k - 1].m + s);
        CHECK((interpolant_eval(traj, Field::m, InterpolantKind::affine, (k - 0.5) * tau) - mid).norm() < 1e-14);
        CHECK((interpolant_eval(traj, Field::m, InterpolantKind::forward, (k - 0.5) * tau) - traj.states[k - 1].m)
                  .norm() < 1e-14);
    }
    // The velocity interpolant has slope (u^k - 2u^{k-1} + u^{k-2}) / tau^2.
    for (int k : {2, 30}) {
        const double t0 = (k - 1) * tau + 0.25 * tau;
        const double t1 = (k - 1) * tau + 0.75 * tau;
        const Vector slope = (interpolant_eval(traj, Field::u, InterpolantKind::velocity_affine, t1) -
                              interpolant_eval(traj, Field::u, InterpolantKind::velocity_affine, t0)) /
                             (0.5 * tau);
        const Vector expected =
            (traj.states[k].u - 2.0 * traj.states[k - 1].u + traj.states[k - 2].u) / (tau * tau);
        CHECK((slope - expected).norm() <= 1e-8 * (1.0 + expected.norm()));
    }
}

TEST_CASE("backward and affine interpolants differ by tau / sqrt(3) times the rate")
{
    const Trajectory& traj = desk_run();
    const Vector mass = lumped_mass(traj.mesh);
    const double tau = traj.tau;
    const double gauss[3] = {0.5 - std::sqrt(0.15), 0.5, 0.5 + std::sqrt(0.15)};
    const double weight[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
    double diff2 = 0.0;
    double rate2 = 0.0;
    for (int k = 1; k <= traj.steps(); ++k) {
        const Vector r = rate(traj, Field::m, k);
        rate2 += tau * r.dot(mass.asDiagonal() * r);
        for (int q = 0; q < 3; ++q) {
            const double t = (k - 1 + gauss[q]) * tau;
            const Vector d = interpolant_eval(traj, Field::m, InterpolantKind::backward, t) -
                             interpolant_eval(traj, Field::m, InterpolantKind::affine, t);
            diff2 += weight[q] * tau * d.dot(mass.asDiagonal() * d);
        }
    }
    CHECK(std::sqrt(diff2) == Approx(tau / std::sqrt(3.0) * std::sqrt(rate2)).epsilon(1e-10));
}

TEST_CASE("refinement of a converged trajectory reports zero differences")
{
    const RefineReport report = refine_study(equilibrium_config(), std::vector<double>{2e-3, 1e-3});
    REQUIRE(report.differences.size() == 1);
    for (const auto& [name, value] : report.differences[0].entries()) CHECK(value == Approx(0.0));
}

TEST_CASE("refinement levels are independent of scheduling")
{
    RunConfig c = RunConfig::desk_default();
    c.horizon = 0.02;
    const RefineReport a = refine_study(c, 3);
    const RefineReport b = refine_study(c, 3);
    REQUIRE(a.levels.size() == 3);
    for (std::size_t i = 0; i < a.levels.size(); ++i) CHECK(a.levels[i].defect_nu1 == b.levels[i].defect_nu1);
    CHECK(a.levels[1].tau == Approx(5e-4));
}

TEST_CASE("configuration checks")
{
    RunConfig c = RunConfig::desk_default();
    CHECK_NOTHROW(check_config(c));
    SUBCASE("phase outside the box") { c.initial.m0 = FieldExpr::constant(1.5); }
    SUBCASE("negative hydrogen") { c.initial.chi0 = FieldExpr::ramp(FieldExpr::Axis::x, 0.1, -0.5); }
    SUBCASE("negative temperature") { c.initial.theta0 = FieldExpr::constant(-1.0); }
    SUBCASE("steps do not tile the horizon") { c.tau = 3e-3; }
    SUBCASE("time-dependent initial data") { c.initial.m0 = FieldExpr::ramp(FieldExpr::Axis::t, 0.0, 1.0); }
    SUBCASE("negative heat supply") { c.sources.heat = FieldExpr::ramp(FieldExpr::Axis::t, 0.0, -1.0); }
    CHECK_THROWS_AS(check_config(c), ConfigError);
}
