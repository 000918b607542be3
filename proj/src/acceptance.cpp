#include "hydride/acceptance.hpp"

#include "hydride/constitutive.hpp"
#include "hydride/mech_phase.hpp"
#include "hydride/output.hpp"

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <numbers>
#include <random>

namespace hydride {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

CriterionResult result(bool passed, std::string detail)
{
    CriterionResult r;
    r.passed = passed;
    r.detail = std::move(detail);
    return r;
}

// 1D linear regime: no mechanics, no swelling coupling, nx = 200.
RunConfig oracle_config()
{
    RunConfig c = RunConfig::desk_default();
    c.sources = SourceTerms::none(1);
    c.domain.resolution = {200};
    c.tau = 1e-5;
    c.horizon = 0.02;
    c.initial.u0 = {FieldExpr::constant(0.0)};
    c.initial.m0 = FieldExpr::constant(0.0);
    return c;
}

double decay_rate(const Trajectory& traj, Field field)
{
    const double a0 = cosine_mode(traj.mesh, field_of(traj.states.front(), field));
    const double a1 = cosine_mode(traj.mesh, field_of(traj.states.back(), field));
    return -std::log(a1 / a0) / traj.horizon();
}

double total_influx(const Trajectory& traj)
{
    double s = 0.0;
    for (const auto& row : traj.ledger) s += row.influx;
    return s;
}

CriterionResult non_negativity()
{
    const auto start = Clock::now();
    const Trajectory traj = run(RunConfig::desk_default());
    const double elapsed = seconds_since(start);
    double min_chi = INFINITY;
    double min_w = INFINITY;
    for (const auto& row : traj.ledger) {
        min_chi = std::min(min_chi, row.min_chi);
        min_w = std::min(min_w, row.min_w);
    }
    const bool ok = min_chi >= -1e-12 && min_w >= -1e-12 && elapsed < 10.0;
    return result(ok, fmt::format("min chi {:.3e}, min w {:.3e}, runtime {:.2f} s", min_chi, min_w, elapsed));
}

CriterionResult conservation()
{
    struct Case {
        std::string name;
        RunConfig config;
        double expected;  // sum of tau h_s |Gamma|
    };
    std::vector<Case> cases;
    {
        RunConfig closed = RunConfig::desk_default();
        closed.sources = SourceTerms::none(1);
        cases.push_back({"closed 1D", closed, 0.0});
    }
    {
        const RunConfig desk = RunConfig::desk_default();
        cases.push_back({"desk 1D", desk, desk.horizon * 0.5 * 1.0});
    }
    {
        RunConfig square = builtin_2d_config();
        for (auto& h : square.sources.hydrogen_flux) h = FieldExpr::constant(0.5);
        cases.push_back({"2D all sides", square, square.horizon * 0.5 * 4.0});
    }
    bool ok = true;
    std::string detail;
    for (const auto& c : cases) {
        const Trajectory traj = run(c.config);
        const double gained = traj.ledger.back().mass_chi - traj.ledger.front().mass_chi;
        const double vs_ledger = std::abs(gained - total_influx(traj));
        const double vs_data = std::abs(gained - c.expected);
        ok = ok && vs_ledger <= 1e-12 && vs_data <= 1e-12;
        detail += fmt::format("{}{}: |gain - ledger| {:.1e}, |gain - sum tau h|G|| {:.1e}", detail.empty() ? "" : "; ",
                              c.name, vs_ledger, vs_data);
    }
    return result(ok, detail);
}

CriterionResult energy_inequality()
{
    const Trajectory traj = run(RunConfig::desk_default());
    const auto slack = balance_residual(traj, 0.5);
    const double worst = *std::min_element(slack.begin(), slack.end());
    return result(worst >= -1e-9, fmt::format("min nu=1/2 slack {:.3e}", worst));
}

CriterionResult total_energy_consistency()
{
    const RunConfig desk = RunConfig::desk_default();
    const RefineReport report = refine_study(desk, std::vector<double>{1e-3, 5e-4, 2.5e-4});
    const auto& lv = report.levels;
    const double r1 = lv[0].defect_nu1 / lv[1].defect_nu1;
    const double r2 = lv[1].defect_nu1 / lv[2].defect_nu1;
    const bool ok = r1 >= 1.4 && r1 <= 2.6 && r2 >= 1.4 && r2 <= 2.6;
    return result(ok, fmt::format("nu=1 defects {:.3e}, {:.3e}, {:.3e}; ratios {:.3f}, {:.3f}", lv[0].defect_nu1,
                                  lv[1].defect_nu1, lv[2].defect_nu1, r1, r2));
}

CriterionResult stability_threshold()
{
    RunConfig c = RunConfig::desk_default();
    c.material = double_well_material();
    c.horizon = 0.03;
    const double limit = stability_limit(c.material, c.chi_max);

    c.tau = 0.01;
    bool rejected = false;
    try {
        check_config(c);
    } catch (const ConfigError&) {
        rejected = true;
    }
    c.tau = 0.003;
    bool accepted = true;
    std::string why;
    try {
        run(c);
    } catch (const std::exception& e) {
        accepted = false;
        why = e.what();
    }
    const bool ok = rejected && accepted && std::abs(limit - 1.0 / 256.0) < 1e-6;
    return result(ok, fmt::format("limit {:.6f} (1/256 = {:.6f}); tau 0.01 {}; tau 0.003 {}{}", limit, 1.0 / 256.0,
                                  rejected ? "rejected" : "accepted", accepted ? "runs" : "fails: ", why));
}

CriterionResult diffusion_oracle()
{
    RunConfig c = oracle_config();
    c.material.coupling = 0.0;
    c.initial.chi0 = FieldExpr::cosine(FieldExpr::Axis::x, 0.5, 0.1, 1);
    const auto start = Clock::now();
    const Trajectory traj = run(c);
    const double elapsed = seconds_since(start);
    const double expected = 5.0 * std::numbers::pi * std::numbers::pi;
    const double measured = decay_rate(traj, Field::chi);
    const double rel = std::abs(measured / expected - 1.0);
    return result(rel < 0.02 && elapsed < 30.0,
                  fmt::format("rate {:.5f} vs {:.5f} (rel {:.2e}), runtime {:.2f} s", measured, expected, rel, elapsed));
}

CriterionResult conduction_oracle()
{
    RunConfig c = oracle_config();
    c.material.heat_law.kind = HeatLaw::Kind::linear;
    c.material.heat_law.c0 = 2.0;
    c.material.alpha_th = Tensor2::Zero();
    c.initial.chi0 = FieldExpr::constant(0.0);
    c.initial.theta0 = FieldExpr::cosine(FieldExpr::Axis::x, 1.0, 0.1, 1);
    const Trajectory traj = run(c);
    const double expected = std::numbers::pi * std::numbers::pi;
    const double measured = decay_rate(traj, Field::w);
    const double rel = std::abs(measured / expected - 1.0);
    return result(rel < 0.02, fmt::format("rate {:.5f} vs {:.5f} (rel {:.2e})", measured, expected, rel));
}

CriterionResult derivative_check()
{
    std::vector<std::pair<std::string, MaterialModel>> materials;
    materials.emplace_back("desk", MaterialModel::desk_default(1));
    materials.emplace_back("double well", double_well_material());
    {
        MaterialModel m = MaterialModel::desk_default(1);
        m.heat_law.c0_slope = 0.5;
        materials.emplace_back("c(m) slope", m);
    }
    {
        MaterialModel m = MaterialModel::desk_default(1);
        m.heat_law.kind = HeatLaw::Kind::linear;
        materials.emplace_back("linear heat", m);
    }
    materials.emplace_back("desk 2D", MaterialModel::desk_default(2));

    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int checked = 0;
    int failed = 0;
    double worst = 0.0;
    std::string worst_name;

    auto compare = [&](const std::string& name, double analytic, const std::function<double(double)>& f, double x) {
        const double h = 1e-5 * std::max(1.0, std::abs(x));
        const double fd = (f(x + h) - f(x - h)) / (2.0 * h);
        const double err = std::abs(analytic - fd) / std::max(1.0, std::abs(analytic));
        ++checked;
        if (err > 1e-6) ++failed;
        if (err > worst) {
            worst = err;
            worst_name = name;
        }
    };

    for (int p = 0; p < 100; ++p) {
        const auto& [label, mat] = materials[p % materials.size()];
        const double m = unit(rng);
        const double chi = 0.01 + 2.99 * unit(rng);
        const double theta = 0.1 + 4.9 * unit(rng);
        const double w = omega_of_theta(mat, m, theta);
        const int dim = mat.dim;
        Tensor2 e = Tensor2::Zero();
        for (int i = 0; i < dim; ++i)
            for (int j = i; j < dim; ++j) e(i, j) = e(j, i) = 0.2 * (unit(rng) - 0.5);

        compare(label + " a'", swelling_d1(mat, chi), [&](double x) { return swelling(mat, x); }, chi);
        compare(label + " a''", swelling_d2(mat, chi), [&](double x) { return swelling_d1(mat, x); }, chi);
        compare(label + " dphi1/dm", dphi1_dm(mat, m, chi), [&](double x) { return phi1(mat, x, chi); }, m);
        compare(label + " d2phi1/dm2", d2phi1_dm2(mat, m, chi), [&](double x) { return dphi1_dm(mat, x, chi); }, m);
        compare(label + " mu", chemical_potential(mat, m, chi), [&](double x) { return phi1(mat, m, x); }, chi);
        compare(label + " d2phi1/dchi2", d2phi1_dchi2(mat, m, chi),
                [&](double x) { return chemical_potential(mat, m, x); }, chi);
        compare(label + " d2phi1/dchidm", d2phi1_dchidm(mat, m, chi),
                [&](double x) { return chemical_potential(mat, x, chi); }, m);
        compare(label + " dphi3/dm", dphi3_dm(mat, m, theta), [&](double x) { return phi3(mat, x, theta); }, m);
        compare(label + " dphi3/dtheta", dphi3_dtheta(mat, m, theta), [&](double x) { return phi3(mat, m, x); },
                theta);
        compare(label + " domega/dtheta", domega_dtheta(mat, m, theta),
                [&](double x) { return omega_of_theta(mat, m, x); }, theta);
        compare(label + " dtheta/dm", dtheta_dm(mat, m, w), [&](double x) { return theta_of_w(mat, x, w); }, m);
        compare(label + " s_a", s_a(mat, m, w), [&](double x) { return phi3(mat, x, theta_of_w(mat, m, w)); }, m);
        const Tensor2 sig = stress(mat, e, m, 0.0);
        for (int i = 0; i < dim; ++i)
            for (int j = i; j < dim; ++j) {
                const double factor = i == j ? 1.0 : 2.0;  // symmetric perturbation hits two entries
                compare(label + fmt::format(" stress_{}{}", i, j), factor * sig(i, j),
                        [&, i, j](double x) {
                            Tensor2 ee = e;
                            ee(i, j) = ee(j, i) = x;
                            return phi2(mat, ee, m);
                        },
                        e(i, j));
            }
    }
    return result(failed == 0, fmt::format("{} comparisons at 100 points, {} above 1e-6, worst {:.2e} ({})", checked,
                                           failed, worst, worst_name));
}

CriterionResult prox_check()
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double lo = 0.0;
    const double hi = 1.0;
    double worst = 0.0;
    for (int n = 0; n < 1000; ++n) {
        const double a = 0.1 + 20.0 * unit(rng);
        const double b = -0.5 + 2.0 * unit(rng);
        const double p = unit(rng);
        const double kappa = 2.0 * unit(rng);
        const double v = phase_nodal_prox(a, b, p, kappa, lo, hi);
        auto f = [&](double x) { return 0.5 * a * (x - b) * (x - b) + kappa * std::abs(x - p); };
        double best_x = lo;
        double best_f = f(lo);
        const int samples = static_cast<int>(std::round((hi - lo) / 1e-6));
        for (int i = 1; i <= samples; ++i) {
            const double x = lo + (hi - lo) * i / samples;
            const double fx = f(x);
            if (fx < best_f) {
                best_f = fx;
                best_x = x;
            }
        }
        worst = std::max(worst, std::abs(v - best_x));
    }
    return result(worst <= 2e-6, fmt::format("1000 instances, max |prox - scan| {:.2e}", worst));
}

CriterionResult apriori_uniformity()
{
    RunConfig desk = RunConfig::desk_default();
    desk.horizon = 0.048;
    const RefineReport report = refine_study(desk, std::vector<double>{4e-3, 2e-3, 1e-3});
    double worst = 0.0;
    std::string worst_name;
    for (const auto& [name, spread] : report.monitor_spread())
        if (spread > worst) {
            worst = spread;
            worst_name = name;
        }
    std::string diffs;
    for (std::size_t f = 0; f < report.differences.front().entries().size(); ++f) {
        diffs += fmt::format("{}{} ", diffs.empty() ? "" : "; ", report.differences.front().entries()[f].first);
        for (std::size_t i = 0; i < report.differences.size(); ++i)
            diffs += fmt::format("{}{:.2e}", i ? " > " : "", report.differences[i].entries()[f].second);
    }
    const bool ok = worst < 0.10 && report.monotone();
    return result(ok, fmt::format("max spread {:.2f}% ({}); {}", 100.0 * worst, worst_name, diffs));
}

CriterionResult determinism()
{
    bool ok = true;
    std::string detail;
    for (const auto& [name, config] : {std::pair<std::string, RunConfig>{"desk", RunConfig::desk_default()},
                                       {"2D", builtin_2d_config()}}) {
        const std::string first = energy_csv(run(config));
        const std::string second = energy_csv(run(config));
        const bool same = first == second;
        ok = ok && same;
        detail += fmt::format("{}{}: {} bytes {}", detail.empty() ? "" : "; ", name, first.size(),
                              same ? "identical" : "DIFFER");
    }
    return result(ok, detail);
}

}  // namespace

RunConfig builtin_2d_config()
{
    RunConfig c = RunConfig::desk_default();
    c.domain = {2, {1.0, 1.0}, {9, 9}};
    c.material = MaterialModel::desk_default(2);
    c.horizon = 0.02;
    c.initial.u0 = {FieldExpr::ramp(FieldExpr::Axis::x, 0.0, 0.1), FieldExpr::constant(0.0)};
    c.initial.v0 = {FieldExpr::constant(0.0), FieldExpr::constant(0.0)};
    c.sources = SourceTerms::none(2);
    c.sources.hydrogen_flux[static_cast<int>(Side::left)] = FieldExpr::constant(0.5);
    return c;
}

MaterialModel double_well_material()
{
    MaterialModel m = MaterialModel::desk_default(1);
    m.double_well = 26.0;
    return m;
}

double cosine_mode(const Mesh& mesh, const Vector& values)
{
    const Vector mass = lumped_mass(mesh);
    const double length = mesh.lengths()[0];
    double num = 0.0;
    double den = 0.0;
    const double mean = mass.dot(values) / mass.sum();
    for (int i = 0; i < mesh.num_nodes(); ++i) {
        const double c = std::cos(std::numbers::pi * mesh.node(i).x() / length);
        num += mass[i] * (values[i] - mean) * c;
        den += mass[i] * c * c;
    }
    return num / den;
}

const std::vector<Criterion>& acceptance_criteria()
{
    static const std::vector<Criterion> list{
        {1, "invariants", "non-negativity of chi and w on the desk run", non_negativity},
        {2, "invariants", "exact hydrogen conservation", conservation},
        {3, "invariants", "nu=1/2 energy inequality on the desk run", energy_inequality},
        {4, "convergence", "first-order total-energy defect", total_energy_consistency},
        {5, "convergence", "stability threshold with a double well", stability_threshold},
        {6, "oracles", "cos(pi x) diffusion decay rate 5 pi^2", diffusion_oracle},
        {7, "oracles", "cos(pi x) conduction decay rate pi^2", conduction_oracle},
        {8, "oracles", "constitutive derivatives against finite differences", derivative_check},
        {9, "oracles", "prox kernel against a fine scan", prox_check},
        {10, "convergence", "uniform a-priori norms and Cauchy differences", apriori_uniformity},
        {11, "invariants", "byte-identical energy.csv on repeated runs", determinism},
    };
    return list;
}

CriterionResult run_criterion(const Criterion& criterion)
{
    const auto start = Clock::now();
    CriterionResult r;
    try {
        r = criterion.check();
    } catch (const std::exception& e) {
        r = result(false, std::string("threw: ") + e.what());
    }
    r.id = criterion.id;
    r.title = criterion.title;
    r.seconds = seconds_since(start);
    return r;
}

}  // namespace hydride
