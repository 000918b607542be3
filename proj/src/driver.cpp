#include "hydride/driver.hpp"

#include "hydride/constitutive.hpp"
#include "hydride/diffusion.hpp"
#include "hydride/heat.hpp"
#include "hydride/mech_phase.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <sstream>

namespace hydride {

RunConfig RunConfig::desk_default()
{
    RunConfig config;
    config.sources.hydrogen_flux[static_cast<int>(Side::left)] = FieldExpr::constant(0.5);
    return config;
}

int RunConfig::steps() const
{
    const double ratio = horizon / tau;
    const double rounded = std::round(ratio);
    if (!(tau > 0.0) || !(horizon > 0.0) || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio) || rounded < 1)
        throw ConfigError("T / tau must be a positive integer (T = " + std::to_string(horizon) +
                          ", tau = " + std::to_string(tau) + ")");
    return static_cast<int>(rounded);
}

Mesh build_mesh(const DomainSettings& domain)
{
    try {
        return build_mesh(domain.dim, domain.lengths, domain.resolution);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("domain: ") + e.what());
    }
}

namespace {

template <typename Pred>
void require_on_nodes(const Mesh& mesh, const FieldExpr& expr, const std::vector<double>& times, Pred ok,
                      const std::string& what)
{
    for (double t : times)
        for (int i = 0; i < mesh.num_nodes(); ++i)
            if (!ok(expr(mesh.node(i), t)))
                throw ConfigError(what + " is violated at node " + std::to_string(i) + ", t = " + std::to_string(t) +
                                  " (" + expr.to_string() + ")");
}

}  // namespace

void check_config(const RunConfig& c)
{
    const int dim = c.domain.dim;
    if (dim != 1 && dim != 2) throw ConfigError("domain: dim must be 1 or 2");
    if (static_cast<int>(c.domain.lengths.size()) != dim || static_cast<int>(c.domain.resolution.size()) != dim)
        throw ConfigError("domain: lengths and resolution need one entry per dimension");
    if (c.material.dim != dim) throw ConfigError("material dimension differs from the domain dimension");
    c.steps();
    if (!(c.chi_max > 0.0)) throw ConfigError("chi_max must be positive");

    const SolverSettings& s = c.solver;
    if (!(s.cg_tol > 0.0) || !(s.picard_tol > 0.0) || !(s.opt_tol > 0.0) || s.picard_max < 1 || s.opt_max < 1)
        throw ConfigError("solver tolerances and iteration limits must be positive");
    if (c.output.every_n < 1) throw ConfigError("output: every_n must be at least 1");

    require_valid(validate_material(c.material, c.chi_max, 10000));

    const double limit = tau_max(c.material, c.horizon, c.chi_max);
    if (c.tau > limit) {
        std::ostringstream os;
        os << "tau = " << c.tau << " exceeds the stability threshold tau_max = min(T, alpha^2 / |inf d2phi1/dm2|^2) = "
           << limit << " (inf d2phi1/dm2 = " << inf_d2phi1_dm2(c.material, c.chi_max) << ")";
        throw ConfigError(os.str());
    }

    auto require_components = [&](const std::vector<FieldExpr>& v, const std::string& what) {
        if (static_cast<int>(v.size()) != dim)
            throw ConfigError(what + " needs " + std::to_string(dim) + " component(s), got " +
                              std::to_string(v.size()));
    };
    require_components(c.initial.u0, "initial u0");
    require_components(c.initial.v0, "initial v0");
    require_components(c.sources.body_force, "source f");
    for (int side = 0; side < 4; ++side)
        require_components(c.sources.traction[side], "source f_s_" + to_string(static_cast<Side>(side)));

    auto spatial = [](const FieldExpr& e, const std::string& what) {
        if (e.depends_on_time()) throw ConfigError(what + " cannot depend on t");
    };
    for (const auto& e : c.initial.u0) spatial(e, "initial u0");
    for (const auto& e : c.initial.v0) spatial(e, "initial v0");
    spatial(c.initial.m0, "initial m0");
    spatial(c.initial.chi0, "initial chi0");
    spatial(c.initial.theta0, "initial theta0");
    auto no_cosine = [](const FieldExpr& e, const std::string& what) {
        if (e.kind == FieldExpr::Kind::cosine) throw ConfigError(what + ": cos(...) is only allowed for initial data");
    };
    for (const auto& e : c.sources.body_force) no_cosine(e, "source f");
    no_cosine(c.sources.heat, "source q");
    for (int side = 0; side < 4; ++side) {
        for (const auto& e : c.sources.traction[side]) no_cosine(e, "source f_s");
        no_cosine(c.sources.heat_flux[side], "source q_s");
        no_cosine(c.sources.hydrogen_flux[side], "source h_s");
    }

    const Mesh mesh = build_mesh(c.domain);
    const MaterialModel& mat = c.material;
    require_on_nodes(mesh, c.initial.m0, {0.0}, [&](double v) { return v >= mat.m_lo && v <= mat.m_hi; },
                     "m0 in [m_lo, m_hi]");
    require_on_nodes(mesh, c.initial.chi0, {0.0}, [](double v) { return v >= 0.0; }, "chi0 >= 0");
    require_on_nodes(mesh, c.initial.theta0, {0.0}, [](double v) { return v >= 0.0; }, "theta0 >= 0");
    // Sources are affine in x and t, so their extremes sit at nodes and at t = 0, T.
    require_on_nodes(mesh, c.sources.heat, {0.0, c.horizon}, [](double v) { return v >= 0.0; }, "q >= 0");
    for (const auto& f : mesh.facets()) {
        const auto& qs = c.sources.heat_flux[static_cast<int>(f.side)];
        for (int a = 0; a < f.node_count; ++a)
            for (double t : {0.0, c.horizon})
                if (qs(mesh.node(f.nodes[a]), t) < 0.0)
                    throw ConfigError("q_s >= 0 is violated on side " + to_string(f.side));
    }
}

State initial_state(const Mesh& mesh, const RunConfig& c)
{
    const MaterialModel& mat = c.material;
    State s;
    s.t = 0.0;
    s.u = nodal_vector(mesh, c.initial.u0, 0.0);
    s.v = nodal_vector(mesh, c.initial.v0, 0.0);
    s.m = nodal_values(mesh, c.initial.m0, 0.0);
    s.chi = nodal_values(mesh, c.initial.chi0, 0.0);
    const Vector theta = nodal_values(mesh, c.initial.theta0, 0.0);
    const int n = mesh.num_nodes();
    s.w.resize(n);
    s.mu.resize(n);
    for (int i = 0; i < n; ++i) {
        s.w[i] = omega_of_theta(mat, s.m[i], theta[i]);
        s.mu[i] = chemical_potential(mat, s.m[i], s.chi[i]);
    }
    s.xi = Vector::Zero(n);
    return s;
}

namespace {

template <typename E>
[[noreturn]] void rethrow_at_step(const E& e, int k, double t)
{
    std::ostringstream os;
    os << "step " << k << " (t = " << t << "): " << e.what();
    throw E(os.str());
}

}  // namespace

Trajectory run(const RunConfig& config, const StepObserver& observer)
{
    check_config(config);
    const int steps = config.steps();
    const double tau = config.tau;

    Trajectory traj{build_mesh(config.domain), config.material, tau, {}, {}, {}};
    const Mesh& mesh = traj.mesh;
    const MaterialModel& mat = traj.material;
    const Vector lumped = lumped_mass(mesh);
    const bool convex_phase = inf_d2phi1_dm2(mat, config.chi_max) >= 0.0;

    traj.states.reserve(steps + 1);
    traj.ledger.reserve(steps + 1);
    traj.states.push_back(initial_state(mesh, config));
    traj.ledger.push_back(energy_levels(mesh, mat, traj.states[0]));

    MechPhaseOptions mech_opts;
    mech_opts.cg_tol = config.solver.cg_tol;
    mech_opts.opt_tol = config.solver.opt_tol;
    mech_opts.opt_max = config.solver.opt_max;
    mech_opts.chi_max = config.chi_max;
    const MechPhaseSolver mech_solver(mesh, mat, tau, mech_opts);
    const DiffusionOptions chi_opts{config.solver.cg_tol, config.solver.picard_tol, config.solver.picard_max, 0.7};
    const HeatOptions w_opts{config.solver.cg_tol, config.solver.picard_tol, config.solver.picard_max, 1.0};

    Vector u_prev2 = traj.states[0].u - tau * traj.states[0].v;
    double slack = 0.0;
    spdlog::debug("run: {} steps of tau = {}", steps, tau);

    for (int k = 1; k <= steps; ++k) {
        const double t = k * tau;
        const State& prev = traj.states[k - 1];
        try {
            const StepLoads loads = assemble_loads(mesh, config.sources, t);

            const MechPhaseProblem mp{mesh, mat, prev.u, u_prev2, prev.m, prev.chi, prev.w, tau, loads.force};
            const MechPhaseSolution mech = mech_solver.solve(mp);

            const DiffusionProblem dp{mesh, mat, mech.u, mech.m, prev.w, prev.chi, tau, loads.hydrogen};
            const DiffusionSolution chi = solve_chi_step(dp, chi_opts);

            const HeatProblem hp{mesh,   mat,    mech.u, prev.u, mech.m, prev.m, chi.chi, chi.mu,
                                 gradient_field(mesh, chi.mu), prev.w, tau, loads.heat};
            const HeatSolution heat = solve_w_step(hp, w_opts);

            State cur;
            cur.t = t;
            cur.u = mech.u;
            cur.v = (mech.u - prev.u) / tau;
            cur.m = mech.m;
            cur.xi = mech.xi;
            cur.chi = chi.chi;
            cur.mu = chi.mu;
            cur.w = heat.w;

            LedgerRow row = ledger_step(mesh, mat, prev, cur, tau, loads);
            row.step = k;

            for (Eigen::Index i = 0; i < cur.m.size(); ++i)
                if (cur.m[i] < mat.m_lo || cur.m[i] > mat.m_hi)
                    throw InvariantViolation("phase left the box at node " + std::to_string(i));
            const double mass_defect = (row.mass_chi - traj.ledger.back().mass_chi) - row.influx;
            if (std::abs(mass_defect) > 1e-12 * std::max(1.0, std::abs(row.mass_chi)))
                throw InvariantViolation("hydrogen balance defect " + std::to_string(mass_defect));
            slack += balance_increment(traj.ledger.back(), row, 0.5);
            if (convex_phase && slack < -1e-9)
                throw InvariantViolation("energy estimate slack became negative: " + std::to_string(slack));

            u_prev2 = prev.u;
            traj.diagnostics.push_back(
                {mech.iterations, mech.residual, chi.iterations, chi.residual, heat.iterations, heat.update_norm});
            traj.states.push_back(std::move(cur));
            traj.ledger.push_back(row);
        } catch (const SolverFailure& e) {
            rethrow_at_step(e, k, t);
        } catch (const InvariantViolation& e) {
            rethrow_at_step(e, k, t);
        } catch (const DomainError& e) {
            rethrow_at_step(InvariantViolation(e.what()), k, t);
        }
        if (observer) observer(traj, k);
    }
    return traj;
}

std::vector<std::pair<std::string, double>> RefinePair::entries() const
{
    return {{"strain_rate", strain_rate}, {"m_rate", m_rate}, {"grad_mu", grad_mu}, {"w", w}};
}

bool RefineReport::monotone() const
{
    for (std::size_t i = 1; i < differences.size(); ++i) {
        const auto a = differences[i - 1].entries();
        const auto b = differences[i].entries();
        for (std::size_t j = 0; j < a.size(); ++j) {
            const bool both_zero = a[j].second == 0.0 && b[j].second == 0.0;
            if (!(b[j].second < a[j].second) && !both_zero) return false;
        }
    }
    return true;
}

std::vector<std::pair<std::string, double>> RefineReport::monitor_spread() const
{
    std::vector<std::pair<std::string, double>> out;
    if (levels.empty()) return out;
    const auto names = levels.front().monitor.entries();
    for (std::size_t j = 0; j < names.size(); ++j) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (const auto& level : levels) {
            const double v = level.monitor.entries()[j].second;
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        out.emplace_back(names[j].first, hi > 0.0 ? (hi - lo) / hi : 0.0);
    }
    return out;
}

RefinePair interpolant_difference(const Trajectory& coarse, const Trajectory& fine)
{
    const Mesh& mesh = fine.mesh;
    if (coarse.mesh.num_nodes() != mesh.num_nodes() || coarse.mesh.num_elements() != mesh.num_elements())
        throw std::invalid_argument("interpolant_difference: meshes differ");
    const double ratio_d = coarse.tau / fine.tau;
    const int ratio = static_cast<int>(std::round(ratio_d));
    if (ratio < 1 || std::abs(ratio_d - ratio) > 1e-9 || coarse.steps() * ratio != fine.steps())
        throw std::invalid_argument("interpolant_difference: time grids are not nested");

    const Vector lumped = lumped_mass(mesh);
    const double tf = fine.tau;
    RefinePair d;
    double strain = 0.0, mrate = 0.0, gmu = 0.0, w = 0.0;
    for (int i = 1; i <= fine.steps(); ++i) {
        const int kc = (i - 1) / ratio + 1;
        const State& fs = fine.states[i];
        const State& cs = coarse.states[kc];
        const Vector dm = rate(coarse, Field::m, kc) - rate(fine, Field::m, i);
        mrate += tf * lumped.dot(dm.cwiseAbs2());
        for (int e = 0; e < mesh.num_elements(); ++e) {
            const Tensor2 de = element_strain(mesh, e, cs.v) - element_strain(mesh, e, fs.v);
            strain += tf * mesh.volume(e) * contract(de, de);
            const Point dg = element_gradient(mesh, e, cs.mu) - element_gradient(mesh, e, fs.mu);
            gmu += tf * mesh.volume(e) * dg.squaredNorm();
        }
        const Vector a = interpolant_eval(coarse, Field::w, InterpolantKind::affine, (i - 1) * tf) - fine.states[i - 1].w;
        const Vector b = interpolant_eval(coarse, Field::w, InterpolantKind::affine, i * tf) - fs.w;
        w += tf / 3.0 * lumped.dot((a.cwiseAbs2() + a.cwiseProduct(b) + b.cwiseAbs2()));
    }
    d.strain_rate = std::sqrt(strain);
    d.m_rate = std::sqrt(mrate);
    d.grad_mu = std::sqrt(gmu);
    d.w = std::sqrt(w);
    return d;
}

RefineReport refine_study(const RunConfig& config, const std::vector<double>& taus)
{
    if (taus.size() < 2) throw ConfigError("refinement needs at least two levels");
    std::vector<RunConfig> configs;
    for (double tau : taus) {
        RunConfig c = config;
        c.tau = tau;
        check_config(c);
        configs.push_back(c);
    }
    std::vector<std::future<Trajectory>> jobs;
    for (const auto& c : configs) jobs.push_back(std::async(std::launch::async, [c] { return run(c); }));
    std::vector<Trajectory> trajs;
    for (auto& j : jobs) trajs.push_back(j.get());

    RefineReport report;
    for (const auto& traj : trajs) {
        RefineLevel level;
        level.tau = traj.tau;
        level.defect_nu1 = balance_residual(traj, 1.0).back();
        const auto slack = balance_residual(traj, 0.5);
        level.min_slack_nu05 = *std::min_element(slack.begin(), slack.end());
        level.monitor = apriori_monitor(traj);
        report.levels.push_back(level);
    }
    for (std::size_t i = 1; i < trajs.size(); ++i) report.differences.push_back(interpolant_difference(trajs[i - 1], trajs[i]));
    return report;
}

RefineReport refine_study(const RunConfig& config, int levels)
{
    if (levels < 2) throw ConfigError("refinement needs at least two levels");
    std::vector<double> taus;
    for (int l = 0; l < levels; ++l) taus.push_back(config.tau / std::pow(2.0, l));
    return refine_study(config, taus);
}

}  // namespace hydride
