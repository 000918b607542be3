// Command-line front end: simulate, validate, refine and selftest.

#include "hydride/acceptance.hpp"
#include "hydride/config.hpp"
#include "hydride/constitutive.hpp"
#include "hydride/driver.hpp"
#include "hydride/mech_phase.hpp"
#include "hydride/output.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include <map>

namespace {

enum Exit : int {
    ok = 0,
    usage = 1,
    config_error = 2,
    solver_failure = 3,
    invariant_violation = 4,
    validation_failure = 5,
};

int simulate(const std::string& path, const std::string& out_override)
{
    const hydride::ParsedConfig parsed = hydride::load_config(path);
    hydride::RunConfig config = parsed.config;
    if (!out_override.empty()) config.output.dir = out_override;
    const int steps = config.steps();
    const int every = std::max(1, config.output.every_n);
    const hydride::Trajectory traj = hydride::run(config, [&](const hydride::Trajectory& t, int k) {
        if (k % every == 0 || k == steps) {
            const auto& row = t.ledger.back();
            spdlog::info("step {}/{}  t = {:.6g}  mass_chi = {:.6g}  min_chi = {:.3e}  min_w = {:.3e}", k, steps, row.t,
                         row.mass_chi, row.min_chi, row.min_w);
        }
    });
    const auto files = hydride::write_outputs(traj, config, parsed.defaulted, config.output.dir);
    fmt::print("wrote {} files to {}\n", files.size(), config.output.dir);
    return ok;
}

int validate(const std::string& path)
{
    const hydride::ParsedConfig parsed = hydride::load_config(path, false);
    const hydride::RunConfig& config = parsed.config;
    const auto report = hydride::validate_material(config.material, config.chi_max, 10000);
    fmt::print("{}", report.summary());
    if (!report.ok()) {
        for (const auto& c : report.checks)
            if (!c.passed) fmt::print(stderr, "material violates assumption '{}': {}\n", c.name, c.description);
        return validation_failure;
    }
    hydride::check_config(config);
    fmt::print("configuration valid: {} steps of tau = {:.6g}, tau_max = {:.6g}\n", config.steps(), config.tau,
               hydride::tau_max(config.material, config.horizon, config.chi_max));
    return ok;
}

int refine(const std::string& path, int levels)
{
    const hydride::RunConfig config = hydride::load_config(path).config;
    const hydride::RefineReport report = hydride::refine_study(config, levels);
    fmt::print("{:>12} {:>14} {:>14}\n", "tau", "defect_nu1", "min_slack_nu05");
    for (const auto& lv : report.levels)
        fmt::print("{:>12.6g} {:>14.6e} {:>14.6e}\n", lv.tau, lv.defect_nu1, lv.min_slack_nu05);
    fmt::print("\nsuccessive interpolant differences (L2 over space-time)\n");
    for (std::size_t i = 0; i < report.differences.size(); ++i) {
        fmt::print("levels {}-{}:", i, i + 1);
        for (const auto& [name, value] : report.differences[i].entries()) fmt::print("  {} {:.4e}", name, value);
        fmt::print("\n");
    }
    fmt::print("\nrelative spread of the a-priori norms\n");
    for (const auto& [name, spread] : report.monitor_spread()) fmt::print("  {:<18} {:.3f}%\n", name, 100.0 * spread);
    const bool monotone = report.monotone();
    fmt::print("\ndifferences decrease monotonically: {}\n", monotone ? "yes" : "no");
    return monotone ? ok : invariant_violation;
}

int selftest()
{
    std::map<std::string, std::pair<int, int>> suites;  // passed, total
    bool all = true;
    for (const auto& criterion : hydride::acceptance_criteria()) {
        const auto r = hydride::run_criterion(criterion);
        fmt::print("[{}] {:>2} {:<52} {:6.2f} s  {}\n", r.passed ? "PASS" : "FAIL", r.id, r.title, r.seconds, r.detail);
        auto& [passed, total] = suites[criterion.suite];
        passed += r.passed ? 1 : 0;
        ++total;
        all = all && r.passed;
    }
    fmt::print("\n");
    for (const auto& [suite, counts] : suites) fmt::print("{:<12} {}/{} passed\n", suite, counts.first, counts.second);
    return all ? ok : invariant_violation;
}

template <typename F>
int guarded(F&& body)
{
    try {
        return body();
    } catch (const hydride::ConfigError& e) {
        spdlog::error("configuration error: {}", e.what());
        return config_error;
    } catch (const hydride::ValidationError& e) {
        spdlog::error("material validation failed: {}", e.what());
        return validation_failure;
    } catch (const hydride::SolverFailure& e) {
        spdlog::error("solver failure: {}", e.what());
        return solver_failure;
    } catch (const hydride::InvariantViolation& e) {
        spdlog::error("invariant violated: {}", e.what());
        return invariant_violation;
    } catch (const hydride::DomainError& e) {
        spdlog::error("invariant violated: {}", e.what());
        return invariant_violation;
    } catch (const std::exception& e) {
        spdlog::error("{}", e.what());
        return usage;
    }
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"hydride: staggered solver for the metal/hydride phase transformation model"};
    app.require_subcommand(1);
    bool verbose = false;
    app.add_flag("-v,--verbose", verbose, "log every defaulted key and solver detail");

    std::string config_path;
    std::string out_dir;
    int levels = 3;

    auto* sim = app.add_subcommand("simulate", "run one configuration and write energy.csv and snapshots");
    sim->add_option("config", config_path, "configuration file")->required();
    sim->add_option("--out", out_dir, "output directory (overrides [output] dir)");

    auto* val = app.add_subcommand("validate", "check the material assumptions and the configuration");
    val->add_option("config", config_path, "configuration file")->required();

    auto* ref = app.add_subcommand("refine", "tau refinement study at tau, tau/2, ...");
    ref->add_option("config", config_path, "configuration file")->required();
    ref->add_option("--levels", levels, "number of levels")->check(CLI::Range(2, 8));

    auto* self = app.add_subcommand("selftest", "run the built-in invariant and oracle suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : usage;
    }
    spdlog::set_level(verbose ? spdlog::level::debug : spdlog::level::info);

    if (sim->parsed()) return guarded([&] { return simulate(config_path, out_dir); });
    if (val->parsed()) return guarded([&] { return validate(config_path); });
    if (ref->parsed()) return guarded([&] { return refine(config_path, levels); });
    if (self->parsed()) return guarded([&] { return selftest(); });
    return usage;
}
