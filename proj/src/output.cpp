#include "hydride/output.hpp"

#include "hydride/config.hpp"
#include "hydride/constitutive.hpp"
#include "hydride/energy_audit.hpp"

#include <fmt/format.h>

#include <filesystem>
#include <fstream>

namespace hydride {

namespace {

std::string num(double v) { return fmt::format("{}", v); }

void append_row(std::string& out, const std::vector<double>& values)
{
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ',';
        out += num(values[i]);
    }
    out += '\n';
}

std::string header(const std::vector<std::string>& columns)
{
    std::string out;
    for (std::size_t i = 0; i < columns.size(); ++i) out += (i ? "," : "") + columns[i];
    return out + '\n';
}

Vector theta_field(const Trajectory& traj, const State& s)
{
    Vector theta(s.w.size());
    for (Eigen::Index i = 0; i < s.w.size(); ++i) theta[i] = theta_of_w(traj.material, s.m[i], std::max(s.w[i], 0.0));
    return theta;
}

const char* component_name(int c) { return c == 0 ? "x" : "y"; }

void write_file(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace

const std::vector<std::string>& energy_columns()
{
    static const std::vector<std::string> cols{
        "t",           "kinetic",      "stored",       "gradient",   "thermal",     "diss_viscous",
        "diss_phase",  "diss_activation", "diss_diffusion", "work_ext", "residual_nu0", "slack_nu05",
        "residual_nu1", "mass_chi",    "min_chi",      "min_w"};
    return cols;
}

std::string energy_csv(const Trajectory& traj)
{
    const auto r0 = balance_residual(traj, 0.0);
    const auto s05 = balance_residual(traj, 0.5);
    const auto r1 = balance_residual(traj, 1.0);
    std::string out = header(energy_columns());
    for (std::size_t k = 0; k < traj.ledger.size(); ++k) {
        const LedgerRow& row = traj.ledger[k];
        append_row(out, {row.t, row.kinetic, row.stored(), row.gradient, row.thermal, row.diss_viscous, row.diss_phase,
                         row.diss_activation, row.diss_diffusion, row.work(), r0[k], s05[k], r1[k], row.mass_chi,
                         row.min_chi, row.min_w});
    }
    return out;
}

std::string ledger_csv(const Trajectory& traj)
{
    const auto r0 = balance_residual(traj, 0.0);
    const auto s05 = balance_residual(traj, 0.5);
    const auto r1 = balance_residual(traj, 1.0);
    std::string out = header({"step",          "t",
                              "kinetic",       "stored_chemical",
                              "stored_elastic", "gradient",
                              "thermal",       "mass_chi",
                              "min_chi",       "min_w",
                              "diss_viscous",  "diss_viscous_heat",
                              "diss_phase",    "diss_activation",
                              "diss_diffusion", "diss_diffusion_heat",
                              "adiabatic_old", "adiabatic_new",
                              "nd_inertia",    "nd_elastic",
                              "nd_gradient",   "gap_phase",
                              "gap_multiplier", "gap_chi",
                              "work_mech",     "work_chem",
                              "work_heat",     "influx",
                              "residual_nu0",  "slack_nu05",
                              "residual_nu1",  "mech_iterations",
                              "mech_residual", "chi_iterations",
                              "chi_residual",  "w_iterations",
                              "w_update"});
    for (std::size_t k = 0; k < traj.ledger.size(); ++k) {
        const LedgerRow& r = traj.ledger[k];
        const StepDiagnostics d = k == 0 ? StepDiagnostics{} : traj.diagnostics[k - 1];
        append_row(out, {static_cast<double>(r.step), r.t, r.kinetic, r.stored_chemical, r.stored_elastic, r.gradient,
                         r.thermal, r.mass_chi, r.min_chi, r.min_w, r.diss_viscous, r.diss_viscous_heat, r.diss_phase,
                         r.diss_activation, r.diss_diffusion, r.diss_diffusion_heat, r.adiabatic_old,
                         r.adiabatic_new, r.nd_inertia, r.nd_elastic, r.nd_gradient, r.gap_phase, r.gap_multiplier,
                         r.gap_chi, r.work_mech, r.work_chem, r.work_heat, r.influx, r0[k], s05[k], r1[k],
                         static_cast<double>(d.mech_iterations), d.mech_residual,
                         static_cast<double>(d.chi_iterations), d.chi_residual, static_cast<double>(d.w_iterations),
                         d.w_update});
    }
    return out;
}

std::string fields_csv(const Trajectory& traj, int k)
{
    const Mesh& mesh = traj.mesh;
    const State& s = traj.states.at(k);
    const int dim = mesh.dim();
    const Vector theta = theta_field(traj, s);

    std::vector<std::string> cols{"node", "x"};
    if (dim == 2) cols.push_back("y");
    for (int c = 0; c < dim; ++c) cols.push_back(std::string("u_") + component_name(c));
    for (const char* name : {"m", "chi", "mu", "w", "theta"}) cols.push_back(name);

    std::string out = header(cols);
    for (int i = 0; i < mesh.num_nodes(); ++i) {
        out += std::to_string(i);
        std::vector<double> row{mesh.node(i).x()};
        if (dim == 2) row.push_back(mesh.node(i).y());
        for (int c = 0; c < dim; ++c) row.push_back(s.u[dim * i + c]);
        row.insert(row.end(), {s.m[i], s.chi[i], s.mu[i], s.w[i], theta[i]});
        out += ',';
        append_row(out, row);
    }
    return out;
}

std::string fields_vtk(const Trajectory& traj, int k)
{
    const Mesh& mesh = traj.mesh;
    const State& s = traj.states.at(k);
    const int dim = mesh.dim();
    const int npe = mesh.nodes_per_element();
    const Vector theta = theta_field(traj, s);

    std::string out = fmt::format("# vtk DataFile Version 3.0\nstep {} t {}\nASCII\nDATASET UNSTRUCTURED_GRID\n", k, num(s.t));
    out += fmt::format("POINTS {} double\n", mesh.num_nodes());
    for (int i = 0; i < mesh.num_nodes(); ++i)
        out += fmt::format("{} {} 0\n", num(mesh.node(i).x()), num(dim == 2 ? mesh.node(i).y() : 0.0));
    out += fmt::format("CELLS {} {}\n", mesh.num_elements(), mesh.num_elements() * (npe + 1));
    for (int e = 0; e < mesh.num_elements(); ++e) {
        out += std::to_string(npe);
        for (int a = 0; a < npe; ++a) out += ' ' + std::to_string(mesh.element(e)[a]);
        out += '\n';
    }
    out += fmt::format("CELL_TYPES {}\n", mesh.num_elements());
    for (int e = 0; e < mesh.num_elements(); ++e) out += dim == 2 ? "5\n" : "3\n";

    out += fmt::format("POINT_DATA {}\n", mesh.num_nodes());
    out += "VECTORS u double\n";
    for (int i = 0; i < mesh.num_nodes(); ++i)
        out += fmt::format("{} {} 0\n", num(s.u[dim * i]), num(dim == 2 ? s.u[dim * i + 1] : 0.0));
    const std::pair<const char*, const Vector*> scalars[] = {
        {"m", &s.m}, {"chi", &s.chi}, {"mu", &s.mu}, {"w", &s.w}, {"theta", &theta}};
    for (const auto& [name, values] : scalars) {
        out += fmt::format("SCALARS {} double 1\nLOOKUP_TABLE default\n", name);
        for (int i = 0; i < mesh.num_nodes(); ++i) out += num((*values)[i]) + '\n';
    }
    return out;
}

std::vector<int> snapshot_steps(int steps, int every_n)
{
    std::vector<int> out{0};
    for (int k = 1; k <= steps; ++k)
        if ((every_n > 0 && k % every_n == 0) || k == steps) out.push_back(k);
    return out;
}

std::vector<std::string> write_outputs(const Trajectory& traj, const RunConfig& config,
                                       const std::vector<std::string>& defaulted, const std::string& dir)
{
    namespace fs = std::filesystem;
    const fs::path root(dir);
    fs::create_directories(root);
    std::vector<std::string> written;
    auto emit = [&](const std::string& name, const std::string& text) {
        write_file(root / name, text);
        written.push_back((root / name).string());
    };
    emit("energy.csv", energy_csv(traj));
    emit("ledger.csv", ledger_csv(traj));
    for (int k : snapshot_steps(traj.steps(), config.output.every_n)) {
        emit(fmt::format("fields_{:06}.csv", k), fields_csv(traj, k));
        if (config.output.vtk) emit(fmt::format("fields_{:06}.vtk", k), fields_vtk(traj, k));
    }
    emit("run_manifest.ini", render_manifest(config, defaulted));
    return written;
}

}  // namespace hydride
