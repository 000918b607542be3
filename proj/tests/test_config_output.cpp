#include "hydride/config.hpp"
#include "hydride/output.hpp"

#include <doctest.h>

#include <fstream>
#include <sstream>

using namespace hydride;

namespace {

const char* kMinimal = "[domain]\ndim = 1\nresolution = 50\n\n[time]\nT = 0.05\ntau = 1e-3\n";

std::string error_of(const std::string& text)
{
    try {
        parse_config_text(text, "test.ini");
    } catch (const std::exception& e) {
        return e.what();
    }
    return "";
}

bool contains(const std::string& haystack, const std::string& needle)
{
    return haystack.find(needle) != std::string::npos;
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

TEST_CASE("minimal config gets the desk material")
{
    const ParsedConfig parsed = parse_config_text(kMinimal);
    const RunConfig& c = parsed.config;
    const auto desk = MaterialModel::desk_default(1);
    CHECK(c.material.coupling == desk.coupling);
    CHECK(c.material.swelling_amplitude == desk.swelling_amplitude);
    CHECK(c.domain.lengths == std::vector<double>{1.0});
    CHECK(c.steps() == 50);
    for (const char* key : {"material.E", "material.k", "initial.chi0", "domain.lengths"})
        CHECK(std::find(parsed.defaulted.begin(), parsed.defaulted.end(), key) != parsed.defaulted.end());
}

TEST_CASE("parse errors carry file and line")
{
    const std::string base = kMinimal;
    const std::string misspelt = error_of(base + "[material]\nlamda = 1\n");
    CHECK(contains(misspelt, "test.ini:9"));
    CHECK(contains(misspelt, "'lambda'"));

    CHECK(contains(error_of("[domain]\ndim = 1\nresolution = 50\n[time]\ntau = 1e-3\n"), "'T'"));
    CHECK(contains(error_of(base + "[material]\nk = 1\nk = 2\n"), "test.ini:10: duplicate"));
    CHECK(contains(error_of(base + "[material]\nk = nan\n"), "test.ini:9"));
    CHECK(contains(error_of(base + "[material]\nk = 1e999\n"), "k:"));
    CHECK(contains(error_of(base + "[sources]\nh_s_top = 1\n"), "does not exist in 1D"));
    CHECK(contains(error_of(base + "[matrial]\n"), "'material'"));
    CHECK(contains(error_of(base + "[initial]\nm0 = sin(x)\n"), "test.ini:9"));
}

TEST_CASE("tau above the stability threshold is rejected while parsing")
{
    std::string text = std::string(kMinimal) + "[material]\ndouble_well = 26\n";
    text.replace(text.find("1e-3"), 4, "5e-3");
    const std::string err = error_of(text);
    CHECK(contains(err, "stability threshold"));
    CHECK(contains(err, "0.00390625"));
    std::string ok = text;
    ok.replace(ok.find("5e-3"), 4, "2.5e-3");
    CHECK(error_of(ok) == "");
}

TEST_CASE("per-side sources")
{
    const auto c =
        parse_config_text("[domain]\ndim = 2\nresolution = 5, 5\n[time]\nT = 0.01\ntau = 1e-3\n"
                          "[initial]\nu0 = 0, 0\n[sources]\nh_s = 0.1\nh_s_left = 0.5\nf_s_top = 0, -0.01\n")
            .config;
    CHECK(c.sources.hydrogen_flux[0].a == 0.5);
    CHECK(c.sources.hydrogen_flux[1].a == 0.1);
    CHECK(c.sources.hydrogen_flux[3].a == 0.1);
    CHECK(c.sources.traction[3][1].a == -0.01);
    CHECK(c.sources.traction[2][1].a == 0.0);
}

TEST_CASE("nearest key")
{
    CHECK(nearest_key("lamda", {"lambda", "alpha", "k"}) == "lambda");
    CHECK(nearest_key("picard_mx", {"picard_max", "picard_tol"}) == "picard_max");
    CHECK(nearest_key("zzzzzzzz", {"k", "r"}) == "");
}

TEST_CASE("manifest round trip")
{
    for (const char* path : {HYDRIDE_CONFIG_DIR "/desk.ini", HYDRIDE_CONFIG_DIR "/square_2d.ini"}) {
        const ParsedConfig first = load_config(path);
        const std::string manifest = render_manifest(first.config, first.defaulted);
        const ParsedConfig second = parse_config_text(manifest, "manifest");
        CHECK(render_manifest(second.config) == render_manifest(first.config));
    }
}

TEST_CASE("energy.csv schema")
{
    RunConfig c = RunConfig::desk_default();
    c.horizon = 0.005;
    const Trajectory traj = run(c);
    const std::string csv = energy_csv(traj);
    const std::string header = csv.substr(0, csv.find('\n'));
    CHECK(header ==
          "t,kinetic,stored,gradient,thermal,diss_viscous,diss_phase,diss_activation,diss_diffusion,work_ext,"
          "residual_nu0,slack_nu05,residual_nu1,mass_chi,min_chi,min_w");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);
    const std::string ledger = ledger_csv(traj);
    CHECK(std::count(ledger.begin(), ledger.end(), '\n') == 7);
    CHECK(contains(ledger.substr(0, ledger.find('\n')), "gap_multiplier"));
}

TEST_CASE("field snapshots")
{
    CHECK(snapshot_steps(50, 10) == std::vector<int>{0, 10, 20, 30, 40, 50});
    CHECK(snapshot_steps(7, 3) == std::vector<int>{0, 3, 6, 7});

    RunConfig c = RunConfig::desk_default();
    c.horizon = 0.002;
    const Trajectory line = run(c);
    const std::string f = fields_csv(line, 1);
    CHECK(f.substr(0, f.find('\n')) == "node,x,u_x,m,chi,mu,w,theta");
    CHECK(std::count(f.begin(), f.end(), '\n') == 51);
    CHECK(contains(fields_vtk(line, 1), "POINTS 50 double"));

    const ParsedConfig sq = load_config(HYDRIDE_CONFIG_DIR "/square_2d.ini");
    RunConfig c2 = sq.config;
    c2.horizon = 0.002;
    const Trajectory square = run(c2);
    const std::string f2 = fields_csv(square, 2);
    CHECK(f2.substr(0, f2.find('\n')) == "node,x,y,u_x,u_y,m,chi,mu,w,theta");
    CHECK(contains(fields_vtk(square, 2), "CELLS 128 512"));
}

TEST_CASE("written outputs")
{
    const ParsedConfig parsed = load_config(HYDRIDE_CONFIG_DIR "/square_2d.ini");
    RunConfig c = parsed.config;
    c.horizon = 0.003;
    const Trajectory traj = run(c);
    const std::string dir = "test_outputs_square";
    const auto files = write_outputs(traj, c, parsed.defaulted, dir);
    CHECK(files.size() == 2 + 2 * 2 + 1);
    CHECK(read_file(dir + "/energy.csv") == energy_csv(traj));
    CHECK(contains(read_file(dir + "/run_manifest.ini"), "# default"));
}
