#include "hydride/config.hpp"

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace hydride {

namespace {

const std::vector<std::string> kSides{"left", "right", "bottom", "top"};

const std::map<std::string, std::vector<std::string>>& known_keys()
{
    static const std::map<std::string, std::vector<std::string>> keys = [] {
        std::map<std::string, std::vector<std::string>> k;
        k["domain"] = {"dim", "lengths", "resolution"};
        k["time"] = {"T", "tau"};
        k["material"] = {"E",     "lame",  "D",        "rho",      "alpha",    "lambda",   "k",
                         "a1",    "phi1_kappa", "r",   "m_lo",     "m_hi",     "eps_tr",   "alpha_th",
                         "heat_law", "c0", "c0_slope", "K0",       "M0",       "double_well", "chi_max"};
        k["initial"] = {"u0", "v0", "m0", "chi0", "theta0"};
        auto& s = k["sources"];
        s = {"f", "q", "f_s", "q_s", "h_s"};
        for (const auto& base : {"f_s", "q_s", "h_s"})
            for (const auto& side : kSides) s.push_back(std::string(base) + "_" + side);
        k["solver"] = {"cg_tol", "picard_tol", "picard_max", "opt_tol", "opt_max"};
        k["output"] = {"dir", "every_n", "vtk"};
        return k;
    }();
    return keys;
}

std::string trim(const std::string& s)
{
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::vector<std::string> split_commas(const std::string& s)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(trim(item));
    return out;
}

struct Entry {
    std::string value;
    int line = 0;
};

class Document {
public:
    Document(const std::string& text, std::string origin) : origin_(std::move(origin))
    {
        std::istringstream in(text);
        std::string raw;
        std::string section;
        int line = 0;
        while (std::getline(in, raw)) {
            ++line;
            std::string s = raw;
            const auto hash = s.find_first_of("#;");
            if (hash != std::string::npos) s = s.substr(0, hash);
            s = trim(s);
            if (s.empty()) continue;
            if (s.front() == '[') {
                if (s.back() != ']') fail(line, "malformed section header '" + s + "'");
                section = trim(s.substr(1, s.size() - 2));
                const auto& keys = known_keys();
                if (!keys.count(section)) {
                    std::vector<std::string> names;
                    for (const auto& [name, _] : keys) names.push_back(name);
                    fail(line, "unknown section [" + section + "]" + suggestion(section, names));
                }
                if (sections_seen_.count(section)) fail(line, "section [" + section + "] appears twice");
                sections_seen_[section] = line;
                continue;
            }
            const auto eq = s.find('=');
            if (eq == std::string::npos) fail(line, "expected 'key = value', got '" + s + "'");
            if (section.empty()) fail(line, "key outside of any section");
            const std::string key = trim(s.substr(0, eq));
            const std::string value = trim(s.substr(eq + 1));
            const auto& allowed = known_keys().at(section);
            if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
                fail(line, "unknown key '" + key + "' in [" + section + "]" + suggestion(key, allowed));
            if (value.empty()) fail(line, "empty value for '" + key + "'");
            auto& slot = entries_[section + "." + key];
            if (slot.line != 0) fail(line, "duplicate key '" + key + "' (first set on line " + std::to_string(slot.line) + ")");
            slot = {value, line};
        }
    }

    const Entry* find(const std::string& section, const std::string& key) const
    {
        const auto it = entries_.find(section + "." + key);
        return it == entries_.end() ? nullptr : &it->second;
    }

    [[noreturn]] void fail(int line, const std::string& msg) const
    {
        throw ConfigError(line > 0 ? fmt::format("{}:{}: {}", origin_, line, msg) : fmt::format("{}: {}", origin_, msg));
    }

    const std::string& origin() const { return origin_; }

private:
    static std::string suggestion(const std::string& key, const std::vector<std::string>& candidates)
    {
        const std::string best = nearest_key(key, candidates);
        return best.empty() ? "" : " (did you mean '" + best + "'?)";
    }

    std::string origin_;
    std::map<std::string, Entry> entries_;
    std::map<std::string, int> sections_seen_;
};

class Reader {
public:
    explicit Reader(const Document& doc) : doc_(doc) {}

    bool has(const std::string& section, const std::string& key) const { return doc_.find(section, key) != nullptr; }

    template <typename F>
    auto with(const std::string& section, const std::string& key, F&& parse) const
    {
        const Entry* e = doc_.find(section, key);
        try {
            return parse(e->value);
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& ex) {
            doc_.fail(e->line, key + ": " + ex.what());
        }
    }

    double number(const std::string& section, const std::string& key, double fallback)
    {
        if (!has(section, key)) return defaulted(section, key, fallback);
        return with(section, key, [](const std::string& v) { return to_number(v); });
    }

    int integer(const std::string& section, const std::string& key, int fallback)
    {
        if (!has(section, key)) return static_cast<int>(defaulted(section, key, fallback));
        return with(section, key, [](const std::string& v) { return to_integer(v); });
    }

    double required_number(const std::string& section, const std::string& key)
    {
        if (!has(section, key)) doc_.fail(0, "missing mandatory key '" + key + "' in [" + section + "]");
        return number(section, key, 0.0);
    }

    std::vector<double> numbers(const std::string& section, const std::string& key)
    {
        return with(section, key, [](const std::string& v) {
            std::vector<double> out;
            for (const auto& p : split_commas(v)) out.push_back(to_number(p));
            return out;
        });
    }

    int line(const std::string& section, const std::string& key) const
    {
        const Entry* e = doc_.find(section, key);
        return e ? e->line : 0;
    }

    template <typename T>
    T defaulted(const std::string& section, const std::string& key, T value)
    {
        defaulted_.push_back(section + "." + key);
        return value;
    }

    void note_default(const std::string& section, const std::string& key) { defaulted_.push_back(section + "." + key); }

    [[noreturn]] void fail(const std::string& section, const std::string& key, const std::string& msg) const
    {
        doc_.fail(line(section, key), msg);
    }

    const std::vector<std::string>& defaulted_keys() const { return defaulted_; }

    static double to_number(const std::string& text)
    {
        const std::string t = trim(text);
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(t, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("'" + t + "' is not a number");
        }
        if (used != t.size()) throw std::invalid_argument("'" + t + "' is not a number");
        if (!std::isfinite(v)) throw std::invalid_argument("'" + t + "' is not finite");
        return v;
    }

    static int to_integer(const std::string& text)
    {
        const double v = to_number(text);
        if (v != std::floor(v) || std::abs(v) > 1e9) throw std::invalid_argument("'" + text + "' is not an integer");
        return static_cast<int>(v);
    }

private:
    const Document& doc_;
    std::vector<std::string> defaulted_;
};

Isotropic parse_moduli(const std::vector<double>& values)
{
    if (values.size() == 1) return Isotropic::uniaxial(values[0]);
    if (values.size() == 2) return {values[0], values[1]};
    throw std::invalid_argument("expected one modulus or a Lame pair 'lambda, mu'");
}

Tensor2 parse_tensor(const std::vector<double>& values, int dim)
{
    if (values.size() == 1) return values[0] * identity_tensor(dim);
    if (dim == 2 && values.size() == 3) {
        Tensor2 t;
        t << values[0], values[2], values[2], values[1];
        return t;
    }
    throw std::invalid_argument(dim == 1 ? "expected one value" : "expected one value or 'xx, yy, xy'");
}

std::string format_number(double v) { return fmt::format("{}", v); }

std::string join(const std::vector<std::string>& parts)
{
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? ", " : "") + parts[i];
    return out;
}

std::string render_list(const std::vector<FieldExpr>& exprs)
{
    std::vector<std::string> parts;
    for (const auto& e : exprs) parts.push_back(e.to_string());
    return join(parts);
}

}  // namespace

std::string nearest_key(const std::string& key, const std::vector<std::string>& candidates)
{
    auto distance = [](const std::string& a, const std::string& b) {
        std::vector<std::size_t> row(b.size() + 1);
        for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
        for (std::size_t i = 1; i <= a.size(); ++i) {
            std::size_t diag = row[0];
            row[0] = i;
            for (std::size_t j = 1; j <= b.size(); ++j) {
                const std::size_t up = row[j];
                row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
                diag = up;
            }
        }
        return row[b.size()];
    };
    std::string best;
    std::size_t best_d = std::string::npos;
    for (const auto& c : candidates) {
        const std::size_t d = distance(key, c);
        if (d < best_d) {
            best_d = d;
            best = c;
        }
    }
    if (best.empty() || best_d > std::max<std::size_t>(2, key.size() / 2)) return "";
    return best;
}

ParsedConfig parse_config_text(const std::string& text, const std::string& origin, bool check)
{
    const Document doc(text, origin);
    Reader rd(doc);
    RunConfig c;

    // [domain]
    if (!rd.has("domain", "dim")) doc.fail(0, "missing mandatory key 'dim' in [domain]");
    const int dim = rd.integer("domain", "dim", 1);
    if (dim != 1 && dim != 2) rd.fail("domain", "dim", "dim must be 1 or 2");
    c.domain.dim = dim;
    if (!rd.has("domain", "resolution")) doc.fail(0, "missing mandatory key 'resolution' in [domain]");
    {
        const auto res = rd.numbers("domain", "resolution");
        c.domain.resolution.clear();
        for (double v : res) {
            if (v != std::floor(v) || v < 2) rd.fail("domain", "resolution", "resolution entries must be integers >= 2");
            c.domain.resolution.push_back(static_cast<int>(v));
        }
        if (static_cast<int>(c.domain.resolution.size()) != dim)
            rd.fail("domain", "resolution", "resolution needs " + std::to_string(dim) + " entries");
    }
    if (rd.has("domain", "lengths")) {
        c.domain.lengths = rd.numbers("domain", "lengths");
        if (static_cast<int>(c.domain.lengths.size()) != dim)
            rd.fail("domain", "lengths", "lengths needs " + std::to_string(dim) + " entries");
        for (double l : c.domain.lengths)
            if (!(l > 0.0)) rd.fail("domain", "lengths", "lengths must be positive");
    } else {
        c.domain.lengths.assign(dim, rd.defaulted("domain", "lengths", 1.0));
    }

    // [time]
    c.horizon = rd.required_number("time", "T");
    c.tau = rd.required_number("time", "tau");
    if (!(c.horizon > 0.0)) rd.fail("time", "T", "T must be positive");
    if (!(c.tau > 0.0)) rd.fail("time", "tau", "tau must be positive");

    // [material]
    MaterialModel& mat = c.material;
    mat = MaterialModel::desk_default(dim);
    if (rd.has("material", "E") && rd.has("material", "lame"))
        rd.fail("material", "lame", "give either E or lame, not both");
    if (rd.has("material", "E")) {
        mat.elastic = Isotropic::uniaxial(rd.number("material", "E", 1.0));
    } else if (rd.has("material", "lame")) {
        const auto v = rd.numbers("material", "lame");
        if (v.size() != 2) rd.fail("material", "lame", "lame expects 'lambda, mu'");
        mat.elastic = {v[0], v[1]};
    } else {
        rd.note_default("material", "E");
    }
    if (rd.has("material", "D"))
        mat.viscous = rd.with("material", "D", [](const std::string& v) {
            std::vector<double> vals;
            for (const auto& p : split_commas(v)) vals.push_back(Reader::to_number(p));
            return parse_moduli(vals);
        });
    else
        rd.note_default("material", "D");
    mat.density = rd.number("material", "rho", mat.density);
    mat.phase_viscosity = rd.number("material", "alpha", mat.phase_viscosity);
    mat.gradient_coeff = rd.number("material", "lambda", mat.gradient_coeff);
    mat.coupling = rd.number("material", "k", mat.coupling);
    mat.swelling_amplitude = rd.number("material", "a1", mat.swelling_amplitude);
    mat.chem_stiffness = rd.number("material", "phi1_kappa", mat.chem_stiffness);
    mat.activation_threshold = rd.number("material", "r", mat.activation_threshold);
    mat.m_lo = rd.number("material", "m_lo", mat.m_lo);
    mat.m_hi = rd.number("material", "m_hi", mat.m_hi);
    mat.double_well = rd.number("material", "double_well", mat.double_well);
    for (const auto& [key, target] : {std::pair<const char*, Tensor2*>{"eps_tr", &mat.eps_tr}, {"alpha_th", &mat.alpha_th}}) {
        if (rd.has("material", key))
            *target = rd.with("material", key, [&](const std::string& v) {
                std::vector<double> vals;
                for (const auto& p : split_commas(v)) vals.push_back(Reader::to_number(p));
                return parse_tensor(vals, dim);
            });
        else
            rd.note_default("material", key);
    }
    if (rd.has("material", "heat_law"))
        mat.heat_law.kind = rd.with("material", "heat_law", [](const std::string& v) { return heat_law_from_string(v); });
    else
        rd.note_default("material", "heat_law");
    mat.heat_law.c0 = rd.number("material", "c0", mat.heat_law.c0);
    mat.heat_law.c0_slope = rd.number("material", "c0_slope", mat.heat_law.c0_slope);
    mat.conductivity = rd.number("material", "K0", mat.conductivity);
    mat.mobility = rd.number("material", "M0", mat.mobility);
    c.chi_max = rd.number("material", "chi_max", c.chi_max);

    // [initial]
    auto expr = [&](const std::string& section, const std::string& key, const FieldExpr& fallback) {
        if (!rd.has(section, key)) return rd.defaulted(section, key, fallback);
        return rd.with(section, key, [](const std::string& v) { return parse_field_expr(v); });
    };
    auto expr_list = [&](const std::string& section, const std::string& key, const std::vector<FieldExpr>& fallback) {
        if (!rd.has(section, key)) return rd.defaulted(section, key, fallback);
        auto list = rd.with(section, key, [](const std::string& v) { return parse_field_list(v); });
        if (static_cast<int>(list.size()) != dim)
            rd.fail(section, key, key + " needs " + std::to_string(dim) + " component(s)");
        return list;
    };
    const std::vector<FieldExpr> zeros(dim, FieldExpr::constant(0.0));
    std::vector<FieldExpr> u0_default = zeros;
    u0_default[0] = FieldExpr::ramp(FieldExpr::Axis::x, 0.0, 0.1);
    c.initial.u0 = expr_list("initial", "u0", u0_default);
    c.initial.v0 = expr_list("initial", "v0", zeros);
    c.initial.m0 = expr("initial", "m0", FieldExpr::constant(0.0));
    c.initial.chi0 = expr("initial", "chi0", FieldExpr::constant(0.5));
    c.initial.theta0 = expr("initial", "theta0", FieldExpr::constant(1.0));

    // [sources]
    c.sources = SourceTerms::none(dim);
    c.sources.body_force = expr_list("sources", "f", zeros);
    c.sources.heat = expr("sources", "q", FieldExpr::constant(0.0));
    const int n_sides = dim == 1 ? 2 : 4;
    for (int side = n_sides; side < 4; ++side)
        for (const auto& base : {"f_s", "q_s", "h_s"}) {
            const std::string key = std::string(base) + "_" + kSides[side];
            if (rd.has("sources", key)) rd.fail("sources", key, "side '" + kSides[side] + "' does not exist in 1D");
        }
    const auto all_tr = rd.has("sources", "f_s") ? expr_list("sources", "f_s", zeros) : zeros;
    const auto all_q = rd.has("sources", "q_s") ? expr("sources", "q_s", FieldExpr::constant(0.0)) : FieldExpr::constant(0.0);
    const auto all_h = rd.has("sources", "h_s") ? expr("sources", "h_s", FieldExpr::constant(0.0)) : FieldExpr::constant(0.0);
    for (int side = 0; side < n_sides; ++side) {
        const std::string suffix = "_" + kSides[side];
        c.sources.traction[side] = rd.has("sources", "f_s" + suffix) ? expr_list("sources", "f_s" + suffix, zeros) : all_tr;
        c.sources.heat_flux[side] = rd.has("sources", "q_s" + suffix) ? expr("sources", "q_s" + suffix, all_q) : all_q;
        c.sources.hydrogen_flux[side] = rd.has("sources", "h_s" + suffix) ? expr("sources", "h_s" + suffix, all_h) : all_h;
    }

    // [solver]
    c.solver.cg_tol = rd.number("solver", "cg_tol", c.solver.cg_tol);
    c.solver.picard_tol = rd.number("solver", "picard_tol", c.solver.picard_tol);
    c.solver.picard_max = rd.integer("solver", "picard_max", c.solver.picard_max);
    c.solver.opt_tol = rd.number("solver", "opt_tol", c.solver.opt_tol);
    c.solver.opt_max = rd.integer("solver", "opt_max", c.solver.opt_max);

    // [output]
    if (rd.has("output", "dir"))
        c.output.dir = rd.with("output", "dir", [](const std::string& v) { return v; });
    else
        rd.note_default("output", "dir");
    c.output.every_n = rd.integer("output", "every_n", c.output.every_n);
    if (rd.has("output", "vtk")) {
        c.output.vtk = rd.with("output", "vtk", [](const std::string& v) {
            if (v == "true" || v == "1" || v == "yes") return true;
            if (v == "false" || v == "0" || v == "no") return false;
            throw std::invalid_argument("expected true or false");
        });
    } else {
        rd.note_default("output", "vtk");
    }

    for (const auto& key : rd.defaulted_keys()) spdlog::debug("{}: {} not given, using the default", origin, key);

    if (check) {
        try {
            check_config(c);
        } catch (const ConfigError& e) {
            throw ConfigError(origin + ": " + e.what());
        } catch (const ValidationError& e) {
            throw ValidationError(origin + ": " + e.what());
        }
    }
    return {c, rd.defaulted_keys()};
}

ParsedConfig load_config(const std::string& path, bool check)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path, check);
}

RunConfig parse_config(const std::string& path) { return load_config(path).config; }

std::string render_manifest(const RunConfig& c, const std::vector<std::string>& defaulted)
{
    const int dim = c.domain.dim;
    std::string out;
    auto put = [&](const std::string& section, const std::string& key, const std::string& value) {
        const bool dflt = std::find(defaulted.begin(), defaulted.end(), section + "." + key) != defaulted.end();
        out += fmt::format("{} = {}{}\n", key, value, dflt ? "  # default" : "");
    };
    auto nums = [](const auto& values) {
        std::vector<std::string> parts;
        for (auto v : values) parts.push_back(format_number(static_cast<double>(v)));
        return join(parts);
    };
    auto tensor = [&](const Tensor2& t) {
        if (dim == 1) return format_number(t(0, 0));
        return nums(std::vector<double>{t(0, 0), t(1, 1), t(0, 1)});
    };

    out += "# resolved run configuration\n\n[domain]\n";
    put("domain", "dim", std::to_string(dim));
    put("domain", "lengths", nums(c.domain.lengths));
    put("domain", "resolution", nums(c.domain.resolution));

    out += "\n[time]\n";
    put("time", "T", format_number(c.horizon));
    put("time", "tau", format_number(c.tau));

    const MaterialModel& m = c.material;
    out += "\n[material]\n";
    out += fmt::format("lame = {}{}\n", nums(std::vector<double>{m.elastic.lambda, m.elastic.mu}),
                       std::find(defaulted.begin(), defaulted.end(), "material.E") != defaulted.end() ? "  # default" : "");
    put("material", "D", nums(std::vector<double>{m.viscous.lambda, m.viscous.mu}));
    put("material", "rho", format_number(m.density));
    put("material", "alpha", format_number(m.phase_viscosity));
    put("material", "lambda", format_number(m.gradient_coeff));
    put("material", "k", format_number(m.coupling));
    put("material", "a1", format_number(m.swelling_amplitude));
    put("material", "phi1_kappa", format_number(m.chem_stiffness));
    put("material", "double_well", format_number(m.double_well));
    put("material", "r", format_number(m.activation_threshold));
    put("material", "m_lo", format_number(m.m_lo));
    put("material", "m_hi", format_number(m.m_hi));
    put("material", "eps_tr", tensor(m.eps_tr));
    put("material", "alpha_th", tensor(m.alpha_th));
    put("material", "heat_law", to_string(m.heat_law.kind));
    put("material", "c0", format_number(m.heat_law.c0));
    put("material", "c0_slope", format_number(m.heat_law.c0_slope));
    put("material", "K0", format_number(m.conductivity));
    put("material", "M0", format_number(m.mobility));
    put("material", "chi_max", format_number(c.chi_max));

    out += "\n[initial]\n";
    put("initial", "u0", render_list(c.initial.u0));
    put("initial", "v0", render_list(c.initial.v0));
    put("initial", "m0", c.initial.m0.to_string());
    put("initial", "chi0", c.initial.chi0.to_string());
    put("initial", "theta0", c.initial.theta0.to_string());

    out += "\n[sources]\n";
    put("sources", "f", render_list(c.sources.body_force));
    put("sources", "q", c.sources.heat.to_string());
    const int n_sides = dim == 1 ? 2 : 4;
    for (int side = 0; side < n_sides; ++side) {
        const std::string suffix = "_" + kSides[side];
        out += fmt::format("f_s{} = {}\n", suffix, render_list(c.sources.traction[side]));
        out += fmt::format("q_s{} = {}\n", suffix, c.sources.heat_flux[side].to_string());
        out += fmt::format("h_s{} = {}\n", suffix, c.sources.hydrogen_flux[side].to_string());
    }

    out += "\n[solver]\n";
    put("solver", "cg_tol", format_number(c.solver.cg_tol));
    put("solver", "picard_tol", format_number(c.solver.picard_tol));
    put("solver", "picard_max", std::to_string(c.solver.picard_max));
    put("solver", "opt_tol", format_number(c.solver.opt_tol));
    put("solver", "opt_max", std::to_string(c.solver.opt_max));

    out += "\n[output]\n";
    put("output", "dir", c.output.dir);
    put("output", "every_n", std::to_string(c.output.every_n));
    put("output", "vtk", c.output.vtk ? "true" : "false");
    return out;
}

}  // namespace hydride
