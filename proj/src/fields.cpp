#include "hydride/fields.hpp"

#include <fmt/format.h>

#include <cctype>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hydride {

double FieldExpr::operator()(const Point& x, double t) const
{
    const double s = axis == Axis::x ? x[0] : (axis == Axis::y ? x[1] : t);
    switch (kind) {
    case Kind::constant: return a;
    case Kind::ramp: return a + b * s;
    case Kind::cosine: return a + b * std::cos(n * std::numbers::pi * s);
    }
    return a;
}

namespace {

char axis_name(FieldExpr::Axis axis)
{
    switch (axis) {
    case FieldExpr::Axis::x: return 'x';
    case FieldExpr::Axis::y: return 'y';
    case FieldExpr::Axis::t: return 't';
    }
    return '?';
}

std::string trim(const std::string& s)
{
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

double parse_number(const std::string& text)
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

std::vector<std::string> split_top_level(const std::string& text)
{
    std::vector<std::string> parts;
    int depth = 0;
    std::string cur;
    for (char c : text) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (depth < 0) throw std::invalid_argument("unbalanced parentheses in '" + text + "'");
        if (c == ',' && depth == 0) {
            parts.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (depth != 0) throw std::invalid_argument("unbalanced parentheses in '" + text + "'");
    parts.push_back(trim(cur));
    return parts;
}

FieldExpr::Axis parse_axis(const std::string& text)
{
    const std::string t = trim(text);
    if (t == "x") return FieldExpr::Axis::x;
    if (t == "y") return FieldExpr::Axis::y;
    if (t == "t") return FieldExpr::Axis::t;
    throw std::invalid_argument("unknown axis '" + t + "' (expected x, y or t)");
}

}  // namespace

std::string FieldExpr::to_string() const
{
    switch (kind) {
    case Kind::constant: return fmt::format("{}", a);
    case Kind::ramp: return fmt::format("ramp({}, {}, {})", axis_name(axis), a, b);
    case Kind::cosine: return fmt::format("cos({}, {}, {}, {})", axis_name(axis), a, b, n);
    }
    return "?";
}

FieldExpr parse_field_expr(const std::string& text)
{
    const std::string t = trim(text);
    const auto open = t.find('(');
    if (open == std::string::npos) return FieldExpr::constant(parse_number(t));
    if (t.back() != ')') throw std::invalid_argument("expected ')' at the end of '" + t + "'");
    const std::string name = trim(t.substr(0, open));
    const auto args = split_top_level(t.substr(open + 1, t.size() - open - 2));
    if (name == "ramp") {
        if (args.size() != 3) throw std::invalid_argument("ramp takes (axis, a, b)");
        return FieldExpr::ramp(parse_axis(args[0]), parse_number(args[1]), parse_number(args[2]));
    }
    if (name == "cos") {
        if (args.size() != 4) throw std::invalid_argument("cos takes (axis, a, b, n)");
        const double n = parse_number(args[3]);
        if (n != std::floor(n) || n < 0) throw std::invalid_argument("cos mode number must be a non-negative integer");
        const auto axis = parse_axis(args[0]);
        if (axis == FieldExpr::Axis::t) throw std::invalid_argument("cos modes are spatial (axis x or y)");
        return FieldExpr::cosine(axis, parse_number(args[1]), parse_number(args[2]), static_cast<int>(n));
    }
    throw std::invalid_argument("unknown expression '" + name + "' (expected a number, ramp(...) or cos(...))");
}

std::vector<FieldExpr> parse_field_list(const std::string& text)
{
    std::vector<FieldExpr> out;
    for (const auto& part : split_top_level(text)) out.push_back(parse_field_expr(part));
    return out;
}

Vector nodal_values(const Mesh& mesh, const FieldExpr& expr, double t)
{
    Vector v(mesh.num_nodes());
    for (int i = 0; i < mesh.num_nodes(); ++i) v[i] = expr(mesh.node(i), t);
    return v;
}

Vector nodal_vector(const Mesh& mesh, const std::vector<FieldExpr>& components, double t)
{
    const int dim = mesh.dim();
    if (static_cast<int>(components.size()) != dim)
        throw std::invalid_argument("vector field needs " + std::to_string(dim) + " components");
    Vector v(dim * mesh.num_nodes());
    for (int i = 0; i < mesh.num_nodes(); ++i)
        for (int c = 0; c < dim; ++c) v[i * dim + c] = components[c](mesh.node(i), t);
    return v;
}

SourceTerms SourceTerms::none(int dim)
{
    SourceTerms s;
    s.body_force.assign(dim, FieldExpr::constant(0.0));
    for (auto& side : s.traction) side.assign(dim, FieldExpr::constant(0.0));
    for (auto& q : s.heat_flux) q = FieldExpr::constant(0.0);
    for (auto& h : s.hydrogen_flux) h = FieldExpr::constant(0.0);
    return s;
}

StepLoads assemble_loads(const Mesh& mesh, const SourceTerms& src, double t)
{
    const int dim = mesh.dim();
    const Vector lumped = lumped_mass(mesh);
    StepLoads loads;

    loads.force = nodal_vector(mesh, src.body_force, t);
    for (int i = 0; i < mesh.num_nodes(); ++i) loads.force.segment(i * dim, dim) *= lumped[i];
    loads.force += boundary_functional_vector(mesh, [&](const Facet& f, const Point& x) {
        const auto& comps = src.traction[static_cast<int>(f.side)];
        Point v = Point::Zero();
        for (int c = 0; c < dim; ++c) v[c] = comps[c](x, t);
        return v;
    });

    loads.hydrogen = boundary_functional(
        mesh, [&](const Facet& f, const Point& x) { return src.hydrogen_flux[static_cast<int>(f.side)](x, t); });

    loads.heat = lumped.cwiseProduct(nodal_values(mesh, src.heat, t));
    loads.heat += boundary_functional(
        mesh, [&](const Facet& f, const Point& x) { return src.heat_flux[static_cast<int>(f.side)](x, t); });
    return loads;
}

}  // namespace hydride
