#pragma once

#include "hydride/mesh.hpp"

#include <array>
#include <string>
#include <vector>

namespace hydride {

/// Scalar data given as a constant, an axis-aligned ramp a + b * axis
/// (axis x, y or t), or a cosine mode a + b cos(n pi x).
struct FieldExpr {
    enum class Kind { constant, ramp, cosine };
    enum class Axis { x, y, t };

    Kind kind = Kind::constant;
    Axis axis = Axis::x;
    double a = 0.0;
    double b = 0.0;
    int n = 1;

    static FieldExpr constant(double value) { return {Kind::constant, Axis::x, value, 0.0, 1}; }
    static FieldExpr ramp(Axis axis, double a, double b) { return {Kind::ramp, axis, a, b, 1}; }
    static FieldExpr cosine(Axis axis, double a, double b, int n) { return {Kind::cosine, axis, a, b, n}; }

    double operator()(const Point& x, double t) const;
    bool depends_on_time() const { return kind != Kind::constant && axis == Axis::t; }
    bool is_zero() const { return kind == Kind::constant && a == 0.0; }
    std::string to_string() const;
};

/// Parses "0.5", "ramp(x, 0, 0.1)" or "cos(x, 0.5, 0.1, 1)".
FieldExpr parse_field_expr(const std::string& text);

/// Comma-separated list of expressions at top level, e.g. "ramp(x,0,1), 0".
std::vector<FieldExpr> parse_field_list(const std::string& text);

Vector nodal_values(const Mesh& mesh, const FieldExpr& expr, double t);

/// Interleaved vector field from one expression per component.
Vector nodal_vector(const Mesh& mesh, const std::vector<FieldExpr>& components, double t);

/// Data on the four sides of the box (1D uses left and right only).
template <typename T>
using PerSide = std::array<T, 4>;

struct SourceTerms {
    std::vector<FieldExpr> body_force;           // f, one entry per component
    FieldExpr heat = FieldExpr::constant(0.0);   // q
    PerSide<std::vector<FieldExpr>> traction;    // f_s
    PerSide<FieldExpr> heat_flux{};              // q_s
    PerSide<FieldExpr> hydrogen_flux{};          // h_s

    static SourceTerms none(int dim);
};

/// Discrete load vectors of one time level.
struct StepLoads {
    Vector force;     // dim-interleaved: lumped f plus boundary f_s
    Vector hydrogen;  // boundary h_s
    Vector heat;      // lumped q plus boundary q_s
};

StepLoads assemble_loads(const Mesh& mesh, const SourceTerms& sources, double t);

}  // namespace hydride
