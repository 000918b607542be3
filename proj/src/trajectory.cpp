#include "hydride/trajectory.hpp"

#include <algorithm>
#include <cmath>

namespace hydride {

const Vector& field_of(const State& s, Field f)
{
    switch (f) {
    case Field::u: return s.u;
    case Field::v: return s.v;
    case Field::m: return s.m;
    case Field::xi: return s.xi;
    case Field::chi: return s.chi;
    case Field::mu: return s.mu;
    case Field::w: return s.w;
    }
    throw std::invalid_argument("unknown field");
}

std::string to_string(Field f)
{
    switch (f) {
    case Field::u: return "u";
    case Field::v: return "v";
    case Field::m: return "m";
    case Field::xi: return "xi";
    case Field::chi: return "chi";
    case Field::mu: return "mu";
    case Field::w: return "w";
    }
    return "?";
}

Vector rate(const Trajectory& traj, Field field, int k)
{
    if (k < 1 || k > traj.steps()) throw std::out_of_range("rate: step index out of range");
    return (field_of(traj.states[k], field) - field_of(traj.states[k - 1], field)) / traj.tau;
}

Vector interpolant_eval(const Trajectory& traj, Field field, InterpolantKind kind, double t)
{
    const int n = traj.steps();
    if (n < 1) throw std::invalid_argument("interpolant_eval: trajectory has no steps");
    const double horizon = traj.horizon();
    const double eps = 1e-12 * horizon;
    if (t < -eps || t > horizon + eps) throw std::out_of_range("interpolant_eval: t outside [0, T]");
    t = std::clamp(t, 0.0, horizon);

    const double s = t / traj.tau;
    // Index of the grid point at or immediately below t, robust to round-off.
    int below = static_cast<int>(std::floor(s + 1e-9));
    below = std::clamp(below, 0, n);
    const bool on_grid = std::abs(s - below) <= 1e-9;

    auto at = [&](int k) -> const Vector& { return field_of(traj.states[k], field); };

    switch (kind) {
    case InterpolantKind::backward: return at(on_grid ? below : std::min(below + 1, n));
    case InterpolantKind::forward: return at(on_grid ? below : below);
    case InterpolantKind::affine: {
        if (on_grid) return at(below);
        const double lambda = s - below;
        return (1.0 - lambda) * at(below) + lambda * at(below + 1);
    }
    case InterpolantKind::velocity_affine: {
        if (field != Field::u) throw std::invalid_argument("velocity interpolant is defined for u only");
        const auto vel = [&](int k) -> const Vector& { return traj.states[k].v; };
        if (on_grid) return vel(below);
        const double lambda = s - below;
        return (1.0 - lambda) * vel(below) + lambda * vel(below + 1);
    }
    }
    throw std::invalid_argument("unknown interpolant kind");
}

}  // namespace hydride
