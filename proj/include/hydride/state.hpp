#pragma once

#include "hydride/types.hpp"

#include <string>

namespace hydride {

/// Nodal fields at one time level. `u` and `v` are dim-interleaved; `v` is
/// the backward difference (u^k - u^{k-1}) / tau (the initial velocity at k = 0).
struct State {
    double t = 0.0;
    Vector u;
    Vector v;
    Vector m;
    Vector xi;
    Vector chi;
    Vector mu;
    Vector w;
};

enum class Field { u, v, m, xi, chi, mu, w };

const Vector& field_of(const State& state, Field field);
std::string to_string(Field field);

}  // namespace hydride
