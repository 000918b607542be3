#pragma once

#include "hydride/driver.hpp"

#include <functional>
#include <string>
#include <vector>

namespace hydride {

/// Two-dimensional companion of the desk default: unit square, 9 x 9 nodes,
/// T = 0.02, tau = 1e-3, charging flux 0.5 on the left edge.
RunConfig builtin_2d_config();

/// Desk-default material with the double-well add-on d0 = 26, giving
/// inf d2phi1/dm2 = -16 and a stability limit of 1/256.
MaterialModel double_well_material();

struct CriterionResult {
    int id = 0;
    std::string title;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

struct Criterion {
    int id;
    std::string suite;  // invariants, oracles or convergence
    std::string title;
    std::function<CriterionResult()> check;
};

/// The eleven acceptance checks, in order.
const std::vector<Criterion>& acceptance_criteria();

CriterionResult run_criterion(const Criterion& criterion);

/// Amplitude of the cos(pi x) mode of a nodal field on a 1D mesh, measured
/// in the lumped-mass inner product.
double cosine_mode(const Mesh& mesh, const Vector& values);

}  // namespace hydride
