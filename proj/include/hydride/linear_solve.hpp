#pragma once

#include "hydride/types.hpp"

#include <string>

namespace hydride {

struct CgReport {
    int iterations = 0;
    double relative_residual = 0.0;
};

/// Solves the SPD system A x = b starting from `x0` in correction form:
/// CG (diagonal preconditioner) is applied to A d = b - A x0, so `tol` is
/// relative to the initial residual. Throws SolverFailure naming `what`.
Vector solve_spd(const SparseMatrix& a, const Vector& b, const Vector& x0, double tol, const std::string& what,
                 CgReport* report = nullptr);

}  // namespace hydride
