#include "hydride/linear_solve.hpp"

#include <Eigen/IterativeLinearSolvers>

#include <cmath>

namespace hydride {

Vector solve_spd(const SparseMatrix& a, const Vector& b, const Vector& x0, double tol, const std::string& what,
                 CgReport* report)
{
    const Vector r = b - a * x0;
    if (!r.allFinite()) throw SolverFailure(what + ": non-finite residual");
    if (r.squaredNorm() == 0.0) {
        if (report) *report = {};
        return x0;
    }
    Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper, Eigen::DiagonalPreconditioner<double>> cg;
    cg.setTolerance(tol);
    cg.setMaxIterations(std::max<Eigen::Index>(1000, 10 * a.rows()));
    cg.compute(a);
    const Vector d = cg.solve(r);
    if (cg.info() != Eigen::Success || !d.allFinite())
        throw SolverFailure(what + ": conjugate gradients stopped after " + std::to_string(cg.iterations()) +
                            " iterations at relative residual " + std::to_string(cg.error()));
    if (report) *report = {static_cast<int>(cg.iterations()), cg.error()};
    return x0 + d;
}

}  // namespace hydride
