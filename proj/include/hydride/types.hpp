#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <stdexcept>
#include <string>

namespace hydride {

using Vector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

/// Symmetric second-order tensor. One-dimensional problems use only the
/// (0,0) entry; all other entries stay zero.
using Tensor2 = Eigen::Matrix2d;
using Point = Eigen::Vector2d;

/// Identity on the active coordinate block of a `dim`-dimensional problem.
inline Tensor2 identity_tensor(int dim)
{
    Tensor2 id = Tensor2::Zero();
    for (int i = 0; i < dim; ++i) id(i, i) = 1.0;
    return id;
}

inline double contract(const Tensor2& a, const Tensor2& b) { return (a.array() * b.array()).sum(); }

// Error taxonomy. The CLI maps each kind onto a distinct exit status.

/// Argument outside the mathematical domain of a constitutive function.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Malformed or inconsistent run configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A material violating one of the standing structural assumptions.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An iterative solver did not reach its tolerance.
class SolverFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A guaranteed property of the scheme (non-negativity, box constraint,
/// energy decrease, ...) was observed to fail.
class InvariantViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace hydride
