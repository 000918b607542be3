#include "hydride/material.hpp"

namespace hydride {

Eigen::MatrixXd Isotropic::mandel(int dim) const
{
    if (dim == 1) return Eigen::MatrixXd::Constant(1, 1, 2.0 * mu + lambda);
    Eigen::MatrixXd c(3, 3);
    c << 2.0 * mu + lambda, lambda, 0.0,
         lambda, 2.0 * mu + lambda, 0.0,
         0.0, 0.0, 2.0 * mu;
    return c;
}

std::string to_string(HeatLaw::Kind kind)
{
    switch (kind) {
    case HeatLaw::Kind::quadratic: return "quadratic";
    case HeatLaw::Kind::linear: return "linear";
    case HeatLaw::Kind::custom: return "custom";
    }
    return "unknown";
}

HeatLaw::Kind heat_law_from_string(const std::string& name)
{
    if (name == "quadratic") return HeatLaw::Kind::quadratic;
    if (name == "linear") return HeatLaw::Kind::linear;
    throw std::invalid_argument("unknown heat law '" + name + "' (expected quadratic or linear)");
}

MaterialModel MaterialModel::desk_default(int dim)
{
    MaterialModel mat;
    mat.dim = dim;
    mat.eps_tr = 0.1 * identity_tensor(dim);
    mat.alpha_th = 0.1 * identity_tensor(dim);
    return mat;
}

}  // namespace hydride
