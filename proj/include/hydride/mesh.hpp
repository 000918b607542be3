#pragma once

#include "hydride/material.hpp"
#include "hydride/types.hpp"

#include <array>
#include <functional>
#include <string>
#include <vector>

namespace hydride {

enum class Side { left, right, bottom, top };

std::string to_string(Side side);

/// Boundary facet: an end point in 1D, an edge in 2D.
struct Facet {
    std::array<int, 2> nodes{};
    int node_count = 1;
    Point normal = Point::Zero();
    Point midpoint = Point::Zero();
    double measure = 1.0;
    Side side = Side::left;
};

/// Uniform P1 simplicial mesh of [0, L1] (1D) or [0, L1] x [0, L2] (2D).
///
/// The 2D mesh splits every cell into two right triangles with alternating
/// diagonals; the scalar Laplacian stiffness is then an M-matrix.
class Mesh {
public:
    using Gradients = Eigen::Matrix<double, 2, 3>;

    int dim() const { return dim_; }
    int num_nodes() const { return static_cast<int>(nodes_.size()); }
    int num_elements() const { return static_cast<int>(elements_.size()); }
    int nodes_per_element() const { return dim_ + 1; }

    const Point& node(int i) const { return nodes_[i]; }
    const std::array<int, 3>& element(int e) const { return elements_[e]; }
    double volume(int e) const { return volumes_[e]; }
    /// Columns hold the (constant) gradients of the element's shape functions.
    const Gradients& gradients(int e) const { return gradients_[e]; }
    Point centroid(int e) const;

    const std::vector<Facet>& facets() const { return facets_; }
    const std::array<double, 2>& lengths() const { return lengths_; }
    const std::array<int, 2>& resolution() const { return resolution_; }
    double total_volume() const;
    double boundary_measure() const;

private:
    friend Mesh build_mesh(int dim, const std::vector<double>& lengths, const std::vector<int>& resolution);

    int dim_ = 1;
    std::array<double, 2> lengths_{1.0, 0.0};
    std::array<int, 2> resolution_{2, 1};
    std::vector<Point> nodes_;
    std::vector<std::array<int, 3>> elements_;
    std::vector<double> volumes_;
    std::vector<Gradients> gradients_;
    std::vector<Facet> facets_;
};

/// `resolution` counts nodes per axis (at least 2).
Mesh build_mesh(int dim, const std::vector<double>& lengths, const std::vector<int>& resolution);

/// Row-sum lumped P1 mass matrix, returned as its diagonal.
Vector lumped_mass(const Mesh& mesh);

/// Scalar stiffness sum_e coeff_e |e| grad N_i . grad N_j.
SparseMatrix stiffness(const Mesh& mesh, const Vector& element_coeff);

/// Elasticity-type stiffness sum_e |e| (A eps(N_p)) : eps(N_q) on dim-interleaved dofs.
SparseMatrix elasticity_stiffness(const Mesh& mesh, const Isotropic& moduli);

/// Symmetric-gradient images of the dim * (dim + 1) local vector basis
/// functions of element e, ordered (node a, component c) -> a * dim + c.
std::vector<Tensor2> basis_strains(const Mesh& mesh, int e);

Tensor2 element_strain(const Mesh& mesh, int e, const Vector& u);
std::vector<Tensor2> strain_field(const Mesh& mesh, const Vector& u);

Point element_gradient(const Mesh& mesh, int e, const Vector& nodal);
std::vector<Point> gradient_field(const Mesh& mesh, const Vector& nodal);

/// Vertex average (the one-point quadrature value) of a nodal field.
double element_average(const Mesh& mesh, int e, const Vector& nodal);
Vector element_average(const Mesh& mesh, const Vector& nodal);

/// Distributes per-element densities to the vertices with weight |e| / (dim + 1).
Vector lump_to_nodes(const Mesh& mesh, const Vector& element_density);

using FacetScalar = std::function<double(const Facet&, const Point&)>;
using FacetVector = std::function<Point(const Facet&, const Point&)>;

/// P1 facet quadrature of the boundary integral of g v.
Vector boundary_functional(const Mesh& mesh, const FacetScalar& g);
Vector boundary_functional_vector(const Mesh& mesh, const FacetVector& g);

}  // namespace hydride
