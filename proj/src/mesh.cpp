#include "hydride/mesh.hpp"

#include <Eigen/LU>

#include <cmath>

namespace hydride {

std::string to_string(Side side)
{
    switch (side) {
    case Side::left: return "left";
    case Side::right: return "right";
    case Side::bottom: return "bottom";
    case Side::top: return "top";
    }
    return "unknown";
}

Point Mesh::centroid(int e) const
{
    Point c = Point::Zero();
    for (int a = 0; a < nodes_per_element(); ++a) c += nodes_[elements_[e][a]];
    return c / nodes_per_element();
}

double Mesh::total_volume() const
{
    double v = 0.0;
    for (double vol : volumes_) v += vol;
    return v;
}

double Mesh::boundary_measure() const
{
    double s = 0.0;
    for (const auto& f : facets_) s += f.measure;
    return s;
}

namespace {

void add_edge_facet(std::vector<Facet>& facets, const std::vector<Point>& nodes, int a, int b, Side side,
                    const Point& normal)
{
    Facet f;
    f.nodes = {a, b};
    f.node_count = 2;
    f.normal = normal;
    f.midpoint = 0.5 * (nodes[a] + nodes[b]);
    f.measure = (nodes[b] - nodes[a]).norm();
    f.side = side;
    facets.push_back(f);
}

}  // namespace

Mesh build_mesh(int dim, const std::vector<double>& lengths, const std::vector<int>& resolution)
{
    if (dim != 1 && dim != 2) throw std::invalid_argument("build_mesh: dim must be 1 or 2");
    if (static_cast<int>(lengths.size()) != dim || static_cast<int>(resolution.size()) != dim)
        throw std::invalid_argument("build_mesh: need one length and one resolution per axis");
    for (int i = 0; i < dim; ++i) {
        if (!(lengths[i] > 0.0) || !std::isfinite(lengths[i]))
            throw std::invalid_argument("build_mesh: lengths must be positive and finite");
        if (resolution[i] < 2) throw std::invalid_argument("build_mesh: need at least 2 nodes per axis");
    }

    Mesh mesh;
    mesh.dim_ = dim;
    mesh.lengths_ = {lengths[0], dim == 2 ? lengths[1] : 0.0};
    mesh.resolution_ = {resolution[0], dim == 2 ? resolution[1] : 1};

    const int nx = resolution[0];
    const double hx = lengths[0] / (nx - 1);

    if (dim == 1) {
        for (int i = 0; i < nx; ++i) mesh.nodes_.emplace_back(i * hx, 0.0);
        for (int i = 0; i + 1 < nx; ++i) {
            mesh.elements_.push_back({i, i + 1, -1});
            mesh.volumes_.push_back(hx);
            Mesh::Gradients g = Mesh::Gradients::Zero();
            g(0, 0) = -1.0 / hx;
            g(0, 1) = 1.0 / hx;
            mesh.gradients_.push_back(g);
        }
        Facet left;
        left.nodes = {0, -1};
        left.normal = Point(-1.0, 0.0);
        left.midpoint = mesh.nodes_.front();
        left.side = Side::left;
        Facet right;
        right.nodes = {nx - 1, -1};
        right.normal = Point(1.0, 0.0);
        right.midpoint = mesh.nodes_.back();
        right.side = Side::right;
        mesh.facets_ = {left, right};
        return mesh;
    }

    const int ny = resolution[1];
    const double hy = lengths[1] / (ny - 1);
    auto id = [nx](int i, int j) { return j * nx + i; };
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) mesh.nodes_.emplace_back(i * hx, j * hy);

    for (int j = 0; j + 1 < ny; ++j) {
        for (int i = 0; i + 1 < nx; ++i) {
            const int n00 = id(i, j), n10 = id(i + 1, j), n01 = id(i, j + 1), n11 = id(i + 1, j + 1);
            if ((i + j) % 2 == 0) {
                mesh.elements_.push_back({n00, n10, n11});
                mesh.elements_.push_back({n00, n11, n01});
            } else {
                mesh.elements_.push_back({n00, n10, n01});
                mesh.elements_.push_back({n10, n11, n01});
            }
        }
    }
    const Eigen::Matrix<double, 2, 3> reference{{-1.0, 1.0, 0.0}, {-1.0, 0.0, 1.0}};
    for (const auto& el : mesh.elements_) {
        const Point& p0 = mesh.nodes_[el[0]];
        Eigen::Matrix2d jac;
        jac.col(0) = mesh.nodes_[el[1]] - p0;
        jac.col(1) = mesh.nodes_[el[2]] - p0;
        const double det = jac.determinant();
        if (!(det > 0.0)) throw std::logic_error("build_mesh: non-positive element orientation");
        mesh.volumes_.push_back(0.5 * det);
        mesh.gradients_.push_back(jac.inverse().transpose() * reference);
    }

    for (int i = 0; i + 1 < nx; ++i) add_edge_facet(mesh.facets_, mesh.nodes_, id(i, 0), id(i + 1, 0), Side::bottom, Point(0, -1));
    for (int j = 0; j + 1 < ny; ++j) add_edge_facet(mesh.facets_, mesh.nodes_, id(nx - 1, j), id(nx - 1, j + 1), Side::right, Point(1, 0));
    for (int i = nx - 1; i > 0; --i) add_edge_facet(mesh.facets_, mesh.nodes_, id(i, ny - 1), id(i - 1, ny - 1), Side::top, Point(0, 1));
    for (int j = ny - 1; j > 0; --j) add_edge_facet(mesh.facets_, mesh.nodes_, id(0, j), id(0, j - 1), Side::left, Point(-1, 0));
    return mesh;
}

Vector lumped_mass(const Mesh& mesh)
{
    Vector mass = Vector::Zero(mesh.num_nodes());
    const double share = 1.0 / mesh.nodes_per_element();
    for (int e = 0; e < mesh.num_elements(); ++e)
        for (int a = 0; a < mesh.nodes_per_element(); ++a) mass[mesh.element(e)[a]] += share * mesh.volume(e);
    return mass;
}

SparseMatrix stiffness(const Mesh& mesh, const Vector& element_coeff)
{
    if (element_coeff.size() != mesh.num_elements())
        throw std::invalid_argument("stiffness: one coefficient per element expected");
    const int npe = mesh.nodes_per_element();
    std::vector<Triplet> triplets;
    triplets.reserve(static_cast<std::size_t>(mesh.num_elements()) * npe * npe);
    for (int e = 0; e < mesh.num_elements(); ++e) {
        const auto& g = mesh.gradients(e);
        const double scale = element_coeff[e] * mesh.volume(e);
        for (int a = 0; a < npe; ++a)
            for (int b = 0; b < npe; ++b)
                triplets.emplace_back(mesh.element(e)[a], mesh.element(e)[b], scale * g.col(a).dot(g.col(b)));
    }
    SparseMatrix k(mesh.num_nodes(), mesh.num_nodes());
    k.setFromTriplets(triplets.begin(), triplets.end());
    return k;
}

std::vector<Tensor2> basis_strains(const Mesh& mesh, int e)
{
    const int dim = mesh.dim();
    const auto& g = mesh.gradients(e);
    std::vector<Tensor2> out;
    out.reserve(static_cast<std::size_t>(dim) * mesh.nodes_per_element());
    for (int a = 0; a < mesh.nodes_per_element(); ++a) {
        for (int c = 0; c < dim; ++c) {
            Tensor2 grad = Tensor2::Zero();
            grad.row(c) = g.col(a).transpose();
            out.push_back(0.5 * (grad + grad.transpose()));
        }
    }
    return out;
}

SparseMatrix elasticity_stiffness(const Mesh& mesh, const Isotropic& moduli)
{
    const int dim = mesh.dim();
    const int ndof = dim * mesh.nodes_per_element();
    std::vector<Triplet> triplets;
    triplets.reserve(static_cast<std::size_t>(mesh.num_elements()) * ndof * ndof);
    for (int e = 0; e < mesh.num_elements(); ++e) {
        const auto basis = basis_strains(mesh, e);
        for (int p = 0; p < ndof; ++p) {
            const Tensor2 stress_p = moduli.apply(basis[p], dim);
            const int row = mesh.element(e)[p / dim] * dim + p % dim;
            for (int q = 0; q < ndof; ++q) {
                const int col = mesh.element(e)[q / dim] * dim + q % dim;
                triplets.emplace_back(row, col, mesh.volume(e) * contract(stress_p, basis[q]));
            }
        }
    }
    SparseMatrix k(dim * mesh.num_nodes(), dim * mesh.num_nodes());
    k.setFromTriplets(triplets.begin(), triplets.end());
    return k;
}

Tensor2 element_strain(const Mesh& mesh, int e, const Vector& u)
{
    const int dim = mesh.dim();
    const auto& g = mesh.gradients(e);
    Tensor2 grad = Tensor2::Zero();
    for (int a = 0; a < mesh.nodes_per_element(); ++a) {
        const int n = mesh.element(e)[a];
        for (int c = 0; c < dim; ++c) grad.row(c) += u[n * dim + c] * g.col(a).transpose();
    }
    return 0.5 * (grad + grad.transpose());
}

std::vector<Tensor2> strain_field(const Mesh& mesh, const Vector& u)
{
    if (u.size() != mesh.dim() * mesh.num_nodes()) throw std::invalid_argument("strain_field: size mismatch");
    std::vector<Tensor2> out(mesh.num_elements());
    for (int e = 0; e < mesh.num_elements(); ++e) out[e] = element_strain(mesh, e, u);
    return out;
}

Point element_gradient(const Mesh& mesh, int e, const Vector& nodal)
{
    const auto& g = mesh.gradients(e);
    Point grad = Point::Zero();
    for (int a = 0; a < mesh.nodes_per_element(); ++a) grad += nodal[mesh.element(e)[a]] * g.col(a);
    return grad;
}

std::vector<Point> gradient_field(const Mesh& mesh, const Vector& nodal)
{
    if (nodal.size() != mesh.num_nodes()) throw std::invalid_argument("gradient_field: size mismatch");
    std::vector<Point> out(mesh.num_elements());
    for (int e = 0; e < mesh.num_elements(); ++e) out[e] = element_gradient(mesh, e, nodal);
    return out;
}

double element_average(const Mesh& mesh, int e, const Vector& nodal)
{
    double s = 0.0;
    for (int a = 0; a < mesh.nodes_per_element(); ++a) s += nodal[mesh.element(e)[a]];
    return s / mesh.nodes_per_element();
}

Vector element_average(const Mesh& mesh, const Vector& nodal)
{
    Vector out(mesh.num_elements());
    for (int e = 0; e < mesh.num_elements(); ++e) out[e] = element_average(mesh, e, nodal);
    return out;
}

Vector lump_to_nodes(const Mesh& mesh, const Vector& element_density)
{
    Vector out = Vector::Zero(mesh.num_nodes());
    const double share = 1.0 / mesh.nodes_per_element();
    for (int e = 0; e < mesh.num_elements(); ++e)
        for (int a = 0; a < mesh.nodes_per_element(); ++a)
            out[mesh.element(e)[a]] += share * mesh.volume(e) * element_density[e];
    return out;
}

Vector boundary_functional(const Mesh& mesh, const FacetScalar& g)
{
    Vector load = Vector::Zero(mesh.num_nodes());
    for (const auto& f : mesh.facets()) {
        const double value = g(f, f.midpoint) * f.measure / f.node_count;
        for (int a = 0; a < f.node_count; ++a) load[f.nodes[a]] += value;
    }
    return load;
}

Vector boundary_functional_vector(const Mesh& mesh, const FacetVector& g)
{
    const int dim = mesh.dim();
    Vector load = Vector::Zero(dim * mesh.num_nodes());
    for (const auto& f : mesh.facets()) {
        const Point value = g(f, f.midpoint) * (f.measure / f.node_count);
        for (int a = 0; a < f.node_count; ++a)
            for (int c = 0; c < dim; ++c) load[f.nodes[a] * dim + c] += value[c];
    }
    return load;
}

}  // namespace hydride
