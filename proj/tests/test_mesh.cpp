#include "hydride/mesh.hpp"

#include <doctest.h>

#include <Eigen/Dense>

using namespace hydride;
using doctest::Approx;

TEST_CASE("mesh construction")
{
    const Mesh line = build_mesh(1, {1.0}, {3});
    CHECK(line.num_nodes() == 3);
    CHECK(line.num_elements() == 2);
    CHECK(line.volume(0) == Approx(0.5));

    const Mesh square = build_mesh(2, {1.0, 1.0}, {3, 3});
    CHECK(square.num_nodes() == 9);
    CHECK(square.num_elements() == 8);
    CHECK(square.total_volume() == Approx(1.0).epsilon(1e-15));
    CHECK(square.boundary_measure() == Approx(4.0).epsilon(1e-15));

    CHECK_THROWS(build_mesh(1, {1.0}, {1}));
    CHECK_THROWS(build_mesh(3, {1.0, 1.0, 1.0}, {2, 2, 2}));
}

TEST_CASE("lumped mass")
{
    const Mesh line = build_mesh(1, {1.0}, {3});
    const Vector m = lumped_mass(line);
    CHECK(m[0] == Approx(0.25));
    CHECK(m[1] == Approx(0.5));
    CHECK(m[2] == Approx(0.25));

    const Mesh square = build_mesh(2, {2.0, 0.5}, {5, 4});
    const Vector c = Vector::Constant(square.num_nodes(), 3.0);
    CHECK(lumped_mass(square).dot(c) == Approx(3.0 * 1.0).epsilon(1e-14));
}

TEST_CASE("scalar stiffness")
{
    const Mesh line = build_mesh(1, {1.0}, {3});
    const Eigen::MatrixXd k = Eigen::MatrixXd(stiffness(line, Vector::Ones(2)));
    Eigen::MatrixXd expected(3, 3);
    expected << 1, -1, 0, -1, 2, -1, 0, -1, 1;
    expected /= 0.5;
    CHECK((k - expected).norm() < 1e-13);

    // Alternating diagonals keep the 2D Laplacian an M-matrix.
    const Mesh square = build_mesh(2, {1.0, 1.0}, {6, 5});
    const Eigen::MatrixXd k2 = Eigen::MatrixXd(stiffness(square, Vector::Ones(square.num_elements())));
    for (int i = 0; i < k2.rows(); ++i) {
        CHECK(k2(i, i) > 0.0);
        CHECK(std::abs(k2.row(i).sum()) < 1e-12);
        for (int j = 0; j < k2.cols(); ++j)
            if (i != j) CHECK(k2(i, j) <= 1e-15);
    }
}

TEST_CASE("strains are exact for affine fields")
{
    const Mesh line = build_mesh(1, {1.0}, {7});
    Vector u(line.num_nodes());
    for (int i = 0; i < line.num_nodes(); ++i) u[i] = 0.3 * line.node(i).x();
    for (const auto& e : strain_field(line, u)) CHECK(e(0, 0) == Approx(0.3).epsilon(1e-14));
    for (const auto& e : strain_field(line, Vector::Constant(line.num_nodes(), 2.0))) CHECK(e.norm() < 1e-14);

    const Mesh square = build_mesh(2, {1.0, 1.0}, {4, 5});
    Vector rot(2 * square.num_nodes());
    for (int i = 0; i < square.num_nodes(); ++i) {
        rot[2 * i] = -1e-2 * square.node(i).y();
        rot[2 * i + 1] = 1e-2 * square.node(i).x();
    }
    for (const auto& e : strain_field(square, rot)) CHECK(e.norm() < 1e-14);
}

TEST_CASE("boundary functionals")
{
    const Mesh square = build_mesh(2, {1.0, 1.0}, {5, 5});
    const Vector ones = boundary_functional(square, [](const Facet&, const Point&) { return 1.0; });
    CHECK(ones.sum() == Approx(4.0).epsilon(1e-14));
    const Vector zero = boundary_functional(square, [](const Facet&, const Point&) { return 0.0; });
    CHECK(zero.norm() == 0.0);

    const Mesh line = build_mesh(1, {1.0}, {4});
    const Vector left =
        boundary_functional(line, [](const Facet& f, const Point&) { return f.side == Side::left ? 0.5 : 0.0; });
    CHECK(left[0] == Approx(0.5));
    CHECK(left.sum() == Approx(0.5));
}

TEST_CASE("elasticity stiffness annihilates rigid motions")
{
    const Mesh square = build_mesh(2, {1.0, 1.0}, {4, 4});
    const SparseMatrix k = elasticity_stiffness(square, {1.0, 0.5});
    Vector t(2 * square.num_nodes());
    for (int i = 0; i < square.num_nodes(); ++i) {
        t[2 * i] = 1.0;
        t[2 * i + 1] = -2.0;
    }
    CHECK((k * t).norm() < 1e-12);
}
