#include "hydride/constitutive.hpp"

#include <doctest.h>

#include <random>

using namespace hydride;
using doctest::Approx;

namespace {

MaterialModel with_law(HeatLaw::Kind kind)
{
    MaterialModel m = MaterialModel::desk_default(1);
    m.heat_law.kind = kind;
    m.heat_law.c0 = 2.0;
    return m;
}

}  // namespace

TEST_CASE("enthalpy from temperature")
{
    const auto quad = with_law(HeatLaw::Kind::quadratic);
    const auto lin = with_law(HeatLaw::Kind::linear);
    CHECK(omega_of_theta(quad, 0.3, 3.0) == Approx(9.0).epsilon(1e-14));
    CHECK(omega_of_theta(lin, 0.3, 3.0) == Approx(6.0).epsilon(1e-14));
    CHECK(omega_of_theta(quad, 0.3, 0.0) == 0.0);
    CHECK(omega_of_theta(lin, 0.3, 0.0) == 0.0);
    CHECK_THROWS_AS(omega_of_theta(quad, 0.3, -1e-3), DomainError);
}

TEST_CASE("temperature from enthalpy")
{
    const auto quad = with_law(HeatLaw::Kind::quadratic);
    CHECK(theta_of_w(quad, 0.5, 9.0) == Approx(3.0).epsilon(1e-14));
    CHECK(theta_of_w(quad, 0.5, 0.0) == 0.0);
    CHECK_THROWS_AS(theta_of_w(quad, 0.5, -1.0), DomainError);

    for (auto kind : {HeatLaw::Kind::quadratic, HeatLaw::Kind::linear}) {
        auto mat = with_law(kind);
        mat.heat_law.c0_slope = 0.7;
        CHECK(theta_of_w(mat, 0.4, omega_of_theta(mat, 0.4, 0.7)) == Approx(0.7).epsilon(1e-12));
    }
}

TEST_CASE("round trip theta -> w -> theta at random points")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (auto kind : {HeatLaw::Kind::quadratic, HeatLaw::Kind::linear}) {
        auto mat = with_law(kind);
        mat.heat_law.c0_slope = 1.5;
        for (int i = 0; i < 200; ++i) {
            const double m = unit(rng);
            const double theta = 10.0 * unit(rng);
            CHECK(theta_of_w(mat, m, omega_of_theta(mat, m, theta)) == Approx(theta).epsilon(1e-12));
        }
    }
}

TEST_CASE("chemical potential")
{
    const auto mat = MaterialModel::desk_default(1);
    CHECK(swelling(mat, 1.0) == Approx(0.1));
    CHECK(chemical_potential(mat, 0.5, 1.0) == Approx(4.6).epsilon(1e-14));
    CHECK(chemical_potential(mat, 0.1, 1.0) == Approx(5.0).epsilon(1e-14));
    for (double m : {0.0, 0.3, 1.0}) CHECK(chemical_potential(mat, m, 0.0) == 0.0);
    CHECK_THROWS_AS(chemical_potential(mat, 0.5, -0.1), DomainError);
}

TEST_CASE("phase driving force")
{
    const auto mat = MaterialModel::desk_default(1);
    CHECK(dphi1_dm(mat, 0.5, 1.0) == Approx(4.0).epsilon(1e-14));
    for (double chi : {0.0, 0.7, 2.5}) CHECK(dphi1_dm(mat, swelling(mat, chi), chi) == Approx(0.0).epsilon(1e-14));
}

TEST_CASE("stress and adiabatic terms in 1D")
{
    const auto mat = MaterialModel::desk_default(1);
    const Tensor2 e01 = 0.1 * identity_tensor(1);
    const Tensor2 e02 = 0.2 * identity_tensor(1);
    CHECK(stress(mat, e01, 1.0, 0.0)(0, 0) == Approx(0.0).epsilon(1e-15));
    CHECK(stress(mat, e02, 1.0, 0.0)(0, 0) == Approx(0.1).epsilon(1e-14));
    CHECK(stress(mat, Tensor2::Zero(), 0.0, 9.0)(0, 0) == Approx(-0.3).epsilon(1e-14));
    CHECK(sigma_a(mat, 0.4, 0.0).norm() == 0.0);
    CHECK(sigma_a(mat, 0.4, 9.0)(0, 0) == Approx(-0.3).epsilon(1e-14));
    CHECK(s_a(mat, 0.4, 0.0) == 0.0);
    CHECK(s_a(mat, 0.4, 9.0) == Approx(0.03).epsilon(1e-14));
}

TEST_CASE("transport coefficients")
{
    const auto mat = MaterialModel::desk_default(1);
    const auto at_zero = transport_coeffs(mat, Tensor2::Zero(), 0.5, 0.0, 1.0);
    CHECK(at_zero.hydrogen_phase == 0.0);
    const auto c = transport_coeffs(mat, Tensor2::Zero(), 0.5, 1.0, 1.0);
    CHECK(c.hydrogen_chi == Approx(5.5).epsilon(1e-14));
    CHECK(c.hydrogen_phase == Approx(-1.0).epsilon(1e-14));
    CHECK(c.heat == Approx(1.0));
    for (auto kind : {HeatLaw::Kind::quadratic, HeatLaw::Kind::linear})
        CHECK(transport_coeffs(with_law(kind), Tensor2::Zero(), 0.3, 1.0, 2.0).heat_phase == 0.0);
}

TEST_CASE("material validator")
{
    SUBCASE("desk default passes with a convexity margin of at least one")
    {
        const auto report = validate_material(MaterialModel::desk_default(1), 3.0, 10000);
        CHECK(report.ok());
        REQUIRE(report.find("chi_convexity"));
        CHECK(report.find("chi_convexity")->worst_margin >= 1.0);
    }
    SUBCASE("steep swelling curve loses convexity in chi")
    {
        auto mat = MaterialModel::desk_default(1);
        mat.swelling_amplitude = 1.0;
        const auto report = validate_material(mat, 3.0, 10000);
        CHECK_FALSE(report.ok());
        CHECK_FALSE(report.find("chi_convexity")->passed);
        CHECK_THROWS_AS(require_valid(report), ValidationError);
    }
    SUBCASE("negative activation threshold")
    {
        auto mat = MaterialModel::desk_default(1);
        mat.activation_threshold = -0.1;
        const auto report = validate_material(mat, 3.0, 10000);
        CHECK_FALSE(report.find("activation_convex_homogeneous")->passed);
    }
    SUBCASE("2D desk default passes")
    {
        CHECK(validate_material(MaterialModel::desk_default(2), 3.0, 10000).ok());
    }
}

TEST_CASE("semiconvexity infimum")
{
    auto mat = MaterialModel::desk_default(1);
    CHECK(inf_d2phi1_dm2(mat, 3.0) == Approx(10.0));
    mat.double_well = 26.0;
    CHECK(inf_d2phi1_dm2(mat, 3.0) == Approx(-16.0).epsilon(1e-12));
}
