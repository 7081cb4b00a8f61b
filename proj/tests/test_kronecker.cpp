#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "holo/clarke.hpp"
#include "holo/kronecker.hpp"
#include "holo/metrics.hpp"

using namespace holo;

TEST_CASE("pattern correlation with isotropic elements matches the point-receiver model") {
    // cross-model oracle: translated isotropic patterns under a hemispheric
    // spectrum must reproduce the plane-wave ensemble correlation
    const auto g = build_linear_2d(3, 0.3);
    const auto iso = isotropic_pattern(361, 720);
    std::vector<PatternGrid> pats;
    for (const auto& e : g.elements) pats.push_back(translate_pattern(iso, e));
    const auto spectrum = uniform_cap_spectrum(iso, M_PI / 2.0);
    const auto rho = pattern_correlation(pats, spectrum);

    QuadratureSpec quad;
    quad.node_count = 65536;
    const auto phi = clarke_correlation(g, AngularSpectrum{}, quad);
    REQUIRE((rho.entries - phi.entries).cwiseAbs().maxCoeff() < 2e-3);
}

TEST_CASE("identical patterns are fully correlated") {
    const auto p = element_over_reflector(0.02, 0.0);
    const auto spectrum = uniform_cap_spectrum(p, M_PI / 2.0);
    const auto rho = pattern_correlation({p, p}, spectrum);
    REQUIRE(std::abs(rho.entries(0, 1) - Complex(1.0, 0.0)) < 1e-12);
}

TEST_CASE("orthogonally polarized patterns are uncorrelated") {
    auto a = isotropic_pattern(181, 360); // pure e_theta
    auto b = a;
    b.e_phi = a.e_theta;
    b.e_theta.setZero();
    const auto spectrum = uniform_cap_spectrum(a, M_PI / 2.0);
    const auto rho = pattern_correlation({a, b}, spectrum);
    REQUIRE(std::abs(rho.entries(0, 1)) < 1e-14);
}

TEST_CASE("correlation matrix has unit diagonal and passes validation") {
    const auto g = build_linear_3d(4, 0.25, 0.5);
    const auto lower = element_over_reflector(0.02, 0.0);
    const auto upper = element_over_reflector(0.5, 0.0);
    const auto pats = array_patterns(g, lower, upper);
    const auto rho = pattern_correlation(pats, uniform_cap_spectrum(lower, M_PI / 2.0));
    for (Eigen::Index i = 0; i < 4; ++i) REQUIRE(rho.entries(i, i) == Complex(1.0, 0.0));
    REQUIRE_NOTHROW(rho.validate());
    REQUIRE_NOTHROW(eigen_spectrum(rho));
}

TEST_CASE("zero-power pattern is a degenerate input") {
    auto dead = isotropic_pattern(91, 180);
    dead.e_theta.setZero();
    const auto live = isotropic_pattern(91, 180);
    const auto spectrum = uniform_cap_spectrum(live, M_PI / 2.0);
    REQUIRE_THROWS_AS(pattern_correlation({live, dead}, spectrum), degenerate_input);
}

TEST_CASE("mismatched grids are rejected") {
    const auto a = isotropic_pattern(91, 180);
    const auto b = isotropic_pattern(181, 360);
    REQUIRE_THROWS_AS(pattern_correlation({a, b}, uniform_cap_spectrum(a, 1.0)),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(pattern_correlation({a, a}, uniform_cap_spectrum(b, 1.0)),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(pattern_correlation({}, uniform_cap_spectrum(a, 1.0)),
                      std::invalid_argument);
}

TEST_CASE("uniform cap spectrum covers exactly the cap") {
    const auto p = isotropic_pattern(181, 360);
    const auto s = uniform_cap_spectrum(p, M_PI / 3.0);
    REQUIRE(s.p_theta(60, 0) == 1.0);  // 60 degrees inside
    REQUIRE(s.p_theta(61, 0) == 0.0);  // just outside
    REQUIRE((s.p_theta == s.p_phi).all());
    REQUIRE_NOTHROW(s.validate());
}

TEST_CASE("embedded efficiency arithmetic") {
    ScatteringMatrix s;
    s.port_count = 2;
    s.frequencies_hz = {1e9, 2e9};
    MatrixXc m1(2, 2), m2(2, 2);
    m1 << Complex(0.4, 0.0), Complex(0.0, 0.1), Complex(0.2, 0.0), Complex(0.3, 0.0);
    m2 << Complex(0.1, 0.0), Complex(0.0, 0.0), Complex(0.0, 0.0), Complex(0.1, 0.0);
    s.data = {m1, m2};
    const auto e = embedded_efficiency(s, 1e9, nullptr);
    REQUIRE(e.values[0] == Catch::Approx(1.0 - 0.16 - 0.04));  // 0.8
    REQUIRE(e.values[1] == Catch::Approx(1.0 - 0.01 - 0.09));  // 0.9
    // nearest-frequency selection
    const auto e2 = embedded_efficiency(s, 1.9e9, nullptr);
    REQUIRE(e2.values[0] == Catch::Approx(0.99));
    REQUIRE_THROWS_AS(embedded_efficiency(s, 9e9, nullptr), std::invalid_argument);
}

TEST_CASE("passivity violation clamps to zero with a warning") {
    ScatteringMatrix s;
    s.port_count = 1;
    s.frequencies_hz = {1e9};
    MatrixXc m(1, 1);
    m << Complex(1.2, 0.0);
    s.data = {m};
    std::ostringstream warn;
    const auto e = embedded_efficiency(s, 1e9, &warn);
    REQUIRE(e.values[0] == 0.0);
    REQUIRE(warn.str().find("passivity") != std::string::npos);
}

TEST_CASE("covariance folds the efficiency dyad into the correlation") {
    CorrelationMatrix phi;
    phi.entries.resize(2, 2);
    phi.entries << Complex(1, 0), Complex(0.5, 0.25), Complex(0.5, -0.25), Complex(1, 0);
    EfficiencyVector e{Eigen::Vector2d(1.0, 0.64)};
    const auto r = covariance(phi, e);
    REQUIRE(r.entries(0, 0) == Complex(1.0, 0.0));
    REQUIRE(r.entries(1, 1).real() == Catch::Approx(0.64));
    REQUIRE(r.entries(0, 1).real() == Catch::Approx(0.5 * 0.8));
    REQUIRE(r.entries(0, 1).imag() == Catch::Approx(0.25 * 0.8));
    REQUIRE_NOTHROW(r.validate());
    // dimension and range checks
    EfficiencyVector wrong{Eigen::Vector3d::Ones()};
    REQUIRE_THROWS_AS(covariance(phi, wrong), std::invalid_argument);
    EfficiencyVector over{Eigen::Vector2d(1.0, 1.5)};
    REQUIRE_THROWS_AS(covariance(phi, over), std::invalid_argument);
}

TEST_CASE("scattering matrix validation and passivity") {
    ScatteringMatrix s;
    s.port_count = 2;
    s.frequencies_hz = {1e9};
    s.data = {MatrixXc::Zero(2, 2)};
    REQUIRE_NOTHROW(s.validate());
    REQUIRE(s.is_passive());
    s.data[0](0, 0) = Complex(1.1, 0.0);
    REQUIRE_FALSE(s.is_passive());
    s.frequencies_hz = {2e9, 1e9};
    s.data = {MatrixXc::Zero(2, 2), MatrixXc::Zero(2, 2)};
    REQUIRE_THROWS_AS(s.validate(), std::invalid_argument);
}

TEST_CASE("ideal efficiencies are all ones") {
    const auto e = ideal_efficiencies(5);
    REQUIRE(e.values.size() == 5);
    REQUIRE(e.values.minCoeff() == 1.0);
    REQUIRE_NOTHROW(e.validate());
}
