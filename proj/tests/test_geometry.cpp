#include <catch2/catch_amalgamated.hpp>

#include "holo/geometry.hpp"
#include "holo/metrics.hpp"

using namespace holo;

TEST_CASE("build_linear_2d places elements along x") {
    const auto g = build_linear_2d(4, 0.5);
    REQUIRE(g.size() == 4);
    REQUIRE(g.layout == LayoutTag::planar2d);
    for (int i = 0; i < 4; ++i) {
        REQUIRE(g.elements[i].x() == Catch::Approx(0.5 * i));
        REQUIRE(g.elements[i].y() == 0.0);
        REQUIRE(g.elements[i].z() == 0.0);
    }
    REQUIRE(g.x_extent() == Catch::Approx(1.5));
}

TEST_CASE("build_linear_3d alternates heights on odd indices") {
    const auto g = build_linear_3d(5, 0.5, 0.3);
    REQUIRE(g.layout == LayoutTag::alternating3d);
    REQUIRE(g.elements[0].z() == 0.0);
    REQUIRE(g.elements[1].z() == Catch::Approx(0.3));
    REQUIRE(g.elements[2].z() == 0.0);
    REQUIRE(g.elements[3].z() == Catch::Approx(0.3));
}

TEST_CASE("build_linear_3d with zero height degenerates to the planar layout") {
    const auto g = build_linear_3d(3, 0.25, 0.0);
    REQUIRE(g.layout == LayoutTag::planar2d);
    for (const auto& e : g.elements) REQUIRE(e.z() == 0.0);
}

TEST_CASE("constructor argument validation") {
    REQUIRE_THROWS_AS(build_linear_2d(0, 0.5), std::invalid_argument);
    REQUIRE_THROWS_AS(build_linear_2d(3, 0.0), std::invalid_argument);
    REQUIRE_THROWS_AS(build_linear_3d(3, -0.5, 0.1), std::invalid_argument);
    REQUIRE_THROWS_AS(build_linear_3d(3, 0.5, -0.1), std::invalid_argument);
}

TEST_CASE("min_spacing is the smallest pairwise Euclidean distance") {
    const auto flat = build_linear_2d(5, 0.5);
    REQUIRE(flat.min_spacing() == Catch::Approx(0.5));
    const auto raised = build_linear_3d(5, 0.5, 0.208);
    REQUIRE(raised.min_spacing() == Catch::Approx(std::hypot(0.5, 0.208)));
    ArrayGeometry single;
    single.elements = {Vec3(0, 0, 0)};
    REQUIRE(std::isinf(single.min_spacing()));
}

TEST_CASE("geometry_context measures spacing along the aperture axis") {
    // raised elements do not escape the half-wave accounting
    const auto raised = build_linear_3d(5, 0.4, 0.5);
    const auto ctx = geometry_context(raised);
    REQUIRE(ctx.min_spacing == Catch::Approx(0.4));
    REQUIRE(ctx.n_halfwave == 4); // 1.6 extent -> floor(3.2) + 1
    const auto half = geometry_context(build_linear_2d(5, 0.5));
    REQUIRE(half.min_spacing == Catch::Approx(0.5));
    REQUIRE(half.n_halfwave == 5);
}

TEST_CASE("projected_length of a linear array") {
    const auto g = build_linear_2d(5, 0.5);
    REQUIRE(projected_length(g, Vec3(0, 0, 1)) == Catch::Approx(2.0));
    REQUIRE(projected_length(g, Vec3(1, 0, 0)) == Catch::Approx(0.0).margin(1e-12));
    REQUIRE_THROWS_AS(projected_length(g, Vec3(0, 0, 2)), std::invalid_argument);
    REQUIRE_THROWS_AS(projected_length(g, Vec3(0, 0, 0)), std::invalid_argument);
}

TEST_CASE("geometry JSON round trip") {
    const auto g = build_linear_3d(4, 0.5, 0.25);
    const auto j = to_json(g);
    const auto back = geometry_from_json(j);
    REQUIRE(back.layout == g.layout);
    REQUIRE(back.size() == g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
        REQUIRE((back.elements[i] - g.elements[i]).norm() == 0.0);
}

TEST_CASE("geometry JSON rejects malformed input") {
    nlohmann::json bad_layout = {{"layout", "weird"}, {"elements", {{0.0, 0.0, 0.0}}}};
    REQUIRE_THROWS_AS(geometry_from_json(bad_layout), std::invalid_argument);
    nlohmann::json empty = {{"layout", "custom"}, {"elements", nlohmann::json::array()}};
    REQUIRE_THROWS_AS(geometry_from_json(empty), std::invalid_argument);
    nlohmann::json two_coords = {{"layout", "custom"}, {"elements", {{0.0, 0.0}}}};
    REQUIRE_THROWS_AS(geometry_from_json(two_coords), std::invalid_argument);
}

TEST_CASE("layout tag string round trip") {
    for (auto t : {LayoutTag::planar2d, LayoutTag::alternating3d, LayoutTag::custom})
        REQUIRE(layout_from_string(to_string(t)) == t);
    REQUIRE_THROWS_AS(layout_from_string("nope"), std::invalid_argument);
}
