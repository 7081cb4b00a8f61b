#ifndef HOLO_GEOMETRY_HPP
#define HOLO_GEOMETRY_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace holo {

using Vec3 = Eigen::Vector3d;

// Free-space wavenumber for coordinates expressed in wavelengths.
inline constexpr double k0 = 2.0 * M_PI;

enum class LayoutTag { planar2d, alternating3d, custom };

inline std::string to_string(LayoutTag t) {
    switch (t) {
        case LayoutTag::planar2d: return "planar2d";
        case LayoutTag::alternating3d: return "alternating3d";
        default: return "custom";
    }
}

inline LayoutTag layout_from_string(const std::string& s) {
    if (s == "planar2d") return LayoutTag::planar2d;
    if (s == "alternating3d") return LayoutTag::alternating3d;
    if (s == "custom") return LayoutTag::custom;
    throw std::invalid_argument("unknown layout tag: " + s);
}

// Element positions in units of free-space wavelength. Immutable after
// construction; one-row arrays run along the x-axis by convention.
struct ArrayGeometry {
    std::vector<Vec3> elements;
    LayoutTag layout = LayoutTag::custom;

    std::size_t size() const noexcept { return elements.size(); }

    double min_spacing() const {
        if (elements.size() < 2) return std::numeric_limits<double>::infinity();
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < elements.size(); ++i)
            for (std::size_t j = i + 1; j < elements.size(); ++j)
                best = std::min(best, (elements[i] - elements[j]).norm());
        return best;
    }

    // Extent along x; the aperture length of a one-row array.
    double x_extent() const {
        if (elements.empty()) return 0.0;
        auto [lo, hi] = std::minmax_element(
            elements.begin(), elements.end(),
            [](const Vec3& a, const Vec3& b) { return a.x() < b.x(); });
        return hi->x() - lo->x();
    }
};

inline ArrayGeometry build_linear_2d(int n, double spacing) {
    if (n < 1) throw std::invalid_argument("build_linear_2d: n must be >= 1");
    if (!(spacing > 0.0)) throw std::invalid_argument("build_linear_2d: spacing must be > 0");
    ArrayGeometry g;
    g.layout = LayoutTag::planar2d;
    g.elements.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) g.elements.emplace_back(i * spacing, 0.0, 0.0);
    return g;
}

// Alternating-height one-row array: even indices low, odd indices raised by h.
// h = 0 degenerates to the planar layout.
inline ArrayGeometry build_linear_3d(int n, double spacing, double h) {
    if (n < 1) throw std::invalid_argument("build_linear_3d: n must be >= 1");
    if (!(spacing > 0.0)) throw std::invalid_argument("build_linear_3d: spacing must be > 0");
    if (h < 0.0) throw std::invalid_argument("build_linear_3d: h must be >= 0");
    ArrayGeometry g;
    g.layout = (h == 0.0) ? LayoutTag::planar2d : LayoutTag::alternating3d;
    g.elements.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) g.elements.emplace_back(i * spacing, 0.0, h * (i % 2));
    return g;
}

// Extent of the element set projected onto the plane orthogonal to
// `direction`, measured along the in-plane principal axis.
inline double projected_length(const ArrayGeometry& g, const Vec3& direction) {
    const double nrm = direction.norm();
    if (nrm < 1e-12) throw std::invalid_argument("projected_length: zero direction vector");
    if (std::abs(nrm - 1.0) > 1e-9)
        throw std::invalid_argument("projected_length: direction must be normalized");
    if (g.elements.empty()) throw std::invalid_argument("projected_length: empty geometry");

    const Vec3 d = direction / nrm;
    // Project all elements onto the orthogonal plane, then take the spread
    // along the leading principal axis of the projected cloud.
    Eigen::Matrix3Xd proj(3, static_cast<Eigen::Index>(g.elements.size()));
    Vec3 mean = Vec3::Zero();
    for (const auto& p : g.elements) mean += p;
    mean /= static_cast<double>(g.elements.size());
    for (Eigen::Index i = 0; i < proj.cols(); ++i) {
        const Vec3 c = g.elements[static_cast<std::size_t>(i)] - mean;
        proj.col(i) = c - d * d.dot(c);
    }
    if (g.elements.size() == 1) return 0.0;
    Eigen::Matrix3d cov = proj * proj.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(cov);
    const Vec3 axis = es.eigenvectors().col(2); // largest eigenvalue
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < proj.cols(); ++i) {
        const double t = axis.dot(proj.col(i));
        lo = std::min(lo, t);
        hi = std::max(hi, t);
    }
    return hi - lo;
}

inline nlohmann::json to_json(const ArrayGeometry& g) {
    nlohmann::json j;
    j["layout"] = to_string(g.layout);
    auto& arr = j["elements"] = nlohmann::json::array();
    for (const auto& p : g.elements) arr.push_back({p.x(), p.y(), p.z()});
    return j;
}

inline ArrayGeometry geometry_from_json(const nlohmann::json& j) {
    ArrayGeometry g;
    g.layout = layout_from_string(j.at("layout").get<std::string>());
    for (const auto& e : j.at("elements")) {
        if (!e.is_array() || e.size() != 3)
            throw std::invalid_argument("geometry JSON: each element must be [x,y,z]");
        g.elements.emplace_back(e[0].get<double>(), e[1].get<double>(), e[2].get<double>());
    }
    if (g.elements.empty()) throw std::invalid_argument("geometry JSON: empty element list");
    for (const auto& p : g.elements)
        if (!p.allFinite()) throw std::invalid_argument("geometry JSON: non-finite coordinate");
    return g;
}

} // namespace holo

#endif
