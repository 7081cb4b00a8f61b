#ifndef HOLO_QUADRATURE_HPP
#define HOLO_QUADRATURE_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "holo/geometry.hpp"
#include "holo/rng.hpp"

namespace holo {

enum class QuadratureMethod { fibonacci_cap, monte_carlo };

// Discretization of the solid-angle integral over a spherical cap.
// All nodes carry equal solid-angle weight.
struct QuadratureSpec {
    QuadratureMethod method = QuadratureMethod::fibonacci_cap;
    int node_count = 2048;
    std::uint64_t seed = 0; // monte_carlo only
};

// Uniformly distributed plane-wave ensemble over a spherical cap of
// half-angle `spread_half_angle` about `mean_direction`.
struct AngularSpectrum {
    double spread_half_angle = M_PI / 2.0; // radians, (0, pi/2]
    Vec3 mean_direction = Vec3(0.0, 0.0, 1.0);

    void validate() const {
        if (!(spread_half_angle > 0.0) || spread_half_angle > M_PI / 2.0 + 1e-12)
            throw std::invalid_argument("AngularSpectrum: spread must be in (0, pi/2]");
        if (std::abs(mean_direction.norm() - 1.0) > 1e-9)
            throw std::invalid_argument("AngularSpectrum: mean_direction must be normalized");
    }
};

namespace detail {

// Rotation taking +z to `target` (unit vector).
inline Eigen::Matrix3d rotation_from_z(const Vec3& target) {
    const Vec3 z(0.0, 0.0, 1.0);
    const double c = z.dot(target);
    if (c > 1.0 - 1e-12) return Eigen::Matrix3d::Identity();
    if (c < -1.0 + 1e-12) {
        Eigen::Matrix3d m = Eigen::Matrix3d::Identity();
        m(0, 0) = -1.0;
        m(2, 2) = -1.0;
        return m;
    }
    const Vec3 axis = z.cross(target).normalized();
    return Eigen::AngleAxisd(std::acos(c), axis).toRotationMatrix();
}

} // namespace detail

// Equal-solid-angle nodes covering the cap { angle from mean_direction <= theta }.
// fibonacci_cap: golden-angle spiral, uniform in cos(angle); deterministic.
// monte_carlo: i.i.d. uniform over the cap, seeded.
inline std::vector<Vec3> cap_nodes(const AngularSpectrum& spectrum, const QuadratureSpec& quad) {
    spectrum.validate();
    if (quad.node_count < 2)
        throw std::invalid_argument("cap_nodes: node_count must be >= 2");

    const double z_min = std::cos(spectrum.spread_half_angle);
    const int n = quad.node_count;
    std::vector<Vec3> nodes;
    nodes.reserve(static_cast<std::size_t>(n));

    if (quad.method == QuadratureMethod::fibonacci_cap) {
        const double golden = M_PI * (std::sqrt(5.0) + 1.0);
        const double dz = (1.0 - z_min) / n;
        for (int i = 0; i < n; ++i) {
            const double z = 1.0 - (i + 0.5) * dz;
            const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
            const double phi = golden * i;
            nodes.emplace_back(r * std::cos(phi), r * std::sin(phi), z);
        }
    } else {
        auto eng = stream_engine(quad.seed, 0);
        std::uniform_real_distribution<double> uz(z_min, 1.0);
        std::uniform_real_distribution<double> uphi(0.0, 2.0 * M_PI);
        for (int i = 0; i < n; ++i) {
            const double z = uz(eng);
            const double phi = uphi(eng);
            const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
            nodes.emplace_back(r * std::cos(phi), r * std::sin(phi), z);
        }
    }

    const Eigen::Matrix3d rot = detail::rotation_from_z(spectrum.mean_direction);
    if (!rot.isIdentity(1e-15))
        for (auto& v : nodes) v = rot * v;
    return nodes;
}

} // namespace holo

#endif
