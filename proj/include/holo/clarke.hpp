#ifndef HOLO_CLARKE_HPP
#define HOLO_CLARKE_HPP

#include <cmath>
#include <complex>
#include <stdexcept>

#include "holo/geometry.hpp"
#include "holo/matrices.hpp"
#include "holo/quadrature.hpp"

namespace holo {

// Spatial correlation of point receivers under a uniformly distributed
// plane-wave ensemble over a spherical cap. Each entry is the ensemble
// average of exp(j k . (r_n - r_m)); the diagonal is exactly 1 and the
// lower triangle is the mirrored conjugate of the upper.
inline CorrelationMatrix clarke_correlation(const ArrayGeometry& geometry,
                                            const AngularSpectrum& spectrum,
                                            const QuadratureSpec& quad = {}) {
    if (geometry.elements.empty())
        throw std::invalid_argument("clarke_correlation: empty geometry");

    const auto nodes = cap_nodes(spectrum, quad);
    const double inv_w = 1.0 / static_cast<double>(nodes.size());
    const Eigen::Index n = static_cast<Eigen::Index>(geometry.size());

    CorrelationMatrix phi;
    phi.entries.resize(n, n);
    for (Eigen::Index m = 0; m < n; ++m) {
        phi.entries(m, m) = Complex(1.0, 0.0);
        for (Eigen::Index p = m + 1; p < n; ++p) {
            const Vec3 dr = geometry.elements[static_cast<std::size_t>(m)] -
                            geometry.elements[static_cast<std::size_t>(p)];
            Complex acc(0.0, 0.0);
            for (const auto& dir : nodes) {
                const double phase = k0 * dir.dot(dr);
                acc += Complex(std::cos(phase), std::sin(phase));
            }
            phi.entries(m, p) = acc * inv_w;
            phi.entries(p, m) = std::conj(phi.entries(m, p));
        }
    }
    return phi;
}

// Full-sphere isotropic limit sin(k0 d)/(k0 d); test oracle for
// in-plane separations, where the hemispherical cap gives the same value.
inline double isotropic_correlation_closed_form(double d) {
    if (d < 0.0) throw std::invalid_argument("isotropic_correlation_closed_form: d must be >= 0");
    if (d == 0.0) return 1.0;
    const double x = k0 * d;
    return std::sin(x) / x;
}

} // namespace holo

#endif
