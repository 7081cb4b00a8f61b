#ifndef HOLO_PATTERNS_HPP
#define HOLO_PATTERNS_HPP

#include <cmath>
#include <complex>
#include <stdexcept>
#include <utility>
#include <vector>

#include "holo/geometry.hpp"
#include "holo/matrices.hpp"

namespace holo {

using ArrayXXc = Eigen::ArrayXXcd;

// Sampled complex far field (E_theta, E_phi) of one embedded element,
// theta-major grids. Angles in radians; theta in [0, pi], phi in [0, 2pi).
struct PatternGrid {
    Eigen::ArrayXd theta_samples;
    Eigen::ArrayXd phi_samples;
    ArrayXXc e_theta; // |theta| x |phi|
    ArrayXXc e_phi;
    Vec3 element_position = Vec3::Zero();

    Eigen::Index n_theta() const { return theta_samples.size(); }
    Eigen::Index n_phi() const { return phi_samples.size(); }

    void validate() const {
        if (n_theta() < 2 || n_phi() < 2)
            throw std::invalid_argument("PatternGrid: need at least 2 samples per axis");
        if (e_theta.rows() != n_theta() || e_theta.cols() != n_phi() ||
            e_phi.rows() != n_theta() || e_phi.cols() != n_phi())
            throw std::invalid_argument("PatternGrid: inconsistent grid dimensions");
        for (Eigen::Index i = 1; i < n_theta(); ++i)
            if (!(theta_samples[i] > theta_samples[i - 1]))
                throw std::invalid_argument("PatternGrid: theta axis not ascending");
        for (Eigen::Index i = 1; i < n_phi(); ++i)
            if (!(phi_samples[i] > phi_samples[i - 1]))
                throw std::invalid_argument("PatternGrid: phi axis not ascending");
        if (!e_theta.isFinite().all() || !e_phi.isFinite().all())
            throw std::invalid_argument("PatternGrid: non-finite field entries");
    }
};

namespace detail {

// Quadrature weights for the solid-angle integral on the pattern grid:
// trapezoid in theta (with sin(theta) Jacobian folded in), uniform
// periodic rule in phi.
inline Eigen::ArrayXd theta_weights(const Eigen::ArrayXd& theta) {
    const Eigen::Index n = theta.size();
    Eigen::ArrayXd w(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double d = 0.0;
        if (i > 0) d += 0.5 * (theta[i] - theta[i - 1]);
        if (i + 1 < n) d += 0.5 * (theta[i + 1] - theta[i]);
        w[i] = d * std::sin(theta[i]);
    }
    return w;
}

inline double phi_step(const Eigen::ArrayXd& phi) {
    // Uniform periodic phi axis assumed for integration.
    return 2.0 * M_PI / static_cast<double>(phi.size());
}

} // namespace detail

// Integral of |E_theta|^2 + |E_phi|^2 over the sphere.
inline double total_radiated_power(const PatternGrid& p) {
    const Eigen::ArrayXd wt = detail::theta_weights(p.theta_samples);
    const double dphi = detail::phi_step(p.phi_samples);
    double acc = 0.0;
    for (Eigen::Index t = 0; t < p.n_theta(); ++t)
        for (Eigen::Index f = 0; f < p.n_phi(); ++f)
            acc += (std::norm(p.e_theta(t, f)) + std::norm(p.e_phi(t, f))) * wt[t] * dphi;
    return acc;
}

// Uniform axes: theta inclusive of both poles, phi half-open [0, 2pi).
inline std::pair<Eigen::ArrayXd, Eigen::ArrayXd> uniform_axes(int n_theta, int n_phi) {
    if (n_theta < 2 || n_phi < 2)
        throw std::invalid_argument("uniform_axes: resolutions must be >= 2");
    Eigen::ArrayXd th = Eigen::ArrayXd::LinSpaced(n_theta, 0.0, M_PI);
    Eigen::ArrayXd ph(n_phi);
    for (int i = 0; i < n_phi; ++i) ph[i] = 2.0 * M_PI * i / n_phi;
    return {std::move(th), std::move(ph)};
}

inline PatternGrid isotropic_pattern(int n_theta, int n_phi) {
    auto [th, ph] = uniform_axes(n_theta, n_phi);
    PatternGrid p;
    p.theta_samples = std::move(th);
    p.phi_samples = std::move(ph);
    p.e_theta = ArrayXXc::Constant(n_theta, n_phi, Complex(1.0, 0.0));
    p.e_phi = ArrayXXc::Zero(n_theta, n_phi);
    return p;
}

// Embedded pattern of a horizontal half-wave dipole (axis along y) at
// z = height over an infinite reflector with unit-magnitude reflection
// coefficient exp(j reflection_phase). Image theory: the upper-hemisphere
// field is the free element field times 1 + exp(j(phase - 2 k0 h cos(theta)));
// the lower hemisphere is shadowed. Fields are phase-referenced to the
// global origin on the reflector plane, so patterns of elements at
// different heights combine with the correct relative phase.
inline PatternGrid element_over_reflector(double height, double reflection_phase,
                                          int n_theta = 181, int n_phi = 360) {
    if (height < 0.0)
        throw std::invalid_argument("element_over_reflector: height must be >= 0");
    auto [th, ph] = uniform_axes(n_theta, n_phi);
    PatternGrid p;
    p.theta_samples = std::move(th);
    p.phi_samples = std::move(ph);
    p.e_theta = ArrayXXc::Zero(n_theta, n_phi);
    p.e_phi = ArrayXXc::Zero(n_theta, n_phi);
    p.element_position = Vec3(0.0, 0.0, height);

    for (int t = 0; t < n_theta; ++t) {
        const double theta = p.theta_samples[t];
        if (theta > M_PI / 2.0 + 1e-12) break; // shadowed hemisphere
        const double ct = std::cos(theta), st = std::sin(theta);
        // element at +height plus its image at -height, origin-referenced
        const Complex af = std::polar(1.0, k0 * height * ct) +
                           std::polar(1.0, reflection_phase - k0 * height * ct);
        for (int f = 0; f < n_phi; ++f) {
            const double phi = p.phi_samples[f];
            const double cp = std::cos(phi), sp = std::sin(phi);
            const double cos_psi = st * sp;        // angle from dipole axis (y)
            const double sin2_psi = 1.0 - cos_psi * cos_psi;
            if (sin2_psi < 1e-18) continue;        // axial null
            const double elem = std::cos(0.5 * M_PI * cos_psi) / sin2_psi;
            p.e_theta(t, f) = af * (elem * ct * sp);
            p.e_phi(t, f) = af * (elem * cp);
        }
    }
    return p;
}

// Bakes an element offset into the far-field phase:
// E(dir) *= exp(j k0 dir . offset).
inline PatternGrid translate_pattern(const PatternGrid& src, const Vec3& offset) {
    PatternGrid p = src;
    p.element_position += offset;
    if (offset.isZero(0.0)) return p;
    for (Eigen::Index t = 0; t < p.n_theta(); ++t) {
        const double st = std::sin(p.theta_samples[t]);
        const double ct = std::cos(p.theta_samples[t]);
        for (Eigen::Index f = 0; f < p.n_phi(); ++f) {
            const Vec3 dir(st * std::cos(p.phi_samples[f]), st * std::sin(p.phi_samples[f]), ct);
            const Complex ph = std::polar(1.0, k0 * dir.dot(offset));
            p.e_theta(t, f) *= ph;
            p.e_phi(t, f) *= ph;
        }
    }
    return p;
}

// Per-element patterns for a one-row array: low elements take the lower
// base pattern, raised elements the upper one, each shifted laterally to
// its x/y position. Vertical phase lives in the base patterns, which are
// origin-referenced at their own physical heights.
inline std::vector<PatternGrid> array_patterns(const ArrayGeometry& geometry,
                                               const PatternGrid& lower,
                                               const PatternGrid& upper) {
    double z_min = std::numeric_limits<double>::infinity();
    for (const auto& r : geometry.elements) z_min = std::min(z_min, r.z());
    std::vector<PatternGrid> out;
    out.reserve(geometry.size());
    for (const auto& r : geometry.elements) {
        const PatternGrid& base = (r.z() > z_min + 1e-12) ? upper : lower;
        out.push_back(translate_pattern(base, Vec3(r.x(), r.y(), 0.0)));
    }
    return out;
}

// Bilinearly interpolated field toward an arbitrary unit direction,
// periodic in phi, clamped in theta.
inline std::pair<Complex, Complex> sample_pattern(const PatternGrid& p, const Vec3& dir) {
    const double theta = std::acos(std::clamp(dir.z(), -1.0, 1.0));
    double phi = std::atan2(dir.y(), dir.x());
    if (phi < 0.0) phi += 2.0 * M_PI;

    const auto& th = p.theta_samples;
    Eigen::Index t1 = std::lower_bound(th.data(), th.data() + th.size(), theta) - th.data();
    t1 = std::clamp<Eigen::Index>(t1, 1, th.size() - 1);
    const Eigen::Index t0 = t1 - 1;
    const double wt = std::clamp((theta - th[t0]) / (th[t1] - th[t0]), 0.0, 1.0);

    const double dphi = detail::phi_step(p.phi_samples);
    const double fpos = (phi - p.phi_samples[0]) / dphi;
    const Eigen::Index f0 = ((static_cast<Eigen::Index>(std::floor(fpos)) % p.n_phi()) + p.n_phi()) % p.n_phi();
    const Eigen::Index f1 = (f0 + 1) % p.n_phi();
    const double wf = std::clamp(fpos - std::floor(fpos), 0.0, 1.0);

    auto lerp2 = [&](const ArrayXXc& e) {
        return (1 - wt) * ((1 - wf) * e(t0, f0) + wf * e(t0, f1)) +
               wt * ((1 - wf) * e(t1, f0) + wf * e(t1, f1));
    };
    return {lerp2(p.e_theta), lerp2(p.e_phi)};
}

} // namespace holo

#endif
