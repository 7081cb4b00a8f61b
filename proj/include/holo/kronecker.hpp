#ifndef HOLO_KRONECKER_HPP
#define HOLO_KRONECKER_HPP

#include <cmath>
#include <complex>
#include <iostream>
#include <stdexcept>
#include <vector>

#include "holo/matrices.hpp"
#include "holo/patterns.hpp"

namespace holo {

// Angular power spectrum sampled on the pattern-grid axes, one weight per
// polarization, plus the cross-polarization discrimination kappa.
struct AngularPowerSpectrum {
    Eigen::ArrayXXd p_theta; // |theta| x |phi|
    Eigen::ArrayXXd p_phi;
    double xpd = 1.0;

    void validate() const {
        if (p_theta.rows() != p_phi.rows() || p_theta.cols() != p_phi.cols())
            throw std::invalid_argument("AngularPowerSpectrum: mismatched grids");
        if ((p_theta < 0.0).any() || (p_phi < 0.0).any())
            throw std::invalid_argument("AngularPowerSpectrum: negative samples");
        if (p_theta.maxCoeff() <= 0.0 && p_phi.maxCoeff() <= 0.0)
            throw std::invalid_argument("AngularPowerSpectrum: identically zero");
        if (!(xpd > 0.0)) throw std::invalid_argument("AngularPowerSpectrum: kappa must be > 0");
    }
};

// Uniform spectrum over the spherical cap theta <= spread about broadside,
// zero outside, equal for both polarizations. Mirrors the Clarke ensemble.
inline AngularPowerSpectrum uniform_cap_spectrum(const PatternGrid& grid_ref, double spread) {
    AngularPowerSpectrum s;
    s.p_theta.setZero(grid_ref.n_theta(), grid_ref.n_phi());
    for (Eigen::Index t = 0; t < grid_ref.n_theta(); ++t)
        if (grid_ref.theta_samples[t] <= spread + 1e-12)
            s.p_theta.row(t).setConstant(1.0);
    s.p_phi = s.p_theta;
    return s;
}

// N-port complex S-parameters at one or more frequencies.
struct ScatteringMatrix {
    int port_count = 0;
    std::vector<double> frequencies_hz; // strictly ascending
    std::vector<MatrixXc> data;         // one port_count^2 matrix per frequency
    double reference_impedance = 50.0;

    void validate() const {
        if (port_count < 1) throw std::invalid_argument("ScatteringMatrix: port_count must be >= 1");
        if (frequencies_hz.size() != data.size() || data.empty())
            throw std::invalid_argument("ScatteringMatrix: frequency/data mismatch");
        for (std::size_t i = 1; i < frequencies_hz.size(); ++i)
            if (!(frequencies_hz[i] > frequencies_hz[i - 1]))
                throw std::invalid_argument("ScatteringMatrix: frequencies not ascending");
        for (const auto& m : data) {
            if (m.rows() != port_count || m.cols() != port_count)
                throw std::invalid_argument("ScatteringMatrix: non-square block");
            if (!m.allFinite()) throw std::invalid_argument("ScatteringMatrix: non-finite entry");
        }
    }

    bool is_passive(double tol = 1e-6) const {
        for (const auto& m : data) {
            Eigen::JacobiSVD<MatrixXc> svd(m);
            if (svd.singularValues().maxCoeff() > 1.0 + tol) return false;
        }
        return true;
    }
};

// Per-element embedded efficiencies, each in [0, 1].
struct EfficiencyVector {
    Eigen::VectorXd values;

    void validate() const {
        for (Eigen::Index i = 0; i < values.size(); ++i)
            if (values[i] < 0.0 || values[i] > 1.0)
                throw std::invalid_argument("EfficiencyVector: value outside [0,1]");
    }
};

inline EfficiencyVector ideal_efficiencies(Eigen::Index n) {
    return EfficiencyVector{Eigen::VectorXd::Ones(n)};
}

// Pattern-based correlation: rho_mn = I_mn / sqrt(I_mm I_nn) with
// I_mn = integral of kappa E_tm E_tn* P_t + E_pm E_pn* P_p over solid angle.
inline CorrelationMatrix pattern_correlation(const std::vector<PatternGrid>& patterns,
                                             const AngularPowerSpectrum& spectrum) {
    if (patterns.empty())
        throw std::invalid_argument("pattern_correlation: no patterns");
    spectrum.validate();
    const PatternGrid& ref = patterns.front();
    for (const auto& p : patterns) {
        p.validate();
        if (p.n_theta() != ref.n_theta() || p.n_phi() != ref.n_phi() ||
            (p.theta_samples != ref.theta_samples).any() ||
            (p.phi_samples != ref.phi_samples).any())
            throw std::invalid_argument("pattern_correlation: patterns on mismatched grids");
    }
    if (spectrum.p_theta.rows() != ref.n_theta() || spectrum.p_theta.cols() != ref.n_phi())
        throw std::invalid_argument("pattern_correlation: spectrum grid mismatch");

    const Eigen::ArrayXd wt = detail::theta_weights(ref.theta_samples);
    const double dphi = detail::phi_step(ref.phi_samples);
    // Fold solid-angle weights and spectrum into per-cell weights once.
    Eigen::ArrayXXd w_theta = spectrum.p_theta * spectrum.xpd;
    Eigen::ArrayXXd w_phi = spectrum.p_phi;
    for (Eigen::Index t = 0; t < ref.n_theta(); ++t) {
        w_theta.row(t) *= wt[t] * dphi;
        w_phi.row(t) *= wt[t] * dphi;
    }

    const Eigen::Index n = static_cast<Eigen::Index>(patterns.size());
    MatrixXc overlap(n, n);
    for (Eigen::Index m = 0; m < n; ++m)
        for (Eigen::Index q = m; q < n; ++q) {
            const Complex v =
                (patterns[m].e_theta * patterns[q].e_theta.conjugate() * w_theta.cast<Complex>() +
                 patterns[m].e_phi * patterns[q].e_phi.conjugate() * w_phi.cast<Complex>())
                    .sum();
            overlap(m, q) = v;
            overlap(q, m) = std::conj(v);
        }

    CorrelationMatrix rho;
    rho.entries.resize(n, n);
    for (Eigen::Index m = 0; m < n; ++m) {
        if (!(overlap(m, m).real() > 0.0))
            throw degenerate_input("pattern_correlation: zero-power pattern");
    }
    for (Eigen::Index m = 0; m < n; ++m)
        for (Eigen::Index q = 0; q < n; ++q)
            rho.entries(m, q) =
                (m == q) ? Complex(1.0, 0.0)
                         : overlap(m, q) /
                               std::sqrt(overlap(m, m).real() * overlap(q, q).real());
    return rho;
}

// Embedded radiation efficiency from S-parameters at one frequency:
// e_n = 1 - sum_m |S_mn|^2, clamped at 0 (with a warning) when numeric
// noise pushes a column past the passive bound.
inline EfficiencyVector embedded_efficiency(const ScatteringMatrix& s, double frequency_hz,
                                            std::ostream* warn = &std::cerr) {
    s.validate();
    std::size_t best = 0;
    double best_err = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < s.frequencies_hz.size(); ++i) {
        const double err = std::abs(s.frequencies_hz[i] - frequency_hz);
        if (err < best_err) {
            best_err = err;
            best = i;
        }
    }
    if (best_err > 1e-6 * std::max(std::abs(frequency_hz), 1.0) &&
        (frequency_hz < s.frequencies_hz.front() || frequency_hz > s.frequencies_hz.back()))
        throw std::invalid_argument("embedded_efficiency: frequency out of range");

    const MatrixXc& m = s.data[best];
    EfficiencyVector e;
    e.values.resize(s.port_count);
    for (int col = 0; col < s.port_count; ++col) {
        const double coupled = m.col(col).squaredNorm();
        double val = 1.0 - coupled;
        if (val < 0.0) {
            if (warn)
                *warn << "embedded_efficiency: port " << (col + 1)
                      << " violates passivity (sum |S|^2 = " << coupled << "), clamping to 0\n";
            val = 0.0;
        }
        e.values[col] = val;
    }
    return e;
}

// R = Phi o Xi with Xi = sqrt(e) sqrt(e)^T; diagonal equals e.
inline CovarianceMatrix covariance(const CorrelationMatrix& phi, const EfficiencyVector& e) {
    if (phi.order() != e.values.size())
        throw std::invalid_argument("covariance: dimension mismatch");
    e.validate();
    const Eigen::VectorXd root = e.values.cwiseSqrt();
    CovarianceMatrix r;
    r.entries = phi.entries.cwiseProduct((root * root.transpose()).cast<Complex>());
    return r;
}

} // namespace holo

#endif
