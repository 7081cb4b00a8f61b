#ifndef HOLO_METRICS_HPP
#define HOLO_METRICS_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "holo/geometry.hpp"
#include "holo/kronecker.hpp"
#include "holo/matrices.hpp"
#include "holo/patterns.hpp"
#include "holo/rng.hpp"

namespace holo {

// Diversity measure (tr/||.||_F)^2: the equivalent number of isolated
// antennas. Scale-invariant; in [1, N] for Hermitian PSD input.
inline double diversity(const MatrixXc& r) {
    const double tr = r.trace().real();
    const double fro2 = r.squaredNorm();
    if (fro2 <= 0.0) throw degenerate_input("diversity: zero matrix");
    return tr * tr / fro2;
}

inline double diversity(const CorrelationMatrix& r) { return diversity(r.entries); }
inline double diversity(const CovarianceMatrix& r) { return diversity(r.entries); }

// Descending non-negative eigenvalues; tiny negatives from roundoff are
// clamped, anything more negative signals an invalid covariance upstream.
struct EigenSpectrum {
    Eigen::VectorXd eigenvalues; // descending
};

inline EigenSpectrum eigen_spectrum(const MatrixXc& r) {
    Eigen::SelfAdjointEigenSolver<MatrixXc> es(r, Eigen::EigenvaluesOnly);
    Eigen::VectorXd ev = es.eigenvalues().reverse();
    const double lam_max = std::max(ev.maxCoeff(), 0.0);
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (ev[i] < -1e-8 * std::max(lam_max, 1e-300))
            throw std::invalid_argument("eigen_spectrum: matrix not PSD");
        if (ev[i] < 0.0) ev[i] = 0.0;
    }
    return {std::move(ev)};
}

inline EigenSpectrum eigen_spectrum(const CorrelationMatrix& r) { return eigen_spectrum(r.entries); }
inline EigenSpectrum eigen_spectrum(const CovarianceMatrix& r) { return eigen_spectrum(r.entries); }

// Number of eigenvalues within threshold_rel of the largest.
inline int effective_dof(const EigenSpectrum& s, double threshold_rel) {
    if (!(threshold_rel > 0.0) || !(threshold_rel < 1.0))
        throw std::invalid_argument("effective_dof: threshold must be in (0,1)");
    if (s.eigenvalues.size() == 0) return 0;
    const double cut = threshold_rel * s.eigenvalues[0];
    int count = 0;
    for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i)
        if (s.eigenvalues[i] >= cut) ++count;
    return count;
}

enum class NormalizationMode { standard, halfwave_capped };

struct CapacityEstimate {
    double mean_bits_per_s_per_hz = 0.0;
    double half_width_95 = 0.0;
    int trials = 0;
    std::uint64_t seed = 0;
    double snr_db = 0.0;
    NormalizationMode normalization_mode = NormalizationMode::standard;
};

// Aperture facts the capacity normalization needs: receive-side power gain
// stops growing once element spacing drops below half a wavelength.
struct GeometryContext {
    double min_spacing = 0.5; // lambda0
    int n_halfwave = 1;       // antenna count of the same aperture at lambda0/2
};

inline GeometryContext geometry_context(const ArrayGeometry& g) {
    GeometryContext ctx;
    // The cap is an aperture argument, so spacing is measured along the
    // aperture axis (x). Height offsets must not exempt a dense row from it,
    // or a raised-element array would be compared against a differently
    // normalized baseline.
    if (g.size() >= 2) {
        std::vector<double> xs;
        xs.reserve(g.size());
        for (const auto& e : g.elements) xs.push_back(e.x());
        std::sort(xs.begin(), xs.end());
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 1; i < xs.size(); ++i) best = std::min(best, xs[i] - xs[i - 1]);
        ctx.min_spacing = best;
    } else {
        ctx.min_spacing = std::numeric_limits<double>::infinity();
    }
    ctx.n_halfwave = static_cast<int>(std::floor(g.x_extent() / 0.5 + 1e-9)) + 1;
    return ctx;
}

// Monte-Carlo ergodic V-BLAST capacity E{log2 det(I + (g/Nt) R Hw Hw^H)}.
// Hw entries are i.i.d. complex Gaussian scaled so E{||Hw||_F^2} = Nt*Nr
// above half-wavelength spacing and Nt*n_halfwave below it. Per-trial RNG
// streams derive from (seed, trial), so results are schedule-independent.
inline CapacityEstimate ergodic_capacity(const CovarianceMatrix& r, double snr_db, int n_t,
                                         int trials, std::uint64_t seed,
                                         const GeometryContext& ctx) {
    if (std::isnan(snr_db)) throw std::invalid_argument("ergodic_capacity: snr_db is NaN");
    if (trials < 1) throw std::invalid_argument("ergodic_capacity: trials must be >= 1");
    if (n_t < 1) throw std::invalid_argument("ergodic_capacity: n_t must be >= 1");
    detail::check_hermitian_psd(r.entries, "ergodic_capacity");

    const Eigen::Index n_r = r.order();
    const bool capped = ctx.min_spacing < 0.5 - 1e-12;
    const double n_eff = capped ? static_cast<double>(ctx.n_halfwave)
                                : static_cast<double>(n_r);
    const double entry_var = n_eff / static_cast<double>(n_r);
    const double gamma = std::pow(10.0, snr_db / 10.0);
    const double c = gamma / static_cast<double>(n_t);

    // R^(1/2) via eigendecomposition; log-det through I + c (R^1/2 H)(R^1/2 H)^H
    // computed on the Hermitian Gram form for stability.
    Eigen::SelfAdjointEigenSolver<MatrixXc> es(r.entries);
    Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
    const MatrixXc r_half =
        es.eigenvectors() * ev.cwiseSqrt().asDiagonal() * es.eigenvectors().adjoint();

    double sum = 0.0, sum2 = 0.0;
    MatrixXc h(n_r, n_t);
    for (int trial = 0; trial < trials; ++trial) {
        auto eng = stream_engine(seed, static_cast<std::uint64_t>(trial));
        for (Eigen::Index col = 0; col < n_t; ++col)
            for (Eigen::Index row = 0; row < n_r; ++row)
                h(row, col) = complex_gaussian(eng, entry_var);
        const MatrixXc g = r_half * h;
        const MatrixXc m = MatrixXc::Identity(n_r, n_r) + c * (g * g.adjoint());
        Eigen::LLT<MatrixXc> llt(m);
        double log_det = 0.0;
        for (Eigen::Index i = 0; i < n_r; ++i)
            log_det += 2.0 * std::log(llt.matrixLLT()(i, i).real());
        const double cap = log_det / std::log(2.0);
        sum += cap;
        sum2 += cap * cap;
    }

    CapacityEstimate est;
    est.trials = trials;
    est.seed = seed;
    est.snr_db = snr_db;
    est.normalization_mode = capped ? NormalizationMode::halfwave_capped
                                    : NormalizationMode::standard;
    est.mean_bits_per_s_per_hz = sum / trials;
    if (trials > 1) {
        const double var = std::max(0.0, (sum2 - sum * sum / trials) / (trials - 1));
        est.half_width_95 = 1.96 * std::sqrt(var / trials);
    }
    return est;
}

// Realized gain pattern of a co-phasally excited array. Weights conjugate
// the element phase toward the scan direction (in the x-z plane, angle
// from broadside); amplitudes are uniform. Gain is 4 pi |E|^2 divided by
// the fed power sum_i |w_i|^2 P_i, which is fixed across scan angles;
// power re-shuffled by inter-element coupling is counted as a loss, not
// credited as superdirectivity.
struct GainPattern {
    Eigen::ArrayXd theta_samples; // radians, shared with the input grids
    Eigen::ArrayXd gain_linear;   // realized gain in the x-z plane (phi = 0)
    double peak_linear = 0.0;

    double at_angle(double theta) const {
        // nearest-sample lookup in the x-z cut
        Eigen::Index best = 0;
        double best_err = std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i < theta_samples.size(); ++i) {
            const double err = std::abs(theta_samples[i] - theta);
            if (err < best_err) {
                best_err = err;
                best = i;
            }
        }
        return gain_linear[best];
    }
};

inline GainPattern beamforming_gain(const ArrayGeometry& geometry,
                                    const std::vector<PatternGrid>& patterns,
                                    double scan_angle) {
    if (geometry.elements.empty() || patterns.size() != geometry.size())
        throw std::invalid_argument("beamforming_gain: empty inputs or pattern/geometry mismatch");
    const PatternGrid& ref = patterns.front();
    for (const auto& p : patterns)
        if (p.n_theta() != ref.n_theta() || p.n_phi() != ref.n_phi())
            throw std::invalid_argument("beamforming_gain: mismatched grids");

    const Vec3 scan_dir(std::sin(scan_angle), 0.0, std::cos(scan_angle));
    const Eigen::Index n = static_cast<Eigen::Index>(patterns.size());

    // Co-phasal weights: align the dominant polarization toward the scan
    // direction; fall back to pure position phase at pattern nulls.
    Eigen::VectorXcd w(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        auto [et, ep] = sample_pattern(patterns[static_cast<std::size_t>(i)], scan_dir);
        const Complex dom = (std::abs(et) >= std::abs(ep)) ? et : ep;
        if (std::abs(dom) > 1e-12)
            w[i] = std::conj(dom) / std::abs(dom);
        else
            w[i] = std::polar(1.0, -k0 * scan_dir.dot(geometry.elements[static_cast<std::size_t>(i)]));
    }

    // Total field of the weighted sum; fed power from the per-element
    // radiated powers (unit-magnitude weights leave it scan-independent).
    ArrayXXc sum_t = ArrayXXc::Zero(ref.n_theta(), ref.n_phi());
    ArrayXXc sum_p = ArrayXXc::Zero(ref.n_theta(), ref.n_phi());
    double p_fed = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        sum_t += w[i] * patterns[static_cast<std::size_t>(i)].e_theta;
        sum_p += w[i] * patterns[static_cast<std::size_t>(i)].e_phi;
        p_fed += std::norm(w[i]) * total_radiated_power(patterns[static_cast<std::size_t>(i)]);
    }
    const double p_rad = p_fed;
    if (!(p_rad > 0.0)) throw degenerate_input("beamforming_gain: zero radiated power");

    GainPattern out;
    out.theta_samples = ref.theta_samples;
    out.gain_linear.resize(ref.n_theta());
    for (Eigen::Index t = 0; t < ref.n_theta(); ++t) {
        const double u = std::norm(sum_t(t, 0)) + std::norm(sum_p(t, 0)); // phi = 0 cut
        out.gain_linear[t] = 4.0 * M_PI * u / p_rad;
    }
    double peak = 0.0;
    for (Eigen::Index t = 0; t < ref.n_theta(); ++t)
        for (Eigen::Index f = 0; f < ref.n_phi(); ++f)
            peak = std::max(peak, (std::norm(sum_t(t, f)) + std::norm(sum_p(t, f))) * 4.0 * M_PI / p_rad);
    out.peak_linear = peak;
    return out;
}

// Planar-aperture gain limit 4 pi A cos(theta0), A in squared wavelengths.
inline double gain_limit_2d(double aperture_area, double scan_angle) {
    if (!(aperture_area > 0.0)) throw std::invalid_argument("gain_limit_2d: area must be > 0");
    if (!(std::abs(scan_angle) < M_PI / 2.0))
        throw std::invalid_argument("gain_limit_2d: |scan_angle| must be < pi/2");
    return 4.0 * M_PI * aperture_area * std::cos(scan_angle);
}

} // namespace holo

#endif
