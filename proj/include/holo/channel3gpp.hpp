#ifndef HOLO_CHANNEL3GPP_HPP
#define HOLO_CHANNEL3GPP_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "holo/geometry.hpp"
#include "holo/kronecker.hpp"
#include "holo/matrices.hpp"
#include "holo/metrics.hpp"
#include "holo/patterns.hpp"
#include "holo/rng.hpp"

namespace holo {

enum class UmaDimensionality { uma2d, uma3d };

// Simplified single-cell urban-macro scenario: disc of users, base station
// on the disc edge, cluster paths with a capped azimuth spread. This is a
// spatial-correlation surrogate, not a full standard channel: no path
// loss, shadowing, delays, or polarization matrices.
struct ScenarioConfig {
    double cell_radius_m = 200.0;
    double bs_height_m = 25.0;
    UmaDimensionality dimensionality = UmaDimensionality::uma2d;
    int user_count = 100;
    double indoor_fraction = 0.0; // 0.8 for uma3d
    double outdoor_user_height_m = 1.5;
    double floor_height_m = 3.0;
    int max_floors = 8;
    int cluster_count = 20;
    double per_cluster_angle_sigma_deg = 5.0;
    double azimuth_spread_cap_deg = 52.0;
    double carrier_ghz = 2.45;
    std::uint64_t seed = 0;

    void validate() const {
        if (!(cell_radius_m > 0.0)) throw std::invalid_argument("ScenarioConfig: radius must be > 0");
        if (user_count < 1) throw std::invalid_argument("ScenarioConfig: user_count must be >= 1");
        if (indoor_fraction < 0.0 || indoor_fraction > 1.0)
            throw std::invalid_argument("ScenarioConfig: indoor_fraction outside [0,1]");
        if (azimuth_spread_cap_deg > 52.0 + 1e-12)
            throw std::invalid_argument("ScenarioConfig: azimuth_spread_cap_deg must be <= 52");
        if (cluster_count < 1) throw std::invalid_argument("ScenarioConfig: cluster_count must be >= 1");
        if (max_floors < 1) throw std::invalid_argument("ScenarioConfig: max_floors must be >= 1");
    }

    static ScenarioConfig uma2d_default() {
        ScenarioConfig c;
        c.dimensionality = UmaDimensionality::uma2d;
        c.indoor_fraction = 0.0;
        return c;
    }
    static ScenarioConfig uma3d_default() {
        ScenarioConfig c;
        c.dimensionality = UmaDimensionality::uma3d;
        c.indoor_fraction = 0.8;
        return c;
    }
};

struct PathRecord {
    Vec3 direction; // unit vector at the BS, global frame
    Complex gain;   // per-user powers sum to 1
};

struct ChannelDrop {
    std::vector<Vec3> user_positions_m;
    std::vector<std::vector<PathRecord>> paths; // per user
};

// BS location: on the left edge of the user disc, at its configured height.
inline Vec3 bs_position(const ScenarioConfig& c) {
    return Vec3(-c.cell_radius_m, 0.0, c.bs_height_m);
}

// Users uniform over the disc. uma2d keeps everyone outdoors at 1.5 m;
// uma3d puts each user indoors with the configured probability, at a
// uniformly chosen floor.
inline std::vector<Vec3> drop_users(const ScenarioConfig& c, std::uint64_t seed) {
    c.validate();
    auto eng = stream_engine(seed, 0x75736572ULL); // "user"
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::vector<Vec3> users;
    users.reserve(static_cast<std::size_t>(c.user_count));
    constexpr double min_bs_distance_m = 35.0; // UMa minimum 2-D BS-user distance
    const Vec3 bs = bs_position(c);
    for (int i = 0; i < c.user_count; ++i) {
        double r, az;
        do {
            r = c.cell_radius_m * std::sqrt(u01(eng));
            az = 2.0 * M_PI * u01(eng);
        } while (std::hypot(r * std::cos(az) - bs.x(), r * std::sin(az) - bs.y()) <
                 min_bs_distance_m);
        double height = c.outdoor_user_height_m;
        if (c.dimensionality == UmaDimensionality::uma3d && u01(eng) < c.indoor_fraction) {
            const int floor = 1 + static_cast<int>(u01(eng) * c.max_floors);
            height = c.floor_height_m * (std::min(floor, c.max_floors) - 1) +
                     c.outdoor_user_height_m;
        }
        users.emplace_back(r * std::cos(az), r * std::sin(az), height);
    }
    return users;
}

// Cluster paths about the geometric BS-to-user bearing. Azimuth offsets are
// Gaussian; the set is resampled until the total azimuth spread fits under
// 2x the cap (and scaled into the cap as a last resort so generation always
// terminates). Elevation is purely geometric. Cluster powers decay
// exponentially and are normalized to unit total.
inline std::vector<PathRecord> generate_cluster_paths(const Vec3& user_position_m,
                                                      const ScenarioConfig& c,
                                                      std::uint64_t seed) {
    c.validate();
    const Vec3 bs = bs_position(c);
    const Vec3 d = user_position_m - bs;
    const double bearing = std::atan2(d.y(), d.x());
    const double horizontal = std::hypot(d.x(), d.y());
    const double elevation = std::atan2(d.z(), horizontal); // negative = below BS

    auto eng = stream_engine(seed, 0x70617468ULL); // "path"
    std::normal_distribution<double> gauss(0.0, c.per_cluster_angle_sigma_deg * M_PI / 180.0);
    std::uniform_real_distribution<double> uphase(0.0, 2.0 * M_PI);

    const double cap = 2.0 * c.azimuth_spread_cap_deg * M_PI / 180.0;
    std::vector<double> offsets(static_cast<std::size_t>(c.cluster_count));
    for (int attempt = 0;; ++attempt) {
        for (auto& o : offsets) o = gauss(eng);
        const auto [lo, hi] = std::minmax_element(offsets.begin(), offsets.end());
        const double spread = *hi - *lo;
        if (spread <= cap) break;
        if (attempt >= 100) {
            for (auto& o : offsets) o *= cap / spread;
            break;
        }
    }

    constexpr double power_decay = 0.5; // per cluster index
    std::vector<PathRecord> paths;
    paths.reserve(offsets.size());
    double total_power = 0.0;
    for (std::size_t i = 0; i < offsets.size(); ++i) {
        const double az = bearing + offsets[i];
        PathRecord p;
        p.direction = Vec3(std::cos(elevation) * std::cos(az),
                           std::cos(elevation) * std::sin(az), std::sin(elevation));
        const double power = std::exp(-power_decay * static_cast<double>(i));
        p.gain = std::polar(std::sqrt(power), uphase(eng));
        total_power += power;
        paths.push_back(p);
    }
    const double scale = 1.0 / std::sqrt(total_power);
    for (auto& p : paths) p.gain *= scale;
    return paths;
}

inline ChannelDrop make_drop(const ScenarioConfig& c, std::uint64_t seed) {
    ChannelDrop drop;
    drop.user_positions_m = drop_users(c, seed);
    drop.paths.reserve(drop.user_positions_m.size());
    for (std::size_t u = 0; u < drop.user_positions_m.size(); ++u)
        drop.paths.push_back(
            generate_cluster_paths(drop.user_positions_m[u], c, splitmix64(seed) + u));
    return drop;
}

namespace detail {

// The BS array is a horizontal panel at the mast top with its radiating
// hemisphere facing the users below (the element patterns are zero behind
// the reflector plane). Boresight z' = nadir, so height offsets of raised
// elements stay globally vertical. x' = global y (array axis), y' = global
// x, z' = -global z (right-handed).
inline Vec3 to_array_frame(const Vec3& global_dir) {
    return Vec3(global_dir.y(), global_dir.x(), -global_dir.z());
}

} // namespace detail

// Covariance averaged over users: h_u[n] = sum_paths gain * element
// response (interpolated pattern toward the path direction; translation
// phases are baked into the per-element patterns). The user-averaged outer
// product is reduced to correlation coefficients (unit diagonal) and then
// scaled by the efficiency dyad, matching the pattern-overlap pipeline.
inline CovarianceMatrix scenario_covariance(const ChannelDrop& drop,
                                            const ArrayGeometry& geometry,
                                            const std::vector<PatternGrid>& patterns,
                                            const EfficiencyVector& eff) {
    if (drop.paths.empty()) throw std::invalid_argument("scenario_covariance: empty drop");
    if (patterns.size() != geometry.size())
        throw std::invalid_argument("scenario_covariance: pattern/geometry mismatch");
    if (eff.values.size() != static_cast<Eigen::Index>(geometry.size()))
        throw std::invalid_argument("scenario_covariance: efficiency size mismatch");

    const Eigen::Index n = static_cast<Eigen::Index>(geometry.size());
    MatrixXc r = MatrixXc::Zero(n, n);
    Eigen::VectorXcd h(n);
    constexpr double inv_sqrt2 = 0.70710678118654752440;
    for (const auto& user_paths : drop.paths) {
        h.setZero();
        for (const auto& path : user_paths) {
            const Vec3 dir = detail::to_array_frame(path.direction);
            for (Eigen::Index i = 0; i < n; ++i) {
                auto [et, ep] = sample_pattern(patterns[static_cast<std::size_t>(i)], dir);
                h[i] += path.gain * ((et + ep) * inv_sqrt2); // 45-degree receive polarization
            }
        }
        r += h * h.adjoint();
    }
    r /= static_cast<double>(drop.paths.size());

    for (Eigen::Index i = 0; i < n; ++i)
        if (!(r(i, i).real() > 0.0))
            throw degenerate_input("scenario_covariance: element sees zero power");
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            const double scale = std::sqrt(eff.values[i] * eff.values[j] /
                                           (r(i, i).real() * r(j, j).real()));
            r(i, j) *= scale;
        }

    CovarianceMatrix out;
    out.entries = 0.5 * (r + r.adjoint().eval()); // exact Hermitian symmetry
    return out;
}

struct ScenarioVariant {
    std::string name;
    ArrayGeometry geometry;
    std::vector<PatternGrid> patterns;
    EfficiencyVector efficiencies;
};

struct ScenarioSummaryRow {
    std::string scenario;
    std::string variant;
    double mean_diversity = 0.0;
    double mean_capacity = 0.0;
    double diversity_increase_pct = 0.0; // versus the first (baseline) variant
    double capacity_increase_pct = 0.0;
    std::uint64_t seed = 0;
};

// Averaged diversity/capacity over independent drops; the first variant is
// the comparison baseline. Drops share user positions and paths across
// variants so the comparison is paired.
inline std::vector<ScenarioSummaryRow> run_scenario(const ScenarioConfig& config,
                                                    const std::vector<ScenarioVariant>& variants,
                                                    int drops = 50, double snr_db = 20.0,
                                                    int capacity_trials = 300) {
    if (variants.size() < 2)
        throw std::invalid_argument("run_scenario: need at least two variants to compare");
    config.validate();

    std::vector<double> div_sum(variants.size(), 0.0);
    std::vector<double> cap_sum(variants.size(), 0.0);
    for (int drop_idx = 0; drop_idx < drops; ++drop_idx) {
        const std::uint64_t drop_seed = splitmix64(config.seed ^ (0xD509ULL + drop_idx));
        const ChannelDrop drop = make_drop(config, drop_seed);
        for (std::size_t v = 0; v < variants.size(); ++v) {
            const auto& var = variants[v];
            const CovarianceMatrix r =
                scenario_covariance(drop, var.geometry, var.patterns, var.efficiencies);
            div_sum[v] += diversity(r);
            const GeometryContext ctx = geometry_context(var.geometry);
            const int n_t = static_cast<int>(var.geometry.size());
            // same capacity seed for every variant: paired fading draws
            const CapacityEstimate est = ergodic_capacity(
                r, snr_db, n_t, capacity_trials, splitmix64(drop_seed ^ 0xCAFEULL), ctx);
            cap_sum[v] += est.mean_bits_per_s_per_hz;
        }
    }

    const std::string scen =
        config.dimensionality == UmaDimensionality::uma2d ? "uma2d" : "uma3d";
    std::vector<ScenarioSummaryRow> rows;
    const double div0 = div_sum[0] / drops;
    const double cap0 = cap_sum[0] / drops;
    for (std::size_t v = 0; v < variants.size(); ++v) {
        ScenarioSummaryRow row;
        row.scenario = scen;
        row.variant = variants[v].name;
        row.mean_diversity = div_sum[v] / drops;
        row.mean_capacity = cap_sum[v] / drops;
        row.diversity_increase_pct = 100.0 * (row.mean_diversity / div0 - 1.0);
        row.capacity_increase_pct = 100.0 * (row.mean_capacity / cap0 - 1.0);
        row.seed = config.seed;
        rows.push_back(std::move(row));
    }
    return rows;
}

inline ScenarioConfig scenario_config_from_json(const nlohmann::json& j) {
    ScenarioConfig c;
    const std::string dim = j.value("dimensionality", "uma2d");
    if (dim == "uma2d") c = ScenarioConfig::uma2d_default();
    else if (dim == "uma3d") c = ScenarioConfig::uma3d_default();
    else throw std::invalid_argument("scenario config: dimensionality must be uma2d or uma3d");
    for (const auto& [key, value] : j.items()) {
        if (key == "dimensionality") continue;
        else if (key == "cell_radius_m") c.cell_radius_m = value.get<double>();
        else if (key == "bs_height_m") c.bs_height_m = value.get<double>();
        else if (key == "user_count") c.user_count = value.get<int>();
        else if (key == "indoor_fraction") c.indoor_fraction = value.get<double>();
        else if (key == "outdoor_user_height_m") c.outdoor_user_height_m = value.get<double>();
        else if (key == "floor_height_m") c.floor_height_m = value.get<double>();
        else if (key == "max_floors") c.max_floors = value.get<int>();
        else if (key == "cluster_count") c.cluster_count = value.get<int>();
        else if (key == "per_cluster_angle_sigma_deg")
            c.per_cluster_angle_sigma_deg = value.get<double>();
        else if (key == "azimuth_spread_cap_deg") c.azimuth_spread_cap_deg = value.get<double>();
        else if (key == "carrier_ghz") c.carrier_ghz = value.get<double>();
        else if (key == "seed") c.seed = value.get<std::uint64_t>();
        else throw std::invalid_argument("scenario config: unknown key '" + key + "'");
    }
    c.validate();
    return c;
}

} // namespace holo

#endif
