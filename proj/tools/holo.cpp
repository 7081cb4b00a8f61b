// Config-driven batch runner for the array analysis library. Subcommands
// mirror the analysis pipelines: clarke, kronecker, capacity, gain, uma,
// parse-touchstone. Outputs are CSV (default) or JSON with the resolved
// config and seed embedded, so any run can be reproduced byte-for-byte.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "holo/channel3gpp.hpp"
#include "holo/clarke.hpp"
#include "holo/errors.hpp"
#include "holo/io/touchstone.hpp"
#include "holo/kronecker.hpp"
#include "holo/metrics.hpp"

namespace {

using nlohmann::json;

constexpr int exit_ok = 0;
constexpr int exit_config_error = 2;
constexpr int exit_input_error = 3;
constexpr int exit_numeric_error = 4;

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CommonOptions {
    std::string config_path;
    std::string out_path;           // empty = stdout
    std::optional<std::uint64_t> seed;
    std::optional<int> trials;
    std::string format = "csv";
};

json load_config(const std::string& path) {
    if (path.empty()) throw config_error("--config is required for this subcommand");
    std::ifstream f(path);
    if (!f) throw config_error("cannot open config file: " + path);
    try {
        return json::parse(f);
    } catch (const json::exception& e) {
        throw config_error("config is not valid JSON: " + std::string(e.what()));
    }
}

void reject_unknown_keys(const json& j, const std::vector<std::string>& known,
                         const std::string& where) {
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw config_error("unknown config key '" + where + key + "'");
    }
}

template <typename T>
T require(const json& j, const std::string& key) {
    if (!j.contains(key)) throw config_error("missing required config key '" + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw config_error("config key '" + key + "' has the wrong type");
    }
}

template <typename T>
T value_or(const json& j, const std::string& key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw config_error("config key '" + key + "' has the wrong type");
    }
}

// A result table: named columns, string cells, plus the resolved config.
struct ResultTable {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    json resolved_config;
    std::uint64_t seed = 0;
};

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

void emit(const ResultTable& t, const CommonOptions& opt) {
    std::ostringstream os;
    if (opt.format == "json") {
        json out;
        out["config"] = t.resolved_config;
        out["seed"] = t.seed;
        out["columns"] = t.columns;
        json rows = json::array();
        for (const auto& r : t.rows) rows.push_back(r);
        out["rows"] = std::move(rows);
        os << out.dump(2) << '\n';
    } else {
        os << "# config: " << t.resolved_config.dump() << '\n';
        os << "# seed: " << t.seed << '\n';
        for (std::size_t i = 0; i < t.columns.size(); ++i)
            os << (i ? "," : "") << t.columns[i];
        os << '\n';
        for (const auto& r : t.rows) {
            for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
            os << '\n';
        }
    }
    if (opt.out_path.empty()) {
        std::cout << os.str();
    } else {
        std::ofstream f(opt.out_path);
        if (!f) throw holo::io_error("cannot open output file: " + opt.out_path);
        f << os.str();
        if (!f) throw holo::io_error("write failed: " + opt.out_path);
    }
}

holo::QuadratureSpec quadrature_from_config(const json& cfg, std::uint64_t seed) {
    holo::QuadratureSpec q;
    q.node_count = value_or<int>(cfg, "quadrature_nodes", q.node_count);
    const std::string m = value_or<std::string>(cfg, "quadrature_method", "fibonacci_cap");
    if (m == "fibonacci_cap") q.method = holo::QuadratureMethod::fibonacci_cap;
    else if (m == "monte_carlo") q.method = holo::QuadratureMethod::monte_carlo;
    else throw config_error("quadrature_method must be fibonacci_cap or monte_carlo");
    q.seed = seed;
    return q;
}

// ---- clarke -----------------------------------------------------------

int run_clarke(const CommonOptions& opt) {
    json cfg = load_config(opt.config_path);
    reject_unknown_keys(cfg, {"count", "spacings", "heights", "spreads_deg",
                              "quadrature_nodes", "quadrature_method", "seed"}, "");
    const int count = require<int>(cfg, "count");
    const auto spacings = require<std::vector<double>>(cfg, "spacings");
    const auto heights = value_or<std::vector<double>>(cfg, "heights", {0.0});
    const auto spreads = value_or<std::vector<double>>(cfg, "spreads_deg", {90.0});
    if (spacings.empty() || heights.empty() || spreads.empty())
        throw config_error("sweeps must be non-empty");
    const std::uint64_t seed = opt.seed.value_or(value_or<std::uint64_t>(cfg, "seed", 0));
    const holo::QuadratureSpec quad = quadrature_from_config(cfg, seed);

    ResultTable t;
    t.seed = seed;
    t.columns = {"spacing", "h", "spread_deg", "diversity"};
    for (double spread : spreads)
        for (double h : heights)
            for (double s : spacings) {
                const auto g = holo::build_linear_3d(count, s, h);
                holo::AngularSpectrum spec;
                spec.spread_half_angle = spread * M_PI / 180.0;
                const auto phi = holo::clarke_correlation(g, spec, quad);
                t.rows.push_back({fmt(s), fmt(h), fmt(spread), fmt(holo::diversity(phi))});
            }
    cfg["count"] = count;
    cfg["heights"] = heights;
    cfg["spreads_deg"] = spreads;
    cfg["seed"] = seed;
    t.resolved_config = cfg;
    emit(t, opt);
    return exit_ok;
}

// ---- capacity ---------------------------------------------------------

int run_capacity(const CommonOptions& opt) {
    json cfg = load_config(opt.config_path);
    reject_unknown_keys(cfg, {"count", "spacings", "heights", "spreads_deg", "snr_db",
                              "trials", "quadrature_nodes", "quadrature_method", "seed"}, "");
    const int count = require<int>(cfg, "count");
    const auto spacings = require<std::vector<double>>(cfg, "spacings");
    const auto heights = value_or<std::vector<double>>(cfg, "heights", {0.0});
    const auto spreads = value_or<std::vector<double>>(cfg, "spreads_deg", {90.0});
    const auto snrs = require<std::vector<double>>(cfg, "snr_db");
    if (spacings.empty() || heights.empty() || spreads.empty() || snrs.empty())
        throw config_error("sweeps must be non-empty");
    const int trials = opt.trials.value_or(value_or<int>(cfg, "trials", 2000));
    const std::uint64_t seed = opt.seed.value_or(value_or<std::uint64_t>(cfg, "seed", 0));
    const holo::QuadratureSpec quad = quadrature_from_config(cfg, seed);

    ResultTable t;
    t.seed = seed;
    t.columns = {"spacing", "h", "spread_deg", "snr_db", "diversity", "capacity", "ci95", "seed"};
    for (double spread : spreads)
        for (double h : heights)
            for (double s : spacings) {
                const auto g = holo::build_linear_3d(count, s, h);
                holo::AngularSpectrum spec;
                spec.spread_half_angle = spread * M_PI / 180.0;
                const auto phi = holo::clarke_correlation(g, spec, quad);
                holo::CovarianceMatrix r{phi.entries};
                const auto ctx = holo::geometry_context(g);
                const double div = holo::diversity(phi);
                for (double snr : snrs) {
                    const auto est =
                        holo::ergodic_capacity(r, snr, count, trials, seed, ctx);
                    t.rows.push_back({fmt(s), fmt(h), fmt(spread), fmt(snr), fmt(div),
                                      fmt(est.mean_bits_per_s_per_hz), fmt(est.half_width_95),
                                      std::to_string(seed)});
                }
            }
    cfg["count"] = count;
    cfg["heights"] = heights;
    cfg["spreads_deg"] = spreads;
    cfg["trials"] = trials;
    cfg["seed"] = seed;
    t.resolved_config = cfg;
    emit(t, opt);
    return exit_ok;
}

// ---- shared pattern helpers ------------------------------------------

struct VariantSpec {
    std::string name;
    int count = 0;
    double spacing = 0.0;
    double height = 0.0;
};

VariantSpec variant_from_json(const json& j, std::size_t index) {
    reject_unknown_keys(j, {"name", "count", "spacing", "height"},
                        "variants[" + std::to_string(index) + "].");
    VariantSpec v;
    v.name = require<std::string>(j, "name");
    v.count = require<int>(j, "count");
    v.spacing = require<double>(j, "spacing");
    v.height = value_or<double>(j, "height", 0.0);
    return v;
}

struct ElementSpec {
    double height;
    double reflection_phase_deg;
};

ElementSpec element_from_json(const json& cfg, const std::string& key, ElementSpec fallback) {
    if (!cfg.contains(key)) return fallback;
    const json& j = cfg.at(key);
    reject_unknown_keys(j, {"height", "reflection_phase_deg"}, key + ".");
    return {value_or<double>(j, "height", fallback.height),
            value_or<double>(j, "reflection_phase_deg", fallback.reflection_phase_deg)};
}

json element_to_json(const ElementSpec& e) {
    return {{"height", e.height}, {"reflection_phase_deg", e.reflection_phase_deg}};
}

// ---- kronecker --------------------------------------------------------

int run_kronecker(const CommonOptions& opt) {
    json cfg = load_config(opt.config_path);
    reject_unknown_keys(cfg, {"variants", "baseline", "lower", "upper", "spreads_deg",
                              "snr_db", "trials", "touchstone", "frequency_ghz", "seed"}, "");
    if (!cfg.contains("variants") || !cfg.at("variants").is_array() || cfg.at("variants").empty())
        throw config_error("'variants' must be a non-empty array");
    std::vector<VariantSpec> variants;
    for (std::size_t i = 0; i < cfg.at("variants").size(); ++i)
        variants.push_back(variant_from_json(cfg.at("variants")[i], i));
    std::string baseline = value_or<std::string>(cfg, "baseline", variants.front().name);
    std::size_t base_idx = variants.size();
    for (std::size_t i = 0; i < variants.size(); ++i)
        if (variants[i].name == baseline) base_idx = i;
    if (base_idx == variants.size())
        throw config_error("baseline '" + baseline + "' is not a variant name");

    const ElementSpec lower = element_from_json(cfg, "lower", {0.02, 0.0});
    const ElementSpec upper = element_from_json(cfg, "upper", {0.5, 0.0});
    const auto spreads = value_or<std::vector<double>>(cfg, "spreads_deg", {90.0});
    const auto snrs = value_or<std::vector<double>>(cfg, "snr_db", {10.0, 20.0});
    if (spreads.empty() || snrs.empty()) throw config_error("sweeps must be non-empty");
    const int trials = opt.trials.value_or(value_or<int>(cfg, "trials", 2000));
    const std::uint64_t seed = opt.seed.value_or(value_or<std::uint64_t>(cfg, "seed", 0));

    const holo::PatternGrid lower_grid =
        holo::element_over_reflector(lower.height, lower.reflection_phase_deg * M_PI / 180.0);
    const holo::PatternGrid upper_grid =
        holo::element_over_reflector(upper.height, upper.reflection_phase_deg * M_PI / 180.0);

    ResultTable t;
    t.seed = seed;
    t.columns = {"variant", "spread_deg", "snr_db", "diversity", "capacity", "ci95",
                 "diversity_increase_pct", "capacity_increase_pct", "seed"};
    for (double spread : spreads) {
        // baseline first so increases can be computed in config order
        std::vector<double> divs(variants.size());
        std::vector<std::vector<holo::CapacityEstimate>> caps(variants.size());
        for (std::size_t v = 0; v < variants.size(); ++v) {
            const auto g =
                holo::build_linear_3d(variants[v].count, variants[v].spacing, variants[v].height);
            const auto pats = holo::array_patterns(g, lower_grid, upper_grid);
            const auto spectrum =
                holo::uniform_cap_spectrum(lower_grid, spread * M_PI / 180.0);
            const auto phi = holo::pattern_correlation(pats, spectrum);
            holo::EfficiencyVector eff = holo::ideal_efficiencies(static_cast<Eigen::Index>(g.size()));
            if (cfg.contains("touchstone")) {
                const auto s = holo::parse_touchstone(require<std::string>(cfg, "touchstone"));
                eff = holo::embedded_efficiency(s, value_or<double>(cfg, "frequency_ghz", 2.45) * 1e9);
            }
            const auto r = holo::covariance(phi, eff);
            divs[v] = holo::diversity(r);
            const auto ctx = holo::geometry_context(g);
            for (double snr : snrs)
                caps[v].push_back(holo::ergodic_capacity(r, snr, variants[v].count, trials,
                                                         seed, ctx));
        }
        for (std::size_t v = 0; v < variants.size(); ++v)
            for (std::size_t si = 0; si < snrs.size(); ++si) {
                const double div_inc = 100.0 * (divs[v] / divs[base_idx] - 1.0);
                const double cap_inc =
                    100.0 * (caps[v][si].mean_bits_per_s_per_hz /
                                 caps[base_idx][si].mean_bits_per_s_per_hz -
                             1.0);
                t.rows.push_back({variants[v].name, fmt(spread), fmt(snrs[si]), fmt(divs[v]),
                                  fmt(caps[v][si].mean_bits_per_s_per_hz),
                                  fmt(caps[v][si].half_width_95), fmt(div_inc), fmt(cap_inc),
                                  std::to_string(seed)});
            }
    }
    cfg["baseline"] = baseline;
    cfg["lower"] = element_to_json(lower);
    cfg["upper"] = element_to_json(upper);
    cfg["spreads_deg"] = spreads;
    cfg["snr_db"] = snrs;
    cfg["trials"] = trials;
    cfg["seed"] = seed;
    t.resolved_config = cfg;
    emit(t, opt);
    return exit_ok;
}

// ---- gain -------------------------------------------------------------

int run_gain(const CommonOptions& opt) {
    json cfg = load_config(opt.config_path);
    reject_unknown_keys(cfg, {"variants", "lower", "upper", "scan_deg", "aperture_area",
                              "seed"}, "");
    if (!cfg.contains("variants") || !cfg.at("variants").is_array() || cfg.at("variants").empty())
        throw config_error("'variants' must be a non-empty array");
    std::vector<VariantSpec> variants;
    for (std::size_t i = 0; i < cfg.at("variants").size(); ++i)
        variants.push_back(variant_from_json(cfg.at("variants")[i], i));
    const ElementSpec lower = element_from_json(cfg, "lower", {0.02, 0.0});
    const ElementSpec upper = element_from_json(cfg, "upper", {0.5, 0.0});
    const auto scans = value_or<std::vector<double>>(cfg, "scan_deg", {0.0, 35.0, 70.0});
    if (scans.empty()) throw config_error("scan_deg must be non-empty");
    const std::uint64_t seed = opt.seed.value_or(value_or<std::uint64_t>(cfg, "seed", 0));

    const holo::PatternGrid lower_grid =
        holo::element_over_reflector(lower.height, lower.reflection_phase_deg * M_PI / 180.0);
    const holo::PatternGrid upper_grid =
        holo::element_over_reflector(upper.height, upper.reflection_phase_deg * M_PI / 180.0);

    // Aperture for the planar limit: explicit, or the first variant's
    // broadside effective aperture.
    double area = value_or<double>(cfg, "aperture_area", 0.0);
    std::vector<std::pair<VariantSpec, std::vector<holo::PatternGrid>>> built;
    std::vector<holo::ArrayGeometry> geoms;
    for (const auto& v : variants) {
        auto g = holo::build_linear_3d(v.count, v.spacing, v.height);
        built.emplace_back(v, holo::array_patterns(g, lower_grid, upper_grid));
        geoms.push_back(std::move(g));
    }
    if (!(area > 0.0)) {
        const auto gp = holo::beamforming_gain(geoms[0], built[0].second, 0.0);
        area = gp.at_angle(0.0) / (4.0 * M_PI);
    }

    ResultTable t;
    t.seed = seed;
    t.columns = {"variant", "scan_deg", "gain_db", "limit_db"};
    for (double scan : scans) {
        const double th = scan * M_PI / 180.0;
        const double lim = 10.0 * std::log10(holo::gain_limit_2d(area, th));
        for (std::size_t v = 0; v < built.size(); ++v) {
            const auto gp = holo::beamforming_gain(geoms[v], built[v].second, th);
            t.rows.push_back({built[v].first.name, fmt(scan),
                              fmt(10.0 * std::log10(gp.at_angle(th))), fmt(lim)});
        }
    }
    cfg["lower"] = element_to_json(lower);
    cfg["upper"] = element_to_json(upper);
    cfg["scan_deg"] = scans;
    cfg["aperture_area"] = area;
    cfg["seed"] = seed;
    t.resolved_config = cfg;
    emit(t, opt);
    return exit_ok;
}

// ---- uma --------------------------------------------------------------

int run_uma(const CommonOptions& opt) {
    json cfg = load_config(opt.config_path);
    reject_unknown_keys(cfg, {"scenario", "drops", "snr_db", "array", "lower", "upper",
                              "capacity_trials", "seed"}, "");
    if (!cfg.contains("scenario")) throw config_error("missing required config key 'scenario'");
    holo::ScenarioConfig scen;
    try {
        scen = holo::scenario_config_from_json(cfg.at("scenario"));
    } catch (const std::invalid_argument& e) {
        throw config_error(e.what());
    }
    if (opt.seed) scen.seed = *opt.seed;
    const int drops = value_or<int>(cfg, "drops", 50);
    const double snr = value_or<double>(cfg, "snr_db", 20.0);
    const int trials = opt.trials.value_or(value_or<int>(cfg, "capacity_trials", 300));
    if (drops < 1) throw config_error("drops must be >= 1");

    json arr = cfg.contains("array") ? cfg.at("array") : json::object();
    reject_unknown_keys(arr, {"count", "spacing", "height"}, "array.");
    const int count = value_or<int>(arr, "count", 6);
    const double spacing = value_or<double>(arr, "spacing", 0.4);
    const double height = value_or<double>(arr, "height", 0.5);

    const ElementSpec lower = element_from_json(cfg, "lower", {0.02, 0.0});
    const ElementSpec upper = element_from_json(cfg, "upper", {0.5, 0.0});
    const holo::PatternGrid lower_grid =
        holo::element_over_reflector(lower.height, lower.reflection_phase_deg * M_PI / 180.0);
    const holo::PatternGrid upper_grid =
        holo::element_over_reflector(upper.height, upper.reflection_phase_deg * M_PI / 180.0);

    holo::ScenarioVariant flat, raised;
    flat.name = "2d";
    flat.geometry = holo::build_linear_3d(count, spacing, 0.0);
    flat.patterns = holo::array_patterns(flat.geometry, lower_grid, upper_grid);
    flat.efficiencies = holo::ideal_efficiencies(count);
    raised.name = "3d";
    raised.geometry = holo::build_linear_3d(count, spacing, height);
    raised.patterns = holo::array_patterns(raised.geometry, lower_grid, upper_grid);
    raised.efficiencies = holo::ideal_efficiencies(count);

    const auto rows = holo::run_scenario(scen, {flat, raised}, drops, snr, trials);

    ResultTable t;
    t.seed = scen.seed;
    t.columns = {"scenario", "variant", "diversity", "capacity",
                 "diversity_increase_pct", "capacity_increase_pct", "seed"};
    for (const auto& r : rows)
        t.rows.push_back({r.scenario, r.variant, fmt(r.mean_diversity), fmt(r.mean_capacity),
                          fmt(r.diversity_increase_pct), fmt(r.capacity_increase_pct),
                          std::to_string(r.seed)});
    cfg["drops"] = drops;
    cfg["snr_db"] = snr;
    cfg["capacity_trials"] = trials;
    cfg["array"] = {{"count", count}, {"spacing", spacing}, {"height", height}};
    cfg["lower"] = element_to_json(lower);
    cfg["upper"] = element_to_json(upper);
    cfg["scenario"]["seed"] = scen.seed;
    t.resolved_config = cfg;
    emit(t, opt);
    return exit_ok;
}

// ---- parse-touchstone --------------------------------------------------

int run_parse_touchstone(const std::string& input, const CommonOptions& opt) {
    const holo::ScatteringMatrix s = holo::parse_touchstone(input);
    if (!opt.out_path.empty()) {
        holo::write_touchstone(s, opt.out_path); // normalized RI rewrite
    }
    std::ostringstream os;
    os << "ports: " << s.port_count << '\n'
       << "frequencies: " << s.frequencies_hz.size() << '\n'
       << "reference_impedance: " << s.reference_impedance << '\n'
       << "passive: " << (s.is_passive() ? "yes" : "no") << '\n';
    std::cout << os.str();
    return exit_ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"2-D/3-D array diversity, capacity, and gain analysis"};
    app.require_subcommand(1);

    CommonOptions opt;
    std::string touchstone_input;
    std::uint64_t seed_flag = 0;
    int trials_flag = 0;

    auto add_common = [&](CLI::App* sub, bool needs_config) {
        auto* c = sub->add_option("--config", opt.config_path, "JSON config file");
        if (needs_config) c->required();
        sub->add_option("--out", opt.out_path, "output file (default: stdout)");
        sub->add_option("--seed", seed_flag, "RNG seed override")
            ->each([&](const std::string& v) { opt.seed = std::stoull(v); });
        sub->add_option("--trials", trials_flag, "Monte-Carlo trials override")
            ->each([&](const std::string& v) { opt.trials = std::stoi(v); });
        sub->add_option("--format", opt.format, "csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
    };

    auto* clarke = app.add_subcommand("clarke", "diversity sweeps, plane-wave ensemble model");
    add_common(clarke, true);
    auto* kron = app.add_subcommand("kronecker", "pattern-overlap diversity and capacity");
    add_common(kron, true);
    auto* cap = app.add_subcommand("capacity", "ergodic capacity sweeps");
    add_common(cap, true);
    auto* gain = app.add_subcommand("gain", "scanned realized gain against the planar limit");
    add_common(gain, true);
    auto* uma = app.add_subcommand("uma", "urban-macro drop comparison");
    add_common(uma, true);
    auto* pts = app.add_subcommand("parse-touchstone", "validate an S-parameter file");
    pts->add_option("input", touchstone_input, "Touchstone .sNp file")->required();
    add_common(pts, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? exit_ok : exit_config_error;
    }

    try {
        if (clarke->parsed()) return run_clarke(opt);
        if (kron->parsed()) return run_kronecker(opt);
        if (cap->parsed()) return run_capacity(opt);
        if (gain->parsed()) return run_gain(opt);
        if (uma->parsed()) return run_uma(opt);
        if (pts->parsed()) return run_parse_touchstone(touchstone_input, opt);
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config_error;
    } catch (const holo::parse_error& e) {
        std::cerr << "input parse error: " << e.what() << '\n';
        return exit_input_error;
    } catch (const holo::data_error& e) {
        std::cerr << "input data error: " << e.what() << '\n';
        return exit_input_error;
    } catch (const holo::io_error& e) {
        std::cerr << "io error: " << e.what() << '\n';
        return exit_input_error;
    } catch (const holo::degenerate_input& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return exit_numeric_error;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config_error;
    } catch (const std::exception& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return exit_numeric_error;
    }
    return exit_config_error;
}
