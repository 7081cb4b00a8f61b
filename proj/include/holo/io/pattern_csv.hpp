#ifndef HOLO_IO_PATTERN_CSV_HPP
#define HOLO_IO_PATTERN_CSV_HPP

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "holo/errors.hpp"
#include "holo/patterns.hpp"

namespace holo {

inline constexpr const char* pattern_csv_header =
    "theta_deg,phi_deg,re_etheta,im_etheta,re_ephi,im_ephi";

// Rows in theta-major order, angles in degrees with exactly two decimals.
// Field values carry 17 significant digits so load(save(x)) is bit-exact.
inline void save_pattern_grid(const PatternGrid& p, const std::string& path) {
    p.validate();
    std::ofstream f(path);
    if (!f) throw io_error("save_pattern_grid: cannot open " + path);
    std::ostringstream os;
    os << pattern_csv_header << '\n';
    char angle[32];
    os.precision(17);
    for (Eigen::Index t = 0; t < p.n_theta(); ++t)
        for (Eigen::Index q = 0; q < p.n_phi(); ++q) {
            std::snprintf(angle, sizeof angle, "%.2f,%.2f", p.theta_samples[t] * 180.0 / M_PI,
                          p.phi_samples[q] * 180.0 / M_PI);
            os << angle << ',' << p.e_theta(t, q).real() << ',' << p.e_theta(t, q).imag() << ','
               << p.e_phi(t, q).real() << ',' << p.e_phi(t, q).imag() << '\n';
        }
    f << os.str();
    if (!f) throw io_error("save_pattern_grid: write failed for " + path);
}

inline PatternGrid load_pattern_grid(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw io_error("load_pattern_grid: cannot open " + path);

    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(f, line)) throw parse_error("empty file", 1);
    ++line_no;
    // tolerate a trailing \r from foreign line endings
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != pattern_csv_header)
        throw parse_error("malformed header, expected '" + std::string(pattern_csv_header) + "'",
                          line_no);

    std::vector<double> theta_deg, phi_deg;
    std::vector<std::array<double, 4>> fields;
    while (std::getline(f, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        // strtod accepts nan/inf tokens, which stream extraction rejects;
        // those must surface as data errors, not parse errors.
        double v[6];
        const char* cursor = line.c_str();
        for (int i = 0; i < 6; ++i) {
            if (i) {
                while (*cursor == ' ') ++cursor;
                if (*cursor != ',') throw parse_error("expected 6 comma-separated values", line_no);
                ++cursor;
            }
            char* end = nullptr;
            v[i] = std::strtod(cursor, &end);
            if (end == cursor) throw parse_error("expected 6 comma-separated values", line_no);
            cursor = end;
        }
        while (*cursor == ' ') ++cursor;
        if (*cursor != '\0') throw parse_error("expected 6 comma-separated values", line_no);
        if (std::isnan(v[2]) || std::isnan(v[3]) || std::isnan(v[4]) || std::isnan(v[5]))
            throw data_error("load_pattern_grid: NaN field value at line " +
                             std::to_string(line_no));
        theta_deg.push_back(v[0]);
        phi_deg.push_back(v[1]);
        fields.push_back({v[2], v[3], v[4], v[5]});
    }
    if (fields.empty()) throw parse_error("no data rows", line_no);

    // Recover the axes from the theta-major layout: phi axis repeats per
    // theta block.
    std::vector<double> phi_axis;
    phi_axis.push_back(phi_deg[0]);
    std::size_t n_phi = 1;
    while (n_phi < phi_deg.size() && phi_deg[n_phi] > phi_deg[n_phi - 1]) {
        phi_axis.push_back(phi_deg[n_phi]);
        ++n_phi;
    }
    if (n_phi < 2) throw format_error("phi axis not ascending", 3);
    if (fields.size() % n_phi != 0)
        throw parse_error("truncated last theta block", line_no);
    const std::size_t n_theta = fields.size() / n_phi;
    if (n_theta < 2) throw format_error("theta axis needs at least 2 samples", line_no);

    PatternGrid p;
    p.theta_samples.resize(static_cast<Eigen::Index>(n_theta));
    p.phi_samples.resize(static_cast<Eigen::Index>(n_phi));
    for (std::size_t q = 0; q < n_phi; ++q)
        p.phi_samples[static_cast<Eigen::Index>(q)] = phi_axis[q] * M_PI / 180.0;
    p.e_theta.resize(static_cast<Eigen::Index>(n_theta), static_cast<Eigen::Index>(n_phi));
    p.e_phi.resize(static_cast<Eigen::Index>(n_theta), static_cast<Eigen::Index>(n_phi));

    for (std::size_t t = 0; t < n_theta; ++t) {
        const double th = theta_deg[t * n_phi];
        if (t > 0 && !(th > theta_deg[(t - 1) * n_phi]))
            throw format_error("theta axis not ascending", 2 + t * n_phi);
        p.theta_samples[static_cast<Eigen::Index>(t)] = th * M_PI / 180.0;
        for (std::size_t q = 0; q < n_phi; ++q) {
            const std::size_t row = t * n_phi + q;
            if (theta_deg[row] != th || phi_deg[row] != phi_axis[q])
                throw format_error("rows not in theta-major grid order", 2 + row);
            const auto& v = fields[row];
            p.e_theta(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(q)) = {v[0], v[1]};
            p.e_phi(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(q)) = {v[2], v[3]};
        }
    }
    p.validate();
    return p;
}

} // namespace holo

#endif
