#ifndef HOLO_IO_TOUCHSTONE_HPP
#define HOLO_IO_TOUCHSTONE_HPP

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "holo/errors.hpp"
#include "holo/kronecker.hpp"

namespace holo {

enum class TouchstoneFormat { RI, MA, DB };

namespace ts_detail {

inline std::string upper(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return s;
}

struct Token {
    std::string text;
    std::size_t line;
};

inline int port_count_from_path(const std::string& path) {
    // extension .sNp, N in 1..99
    const auto dot = path.find_last_of('.');
    if (dot == std::string::npos) return 0;
    std::string ext = upper(path.substr(dot + 1));
    if (ext.size() < 3 || ext.front() != 'S' || ext.back() != 'P') return 0;
    const std::string digits = ext.substr(1, ext.size() - 2);
    if (digits.empty() || digits.size() > 2 ||
        !std::all_of(digits.begin(), digits.end(), [](char c) { return std::isdigit(c); }))
        return 0;
    const int n = std::stoi(digits);
    return (n >= 1 && n <= 99) ? n : 0;
}

inline double parse_number(const Token& t) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(t.text, &pos);
    } catch (const std::exception&) {
        throw parse_error("non-numeric token '" + t.text + "'", t.line);
    }
    if (pos != t.text.size())
        throw parse_error("non-numeric token '" + t.text + "'", t.line);
    return v;
}

} // namespace ts_detail

// Touchstone v1.1 reader. Output matrices are real/imaginary internally
// regardless of the file's format. 2-port data follows the conventional
// S11 S21 S12 S22 column order; larger matrices are row-major with
// arbitrary line wrapping. v2.0 keyword files are rejected. For 2-port
// files a trailing noise-parameter section (detected by a frequency
// decrease) is skipped with a warning.
inline ScatteringMatrix parse_touchstone(const std::string& path,
                                         std::ostream* warn = &std::cerr) {
    const int n_ports = ts_detail::port_count_from_path(path);
    if (n_ports == 0)
        throw io_error("parse_touchstone: path must end in .sNp with N in 1..99: " + path);
    std::ifstream f(path);
    if (!f) throw io_error("parse_touchstone: cannot open " + path);

    double unit_scale = 1e9; // GHz default
    TouchstoneFormat fmt = TouchstoneFormat::MA;
    double z0 = 50.0;
    bool have_option_line = false;
    bool seen_data = false;

    std::vector<ts_detail::Token> tokens;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(f, line)) {
        ++line_no;
        const auto bang = line.find('!');
        if (bang != std::string::npos) line.resize(bang);
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first)) continue;

        if (first.front() == '[')
            throw format_error("Touchstone v2.0 keywords are not supported", line_no);

        if (first == "#") {
            if (have_option_line)
                throw format_error("duplicate option line", line_no);
            if (seen_data)
                throw format_error("option line after data", line_no);
            have_option_line = true;
            std::string tok;
            bool expect_z0 = false;
            while (ls >> tok) {
                const std::string u = ts_detail::upper(tok);
                if (expect_z0) {
                    z0 = std::stod(tok);
                    expect_z0 = false;
                } else if (u == "HZ") unit_scale = 1.0;
                else if (u == "KHZ") unit_scale = 1e3;
                else if (u == "MHZ") unit_scale = 1e6;
                else if (u == "GHZ") unit_scale = 1e9;
                else if (u == "S") { /* parameter type */ }
                else if (u == "Y" || u == "Z" || u == "G" || u == "H")
                    throw format_error("only S-parameters are supported", line_no);
                else if (u == "RI") fmt = TouchstoneFormat::RI;
                else if (u == "MA") fmt = TouchstoneFormat::MA;
                else if (u == "DB") fmt = TouchstoneFormat::DB;
                else if (u == "R") expect_z0 = true;
                else throw format_error("unknown option token '" + tok + "'", line_no);
            }
            continue;
        }

        seen_data = true;
        tokens.push_back({first, line_no});
        std::string tok;
        while (ls >> tok) tokens.push_back({tok, line_no});
    }
    if (!have_option_line)
        throw parse_error("missing option line", line_no == 0 ? 1 : line_no);

    const std::size_t per_block = 1 + 2 * static_cast<std::size_t>(n_ports) * n_ports;
    ScatteringMatrix s;
    s.port_count = n_ports;
    s.reference_impedance = z0;

    std::size_t i = 0;
    while (i < tokens.size()) {
        const double freq = ts_detail::parse_number(tokens[i]) * unit_scale;
        if (!s.frequencies_hz.empty() && freq <= s.frequencies_hz.back()) {
            if (n_ports == 2) {
                // noise-parameter section: frequencies restart downward
                if (warn)
                    *warn << "parse_touchstone: ignoring noise-parameter section starting at line "
                          << tokens[i].line << "\n";
                break;
            }
            throw format_error("frequencies not strictly ascending", tokens[i].line);
        }
        if (i + per_block > tokens.size())
            throw format_error("truncated frequency block", tokens.back().line);
        MatrixXc m(n_ports, n_ports);
        std::size_t k = i + 1;
        for (int idx = 0; idx < n_ports * n_ports; ++idx) {
            const double a = ts_detail::parse_number(tokens[k]);
            const double b = ts_detail::parse_number(tokens[k + 1]);
            k += 2;
            Complex v;
            switch (fmt) {
                case TouchstoneFormat::RI: v = Complex(a, b); break;
                case TouchstoneFormat::MA: v = std::polar(a, b * M_PI / 180.0); break;
                case TouchstoneFormat::DB:
                    v = std::polar(std::pow(10.0, a / 20.0), b * M_PI / 180.0);
                    break;
            }
            int row, col;
            if (n_ports == 2) {
                // file order S11 S21 S12 S22: column-major
                row = idx % 2;
                col = idx / 2;
            } else {
                row = idx / n_ports;
                col = idx % n_ports;
            }
            m(row, col) = v;
        }
        s.frequencies_hz.push_back(freq);
        s.data.push_back(std::move(m));
        i += per_block;
    }

    if (s.data.empty())
        throw format_error("no data blocks", line_no == 0 ? 1 : line_no);
    s.validate();
    return s;
}

// Canonical v1.1 writer: Hz frequency unit, 17 significant digits,
// 2-port S21-before-S12 order, rows wrapped at four pairs per line for
// three or more ports. parse(write(x)) is bit-identical in RI mode.
inline void write_touchstone(const ScatteringMatrix& s, const std::string& path,
                             TouchstoneFormat fmt = TouchstoneFormat::RI) {
    if (s.frequencies_hz.empty())
        throw io_error("write_touchstone: empty frequency list");
    s.validate();
    std::ofstream f(path);
    if (!f) throw io_error("write_touchstone: cannot open " + path);

    const char* fmt_name = fmt == TouchstoneFormat::RI ? "RI"
                          : fmt == TouchstoneFormat::MA ? "MA" : "DB";
    f << "# Hz S " << fmt_name << " R " << s.reference_impedance << "\n";

    std::ostringstream os;
    os.precision(17);
    auto emit = [&](Complex v) {
        double a, b;
        switch (fmt) {
            case TouchstoneFormat::RI: a = v.real(); b = v.imag(); break;
            case TouchstoneFormat::MA: a = std::abs(v); b = std::arg(v) * 180.0 / M_PI; break;
            default: a = 20.0 * std::log10(std::max(std::abs(v), 1e-300));
                     b = std::arg(v) * 180.0 / M_PI; break;
        }
        os << ' ' << a << ' ' << b;
    };

    const int n = s.port_count;
    for (std::size_t fi = 0; fi < s.frequencies_hz.size(); ++fi) {
        const MatrixXc& m = s.data[fi];
        os << s.frequencies_hz[fi];
        if (n == 1) {
            emit(m(0, 0));
            os << '\n';
        } else if (n == 2) {
            emit(m(0, 0));
            emit(m(1, 0));
            emit(m(0, 1));
            emit(m(1, 1));
            os << '\n';
        } else {
            os << '\n';
            for (int row = 0; row < n; ++row) {
                int on_line = 0;
                for (int col = 0; col < n; ++col) {
                    if (on_line == 4) {
                        os << '\n';
                        on_line = 0;
                    }
                    emit(m(row, col));
                    ++on_line;
                }
                os << '\n';
            }
        }
    }
    f << os.str();
    if (!f) throw io_error("write_touchstone: write failed for " + path);
}

} // namespace holo

#endif
