#ifndef HOLO_MATRICES_HPP
#define HOLO_MATRICES_HPP

#include <Eigen/Dense>
#include <complex>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "holo/errors.hpp"

namespace holo {

using Complex = std::complex<double>;
using MatrixXc = Eigen::MatrixXcd;

namespace detail {

inline void check_hermitian_psd(const MatrixXc& m, const char* what,
                                double herm_tol = 1e-10, double psd_tol = 1e-8) {
    if (m.rows() != m.cols())
        throw std::invalid_argument(std::string(what) + ": matrix not square");
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > herm_tol * scale)
        throw std::invalid_argument(std::string(what) + ": matrix not Hermitian");
    Eigen::SelfAdjointEigenSolver<MatrixXc> es(m, Eigen::EigenvaluesOnly);
    const double lam_max = es.eigenvalues().maxCoeff();
    if (es.eigenvalues().minCoeff() < -psd_tol * std::max(lam_max, 1e-300))
        throw std::invalid_argument(std::string(what) + ": matrix not positive semidefinite");
}

} // namespace detail

// Spatial correlation matrix: Hermitian PSD with unit diagonal.
struct CorrelationMatrix {
    MatrixXc entries;

    Eigen::Index order() const { return entries.rows(); }

    void validate() const {
        detail::check_hermitian_psd(entries, "CorrelationMatrix");
        for (Eigen::Index i = 0; i < entries.rows(); ++i)
            if (std::abs(entries(i, i) - Complex(1.0, 0.0)) > 1e-10)
                throw std::invalid_argument("CorrelationMatrix: diagonal not unit");
        if (entries.cwiseAbs().maxCoeff() > 1.0 + 1e-10)
            throw std::invalid_argument("CorrelationMatrix: |rho| exceeds 1");
    }
};

// Receive covariance: Hermitian PSD, diagonal carries embedded efficiencies.
struct CovarianceMatrix {
    MatrixXc entries;

    Eigen::Index order() const { return entries.rows(); }

    void validate() const {
        detail::check_hermitian_psd(entries, "CovarianceMatrix");
        for (Eigen::Index i = 0; i < entries.rows(); ++i) {
            const double d = entries(i, i).real();
            if (d < -1e-12 || d > 1.0 + 1e-10)
                throw std::invalid_argument("CovarianceMatrix: diagonal outside [0,1]");
        }
    }
};

inline std::string matrix_to_csv(const MatrixXc& m) {
    std::ostringstream os;
    os << std::setprecision(17);
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c) os << ',';
            os << m(r, c).real() << ',' << m(r, c).imag();
        }
        os << '\n';
    }
    return os.str();
}

inline nlohmann::json matrix_to_json(const MatrixXc& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            row.push_back({m(r, c).real(), m(r, c).imag()});
        rows.push_back(std::move(row));
    }
    return rows;
}

inline void write_matrix_csv(const MatrixXc& m, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw io_error("cannot open for writing: " + path);
    f << matrix_to_csv(m);
}

} // namespace holo

#endif
