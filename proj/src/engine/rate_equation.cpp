#include "prft/engine.hpp"

#include <Eigen/QR>

#include <cmath>

namespace prft {

Eigen::VectorXd rate_stationary_state(const Eigen::MatrixXd& gamma) {
    if (gamma.rows() != gamma.cols() || gamma.rows() == 0)
        throw DomainError("rate matrix must be square and non-empty");
    Eigen::FullPivLU<Eigen::MatrixXd> lu(gamma);
    lu.setThreshold(1e-10);
    const Eigen::MatrixXd ker = lu.kernel();
    if (ker.cols() != 1) throw NumericalError("rate matrix is not ergodic: kernel dimension differs from one");
    Eigen::VectorXd p = ker.col(0);
    p /= p.sum();
    return p;
}

RateAptitudes rate_equation_aptitudes(const Eigen::VectorXd& flux, const Eigen::MatrixXd& gamma,
                                      const Eigen::VectorXd& p0) {
    const Eigen::Index n = flux.size();
    if (gamma.rows() != n || gamma.cols() != n || p0.size() != n)
        throw DomainError("rate_equation_aptitudes: dimension mismatch");
    const double scale = std::max(gamma.cwiseAbs().maxCoeff(), 1e-300);
    if (gamma.colwise().sum().cwiseAbs().maxCoeff() > 1e-9 * scale)
        throw DomainError("rate_equation_aptitudes: rate-matrix columns must sum to zero");
    if (std::abs(p0.sum() - 1.0) > 1e-9 || p0.minCoeff() < -1e-12)
        throw DomainError("rate_equation_aptitudes: p0 must be a normalized distribution");

    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(gamma);
    cod.setThreshold(1e-10);
    if (n - cod.rank() > 1)
        throw NumericalError("rate_equation_aptitudes: rate matrix has more than one stationary state");

    RateAptitudes r;
    r.kappa1 = flux.dot(p0);
    const Eigen::VectorXd centered = flux.array() - r.kappa1;
    const Eigen::VectorXd weighted = centered.cwiseProduct(p0);
    r.kappa2 = -2.0 * centered.dot(cod.pseudoInverse() * weighted);
    return r;
}

} // namespace prft
