#include "prft/engine.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace prft {

cplx CharPoly::operator()(cplx z) const {
    cplx acc = 0.0;
    for (auto it = a.rbegin(); it != a.rend(); ++it) acc = acc * z + *it;
    return acc;
}

namespace {

// Undo the similarity scaling A -> A / s: coefficient j picks up s^(n - j).
void unscale(std::vector<cplx>& c, double s) {
    const int n = static_cast<int>(c.size()) - 1;
    double f = 1.0;
    for (int j = n; j >= 0; --j) {
        c[j] *= f;
        f *= s;
    }
}

double matrix_scale(const CMat& A) {
    const double m = A.cwiseAbs().maxCoeff();
    return m > 0 ? m : 1.0;
}

} // namespace

CharPoly char_poly(const CMat& A) {
    if (A.rows() != A.cols()) throw DomainError("char_poly: matrix must be square");
    const Eigen::Index n = A.rows();
    if (n > 16) throw DomainError("char_poly: dimension above 16 is not supported");
    const double s = matrix_scale(A);
    const CMat H = Eigen::HessenbergDecomposition<CMat>(A / s).matrixH();

    // p[k] holds the coefficients of the characteristic polynomial of the
    // leading k x k block, ascending in powers of z.
    std::vector<std::vector<cplx>> p(n + 1);
    p[0] = {1.0};
    for (Eigen::Index k = 1; k <= n; ++k) {
        std::vector<cplx> pk(k + 1, 0.0);
        for (Eigen::Index j = 0; j < k; ++j) {
            pk[j + 1] += p[k - 1][j];
            pk[j] -= H(k - 1, k - 1) * p[k - 1][j];
        }
        cplx beta = 1.0;
        for (Eigen::Index i = 1; i < k; ++i) {
            beta *= H(k - i, k - i - 1);
            const cplx f = H(k - i - 1, k - 1) * beta;
            for (Eigen::Index j = 0; j <= k - i - 1; ++j) pk[j] -= f * p[k - i - 1][j];
        }
        p[k] = std::move(pk);
    }
    CharPoly out{std::move(p[n])};
    unscale(out.a, s);
    return out;
}

CharPoly char_poly(const TiltedGenerator& L) { return char_poly(L.matrix); }

CharPoly char_poly_faddeev_leverrier(const CMat& A, double scale) {
    if (A.rows() != A.cols()) throw DomainError("char_poly: matrix must be square");
    if (!(scale > 0)) throw DomainError("char_poly: scale must be positive");
    const Eigen::Index n = A.rows();
    const CMat B = A / scale;
    std::vector<cplx> c(n + 1, 0.0);
    c[n] = 1.0;
    CMat M = CMat::Zero(n, n);
    const CMat id = CMat::Identity(n, n);
    for (Eigen::Index k = 1; k <= n; ++k) {
        M = B * M + c[n - k + 1] * id;
        c[n - k] = -(B * M).trace() / static_cast<double>(k);
    }
    unscale(c, scale);
    return CharPoly{std::move(c)};
}

CharPoly char_poly_two_level_analytic(const TwoLevelParams& p, double o1, double o2,
                                      double phi_tilde, const CountingVector& chi) {
    const double eps = p.detuning, g = p.gamma;
    const double P = o1 * o2 * std::cos(phi_tilde);
    const double Q = o1 * o2 * std::sin(phi_tilde);
    const double u = 0.5 * (chi[0] - chi[1]);
    const double s = 0.5 * (chi[0] + chi[1]);
    const double A = 2 * o1 * o1 + 2 * o2 * o2 + 4 * P * std::cos(u);
    const double B = -4 * Q * std::sin(u);
    const cplx C = o1 * o1 * std::polar(1.0, chi[0]) + o2 * o2 * std::polar(1.0, chi[1]) +
                   2 * P * std::polar(1.0, s);
    const cplx I(0, 1);

    CharPoly cp;
    cp.a.resize(5);
    cp.a[4] = 1.0;
    cp.a[3] = 2 * g;
    cp.a[2] = 0.5 * A + eps * eps + 1.25 * g * g;
    cp.a[1] = 0.5 * g * (A - C) + g * eps * eps + 0.25 * g * g * g;
    cp.a[0] = B * B / 16.0 + g * g / 8.0 * (A - 2.0 * C) - I * eps * g * B / 4.0;
    return cp;
}

} // namespace prft
