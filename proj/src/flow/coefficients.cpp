#include "prft/flow.hpp"

#include <cmath>

namespace prft {

Vec2 flux_vector_two_level(const TwoLevelParams& p, double o1, double o2, double phi_tilde) {
    const double eps = p.detuning, g = p.gamma;
    const double P = o1 * o2 * std::cos(phi_tilde), Q = o1 * o2 * std::sin(phi_tilde);
    const double den = 4 * eps * eps + 2 * (o1 * o1 + o2 * o2 + 2 * P) + g * g;
    if (den == 0.0) return Vec2::Zero();
    const double pref = p.ensemble.prefactor() / den;
    return pref * Vec2(2 * eps * Q - g * o1 * o1 - g * P, -2 * eps * Q - g * o2 * o2 - g * P);
}

Mat2 diffusion_leading_two_level(const TwoLevelParams& p, double o1, double o2, double phi_tilde) {
    if (!(p.gamma > 0)) throw DomainError("diffusion_leading_two_level: gamma must be positive");
    const double P = o1 * o2 * std::cos(phi_tilde), s = std::sin(phi_tilde);
    const double om2 = o1 * o1 + o2 * o2 + 2 * P;
    const double base = 4 * p.detuning * p.detuning + 2 * om2;
    if (base == 0.0) return Mat2::Zero();
    const double coef = 8 * o1 * o1 * o2 * o2 * om2 * om2 * s * s / (p.gamma * base * base * base);
    Mat2 shape;
    shape << 1, -1, -1, 1;
    return coef * p.ensemble.prefactor() * shape;
}

Mat2 phase_space_two_level(const TwoLevelParams& p, const Vec2& n, double phi_tilde) {
    if (n.minCoeff() <= 0) throw DomainError("phase_space_two_level: modes must be occupied");
    const double eps = p.detuning, g = p.gamma, g2 = p.coupling() * p.coupling();
    const double o1 = std::sqrt(g2 * n[0]), o2 = std::sqrt(g2 * n[1]);
    const double P = o1 * o2 * std::cos(phi_tilde), Q = o1 * o2 * std::sin(phi_tilde);
    const double den = 4 * eps * eps + 2 * (o1 * o1 + o2 * o2 + 2 * P) + g * g;
    const Vec2 sg(1.0, -1.0), ok2(o1 * o1, o2 * o2);
    Mat2 C;
    for (int i = 0; i < 2; ++i) {
        const double F = 2 * eps * Q * sg[i] - g * ok2[i] - g * P;
        for (int j = 0; j < 2; ++j) {
            const double dF = eps * Q * sg[i] / n[j] - g * g2 * (i == j ? 1.0 : 0.0) - g * P / (2 * n[j]);
            const double dden = 2 * (g2 + P / n[j]);
            C(i, j) = p.ensemble.prefactor() / den * (dF - F * dden / den);
        }
    }
    return C;
}

Mat2 diffusion_from_aptitudes(const CumulantAptitudes& k, double prefactor) {
    Mat2 D;
    D(0, 0) = 0.25 * (k.kpp + k.kmm + 2 * k.kpm);
    D(1, 1) = 0.25 * (k.kpp + k.kmm - 2 * k.kpm);
    D(0, 1) = D(1, 0) = 0.25 * (k.kpp - k.kmm);
    return prefactor * D;
}

Vec2 flux_vector_numeric(const Model& m, const Vec2& means, const Vec2& phases) {
    return m.ensemble().prefactor() * m.mode_aptitudes(m.rabi(means), phases);
}

Mat2 diffusion_matrix(const Model& m, const Vec2& means, const Vec2& phases) {
    const auto k = m.aptitudes(m.rabi(means), phases).aptitudes;
    Mat2 D = diffusion_from_aptitudes(k, m.ensemble().prefactor());
    const double scale = D.cwiseAbs().maxCoeff();
    if (std::abs(D(0, 1) - D(1, 0)) > 1e-9 * scale) throw NumericalError("diffusion matrix is not symmetric");
    return D;
}

Mat2 phase_space_matrix(const Model& m, const Vec2& means, const Vec2& phases) {
    if (means.minCoeff() <= 0)
        throw DomainError("phase_space_matrix: an unoccupied mode makes C singular; integrate in the rotated frame");
    const double pref = m.ensemble().prefactor();
    Mat2 C;
    for (int j = 0; j < 2; ++j) {
        const double step = 1e-3 * means[j];
        Vec2 up = means, down = means;
        up[j] += step;
        down[j] -= step;
        C.col(j) = pref * (m.mode_aptitudes(m.rabi(up), phases) - m.mode_aptitudes(m.rabi(down), phases)) / (2 * step);
    }
    return C;
}

FlowPoint flow_coefficients(const Model& m, const Vec2& means, const Vec2& phases, bool with_phase_space) {
    FlowPoint out;
    const Vec2 om = m.rabi(means);
    const double pref = m.ensemble().prefactor();
    if (!with_phase_space) {
        out.coeffs.flux = pref * m.mode_aptitudes(om, phases);
        return out;
    }
    const NumericAptitudes na = m.aptitudes(om, phases);
    out.aptitudes = na.aptitudes;
    out.quality_warning = na.quality_warning;
    const auto& k = na.aptitudes;
    out.coeffs.flux = pref * Vec2(0.5 * (k.kp + k.km), 0.5 * (k.kp - k.km));
    out.coeffs.diffusion = diffusion_from_aptitudes(k, pref);
    out.coeffs.phase_space = phase_space_matrix(m, means, phases);
    return out;
}

} // namespace prft
