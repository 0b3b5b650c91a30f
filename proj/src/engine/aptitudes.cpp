#include "prft/engine.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace prft {

std::string to_string(Strategy s) {
    switch (s) {
    case Strategy::Analytic: return "analytic";
    case Strategy::CharPoly: return "char_poly";
    case Strategy::Propagation: return "propagation";
    case Strategy::Eigensolver: return "eigensolver";
    }
    return "unknown";
}

Strategy strategy_from_string(const std::string& s) {
    if (s == "analytic") return Strategy::Analytic;
    if (s == "char_poly") return Strategy::CharPoly;
    if (s == "propagation") return Strategy::Propagation;
    if (s == "eigensolver") return Strategy::Eigensolver;
    throw ConfigError(fmt::format("unknown strategy '{}'", s));
}

PolyDerivatives PolyDerivatives::to_plus_minus() const {
    PolyDerivatives out;
    out.a = a;
    for (int j = 0; j < 3; ++j) {
        out.d1[0][j] = d1[0][j] + d1[1][j];
        out.d1[1][j] = d1[0][j] - d1[1][j];
        out.d2[0][0][j] = d2[0][0][j] + 2.0 * d2[0][1][j] + d2[1][1][j];
        out.d2[1][1][j] = d2[0][0][j] - 2.0 * d2[0][1][j] + d2[1][1][j];
        out.d2[0][1][j] = d2[0][0][j] - d2[1][1][j];
        out.d2[1][0][j] = out.d2[0][1][j];
    }
    return out;
}

LambdaDerivatives truncated_poly_cumulants(const PolyDerivatives& pd, double rate) {
    const cplx a0 = pd.a[0], a1 = pd.a[1], a2 = pd.a[2];
    if (!(rate > 0)) throw DomainError("truncated_poly_cumulants: rate scale must be positive");
    if (std::abs(a1) <= 1e-12 * std::abs(a2) * rate)
        throw NumericalError("truncated_poly_cumulants: a_1 vanishes (non-ergodic generator)");
    if (std::abs(a0) > 1e-6 * std::abs(a1) * rate)
        throw NumericalError("truncated_poly_cumulants: a_0 does not vanish at zero counting field");

    LambdaDerivatives ld;
    for (int al = 0; al < 2; ++al) ld.d1[al] = -pd.d1[al][0] / a1;
    for (int al = 0; al < 2; ++al) {
        for (int be = 0; be < 2; ++be) {
            const cplx r0a = pd.d1[al][0] / a1, r0b = pd.d1[be][0] / a1;
            const cplx r1a = pd.d1[al][1] / a1, r1b = pd.d1[be][1] / a1;
            ld.d2[al][be] = -pd.d2[al][be][0] / a1 + r1a * r0b + r1b * r0a - 2.0 * (a2 / a1) * r0a * r0b;
        }
    }
    return ld;
}

PolyDerivatives two_level_poly_derivatives(const TwoLevelParams& p, double o1, double o2,
                                           double phi_tilde) {
    const double eps = p.detuning, g = p.gamma;
    const double P = o1 * o2 * std::cos(phi_tilde);
    const double Q = o1 * o2 * std::sin(phi_tilde);
    const double om2 = o1 * o1 + o2 * o2 + 2 * P;
    const std::array<double, 2> ok2{o1 * o1, o2 * o2};
    const std::array<double, 2> sg{1.0, -1.0};
    const cplx I(0, 1);

    PolyDerivatives pd;
    pd.a[2] = om2 + eps * eps + 1.25 * g * g;
    pd.a[1] = 0.25 * g * (4 * eps * eps + 2 * om2 + g * g);
    pd.a[0] = 0.0;
    for (int k = 0; k < 2; ++k) {
        pd.d1[k][2] = 0.0;
        pd.d1[k][1] = -0.5 * I * g * (ok2[k] + P);
        pd.d1[k][0] = -0.25 * I * g * g * (ok2[k] + P) + 0.5 * I * eps * g * Q * sg[k];
        for (int l = 0; l < 2; ++l) {
            const double ss = sg[k] * sg[l];
            const double dkl = (k == l) ? 1.0 : 0.0;
            pd.d2[k][l][2] = -0.5 * P * ss;
            pd.d2[k][l][1] = 0.5 * g * (-P * ss + ok2[k] * dkl + 0.5 * P);
            pd.d2[k][l][0] = 0.5 * Q * Q * ss + g * g / 8.0 * (2 * ok2[k] * dkl + P - P * ss);
        }
    }
    return pd;
}

CumulantAptitudes aptitudes_from_derivatives(const LambdaDerivatives& ld) {
    const cplx I(0, 1);
    CumulantAptitudes k;
    k.kp = (I * ld.d1[0]).real();
    k.km = (I * ld.d1[1]).real();
    k.kpp = -ld.d2[0][0].real();
    k.kmm = -ld.d2[1][1].real();
    k.kpm = -ld.d2[0][1].real();
    return k;
}

CumulantAptitudes aptitudes_analytic_two_level(const TwoLevelParams& p, double omega) {
    const double eps = p.detuning, g = p.gamma;
    const double o2 = omega * omega, o4 = o2 * o2;
    const double den = 4 * eps * eps + 2 * o2 + g * g;
    CumulantAptitudes k;
    if (den == 0.0) return k;
    k.kp = -g * o2 / den;
    k.km = 2 * eps * o2 / den;
    k.kpp = g * o2 / den + o4 * g * (8 * eps * eps - 6 * g * g) / (den * den * den);
    if (g > 0) {
        k.kmm = (2 * o4 + g * g * o2) / (g * den) -
                8 * eps * eps * o4 * (4 * o2 + 4 * eps * eps + 5 * g * g) / (g * den * den * den);
    } else {
        k.kmm = (o2 > 0) ? std::numeric_limits<double>::infinity() : 0.0;
    }
    k.kpm = 8 * eps * o4 * (o2 + 2 * g * g) / (den * den * den);
    return k;
}

// -----------------------------------------------------------------------------
// Counting-field stencils
// -----------------------------------------------------------------------------

namespace {

CountingVector per_mode(double cp, double cm) { return {cp + cm, cp - cm}; }

// Offsets of the eight off-centre stencil points in units of the step.
constexpr std::array<std::array<int, 2>, 8> kOffsets{{
    {1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {1, -1}, {-1, 1}, {-1, -1},
}};

using StencilValues = std::array<cplx, 8>;

struct Derivs {
    std::array<cplx, 2> d1{};
    std::array<std::array<cplx, 2>, 2> d2{};
};

Derivs central(const StencilValues& v, cplx f0, double h) {
    Derivs d;
    d.d1[0] = (v[0] - v[1]) / (2 * h);
    d.d1[1] = (v[2] - v[3]) / (2 * h);
    d.d2[0][0] = (v[0] - 2.0 * f0 + v[1]) / (h * h);
    d.d2[1][1] = (v[2] - 2.0 * f0 + v[3]) / (h * h);
    d.d2[0][1] = d.d2[1][0] = (v[4] - v[5] - v[6] + v[7]) / (4 * h * h);
    return d;
}

Derivs richardson(const Derivs& coarse, const Derivs& fine) {
    Derivs d;
    for (int a = 0; a < 2; ++a) {
        d.d1[a] = (4.0 * fine.d1[a] - coarse.d1[a]) / 3.0;
        for (int b = 0; b < 2; ++b) d.d2[a][b] = (4.0 * fine.d2[a][b] - coarse.d2[a][b]) / 3.0;
    }
    return d;
}

cplx lambda_of(const TiltedGenerator& L, Strategy s) {
    switch (s) {
    case Strategy::Propagation: return dominant_eigenvalue_prop(L, default_propagation_settings(L)).lambda;
    case Strategy::Eigensolver: return dominant_eigenvalue_dense(L);
    default: throw DomainError("lambda_of: strategy does not evaluate eigenvalues");
    }
}

// Richardson-extrapolated lambda derivatives, plus the fine-step estimate for
// the quality check.
struct StencilResult {
    LambdaDerivatives extrapolated;
    LambdaDerivatives fine;
};

StencilResult lambda_derivs(const GeneratorFactory& make, Strategy strategy, double h) {
    const double fine_h = 0.5 * h;
    StencilResult out;
    if (strategy == Strategy::CharPoly) {
        std::array<StencilValues, 3> coarse{}, fine{};
        for (int i = 0; i < 8; ++i) {
            const auto& o = kOffsets[i];
            const CharPoly cc = char_poly(make(per_mode(o[0] * h, o[1] * h)));
            const CharPoly cf = char_poly(make(per_mode(o[0] * fine_h, o[1] * fine_h)));
            for (int j = 0; j < 3; ++j) {
                coarse[j][i] = cc.a[j];
                fine[j][i] = cf.a[j];
            }
        }
        const TiltedGenerator g0 = make(CountingVector::Zero());
        const CharPoly c0 = char_poly(g0);
        PolyDerivatives pe, pf;
        for (int j = 0; j < 3; ++j) {
            pe.a[j] = pf.a[j] = c0.a[j];
            const Derivs df = central(fine[j], c0.a[j], fine_h);
            const Derivs de = richardson(central(coarse[j], c0.a[j], h), df);
            for (int a = 0; a < 2; ++a) {
                pe.d1[a][j] = de.d1[a];
                pf.d1[a][j] = df.d1[a];
                for (int b = 0; b < 2; ++b) {
                    pe.d2[a][b][j] = de.d2[a][b];
                    pf.d2[a][b][j] = df.d2[a][b];
                }
            }
        }
        out.extrapolated = truncated_poly_cumulants(pe, g0.max_rate);
        out.fine = truncated_poly_cumulants(pf, g0.max_rate);
        return out;
    }

    StencilValues coarse{}, fine{};
    for (int i = 0; i < 8; ++i) {
        const auto& o = kOffsets[i];
        coarse[i] = lambda_of(make(per_mode(o[0] * h, o[1] * h)), strategy);
        fine[i] = lambda_of(make(per_mode(o[0] * fine_h, o[1] * fine_h)), strategy);
    }
    const cplx f0 = lambda_of(make(CountingVector::Zero()), strategy);
    const Derivs df = central(fine, f0, fine_h);
    const Derivs de = richardson(central(coarse, f0, h), df);
    out.extrapolated.d1 = de.d1;
    out.extrapolated.d2 = de.d2;
    out.fine.d1 = df.d1;
    out.fine.d2 = df.d2;
    return out;
}

bool disagree(double a, double b, double scale, double tol) {
    return std::abs(a - b) > tol * std::max(scale, 1e-300);
}

} // namespace

NumericAptitudes aptitudes_numeric(const GeneratorFactory& make, Strategy strategy,
                                   const StencilSettings& st) {
    if (strategy == Strategy::Analytic)
        throw ConfigError("aptitudes_numeric: the analytic strategy has no numeric stencil");
    const StencilResult r = lambda_derivs(make, strategy, st.step(strategy));
    NumericAptitudes out;
    out.aptitudes = aptitudes_from_derivatives(r.extrapolated);
    const CumulantAptitudes check = aptitudes_from_derivatives(r.fine);
    const auto& k = out.aptitudes;
    const double s1 = std::max(std::abs(k.kp), std::abs(k.km));
    const double s2 = std::max(std::abs(k.kpp), std::abs(k.kmm));
    out.quality_warning = disagree(k.kp, check.kp, s1, st.richardson_tol) ||
                          disagree(k.km, check.km, s1, st.richardson_tol) ||
                          disagree(k.kpp, check.kpp, s2, st.richardson_tol) ||
                          disagree(k.kmm, check.kmm, s2, st.richardson_tol);
    return out;
}

Vec2 first_aptitudes_numeric(const GeneratorFactory& make, Strategy strategy, const StencilSettings& st) {
    const cplx I(0, 1);
    Vec2 out;
    if (strategy == Strategy::CharPoly) {
        const cplx a1 = char_poly(make(CountingVector::Zero())).a[1];
        for (int k = 0; k < 2; ++k) {
            auto a0 = [&](double step) {
                CountingVector c = CountingVector::Zero();
                c[k] = step;
                return char_poly(make(c)).a[0];
            };
            auto diff = [&](double step) { return (a0(step) - a0(-step)) / (2 * step); };
            const cplx d = (4.0 * diff(0.5 * st.h) - diff(st.h)) / 3.0;
            out[k] = (I * (-d / a1)).real();
        }
        return out;
    }
    if (strategy == Strategy::Analytic)
        throw ConfigError("first_aptitudes_numeric: the analytic strategy has no numeric stencil");
    for (int k = 0; k < 2; ++k) {
        auto lam = [&](double step) {
            CountingVector c = CountingVector::Zero();
            c[k] = step;
            return lambda_of(make(c), strategy);
        };
        auto diff = [&](double step) { return (lam(step) - lam(-step)) / (2 * step); };
        const double h = st.step(strategy);
        const cplx d = (4.0 * diff(0.5 * h) - diff(h)) / 3.0;
        out[k] = (I * d).real();
    }
    return out;
}

} // namespace prft
