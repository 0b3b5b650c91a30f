#pragma once

#include "prft/core.hpp"

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <functional>
#include <string>
#include <vector>

namespace prft {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

enum class ModelKind { TwoLevel, FourLevel };

/// Counting-field tilted Lindblad generator acting on column-stacked density matrices.
struct TiltedGenerator {
    int dim = 0;              // emitter Hilbert-space dimension d
    CMat matrix;              // d^2 x d^2
    ModelKind model = ModelKind::TwoLevel;
    Vec2 omegas = Vec2::Zero();
    Vec2 phases = Vec2::Zero();
    CountingVector chi = CountingVector::Zero();
    double max_rate = 0.0;    // largest frequency scale in the generator, rad/s
    double min_decay = 0.0;   // smallest non-zero decay rate, rad/s

    /// Row vector <<1| L; vanishes for a trace-preserving generator.
    Eigen::RowVectorXcd trace_functional_residual() const;
    /// Stationary state (normalized, trace one) from the kernel of L.
    CMat stationary_state() const;
};

/// Monic characteristic polynomial det(z - L) = sum_j a_j z^j.
struct CharPoly {
    std::vector<cplx> a;

    int degree() const { return static_cast<int>(a.size()) - 1; }
    cplx operator()(cplx z) const;
};

// -----------------------------------------------------------------------------
// Generators
// -----------------------------------------------------------------------------

TiltedGenerator build_two_level(const TwoLevelParams& p, double omega1, double omega2,
                                double phi1, double phi2, const CountingVector& chi);

TiltedGenerator build_four_level(const FourLevelParams& p, double omega1, double omega2,
                                 double phi1, double phi2, const CountingVector& chi);

/// Probe Rabi frequency Omega_P for per-mode amplitudes and phases.
cplx four_level_probe(double omega1, double omega2, double phi1, double phi2);

// -----------------------------------------------------------------------------
// Dominant eigenvalue by propagation
// -----------------------------------------------------------------------------

struct PropagationSettings {
    double burn_in = 0.0; // s
    double window = 0.0;  // s
    double dt = 0.0;      // s
    int samples = 400;    // least-squares samples over the window
};

struct PropagationResult {
    cplx lambda;
    double residual = 0.0; // RMS fit residual relative to 1 + |lambda| * window
    bool converged = false;
};

/// dt = 0.01 / max rate, burn-in 40 / gamma_min, window 10 / gamma_min.
PropagationSettings default_propagation_settings(const TiltedGenerator& L);

/// Log-trace slope of the RK4-propagated state rho(0) = I/d over the window.
PropagationResult dominant_eigenvalue_prop(const TiltedGenerator& L, const PropagationSettings& s);

/// Eigenvalue with the largest real part from a dense eigen-solve.
cplx dominant_eigenvalue_dense(const TiltedGenerator& L);

// -----------------------------------------------------------------------------
// Characteristic polynomials
// -----------------------------------------------------------------------------

/// Hessenberg reduction followed by the La Budde recursion.
CharPoly char_poly(const TiltedGenerator& L);
CharPoly char_poly(const CMat& A);

/// Faddeev-LeVerrier recursion on A / scale, unscaled afterwards.
CharPoly char_poly_faddeev_leverrier(const CMat& A, double scale);

/// Closed-form two-level coefficients for relative phase phi_tilde = phi1 - phi2.
CharPoly char_poly_two_level_analytic(const TwoLevelParams& p, double omega1, double omega2,
                                      double phi_tilde, const CountingVector& chi);

// -----------------------------------------------------------------------------
// Cumulants from the truncated polynomial
// -----------------------------------------------------------------------------

/// Low-order coefficients and their counting-field derivatives at chi = 0.
/// d1[alpha][j] = d a_j / d chi_alpha, d2[alpha][beta][j] = d^2 a_j / d chi_alpha d chi_beta.
struct PolyDerivatives {
    std::array<cplx, 3> a{};
    std::array<std::array<cplx, 3>, 2> d1{};
    std::array<std::array<std::array<cplx, 3>, 2>, 2> d2{};

    /// Re-express derivatives in the basis chi_1 = chi_+ + chi_-, chi_2 = chi_+ - chi_-.
    PolyDerivatives to_plus_minus() const;
};

struct LambdaDerivatives {
    std::array<cplx, 2> d1{};
    std::array<std::array<cplx, 2>, 2> d2{};
};

LambdaDerivatives truncated_poly_cumulants(const PolyDerivatives& pd, double rate);

/// Closed-form derivatives of the two-level coefficients in the per-mode basis.
PolyDerivatives two_level_poly_derivatives(const TwoLevelParams& p, double omega1, double omega2,
                                           double phi_tilde);

/// Aptitudes from lambda derivatives taken in the (+,-) basis.
CumulantAptitudes aptitudes_from_derivatives(const LambdaDerivatives& ld);

/// Rotated-basis closed forms for total Rabi frequency omega.
CumulantAptitudes aptitudes_analytic_two_level(const TwoLevelParams& p, double omega);

// -----------------------------------------------------------------------------
// Numeric aptitudes
// -----------------------------------------------------------------------------

enum class Strategy {
    Analytic,     // closed-form two-level coefficients
    CharPoly,     // numeric characteristic polynomial + truncated cumulants
    Propagation,  // RK4 log-trace slope
    Eigensolver,  // dense eigen-solve of the tilted generator
};

std::string to_string(Strategy s);
Strategy strategy_from_string(const std::string& s);

/// Builds the tilted generator for counting fields given in the per-mode basis.
using GeneratorFactory = std::function<TiltedGenerator(const CountingVector& chi)>;

struct StencilSettings {
    double step(Strategy s) const { return s == Strategy::Propagation ? propagation_h : h; }

    double h = 1e-3;                 // base counting-field step, rad
    double propagation_h = 3e-4;     // base step for the propagation strategy, rad
    double richardson_tol = 1e-3;    // relative disagreement that triggers a warning
};

struct NumericAptitudes {
    CumulantAptitudes aptitudes;
    bool quality_warning = false;
};

/// Central differences in (chi_+, chi_-) with one Richardson halving.
/// Strategy::Analytic is rejected here; it has no generator-level meaning.
NumericAptitudes aptitudes_numeric(const GeneratorFactory& make, Strategy strategy,
                                   const StencilSettings& stencil = {});

/// Per-mode first derivatives kappa_k = Re(i d lambda / d chi_k) only.
Vec2 first_aptitudes_numeric(const GeneratorFactory& make, Strategy strategy,
                             const StencilSettings& stencil = {});

// -----------------------------------------------------------------------------
// Weak-coupling rate equations
// -----------------------------------------------------------------------------

struct RateAptitudes {
    double kappa1 = 0.0;
    double kappa2 = 0.0;
};

/// Gamma: column-stochastic rate matrix (columns sum to zero); flux: per-state photon flux.
RateAptitudes rate_equation_aptitudes(const Eigen::VectorXd& flux, const Eigen::MatrixXd& gamma,
                                      const Eigen::VectorXd& p0);

/// Stationary distribution of a rate matrix (kernel vector normalized to one).
Eigen::VectorXd rate_stationary_state(const Eigen::MatrixXd& gamma);

} // namespace prft
