#pragma once

#include "prft/core.hpp"
#include "prft/engine.hpp"

#include <string>
#include <variant>
#include <vector>

namespace prft {

/// Physical model bound to a lambda-derivative strategy.
class Model {
public:
    static Model two_level(const TwoLevelParams& p, Strategy s = Strategy::Analytic);
    static Model four_level(const FourLevelParams& p, Strategy s = Strategy::CharPoly);

    ModelKind kind() const;
    Strategy strategy() const { return strategy_; }
    const Ensemble& ensemble() const;
    double coupling() const;

    const TwoLevelParams& two_level_params() const;
    const FourLevelParams& four_level_params() const;

    /// Per-mode Rabi frequencies Omega_k = g sqrt(n_k).
    Vec2 rabi(const Vec2& means) const;

    /// Phases of the balanced (rotated) measurement basis.
    static Vec2 rotated_phases();

    TiltedGenerator generator(const Vec2& omegas, const Vec2& phases, const CountingVector& chi) const;

    /// Per-emitter aptitudes in the (+,-) basis. Second-order entries are
    /// infinite for a non-dissipative two-level model.
    NumericAptitudes aptitudes(const Vec2& omegas, const Vec2& phases) const;

    /// Per-emitter first-order aptitudes per mode, kappa_k = Re(i d lambda / d chi_k).
    Vec2 mode_aptitudes(const Vec2& omegas, const Vec2& phases) const;

    /// Named scalar parameters: eps, gamma, rho_A, omega, omega_s, z_max.
    double parameter(const std::string& name) const;
    Model with_parameter(const std::string& name, double value) const;
    /// Typical frequency scale used to size absolute finite-difference steps.
    double rate_scale() const;

    StencilSettings stencil;

private:
    std::variant<TwoLevelParams, FourLevelParams> params_;
    Strategy strategy_ = Strategy::Analytic;
};

// -----------------------------------------------------------------------------
// Dressed-state analysis of the four-level system
// -----------------------------------------------------------------------------

struct DressedStates {
    double e0 = 0.0, e_plus = 0.0, e_minus = 0.0;               // rad/s
    double omega0 = 0.0, omega_plus = 0.0, omega_minus = 0.0;   // rad/s, signed
};

/// Energies and effective Rabi frequencies for a probe of magnitude omega_p.
DressedStates dressed_states(const FourLevelParams& p, double omega_p);
inline DressedStates dressed_states(const FourLevelParams& p) { return dressed_states(p, p.omega_p_ref); }

/// Probe detunings eps_b - eps_a at which a dressed level is resonant, ascending.
std::vector<double> resonance_predictions(const FourLevelParams& p);

} // namespace prft
