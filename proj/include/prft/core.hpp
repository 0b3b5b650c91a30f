#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <string_view>

namespace prft {

// -----------------------------------------------------------------------------
// Error types
// -----------------------------------------------------------------------------

/// Invalid user configuration (unknown unit, malformed key, out-of-range value).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what, int line = 0)
        : std::runtime_error(what), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

/// Input outside the mathematical domain of an operation.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Numerical breakdown (non-ergodic generator, lost positivity, saturation).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// -----------------------------------------------------------------------------
// Units
// -----------------------------------------------------------------------------

namespace constants {
inline constexpr double hbar = 1.054571817e-34;     // J s
inline constexpr double planck = 6.62607015e-34;    // J s
inline constexpr double speed_of_light = 299792458; // m / s
inline constexpr double pi = 3.14159265358979323846;
} // namespace constants

/// Convert a value tagged with one of the whitelisted unit strings into the
/// internal representation (rad/s, m, s, W, m^-3).
double convert_units(double value, std::string_view unit);

/// Inverse of convert_units.
double convert_from_si(double value, std::string_view unit);

/// True if the unit tag is on the whitelist.
bool is_known_unit(std::string_view unit);

/// Number of photons in a pulse train of power P (W) at wavelength (m) over t (s).
double photon_budget(double power, double wavelength, double duration);

// -----------------------------------------------------------------------------
// Domain types
// -----------------------------------------------------------------------------

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// Means, phases and covariance of the two measured laser modes.
struct PhotonModeSet {
    Vec2 means = Vec2::Zero();
    Vec2 phases = Vec2::Zero();
    Mat2 cov = Mat2::Zero();

    double total() const { return means.sum(); }
    bool has_unoccupied_mode() const { return means.minCoeff() <= 0.0; }

    /// Throws DomainError if symmetry, PSD or mean constraints are violated.
    void validate() const;
};

/// Counting fields conjugate to the two photon numbers.
using CountingVector = Vec2;

/// Pulse and ensemble geometry shared by all models.
struct Ensemble {
    double density = 0.0;   // rho_A, m^-3
    double area = 0.0;      // beam cross-section, m^2
    double t_m = 0.0;       // measurement time, s
    double z_max = 0.0;     // propagation length, m

    /// rho_A * A * t_M: converts per-emitter rates into photons per metre.
    double prefactor() const { return density * area * t_m; }
    void validate() const;
};

struct TwoLevelParams {
    double detuning = 0.0;   // epsilon_Delta, rad/s
    double gamma = 0.0;      // rad/s
    double omega_ref = 0.0;  // total Rabi frequency at n_ref, rad/s
    double n_ref = 0.0;      // reference total photon number
    Ensemble ensemble;

    /// Single-photon coupling g with Omega(n) = g sqrt(n).
    double coupling() const;
    void validate() const;
};

struct FourLevelParams {
    double eps_a = 0.0, eps_b = 0.0, eps_c = 0.0, eps_d = 0.0; // rad/s
    double omega_p_ref = 0.0; // |Omega_P| at n_ref in the rotated basis, rad/s
    double omega_c = 0.0;
    double omega_s = 0.0;
    double gamma_b = 0.0, gamma_c = 0.0, gamma_d = 0.0;
    double n_ref = 0.0;
    Ensemble ensemble;

    /// Single-photon coupling per mode, chosen so |Omega_P| = omega_p_ref at n_ref.
    double coupling() const;
    void validate() const;
};

/// Per-emitter first and second counting-field derivatives in the (+,-) basis.
struct CumulantAptitudes {
    double kp = 0.0, km = 0.0;              // photons / s
    double kpp = 0.0, kmm = 0.0, kpm = 0.0; // photons^2 / s

    /// Throws NumericalError if the second-order aptitudes are inconsistent.
    void validate(double rel_tol = 1e-9) const;
};

struct FlowCoefficients {
    Vec2 flux = Vec2::Zero();        // photons / m
    Mat2 diffusion = Mat2::Zero();   // photons^2 / m
    Mat2 phase_space = Mat2::Zero(); // 1 / m
};

/// Coherent product state of total photon number n_plus split into two modes,
/// with Poissonian covariance diag(n_k).
PhotonModeSet initial_coherent_state(double n_plus, const Vec2& split, const Vec2& phases);

} // namespace prft
