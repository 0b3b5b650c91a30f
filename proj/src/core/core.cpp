#include "prft/core.hpp"

#include <fmt/format.h>

#include <array>
#include <cmath>
#include <utility>

namespace prft {

namespace {

struct UnitEntry {
    std::string_view tag;
    double scale;
};

// "MHz" is read as 1e6 rad/s; see README for the convention.
constexpr std::array<UnitEntry, 10> kUnits{{
    {"MHz", 1.0e6},
    {"rad/s", 1.0},
    {"cm", 1.0e-2},
    {"m", 1.0},
    {"nm", 1.0e-9},
    {"mW", 1.0e-3},
    {"W", 1.0},
    {"s", 1.0},
    {"m^-3", 1.0},
    {"cm^-3", 1.0e6},
}};

const UnitEntry* find_unit(std::string_view unit) {
    for (const auto& u : kUnits)
        if (u.tag == unit) return &u;
    return nullptr;
}

} // namespace

double convert_units(double value, std::string_view unit) {
    const auto* u = find_unit(unit);
    if (!u) throw ConfigError(fmt::format("unknown unit '{}'", unit));
    return value * u->scale;
}

double convert_from_si(double value, std::string_view unit) {
    const auto* u = find_unit(unit);
    if (!u) throw ConfigError(fmt::format("unknown unit '{}'", unit));
    return value / u->scale;
}

bool is_known_unit(std::string_view unit) { return find_unit(unit) != nullptr; }

double photon_budget(double power, double wavelength, double duration) {
    if (power < 0 || wavelength <= 0 || duration < 0)
        throw DomainError("photon_budget: power, wavelength and duration must be positive");
    const double photon_energy = constants::planck * constants::speed_of_light / wavelength;
    return power * duration / photon_energy;
}

void PhotonModeSet::validate() const {
    if (!means.allFinite() || means.minCoeff() < 0.0)
        throw DomainError("PhotonModeSet: means must be finite and non-negative");
    const double scale = std::max(cov.cwiseAbs().maxCoeff(), 1e-300);
    if (std::abs(cov(0, 1) - cov(1, 0)) > 1e-12 * scale)
        throw DomainError("PhotonModeSet: covariance is not symmetric");
    if (cov.diagonal().minCoeff() < 0.0)
        throw DomainError("PhotonModeSet: negative variance");
    Eigen::SelfAdjointEigenSolver<Mat2> es(cov);
    if (es.eigenvalues().minCoeff() < -1e-9 * cov.trace())
        throw DomainError("PhotonModeSet: covariance is not positive semidefinite");
}

void Ensemble::validate() const {
    if (!(density > 0) || !(area > 0) || !(t_m > 0) || !(z_max > 0))
        throw DomainError("ensemble: density, area, t_M and z_max must be positive");
}

double TwoLevelParams::coupling() const { return omega_ref / std::sqrt(n_ref); }

void TwoLevelParams::validate() const {
    if (!(gamma >= 0)) throw DomainError("two-level: gamma must be non-negative");
    if (!(n_ref > 0)) throw DomainError("two-level: n_ref must be positive");
    if (!(omega_ref >= 0)) throw DomainError("two-level: omega_ref must be non-negative");
    if (!std::isfinite(detuning)) throw DomainError("two-level: detuning must be finite");
    ensemble.validate();
}

double FourLevelParams::coupling() const {
    return omega_p_ref / (std::sqrt(2.0) * std::sqrt(n_ref));
}

void FourLevelParams::validate() const {
    for (double r : {gamma_b, gamma_c, gamma_d, omega_c, omega_s, omega_p_ref})
        if (!(r >= 0)) throw DomainError("four-level: rates must be non-negative");
    if (!(n_ref > 0)) throw DomainError("four-level: n_ref must be positive");
    ensemble.validate();
}

void CumulantAptitudes::validate(double rel_tol) const {
    const double scale = std::max({std::abs(kpp), std::abs(kmm), 1e-300});
    if (kpp < -rel_tol * scale || kmm < -rel_tol * scale)
        throw NumericalError("aptitudes: negative second-order rate");
    if (kpm * kpm > kpp * kmm + rel_tol * scale * scale)
        throw NumericalError("aptitudes: cross term violates Cauchy-Schwarz bound");
}

PhotonModeSet initial_coherent_state(double n_plus, const Vec2& split, const Vec2& phases) {
    if (!(n_plus > 0)) throw DomainError("initial_coherent_state: n_plus must be positive");
    if (split.minCoeff() < 0) throw DomainError("initial_coherent_state: negative split fraction");
    if (std::abs(split.sum() - 1.0) > 1e-12)
        throw DomainError("initial_coherent_state: split fractions must sum to 1");
    PhotonModeSet s;
    s.means = n_plus * split;
    s.phases = phases;
    s.cov = s.means.asDiagonal();
    return s;
}

} // namespace prft
