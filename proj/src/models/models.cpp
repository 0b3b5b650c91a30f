#include "prft/models.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace prft {

Model Model::two_level(const TwoLevelParams& p, Strategy s) {
    p.validate();
    Model m;
    m.params_ = p;
    m.strategy_ = s;
    return m;
}

Model Model::four_level(const FourLevelParams& p, Strategy s) {
    p.validate();
    if (s == Strategy::Analytic)
        throw ConfigError("the analytic strategy is only available for the two-level model");
    Model m;
    m.params_ = p;
    m.strategy_ = s;
    return m;
}

ModelKind Model::kind() const {
    return std::holds_alternative<TwoLevelParams>(params_) ? ModelKind::TwoLevel : ModelKind::FourLevel;
}

const Ensemble& Model::ensemble() const {
    return std::visit([](const auto& p) -> const Ensemble& { return p.ensemble; }, params_);
}

double Model::coupling() const {
    return std::visit([](const auto& p) { return p.coupling(); }, params_);
}

const TwoLevelParams& Model::two_level_params() const {
    if (kind() != ModelKind::TwoLevel) throw DomainError("model is not a two-level model");
    return std::get<TwoLevelParams>(params_);
}

const FourLevelParams& Model::four_level_params() const {
    if (kind() != ModelKind::FourLevel) throw DomainError("model is not a four-level model");
    return std::get<FourLevelParams>(params_);
}

Vec2 Model::rabi(const Vec2& means) const {
    if (means.minCoeff() < 0) throw DomainError("rabi: negative photon number");
    const double g = coupling();
    return {g * std::sqrt(means[0]), g * std::sqrt(means[1])};
}

Vec2 Model::rotated_phases() { return {0.5 * constants::pi, 0.0}; }

TiltedGenerator Model::generator(const Vec2& omegas, const Vec2& phases, const CountingVector& chi) const {
    if (kind() == ModelKind::TwoLevel)
        return build_two_level(std::get<TwoLevelParams>(params_), omegas[0], omegas[1], phases[0], phases[1], chi);
    return build_four_level(std::get<FourLevelParams>(params_), omegas[0], omegas[1], phases[0], phases[1], chi);
}

namespace {

// Non-dissipative two-level limit: only the phase-transfer term survives.
Vec2 coherent_two_level_rates(const TwoLevelParams& p, double o1, double o2, double phi_tilde) {
    const double P = o1 * o2 * std::cos(phi_tilde), Q = o1 * o2 * std::sin(phi_tilde);
    const double den = 4 * p.detuning * p.detuning + 2 * (o1 * o1 + o2 * o2 + 2 * P);
    if (den == 0.0) return Vec2::Zero();
    const double r = 2 * p.detuning * Q / den;
    return {r, -r};
}

} // namespace

NumericAptitudes Model::aptitudes(const Vec2& omegas, const Vec2& phases) const {
    if (strategy_ != Strategy::Analytic) {
        GeneratorFactory make = [&](const CountingVector& chi) { return generator(omegas, phases, chi); };
        return aptitudes_numeric(make, strategy_, stencil);
    }
    const auto& p = std::get<TwoLevelParams>(params_);
    const double phi_tilde = phases[0] - phases[1];
    NumericAptitudes out;
    if (p.gamma > 0) {
        const PolyDerivatives pd = two_level_poly_derivatives(p, omegas[0], omegas[1], phi_tilde);
        const double rate = std::max({p.gamma, std::abs(p.detuning), std::hypot(omegas[0], omegas[1])});
        out.aptitudes = aptitudes_from_derivatives(truncated_poly_cumulants(pd.to_plus_minus(), rate));
        return out;
    }
    const Vec2 r = coherent_two_level_rates(p, omegas[0], omegas[1], phi_tilde);
    out.aptitudes.kp = r[0] + r[1];
    out.aptitudes.km = r[0] - r[1];
    const double inf = omegas.squaredNorm() > 0 ? std::numeric_limits<double>::infinity() : 0.0;
    out.aptitudes.kpp = out.aptitudes.kmm = inf;
    out.aptitudes.kpm = 0.0;
    return out;
}

Vec2 Model::mode_aptitudes(const Vec2& omegas, const Vec2& phases) const {
    if (strategy_ != Strategy::Analytic) {
        GeneratorFactory make = [&](const CountingVector& chi) { return generator(omegas, phases, chi); };
        return first_aptitudes_numeric(make, strategy_, stencil);
    }
    const auto& p = std::get<TwoLevelParams>(params_);
    const double phi_tilde = phases[0] - phases[1];
    if (p.gamma > 0) {
        const PolyDerivatives pd = two_level_poly_derivatives(p, omegas[0], omegas[1], phi_tilde);
        const cplx I(0, 1);
        return {(I * (-pd.d1[0][0] / pd.a[1])).real(), (I * (-pd.d1[1][0] / pd.a[1])).real()};
    }
    return coherent_two_level_rates(p, omegas[0], omegas[1], phi_tilde);
}

double Model::parameter(const std::string& name) const {
    if (name == "rho_A") return ensemble().density;
    if (name == "z_max") return ensemble().z_max;
    if (kind() == ModelKind::TwoLevel) {
        const auto& p = std::get<TwoLevelParams>(params_);
        if (name == "eps") return p.detuning;
        if (name == "gamma") return p.gamma;
        if (name == "omega") return p.omega_ref;
    } else {
        const auto& p = std::get<FourLevelParams>(params_);
        if (name == "eps") return p.eps_b - p.eps_a;
        if (name == "gamma") return p.gamma_b;
        if (name == "omega") return p.omega_p_ref;
        if (name == "omega_s") return p.omega_s;
        if (name == "omega_c") return p.omega_c;
    }
    throw ConfigError(fmt::format("parameter '{}' is not defined for this model", name));
}

Model Model::with_parameter(const std::string& name, double value) const {
    Model m = *this;
    std::visit(
        [&](auto& p) {
            if (name == "rho_A") p.ensemble.density = value;
            else if (name == "z_max") p.ensemble.z_max = value;
        },
        m.params_);
    if (name == "rho_A" || name == "z_max") {
        std::visit([](const auto& p) { p.validate(); }, m.params_);
        return m;
    }
    if (m.kind() == ModelKind::TwoLevel) {
        auto& p = std::get<TwoLevelParams>(m.params_);
        if (name == "eps") p.detuning = value;
        else if (name == "gamma") p.gamma = value;
        else if (name == "omega") p.omega_ref = value;
        else throw ConfigError(fmt::format("parameter '{}' is not defined for the two-level model", name));
        p.validate();
    } else {
        auto& p = std::get<FourLevelParams>(m.params_);
        if (name == "eps") p.eps_b = p.eps_c = p.eps_d = p.eps_a + value;
        else if (name == "gamma") p.gamma_b = value;
        else if (name == "omega") p.omega_p_ref = value;
        else if (name == "omega_s") p.omega_s = value;
        else if (name == "omega_c") p.omega_c = value;
        else throw ConfigError(fmt::format("parameter '{}' is not defined for the four-level model", name));
        p.validate();
    }
    return m;
}

double Model::rate_scale() const {
    if (kind() == ModelKind::TwoLevel) {
        const auto& p = std::get<TwoLevelParams>(params_);
        return std::max({p.gamma, p.omega_ref, std::abs(p.detuning)});
    }
    const auto& p = std::get<FourLevelParams>(params_);
    return std::max({p.omega_p_ref, p.omega_c, p.omega_s, p.gamma_b, std::abs(p.eps_b - p.eps_a)});
}

// -----------------------------------------------------------------------------
// Dressed states
// -----------------------------------------------------------------------------

DressedStates dressed_states(const FourLevelParams& p, double omega_p) {
    const double root = std::hypot(p.omega_c, p.omega_s);
    if (root == 0.0) throw DomainError("dressed_states: coupling and signal fields both vanish");
    DressedStates d;
    d.e0 = p.eps_b;
    d.e_plus = p.eps_b + 0.5 * root;
    d.e_minus = p.eps_b - 0.5 * root;
    d.omega0 = p.omega_s / (2 * root) * omega_p;
    d.omega_plus = p.omega_c / root * omega_p;
    d.omega_minus = -p.omega_c / root * omega_p;
    return d;
}

std::vector<double> resonance_predictions(const FourLevelParams& p) {
    const double root = std::hypot(p.omega_c, p.omega_s);
    if (root == 0.0) return {0.0};
    const DressedStates d = dressed_states(p);
    std::vector<double> out;
    // Resonance when a dressed level sits at the ground-state energy; the
    // probe detuning eps_b - eps_a then equals eps_b - E.
    if (d.omega_plus != 0.0) out.push_back(-0.5 * root);
    if (d.omega0 != 0.0) out.push_back(0.0);
    if (d.omega_minus != 0.0) out.push_back(0.5 * root);
    return out;
}

} // namespace prft
