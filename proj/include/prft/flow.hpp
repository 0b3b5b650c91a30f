#pragma once

#include "prft/core.hpp"
#include "prft/models.hpp"

#include <vector>

namespace prft {

// -----------------------------------------------------------------------------
// Flow coefficients
// -----------------------------------------------------------------------------

/// Closed-form two-level flux for per-mode Rabi frequencies and relative phase.
Vec2 flux_vector_two_level(const TwoLevelParams& p, double omega1, double omega2, double phi_tilde);

/// Leading small-dissipation two-level diffusion matrix.
Mat2 diffusion_leading_two_level(const TwoLevelParams& p, double omega1, double omega2, double phi_tilde);

/// Closed-form two-level phase-space matrix at mean photon numbers n.
Mat2 phase_space_two_level(const TwoLevelParams& p, const Vec2& means, double phi_tilde);

/// Flux I_k = rho_A A t_M kappa_k from the model's strategy.
Vec2 flux_vector_numeric(const Model& m, const Vec2& means, const Vec2& phases);

/// Diffusion D = rho_A A t_M times the per-mode second-order aptitudes.
Mat2 diffusion_matrix(const Model& m, const Vec2& means, const Vec2& phases);

/// C_ij = dI_i / dn_j through Omega_j = g sqrt(n_j), by central differences in Omega_j.
Mat2 phase_space_matrix(const Model& m, const Vec2& means, const Vec2& phases);

struct FlowPoint {
    FlowCoefficients coeffs;
    CumulantAptitudes aptitudes;
    bool quality_warning = false;
};

/// All three coefficients at one point, sharing the aptitude evaluation.
/// The phase-space matrix is skipped when with_phase_space is false.
FlowPoint flow_coefficients(const Model& m, const Vec2& means, const Vec2& phases, bool with_phase_space = true);

/// Per-mode diffusion from (+,-) aptitudes, scaled by the ensemble prefactor.
Mat2 diffusion_from_aptitudes(const CumulantAptitudes& k, double prefactor);

// -----------------------------------------------------------------------------
// Trajectories
// -----------------------------------------------------------------------------

struct FlowOptions {
    int steps = 1000;
    bool covariance = true;   // integrate the covariance alongside the means
};

struct LabTrajectory {
    std::vector<double> z;
    std::vector<PhotonModeSet> states;
    bool quality_warning = false;
};

struct RotatedTrajectory {
    std::vector<double> z;
    std::vector<double> theta;
    std::vector<double> n_plus;
    std::vector<Mat2> cov;
    bool quality_warning = false;
};

LabTrajectory integrate_lab(const Model& m, const PhotonModeSet& initial, const FlowOptions& opt = {});

RotatedTrajectory integrate_rotated(const Model& m, double n_plus0, const FlowOptions& opt = {});

/// Lab-frame means and covariance for rotation angle theta.
PhotonModeSet frame_to_lab(double theta, double n_plus, const Mat2& cov_rot);

/// Rotation angle of the polarization to phase of the probe field.
inline double phase_from_rotation(double dtheta) { return 2.0 * dtheta; }

/// Xi = i sigma_y + sigma_z.
Mat2 rotation_generator();

} // namespace prft
