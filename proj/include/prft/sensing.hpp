#pragma once

#include "prft/core.hpp"
#include "prft/flow.hpp"
#include "prft/models.hpp"

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <vector>

namespace prft {

struct MeasurementStatistics {
    double n_plus = 0.0, n_minus = 0.0;
    double theta = 0.0;
    double var_plus = 0.0, var_minus = 0.0, cov_pm = 0.0;
};

MeasurementStatistics plus_minus_stats(const PhotonModeSet& s);

/// Statistics in the rotated basis, where n_minus vanishes by construction.
MeasurementStatistics plus_minus_stats_rotated(double theta, double n_plus, const Mat2& cov_rot);

/// Local-oscillator phase estimate; throws NumericalError on estimator saturation.
double phase_estimate(double n1, double n2, double n0, double n_lo);

/// Polarization rotation inferred from the two mean occupations.
double rotation_estimate(double n1, double n2);

/// Radiant intensity (W/m^2) of n photons at angular frequency omega over t_M and area A.
double intensity_estimate(double n, double omega, double t_m, double area);

struct FisherResult {
    std::string tag;
    double value = 0.0;
    double phase_channel = 0.0;      // (1,-1) direction
    double intensity_channel = 0.0;  // (1,1) direction
    double cross = 0.0;
};

/// Leading-order Gaussian Fisher information dn^T Sigma^{-1} dn.
FisherResult gaussian_fisher(const Vec2& dn, const Mat2& cov, const std::string& tag = "");

/// Brute-force Fisher information from probability tables at X - delta, X, X + delta.
double discrete_fisher(const Eigen::ArrayXd& p_minus, const Eigen::ArrayXd& p0, const Eigen::ArrayXd& p_plus,
                       double delta);

// -----------------------------------------------------------------------------
// Fisher scans
// -----------------------------------------------------------------------------

struct FisherScanSettings {
    std::string target;        // rho_A, eps, omega_s or gamma
    double rel_delta = 1e-4;   // relative perturbation of the target
    FlowOptions flow;
    double n_plus0 = 0.0;
};

struct FisherPoint {
    double x = 0.0;
    FisherResult prft;
    double shot_noise = 0.0;
    double n_plus = 0.0;
    double theta = 0.0;
    double var_plus = 0.0, var_minus = 0.0;
    bool quality_warning = false;
    std::string error;   // empty on success
};

/// Fisher information for the target at one model configuration.
FisherPoint fisher_point(const Model& m, const FisherScanSettings& s);

/// Fisher scan over a grid of values of scan_param. Grid points are independent;
/// failures are recorded per point. jobs <= 0 uses the hardware concurrency.
std::vector<FisherPoint> fisher_scan(const Model& m, const std::string& scan_param, const std::vector<double>& grid,
                                     const FisherScanSettings& s, int jobs = 1);

// -----------------------------------------------------------------------------
// Weak-dissipation closed forms (two-level, rotated basis)
// -----------------------------------------------------------------------------

struct WeakDissipation {
    double phase = 0.0;        // total phase shift at z_max
    double fisher_rho = 0.0;
    double fisher_eps = 0.0;
    bool outside_regime = false;   // gamma > 0.1 Omega
};

WeakDissipation weak_dissipation_benchmarks(const TwoLevelParams& p, double n_plus);

// -----------------------------------------------------------------------------
// Worker pool
// -----------------------------------------------------------------------------

/// Runs task(i) for i in [0, n) on up to `jobs` threads; results are keyed by index.
void parallel_for(int n, int jobs, const std::function<void(int)>& task);

} // namespace prft
