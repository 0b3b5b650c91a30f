#include "prft/flow.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>

namespace prft {

Mat2 rotation_generator() {
    Mat2 xi;
    xi << 1, 1, -1, -1;
    return xi;
}

PhotonModeSet frame_to_lab(double theta, double n_plus, const Mat2& cov_rot) {
    if (n_plus < 0) throw DomainError("frame_to_lab: negative photon number");
    const Vec2 u(std::cos(0.25 * constants::pi + theta), std::sin(0.25 * constants::pi + theta));
    Mat2 R;
    R << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
    const Mat2 M = R * cov_rot * R.transpose();
    PhotonModeSet s;
    s.means = n_plus * u.cwiseProduct(u);
    s.phases = Model::rotated_phases();
    s.cov = 2.0 * (u * u.transpose()).cwiseProduct(M);
    return s;
}

namespace {

// Integration state shared by both frames: two scalars plus a symmetric 2x2.
struct FlowState {
    Vec2 x = Vec2::Zero();   // (n1, n2) in the lab frame, (theta, n_plus) in the rotated frame
    Mat2 cov = Mat2::Zero();
    bool warn = false;

    FlowState operator+(const FlowState& o) const { return {x + o.x, cov + o.cov, warn || o.warn}; }
    FlowState operator*(double s) const { return {s * x, s * cov, warn}; }
};

template <class Rhs>
FlowState rk4_step(const Rhs& f, const FlowState& y, double h) {
    const FlowState k1 = f(y);
    const FlowState k2 = f(y + k1 * (0.5 * h));
    const FlowState k3 = f(y + k2 * (0.5 * h));
    const FlowState k4 = f(y + k3 * h);
    FlowState out = y + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
    out.warn = y.warn || k1.warn || k2.warn || k3.warn || k4.warn;
    return out;
}

void check_psd(const Mat2& cov) {
    Eigen::SelfAdjointEigenSolver<Mat2> es(cov, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-6 * std::abs(cov.trace()))
        throw NumericalError("covariance lost positive semidefiniteness; try the rotated frame or more steps");
}

void check_diffusion(const Mat2& D) {
    if (!D.allFinite())
        throw NumericalError("diffusion matrix is not finite (non-dissipative model); integrate the means only");
}

Mat2 nan_matrix() { return Mat2::Constant(std::numeric_limits<double>::quiet_NaN()); }

} // namespace

LabTrajectory integrate_lab(const Model& m, const PhotonModeSet& initial, const FlowOptions& opt) {
    if (opt.steps < 10) throw DomainError("integrate_lab: at least 10 steps are required");
    initial.validate();
    const Vec2 phases = initial.phases;
    const double zmax = m.ensemble().z_max, h = zmax / opt.steps;

    auto rhs = [&](const FlowState& y) {
        if (y.x.minCoeff() < 0) throw NumericalError("integrate_lab: a mode was depleted");
        const FlowPoint pt = flow_coefficients(m, y.x, phases, opt.covariance);
        FlowState d;
        d.x = pt.coeffs.flux;
        d.warn = pt.quality_warning;
        if (opt.covariance) {
            check_diffusion(pt.coeffs.diffusion);
            const Mat2& C = pt.coeffs.phase_space;
            d.cov = pt.coeffs.diffusion + C * y.cov + y.cov * C.transpose();
        }
        return d;
    };

    LabTrajectory traj;
    FlowState y{initial.means, opt.covariance ? initial.cov : nan_matrix(), false};
    auto record = [&](double z) {
        PhotonModeSet s;
        s.means = y.x;
        s.phases = phases;
        s.cov = y.cov;
        traj.z.push_back(z);
        traj.states.push_back(s);
    };
    record(0.0);
    for (int i = 0; i < opt.steps; ++i) {
        y = rk4_step(rhs, y, h);
        if (opt.covariance) {
            y.cov = 0.5 * (y.cov + y.cov.transpose()).eval();
            check_psd(y.cov);
        }
        record(h * (i + 1));
    }
    traj.quality_warning = y.warn;
    return traj;
}

RotatedTrajectory integrate_rotated(const Model& m, double n_plus0, const FlowOptions& opt) {
    if (!(n_plus0 > 0)) throw DomainError("integrate_rotated: n_plus must be positive");
    if (opt.steps < 10) throw DomainError("integrate_rotated: at least 10 steps are required");
    const double zmax = m.ensemble().z_max, h = zmax / opt.steps;
    const Vec2 phases = Model::rotated_phases();
    const Mat2 xi = rotation_generator();

    auto rhs = [&](const FlowState& y) {
        const double np = y.x[1];
        if (!(np > 0)) throw NumericalError("integrate_rotated: the beam was fully absorbed");
        const Vec2 means(0.5 * np, 0.5 * np);
        const FlowPoint pt = flow_coefficients(m, means, phases, opt.covariance);
        const Vec2& I = pt.coeffs.flux;
        const double dtheta = (I[1] - I[0]) / (2 * np);
        FlowState d;
        d.x = Vec2(dtheta, I[0] + I[1]);
        d.warn = pt.quality_warning;
        if (opt.covariance) {
            check_diffusion(pt.coeffs.diffusion);
            const Mat2 Ct = pt.coeffs.phase_space + dtheta * xi;
            d.cov = pt.coeffs.diffusion + Ct * y.cov + y.cov * Ct.transpose();
        }
        return d;
    };

    RotatedTrajectory traj;
    FlowState y{Vec2(0.0, n_plus0), opt.covariance ? Mat2(0.5 * n_plus0 * Mat2::Identity()) : nan_matrix(), false};
    auto record = [&](double z) {
        traj.z.push_back(z);
        traj.theta.push_back(y.x[0]);
        traj.n_plus.push_back(y.x[1]);
        traj.cov.push_back(y.cov);
    };
    record(0.0);
    for (int i = 0; i < opt.steps; ++i) {
        y = rk4_step(rhs, y, h);
        if (opt.covariance) {
            y.cov = 0.5 * (y.cov + y.cov.transpose()).eval();
            check_psd(y.cov);
        }
        record(h * (i + 1));
    }
    traj.quality_warning = y.warn;
    return traj;
}

} // namespace prft
