#include "prft/sensing.hpp"

#include <Eigen/Eigenvalues>

#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

namespace prft {

MeasurementStatistics plus_minus_stats(const PhotonModeSet& s) {
    MeasurementStatistics m;
    m.n_plus = s.means[0] + s.means[1];
    m.n_minus = s.means[0] - s.means[1];
    m.var_plus = s.cov(0, 0) + s.cov(1, 1) + 2 * s.cov(0, 1);
    m.var_minus = s.cov(0, 0) + s.cov(1, 1) - 2 * s.cov(0, 1);
    m.cov_pm = s.cov(0, 0) - s.cov(1, 1);
    if (m.n_plus > 0) m.theta = rotation_estimate(s.means[0], s.means[1]);
    return m;
}

MeasurementStatistics plus_minus_stats_rotated(double theta, double n_plus, const Mat2& cov_rot) {
    PhotonModeSet s;
    s.means = Vec2(0.5 * n_plus, 0.5 * n_plus);
    s.cov = cov_rot;
    MeasurementStatistics m = plus_minus_stats(s);
    m.theta = theta;
    return m;
}

double phase_estimate(double n1, double n2, double n0, double n_lo) {
    if (!(n0 > 0) || !(n_lo > 0)) throw DomainError("phase_estimate: n0 and n_LO must be positive");
    const double arg = (n1 - n2) / (2 * std::sqrt(n0 * n_lo));
    if (std::abs(arg) > 1.0) throw NumericalError("phase_estimate: imbalance saturates the estimator");
    return std::asin(arg);
}

double rotation_estimate(double n1, double n2) {
    if (n1 < 0 || n2 < 0 || !(n1 + n2 > 0))
        throw DomainError("rotation_estimate: occupations must be non-negative with a positive total");
    const double arg = (std::sqrt(n2) - std::sqrt(n1)) / std::sqrt(2 * (n1 + n2));
    return std::asin(arg);
}

double intensity_estimate(double n, double omega, double t_m, double area) {
    if (n < 0 || !(omega > 0) || !(t_m > 0) || !(area > 0))
        throw DomainError("intensity_estimate: inputs must be positive");
    return constants::hbar * omega * n / (t_m * area);
}

FisherResult gaussian_fisher(const Vec2& dn, const Mat2& cov, const std::string& tag) {
    if (!cov.allFinite() || !dn.allFinite()) throw NumericalError("gaussian_fisher: non-finite input");
    Eigen::SelfAdjointEigenSolver<Mat2> es(0.5 * (cov + cov.transpose()), Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues()[0], hi = es.eigenvalues()[1];
    if (!(lo > 0) || hi / lo >= 1e12)
        throw NumericalError("gaussian_fisher: covariance is singular or ill-conditioned");
    const Mat2 inv = cov.inverse();
    const Vec2 u(1.0, -1.0), v(1.0, 1.0);
    const double a = 0.5 * (dn[0] - dn[1]), b = 0.5 * (dn[0] + dn[1]);
    FisherResult r;
    r.tag = tag;
    r.value = dn.dot(inv * dn);
    r.phase_channel = a * a * u.dot(inv * u);
    r.intensity_channel = b * b * v.dot(inv * v);
    r.cross = 2 * a * b * u.dot(inv * v);
    return r;
}

double discrete_fisher(const Eigen::ArrayXd& pm, const Eigen::ArrayXd& p0, const Eigen::ArrayXd& pp, double delta) {
    if (pm.size() != p0.size() || pp.size() != p0.size())
        throw DomainError("discrete_fisher: probability tables differ in size");
    if (!(delta > 0)) throw DomainError("discrete_fisher: delta must be positive");
    for (const auto* t : {&pm, &p0, &pp}) {
        if ((*t < 0).any()) throw DomainError("discrete_fisher: negative probability");
        if (std::abs(t->sum() - 1.0) > 1e-9) throw DomainError("discrete_fisher: probabilities do not sum to one");
    }
    double acc = 0.0;
    for (Eigen::Index i = 0; i < p0.size(); ++i) {
        if (p0[i] < 1e-300) continue;
        const double score = (pp[i] - pm[i]) / (2 * delta);
        acc += score * score / p0[i];
    }
    return acc;
}

// -----------------------------------------------------------------------------
// Fisher scans
// -----------------------------------------------------------------------------

FisherPoint fisher_point(const Model& m, const FisherScanSettings& s) {
    FisherPoint out;
    const double x0 = m.parameter(s.target);
    const double delta = s.rel_delta * (x0 != 0.0 ? std::abs(x0) : m.rate_scale());

    const RotatedTrajectory base = integrate_rotated(m, s.n_plus0, s.flow);
    const double theta0 = base.theta.back();
    const Mat2& cov = base.cov.back();

    FlowOptions means_only = s.flow;
    means_only.covariance = false;
    auto endpoint = [&](double dx) {
        const RotatedTrajectory t = integrate_rotated(m.with_parameter(s.target, x0 + dx), s.n_plus0, means_only);
        return frame_to_lab(t.theta.back() - theta0, t.n_plus.back(), Mat2::Zero()).means;
    };
    auto central = [&](double d) -> Vec2 { return (endpoint(d) - endpoint(-d)) / (2 * d); };
    const Vec2 dn = (4.0 * central(0.5 * delta) - central(delta)) / 3.0;

    out.prft = gaussian_fisher(dn, cov, s.target);
    out.shot_noise = gaussian_fisher(dn, 0.5 * s.n_plus0 * Mat2::Identity(), s.target).value;
    out.n_plus = base.n_plus.back();
    out.theta = theta0;
    const auto st = plus_minus_stats_rotated(theta0, out.n_plus, cov);
    out.var_plus = st.var_plus;
    out.var_minus = st.var_minus;
    out.quality_warning = base.quality_warning;
    return out;
}

std::vector<FisherPoint> fisher_scan(const Model& m, const std::string& scan_param, const std::vector<double>& grid,
                                     const FisherScanSettings& s, int jobs) {
    std::vector<FisherPoint> out(grid.size());
    parallel_for(static_cast<int>(grid.size()), jobs, [&](int i) {
        try {
            out[i] = fisher_point(m.with_parameter(scan_param, grid[i]), s);
        } catch (const std::exception& e) {
            out[i] = FisherPoint{};
            out[i].error = e.what();
        }
        out[i].x = grid[i];
    });
    return out;
}

// -----------------------------------------------------------------------------
// Weak-dissipation closed forms
// -----------------------------------------------------------------------------

WeakDissipation weak_dissipation_benchmarks(const TwoLevelParams& p, double n_plus) {
    if (!(n_plus > 0)) throw DomainError("weak_dissipation_benchmarks: n_plus must be positive");
    const double g = p.coupling();
    const double om2 = g * g * n_plus;
    const double eps = p.detuning;
    const double den0 = 4 * eps * eps + 2 * om2;
    const Ensemble& e = p.ensemble;
    const double atoms = e.density * e.area * e.z_max;
    const double added = (p.gamma > 0) ? 8 * e.t_m * atoms * std::pow(om2, 4) / (p.gamma * std::pow(den0, 3))
                                       : std::numeric_limits<double>::infinity();

    WeakDissipation w;
    w.outside_regime = p.gamma > 0.1 * std::sqrt(om2);
    w.phase = -(e.t_m * atoms / n_plus) * 2 * eps * om2 / den0;
    const double drho = e.t_m * e.area * e.z_max * 2 * eps * om2 / den0;
    const double deps = e.t_m * atoms * 2 * om2 * (2 * om2 - 4 * eps * eps) / (den0 * den0);
    w.fisher_rho = drho * drho / (n_plus + added);
    w.fisher_eps = deps * deps / (n_plus + added);
    return w;
}

// -----------------------------------------------------------------------------
// Worker pool
// -----------------------------------------------------------------------------

void parallel_for(int n, int jobs, const std::function<void(int)>& task) {
    if (jobs <= 0) jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    jobs = std::min(jobs, std::max(n, 1));
    if (jobs <= 1) {
        for (int i = 0; i < n; ++i) task(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (int t = 0; t < jobs; ++t) {
        pool.emplace_back([&] {
            for (int i = next++; i < n; i = next++) {
                try {
                    task(i);
                } catch (...) {
                    if (!failed.exchange(true)) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

} // namespace prft
