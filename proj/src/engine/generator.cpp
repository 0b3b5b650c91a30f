#include "prft/engine.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace prft {

namespace {

CMat kron(const CMat& a, const CMat& b) {
    CMat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

// Column-stacked superoperator of rho -> -i (H_plus rho - rho H_minus).
CMat commutator_part(const CMat& h_plus, const CMat& h_minus) {
    const CMat id = CMat::Identity(h_plus.rows(), h_plus.cols());
    return cplx(0, -1) * (kron(id, h_plus) - kron(h_minus.transpose(), id));
}

// Column-stacked superoperator of rate * D[jump].
CMat dissipator(const CMat& jump, double rate) {
    const CMat id = CMat::Identity(jump.rows(), jump.cols());
    const CMat jj = jump.adjoint() * jump;
    return rate * (kron(jump.conjugate(), jump) - 0.5 * kron(id, jj) - 0.5 * kron(jj.transpose(), id));
}

CMat two_level_hamiltonian(double eps, double o1, double o2, double q1, double q2) {
    // Basis |e> = 0, |g> = 1.
    CMat h = CMat::Zero(2, 2);
    h(0, 0) = 0.5 * eps;
    h(1, 1) = -0.5 * eps;
    const cplx raise = 0.5 * (o1 * std::polar(1.0, q1) + o2 * std::polar(1.0, q2));
    h(0, 1) = raise;
    h(1, 0) = std::conj(raise);
    return h;
}

CMat four_level_hamiltonian(const FourLevelParams& p, double o1, double o2, double q1, double q2) {
    // Basis |a>, |b>, |c>, |d> = 0..3.
    CMat h = CMat::Zero(4, 4);
    h(0, 0) = p.eps_a;
    h(1, 1) = p.eps_b;
    h(2, 2) = p.eps_c;
    h(3, 3) = p.eps_d;
    const cplx probe = four_level_probe(o1, o2, q1, q2);
    h(1, 0) += 0.5 * probe;
    h(0, 1) += 0.5 * std::conj(probe);
    h(2, 1) += 0.5 * p.omega_c;
    h(1, 2) += 0.5 * p.omega_c;
    h(3, 2) += 0.5 * p.omega_s;
    h(2, 3) += 0.5 * p.omega_s;
    return h;
}

void check_amplitudes(double o1, double o2, const CountingVector& chi) {
    if (!(o1 >= 0) || !(o2 >= 0)) throw DomainError("generator: Rabi amplitudes must be non-negative");
    if (!chi.allFinite()) throw DomainError("generator: counting fields must be finite");
}

} // namespace

cplx four_level_probe(double omega1, double omega2, double phi1, double phi2) {
    return std::sqrt(2.0) / cplx(0, 1) * (omega1 * std::polar(1.0, phi1) - omega2 * std::polar(1.0, phi2));
}

TiltedGenerator build_two_level(const TwoLevelParams& p, double omega1, double omega2,
                                double phi1, double phi2, const CountingVector& chi) {
    check_amplitudes(omega1, omega2, chi);
    const CMat hp = two_level_hamiltonian(p.detuning, omega1, omega2, phi1 + 0.5 * chi[0], phi2 + 0.5 * chi[1]);
    const CMat hm = two_level_hamiltonian(p.detuning, omega1, omega2, phi1 - 0.5 * chi[0], phi2 - 0.5 * chi[1]);
    CMat lowering = CMat::Zero(2, 2);
    lowering(1, 0) = 1.0;

    TiltedGenerator g;
    g.dim = 2;
    g.model = ModelKind::TwoLevel;
    g.matrix = commutator_part(hp, hm) + dissipator(lowering, p.gamma);
    g.omegas = {omega1, omega2};
    g.phases = {phi1, phi2};
    g.chi = chi;
    g.max_rate = std::max({p.gamma, std::hypot(omega1, omega2), std::abs(p.detuning)});
    g.min_decay = p.gamma;
    return g;
}

TiltedGenerator build_four_level(const FourLevelParams& p, double omega1, double omega2,
                                 double phi1, double phi2, const CountingVector& chi) {
    check_amplitudes(omega1, omega2, chi);
    const CMat hp = four_level_hamiltonian(p, omega1, omega2, phi1 + 0.5 * chi[0], phi2 + 0.5 * chi[1]);
    const CMat hm = four_level_hamiltonian(p, omega1, omega2, phi1 - 0.5 * chi[0], phi2 - 0.5 * chi[1]);

    CMat L = commutator_part(hp, hm);
    const std::array<double, 3> rates{p.gamma_b, p.gamma_c, p.gamma_d};
    double min_decay = 0.0;
    for (int j = 1; j <= 3; ++j) {
        const double r = rates[j - 1];
        if (r <= 0) continue;
        CMat jump = CMat::Zero(4, 4);
        jump(0, j) = 1.0;
        L += dissipator(jump, r);
        min_decay = (min_decay == 0.0) ? r : std::min(min_decay, r);
    }

    TiltedGenerator g;
    g.dim = 4;
    g.model = ModelKind::FourLevel;
    g.matrix = std::move(L);
    g.omegas = {omega1, omega2};
    g.phases = {phi1, phi2};
    g.chi = chi;
    double m = std::abs(four_level_probe(omega1, omega2, phi1, phi2));
    for (double v : {p.eps_a, p.eps_b, p.eps_c, p.eps_d, p.omega_c, p.omega_s, p.gamma_b, p.gamma_c, p.gamma_d})
        m = std::max(m, std::abs(v));
    g.max_rate = m;
    g.min_decay = min_decay;
    return g;
}

Eigen::RowVectorXcd TiltedGenerator::trace_functional_residual() const {
    Eigen::RowVectorXcd one = Eigen::RowVectorXcd::Zero(dim * dim);
    for (int i = 0; i < dim; ++i) one[i + i * dim] = 1.0;
    return one * matrix;
}

CMat TiltedGenerator::stationary_state() const {
    Eigen::ComplexEigenSolver<CMat> es(matrix, true);
    Eigen::Index best = 0;
    es.eigenvalues().cwiseAbs().minCoeff(&best);
    const CVec v = es.eigenvectors().col(best);
    CMat rho = Eigen::Map<const CMat>(v.data(), dim, dim);
    const cplx tr = rho.trace();
    if (std::abs(tr) == 0.0) throw NumericalError("stationary_state: kernel vector has zero trace");
    rho /= tr;
    return 0.5 * (rho + rho.adjoint());
}

cplx dominant_eigenvalue_dense(const TiltedGenerator& L) {
    Eigen::ComplexEigenSolver<CMat> es(L.matrix, false);
    const auto& ev = es.eigenvalues();
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < ev.size(); ++i)
        if (ev[i].real() > ev[best].real()) best = i;
    return ev[best];
}

} // namespace prft
