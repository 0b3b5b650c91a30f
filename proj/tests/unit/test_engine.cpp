#include "prft/engine.hpp"
#include "prft/models.hpp"

#include "../support/oracles.hpp"

#include <doctest.h>
#include <unsupported/Eigen/MatrixFunctions>

#include <random>

using namespace prft;
using oracle::rel;

namespace {

constexpr double kPi = constants::pi;

TwoLevelParams fig2(double eps = 1e7, double gamma = 1e6) {
    TwoLevelParams p;
    p.detuning = eps;
    p.gamma = gamma;
    p.omega_ref = 6e7;
    p.n_ref = 2.517e17;
    p.ensemble = {1e14, 1e-4, 1.0, 0.1};
    return p;
}

FourLevelParams fig5(double eps = 0.0) {
    FourLevelParams p;
    p.eps_a = 0;
    p.eps_b = p.eps_c = p.eps_d = eps;
    p.omega_p_ref = 1.9e6;
    p.omega_c = 2e7;
    p.omega_s = 3e6;
    p.gamma_b = 1e5;
    p.gamma_c = p.gamma_d = 1e4;
    p.n_ref = 2.517e14;
    p.ensemble = {5e13, 1e-4, 1.0, 0.1};
    return p;
}

// Rotated-basis per-mode amplitudes for a total Rabi frequency omega.
Vec2 rotated(double omega) { return Vec2::Constant(omega / std::sqrt(2.0)); }

GeneratorFactory two_level_factory(const TwoLevelParams& p, double o1, double o2, double q1, double q2) {
    return [=](const CountingVector& chi) { return build_two_level(p, o1, o2, q1, q2, chi); };
}

} // namespace

TEST_CASE("two-level generator matches the defining superoperator") {
    const TwoLevelParams p = fig2(0.0, 1e6);
    const Vec2 o = rotated(6e7);
    const auto L = build_two_level(p, o[0], o[1], kPi / 2, 0.0, CountingVector(0.01, -0.01));
    const CMat ref = oracle::two_level_generator(0.0, 1e6, o[0], o[1], kPi / 2, 0.0, 0.01, -0.01);
    CHECK((L.matrix - ref).cwiseAbs().maxCoeff() <= 1e-12 * ref.cwiseAbs().maxCoeff());

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0, 1);
    for (int i = 0; i < 20; ++i) {
        TwoLevelParams q = fig2(2e8 * (u(rng) - 0.5), 1e7 * u(rng));
        const double o1 = 5e7 * u(rng), o2 = 5e7 * u(rng), q1 = 6 * u(rng), q2 = 6 * u(rng);
        const double c1 = 0.2 * (u(rng) - 0.5), c2 = 0.2 * (u(rng) - 0.5);
        const auto g = build_two_level(q, o1, o2, q1, q2, CountingVector(c1, c2));
        const CMat r = oracle::two_level_generator(q.detuning, q.gamma, o1, o2, q1, q2, c1, c2);
        CHECK((g.matrix - r).cwiseAbs().maxCoeff() <= 1e-12 * r.cwiseAbs().maxCoeff());
    }
}

TEST_CASE("trace preservation at zero counting field") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0, 1);
    for (int i = 0; i < 20; ++i) {
        const TwoLevelParams p = fig2(2e8 * (u(rng) - 0.5), 1e7 * u(rng));
        const auto L = build_two_level(p, 6e7 * u(rng), 6e7 * u(rng), 6 * u(rng), 6 * u(rng), CountingVector::Zero());
        CHECK(L.trace_functional_residual().cwiseAbs().maxCoeff() <= 1e-10 * L.matrix.norm());
        CHECK(std::abs(dominant_eigenvalue_dense(L)) <= 1e-9 * L.max_rate);
    }
    for (int i = 0; i < 10; ++i) {
        const FourLevelParams p = fig5(4e7 * (u(rng) - 0.5));
        const auto L = build_four_level(p, 2e6 * u(rng), 2e6 * u(rng), 6 * u(rng), 6 * u(rng), CountingVector::Zero());
        CHECK(L.trace_functional_residual().cwiseAbs().maxCoeff() <= 1e-10 * L.matrix.norm());
        CHECK(std::abs(dominant_eigenvalue_dense(L)) <= 1e-9 * L.max_rate);
    }
}

TEST_CASE("pure decay relaxes to the ground state") {
    const TwoLevelParams p = fig2(1e7, 1e6);
    const auto L = build_two_level(p, 0, 0, 0, 0, CountingVector::Zero());
    CHECK(std::abs(dominant_eigenvalue_dense(L)) <= 1e-9 * p.gamma);
    const CMat rho = L.stationary_state();
    CHECK(std::abs(rho(1, 1) - 1.0) <= 1e-12);
    CHECK(std::abs(rho(0, 0)) <= 1e-12);

    const auto tilted = build_two_level(p, 0, 0, 0, 0, CountingVector(0.05, -0.03));
    const auto r = dominant_eigenvalue_prop(tilted, default_propagation_settings(tilted));
    CHECK(std::abs(r.lambda) <= 1e-9 * p.gamma);
}

TEST_CASE("four-level generator reduces to the two-level model without coupling and signal") {
    FourLevelParams p = fig5(1.3e7);
    p.omega_c = 0;
    p.omega_s = 0;
    TwoLevelParams q = fig2(p.eps_b - p.eps_a, p.gamma_b);
    const double o1 = 1.2e6, o2 = 0.7e6, f1 = 0.4, f2 = 1.1;
    for (const CountingVector chi : {CountingVector(0, 0), CountingVector(2e-3, -1e-3), CountingVector(-0.03, 0.05)}) {
        const auto four = build_four_level(p, o1, o2, f1, f2, chi);
        const auto two = build_two_level(q, std::sqrt(2.0) * o1, std::sqrt(2.0) * o2, f1 - kPi / 2, f2 + kPi / 2, chi);
        const cplx l4 = oracle::dominant(four.matrix);
        const cplx l2 = oracle::dominant(two.matrix);
        CHECK(std::abs(l4 - l2) <= 1e-9 * std::max(1.0, std::abs(l2)) + 1e-9 * p.gamma_b);
    }
}

TEST_CASE("four-level stationary state agrees with long-time evolution") {
    const FourLevelParams p = fig5(0.0);
    const double o = 1.9e6 / 2;
    const auto L = build_four_level(p, o, o, kPi / 2, 0, CountingVector::Zero());
    const CMat rho = L.stationary_state();

    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(16);
    for (int i = 0; i < 4; ++i) v[i + 4 * i] = 0.25;
    const double t = 60.0 / L.min_decay;
    const CMat prop = (L.matrix * t).exp();
    const Eigen::VectorXcd out = prop * v;
    for (int i = 0; i < 4; ++i) CHECK(std::abs(out[i + 4 * i] - rho(i, i)) <= 1e-7);
    CHECK(std::abs(rho.trace() - 1.0) <= 1e-12);
}

TEST_CASE("characteristic polynomial") {
    SUBCASE("two-level structure") {
        const TwoLevelParams p = fig2(1e7, 1e6);
        const Vec2 o = rotated(6e7);
        const CharPoly c = char_poly(build_two_level(p, o[0], o[1], kPi / 2, 0, CountingVector::Zero()));
        REQUIRE(c.degree() == 4);
        CHECK(std::abs(c.a[4] - 1.0) <= 1e-14);
        CHECK(std::abs(c.a[3] - 2.0 * p.gamma) <= 1e-12 * p.gamma);
        CHECK(std::abs(c.a[0]) <= 1e-12 * std::pow(6e7, 4));
        const double om2 = 3.6e15, e2 = 1e14, g2 = 1e12;
        CHECK(rel(c.a[2].real(), om2 + e2 + 1.25 * g2) <= 1e-12);
        CHECK(rel(c.a[1].real(), 0.25 * p.gamma * (4 * e2 + 2 * om2 + g2)) <= 1e-12);
    }
    SUBCASE("matches the expansion of the eigenvalues") {
        std::mt19937_64 rng(19);
        std::uniform_real_distribution<double> u(0, 1);
        for (int i = 0; i < 10; ++i) {
            const FourLevelParams p = fig5(4e7 * (u(rng) - 0.5));
            const auto L = build_four_level(p, 2e6 * u(rng), 2e6 * u(rng), 6 * u(rng), 6 * u(rng),
                                            CountingVector(0.1 * u(rng), -0.1 * u(rng)));
            const CharPoly c = char_poly(L);
            Eigen::ComplexEigenSolver<CMat> es(L.matrix, false);
            const auto ref = oracle::poly_from_roots(es.eigenvalues());
            for (int j = 0; j <= 16; ++j) {
                const double scale = std::pow(L.max_rate, 16 - j);
                CHECK(std::abs(c.a[j] - ref[j]) <= 1e-9 * scale);
            }
            CHECK(std::abs(c(oracle::dominant(L.matrix))) <= 1e-8 * std::pow(L.max_rate, 16));
        }
    }
    SUBCASE("Faddeev-LeVerrier agrees on two-level generators") {
        std::mt19937_64 rng(23);
        std::uniform_real_distribution<double> u(0, 1);
        for (int i = 0; i < 20; ++i) {
            const TwoLevelParams p = fig2(2e8 * (u(rng) - 0.5), 1e7 * u(rng));
            const auto L = build_two_level(p, 6e7 * u(rng), 6e7 * u(rng), 6 * u(rng), 6 * u(rng),
                                           CountingVector(0.1 * u(rng), 0.1 * u(rng)));
            const CharPoly a = char_poly(L), b = char_poly_faddeev_leverrier(L.matrix, L.max_rate);
            for (int j = 0; j <= 4; ++j) CHECK(std::abs(a.a[j] - b.a[j]) <= 1e-10 * std::pow(L.max_rate, 4 - j));
        }
    }
    SUBCASE("root of the dominant eigenvalue from propagation") {
        const TwoLevelParams p = fig2(2e7, 1e6);
        const Vec2 o = rotated(6e7);
        const auto L = build_two_level(p, o[0], o[1], kPi / 2, 0, CountingVector(0.01, 0.0));
        const auto r = dominant_eigenvalue_prop(L, default_propagation_settings(L));
        CHECK(std::abs(char_poly(L)(r.lambda)) <= 1e-6 * std::abs(char_poly(L).a[1]) * std::abs(r.lambda));
    }
    SUBCASE("oversized matrices are rejected") {
        CHECK_THROWS_AS(char_poly(CMat::Identity(17, 17)), DomainError);
    }
}

TEST_CASE("closed-form two-level characteristic polynomial") {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> u(0, 1);
    for (int i = 0; i < 50; ++i) {
        const TwoLevelParams p = fig2(2e8 * (u(rng) - 0.5), 1e7 * u(rng));
        const double o1 = 6e7 * u(rng), o2 = 6e7 * u(rng), ft = 6 * u(rng);
        const CountingVector chi(0.5 * (u(rng) - 0.5), 0.5 * (u(rng) - 0.5));
        const CharPoly a = char_poly_two_level_analytic(p, o1, o2, ft, chi);
        const CharPoly b = char_poly(build_two_level(p, o1, o2, ft, 0.0, chi));
        const double s = std::max({p.gamma, std::hypot(o1, o2), std::abs(p.detuning)});
        for (int j = 0; j <= 4; ++j) CHECK(std::abs(a.a[j] - b.a[j]) <= 1e-8 * std::pow(s, 4 - j));
    }
    const TwoLevelParams p = fig2(1e7, 1e6);
    CHECK(char_poly_two_level_analytic(p, 3e7, 4e7, 0.3, CountingVector::Zero()).a[0] == cplx(0.0));

    // phi_tilde = 0 with equal counting fields removes the sin-type term from a_0.
    const double o1 = 3e7, o2 = 4e7, c = 0.2;
    const CharPoly z = char_poly_two_level_analytic(p, o1, o2, 0.0, CountingVector(c, c));
    const double P = o1 * o2;
    const double A = 2 * o1 * o1 + 2 * o2 * o2 + 4 * P;
    const cplx C = (o1 * o1 + o2 * o2 + 2 * P) * std::exp(cplx(0, c));
    const cplx a0 = p.gamma * p.gamma / 8 * (A - 2.0 * C);
    CHECK(std::abs(z.a[0] - a0) <= 1e-12 * std::abs(a0));
}

TEST_CASE("truncated polynomial cumulants") {
    SUBCASE("vanishing first derivatives of a_0") {
        PolyDerivatives pd;
        pd.a = {0.0, 2.0, 3.0};
        pd.d1[0] = {0.0, 1.0, 0.5};
        pd.d1[1] = {0.0, -1.0, 0.5};
        pd.d2[0][0] = {0.7, 0.0, 0.0};
        const auto ld = truncated_poly_cumulants(pd, 1.0);
        CHECK(ld.d1[0] == cplx(0.0));
        CHECK(ld.d1[1] == cplx(0.0));
        CHECK(ld.d2[0][0].real() == doctest::Approx(-0.35));
        CHECK(ld.d2[0][0].imag() == 0.0);
    }
    SUBCASE("non-ergodic generator") {
        PolyDerivatives pd;
        pd.a = {0.0, 0.0, 3.0};
        CHECK_THROWS_AS(truncated_poly_cumulants(pd, 1.0), NumericalError);
    }
    SUBCASE("two-level second aptitude at resonance") {
        const double om = 6e7, g = 1e6;
        const TwoLevelParams p = fig2(0.0, g);
        const Vec2 o = rotated(om);
        const auto k = aptitudes_from_derivatives(
            truncated_poly_cumulants(two_level_poly_derivatives(p, o[0], o[1], kPi / 2).to_plus_minus(), om));
        const double expected = (2 * std::pow(om, 4) + g * g * om * om) / (g * (2 * om * om + g * g));
        CHECK(rel(k.kmm, expected) <= 1e-10);
    }
    SUBCASE("four-level pipeline agrees with dense eigenvalue differences") {
        const FourLevelParams p = fig5(9e6);
        const double o = 1.9e6 / 2;
        const auto num = aptitudes_numeric(
            [&](const CountingVector& chi) { return build_four_level(p, o, o, kPi / 2, 0, chi); }, Strategy::CharPoly);
        const auto ref = oracle::dense_aptitudes(
            [&](double cp, double cm) {
                return build_four_level(p, o, o, kPi / 2, 0, CountingVector(cp + cm, cp - cm)).matrix;
            },
            2e-3);
        CHECK(rel(num.aptitudes.kp, ref.kp) <= 1e-5);
        CHECK(rel(num.aptitudes.km, ref.km) <= 1e-5);
        CHECK(rel(num.aptitudes.kpp, ref.kpp) <= 1e-4);
        CHECK(rel(num.aptitudes.kmm, ref.kmm) <= 1e-4);
    }
}

TEST_CASE("closed-form two-level aptitudes") {
    const double om = 6e7, g = 1e6;
    const auto k0 = aptitudes_analytic_two_level(fig2(0.0, g), om);
    CHECK(k0.km == 0.0);
    CHECK(std::abs(k0.kp) == doctest::Approx(g * om * om / (2 * om * om + g * g)).epsilon(1e-12));
    CHECK(std::abs(k0.kp) == doctest::Approx(4.9993e5).epsilon(1e-4));
    CHECK(k0.kp < 0);
    CHECK(k0.kmm == doctest::Approx((2 * std::pow(om, 4) + g * g * om * om) / (g * (2 * om * om + g * g))));
    CHECK(k0.kmm == doctest::Approx(3.6e9).epsilon(1e-3));
    CHECK(k0.kpm == 0.0);

    for (double eps : {-8e7, -1e7, 3e7, 1e8}) {
        const TwoLevelParams p = fig2(eps, g);
        const Vec2 o = rotated(om);
        const auto a = aptitudes_analytic_two_level(p, om);
        const auto b = aptitudes_from_derivatives(
            truncated_poly_cumulants(two_level_poly_derivatives(p, o[0], o[1], kPi / 2).to_plus_minus(), om));
        CHECK(rel(a.kp, b.kp) <= 1e-12);
        CHECK(rel(a.km, b.km) <= 1e-12);
        CHECK(rel(a.kpp, b.kpp) <= 1e-12);
        CHECK(rel(a.kmm, b.kmm) <= 1e-12);
        CHECK(std::abs(a.kpm - b.kpm) <= 1e-12 * std::sqrt(a.kpp * a.kmm));
        CHECK_NOTHROW(a.validate());
    }
}

TEST_CASE("numeric aptitudes against the closed forms") {
    const double om = 6e7;
    const Vec2 o = rotated(om);
    for (double eps : {-1e8, -3e7, 0.0, 1.5e7, 7e7}) {
        const TwoLevelParams p = fig2(eps, 1e6);
        const auto ref = aptitudes_analytic_two_level(p, om);
        const auto num = aptitudes_numeric(two_level_factory(p, o[0], o[1], kPi / 2, 0), Strategy::CharPoly);
        CHECK_FALSE(num.quality_warning);
        CHECK(rel(num.aptitudes.kp, ref.kp) <= 1e-4);
        CHECK(std::abs(num.aptitudes.km - ref.km) <= 1e-4 * std::abs(ref.kp) + 1e-4 * std::abs(ref.km));
        CHECK(rel(num.aptitudes.kpp, ref.kpp) <= 1e-4);
        CHECK(rel(num.aptitudes.kmm, ref.kmm) <= 1e-4);
        CHECK(std::abs(num.aptitudes.kpm - ref.kpm) <= 1e-4 * std::sqrt(ref.kpp * ref.kmm));
    }
    SUBCASE("propagation slope") {
        const TwoLevelParams p = fig2(2e7, 1e6);
        const auto ref = aptitudes_analytic_two_level(p, om);
        const auto num = aptitudes_numeric(two_level_factory(p, o[0], o[1], kPi / 2, 0), Strategy::Propagation);
        CHECK(rel(num.aptitudes.kp, ref.kp) <= 1e-4);
        CHECK(rel(num.aptitudes.km, ref.km) <= 1e-4);
        CHECK(rel(num.aptitudes.kmm, ref.kmm) <= 1e-4);
    }
    SUBCASE("per-mode first aptitudes") {
        const TwoLevelParams p = fig2(2e7, 1e6);
        const auto ref = aptitudes_analytic_two_level(p, om);
        const Vec2 k = first_aptitudes_numeric(two_level_factory(p, o[0], o[1], kPi / 2, 0), Strategy::CharPoly);
        CHECK(rel(k[0], 0.5 * (ref.kp + ref.km)) <= 1e-6);
        CHECK(rel(k[1], 0.5 * (ref.kp - ref.km)) <= 1e-6);
        CHECK_THROWS_AS(first_aptitudes_numeric(two_level_factory(p, o[0], o[1], kPi / 2, 0), Strategy::Analytic),
                        ConfigError);
    }
}

TEST_CASE("four-level aptitudes") {
    SUBCASE("no probe coupling") {
        const FourLevelParams p = fig5(5e6);
        const auto k =
            aptitudes_numeric([&](const CountingVector& chi) { return build_four_level(p, 0, 0, kPi / 2, 0, chi); },
                              Strategy::CharPoly)
                .aptitudes;
        CHECK(k.kp == 0.0);
        CHECK(k.km == 0.0);
        CHECK(k.kpp == 0.0);
        CHECK(k.kmm == 0.0);
    }
    SUBCASE("far from all dressed resonances without signal field") {
        FourLevelParams p = fig5();
        p.omega_s = 0;
        const Model base = Model::four_level(p);
        const Vec2 n = Vec2::Constant(p.n_ref / 2);
        const double resonant = base.with_parameter("eps", 0.5 * p.omega_c).aptitudes(base.rabi(n), Model::rotated_phases()).aptitudes.kmm;
        const double far = base.with_parameter("eps", 2e8).aptitudes(base.rabi(n), Model::rotated_phases()).aptitudes.kmm;
        CHECK(std::abs(far) <= 1e-3 * resonant);
    }
}

TEST_CASE("dominant eigenvalue by propagation") {
    const TwoLevelParams p = fig2(1e7, 1e6);
    const Vec2 o = rotated(6e7);
    const auto L0 = build_two_level(p, o[0], o[1], kPi / 2, 0, CountingVector::Zero());
    const auto r0 = dominant_eigenvalue_prop(L0, default_propagation_settings(L0));
    CHECK(std::abs(r0.lambda) <= 1e-9 * p.gamma);
    CHECK(r0.converged);

    const auto L = build_two_level(p, o[0], o[1], kPi / 2, 0, CountingVector(2e-3, -1e-3));
    const auto r = dominant_eigenvalue_prop(L, default_propagation_settings(L));
    const cplx ref = oracle::dominant(L.matrix);
    CHECK(r.converged);
    CHECK(std::abs(r.lambda - ref) <= 1e-6 * std::abs(ref));

    TwoLevelParams far = p;
    far.detuning = 9.6e7;
    far.gamma = 5e5;
    const auto Lf = build_two_level(far, o[0], o[1], kPi / 2, 0, CountingVector(3e-4, 3e-4));
    const cplx small = oracle::dominant(Lf.matrix);
    const auto rf = dominant_eigenvalue_prop(Lf, default_propagation_settings(Lf));
    CHECK(std::abs(rf.lambda.real() - small.real()) <= 1e-5 * std::abs(small.real()));

    TwoLevelParams q = p;
    q.gamma = 0;
    const auto Lq = build_two_level(q, o[0], o[1], kPi / 2, 0, CountingVector::Zero());
    CHECK_THROWS_AS(default_propagation_settings(Lq), DomainError);
}

TEST_CASE("conjugation symmetry of the dominant eigenvalue") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0, 1);
    for (int i = 0; i < 20; ++i) {
        const TwoLevelParams p = fig2(2e8 * (u(rng) - 0.5), 1e7 * u(rng) + 1e5);
        const double o1 = 6e7 * u(rng), o2 = 6e7 * u(rng), f = 6 * u(rng);
        const CountingVector chi(0.2 * (u(rng) - 0.5), 0.2 * (u(rng) - 0.5));
        const cplx a = oracle::dominant(build_two_level(p, o1, o2, f, 0, chi).matrix);
        const cplx b = oracle::dominant(build_two_level(p, o1, o2, f, 0, -chi).matrix);
        CHECK(std::abs(a - std::conj(b)) <= 1e-9 * std::max(std::abs(a), p.gamma));
    }
}

TEST_CASE("resonant phase fluctuations diverge as 1/gamma") {
    const double om = 6e7;
    const Vec2 o = rotated(om);
    auto kmm = [&](double g) {
        return aptitudes_numeric(two_level_factory(fig2(0.0, g), o[0], o[1], kPi / 2, 0), Strategy::CharPoly)
            .aptitudes.kmm;
    };
    const double slope = std::log(kmm(1e5) / kmm(1e4)) / std::log(10.0);
    CHECK(slope == doctest::Approx(-1.0).epsilon(0.02));
}

TEST_CASE("rate-equation aptitudes") {
    SUBCASE("equal fluxes produce no fluctuations") {
        Eigen::MatrixXd G(3, 3);
        G << -2, 1, 0.5, 1, -1, 0.5, 1, 0, -1;
        const Eigen::VectorXd p0 = rate_stationary_state(G);
        CHECK((G * p0).norm() <= 1e-12);
        CHECK(p0.sum() == doctest::Approx(1.0));
        const auto r = rate_equation_aptitudes(Eigen::VectorXd::Constant(3, 2.5), G, p0);
        CHECK(r.kappa1 == doctest::Approx(2.5));
        CHECK(std::abs(r.kappa2) <= 1e-12);
    }
    SUBCASE("single state") {
        const auto r = rate_equation_aptitudes(Eigen::VectorXd::Constant(1, 3.0), Eigen::MatrixXd::Zero(1, 1),
                                               Eigen::VectorXd::Ones(1));
        CHECK(r.kappa1 == 3.0);
        CHECK(r.kappa2 == 0.0);
    }
    SUBCASE("dressed pair at resonance") {
        const double om = 6e7;
        auto k2 = [&](double g) {
            Eigen::MatrixXd G(2, 2);
            G << -1, 1, 1, -1;
            G *= g / 4;
            Eigen::VectorXd f(2);
            f << -om / 2, om / 2;
            return rate_equation_aptitudes(f, G, rate_stationary_state(G)).kappa2;
        };
        CHECK(std::log(k2(1e5) / k2(1e4)) / std::log(10.0) == doctest::Approx(-1.0).epsilon(0.02));
        const auto exact = aptitudes_analytic_two_level(fig2(0.0, 1e4), om);
        CHECK(rel(k2(1e4), exact.kmm) <= 1e-6);
    }
    SUBCASE("invalid rate matrices") {
        Eigen::MatrixXd G = Eigen::MatrixXd::Zero(3, 3);
        G(0, 1) = 1;
        G(1, 1) = -1;
        Eigen::VectorXd p0(3);
        p0 << 0.5, 0, 0.5;
        CHECK_THROWS_AS(rate_equation_aptitudes(Eigen::VectorXd::Ones(3), G, p0), NumericalError);
        Eigen::MatrixXd bad(2, 2);
        bad << -1, 0, 0.5, 0;
        CHECK_THROWS_AS(rate_equation_aptitudes(Eigen::VectorXd::Ones(2), bad, Eigen::VectorXd::Constant(2, 0.5)),
                        DomainError);
    }
}

TEST_CASE("strategy names") {
    for (Strategy s : {Strategy::Analytic, Strategy::CharPoly, Strategy::Propagation, Strategy::Eigensolver})
        CHECK(strategy_from_string(to_string(s)) == s);
    CHECK_THROWS_AS(strategy_from_string("qr"), ConfigError);
}
