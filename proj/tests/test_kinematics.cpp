#include <doctest.h>

#include <cmath>
#include <random>

#include "anisofermi/background.hpp"
#include "anisofermi/error.hpp"
#include "anisofermi/kinematics.hpp"

using namespace anisofermi;

namespace {

BackgroundModel kasner_axisym() {
    return BackgroundModel(PowerLawFactors{{1, 1, 1}, {2.0 / 3, 2.0 / 3, -1.0 / 3}, 1.0});
}
BackgroundModel kasner_triaxial() {
    // u = 2 in the Kasner parametrization: p = (-2/7, 3/7, 6/7)
    return BackgroundModel(PowerLawFactors{{1, 1, 1}, {-2.0 / 7, 3.0 / 7, 6.0 / 7}, 1.0});
}

// literal evaluation of the coupling formulas from finite-difference
// derivatives of q(t), used as the oracle for the closed forms
struct FdKinematics {
    double q, qperp, q3, omega, qdot, q3dot, omegadot, phidot;
};

FdKinematics fd_kinematics(const BackgroundModel& model, const ModeIndex& mode,
                           double mass, double t, double h) {
    auto at = [&](double s) {
        const BackgroundState bg = model.evaluate(s);
        const auto q = physical_momentum(bg, mode.k);
        const double qn = std::sqrt(q[0] * q[0] + q[1] * q[1] + q[2] * q[2]);
        return std::array<double, 4>{qn, q[2], std::sqrt(qn * qn + mass * mass),
                                     std::atan2(q[1], q[0])};
    };
    const auto lo = at(t - h), mid = at(t), hi = at(t + h);
    FdKinematics fd;
    fd.q = mid[0];
    fd.q3 = mid[1];
    fd.omega = mid[2];
    fd.qperp = std::sqrt(fd.q * fd.q - fd.q3 * fd.q3);
    fd.qdot = (hi[0] - lo[0]) / (2 * h);
    fd.q3dot = (hi[1] - lo[1]) / (2 * h);
    fd.omegadot = (hi[2] - lo[2]) / (2 * h);
    fd.phidot = (hi[3] - lo[3]) / (2 * h);
    return fd;
}

} // namespace

TEST_CASE("physical momentum is k_i / A_i") {
    BackgroundModel unit(StaticFactors{{1, 1, 1}});
    const BackgroundState bg = unit.evaluate(0.0);
    const auto q = physical_momentum(bg, {3, 4, 0});
    CHECK(q[0] == 3.0);
    CHECK(q[1] == 4.0);
    CHECK(q[2] == 0.0);

    BackgroundModel stretched(StaticFactors{{2, 1, 1}});
    const auto q2 = physical_momentum(stretched.evaluate(0.0), {2, 0, 0});
    CHECK(q2[0] == 1.0);

    // spherical comoving components (k = 1, theta = pi/2, phi = 0) with a = 1
    const std::array<double, 3> k{std::sin(M_PI / 2) * std::cos(0.0),
                                  std::sin(M_PI / 2) * std::sin(0.0),
                                  std::cos(M_PI / 2)};
    const auto q3 = physical_momentum(bg, k);
    CHECK(q3[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::fabs(q3[1]) < 1e-15);
    CHECK(std::fabs(q3[2]) < 1e-15);
}

TEST_CASE("static background gives vanishing derivatives") {
    BackgroundModel model(StaticFactors{{1.2, 0.4, 2.2}});
    const KinematicState ks =
        kinematic_state(model.evaluate(1.0), {{0.3, -0.8, 0.5}, +1}, 1.3);
    CHECK(ks.qnormdot == 0.0);
    CHECK(ks.omegadot == 0.0);
    CHECK(ks.phidot == 0.0);
    CHECK(ks.q3dot == 0.0);
    for (int i = 0; i < 3; ++i) CHECK(ks.qdot[i] == 0.0);
}

TEST_CASE("isotropic expansion keeps the direction fixed") {
    BackgroundModel model(IsotropicFactors{ScalarPowerLawFactor{1.0, 0.5, 1.0}});
    const BackgroundState bg = model.evaluate(2.0);
    const KinematicState ks = kinematic_state(bg, {{1.0, 0.7, -0.4}, +1}, 0.5);
    const double H = bg.hubble[0];
    CHECK(ks.qnormdot == doctest::Approx(-H * ks.qnorm).epsilon(1e-14));
    CHECK(ks.phidot == 0.0);
    CHECK(std::fabs(ks.q3 * ks.qnormdot - ks.q3dot * ks.qnorm) < 1e-16);
}

TEST_CASE("kinematic closed forms match finite differences") {
    const double m = 1.0, t = 1.0, h = 1e-6;
    for (const auto& [model, k] :
         {std::pair{kasner_axisym(), std::array<double, 3>{1, 1, 1}},
          std::pair{kasner_triaxial(), std::array<double, 3>{0.8, -0.5, 0.6}}}) {
        const ModeIndex mode{k, +1};
        const KinematicState ks = kinematic_state(model.evaluate(t), mode, m);
        const FdKinematics fd = fd_kinematics(model, mode, m, t, h);
        CHECK(std::fabs(ks.qnormdot - fd.qdot) / std::fabs(fd.qdot) < 1e-6);
        CHECK(std::fabs(ks.omegadot - fd.omegadot) / std::fabs(fd.omegadot) < 1e-6);
        CHECK(std::fabs(ks.q3dot - fd.q3dot) / std::fabs(fd.q3dot) < 1e-6);
        if (fd.phidot != 0.0)
            CHECK(std::fabs(ks.phidot - fd.phidot) /
                      std::max(1e-12, std::fabs(fd.phidot)) < 1e-6);
        else
            CHECK(ks.phidot == 0.0);
    }
}

TEST_CASE("dispersion relations hold strictly") {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> uni(0.1, 3.0);
    BackgroundModel model = kasner_triaxial();
    for (int i = 0; i < 200; ++i) {
        const ModeIndex mode{{uni(rng), uni(rng) - 1.5, uni(rng)}, +1};
        const double m = uni(rng);
        const KinematicState ks = kinematic_state(model.evaluate(1.0 + uni(rng)), mode, m);
        CHECK(std::fabs(ks.omega * ks.omega - ks.qnorm * ks.qnorm - m * m) <
              1e-14 * ks.omega * ks.omega);
        CHECK(std::fabs(ks.qperp * ks.qperp -
                        (ks.q[0] * ks.q[0] + ks.q[1] * ks.q[1])) <
              1e-14 * ks.qnorm * ks.qnorm);
        CHECK(ks.phi == std::atan2(ks.q[1], ks.q[0]));
        CHECK(ks.omega > m);
        CHECK(ks.omega > ks.qnorm);
        CHECK(std::fabs(ks.omega * ks.omegadot - ks.qnorm * ks.qnormdot) <
              1e-12 * std::fabs(ks.omega * ks.omegadot));
    }
}

TEST_CASE("zero momentum is rejected") {
    BackgroundModel model(StaticFactors{{1, 1, 1}});
    CHECK_THROWS_AS(kinematic_state(model.evaluate(0.0), {{0, 0, 0}, +1}, 1.0),
                    DomainError);
}

TEST_CASE("isotropic coupling reduces to the mass term") {
    BackgroundModel model(IsotropicFactors{ScalarPowerLawFactor{1.0, 0.5, 1.0}});
    const KinematicState ks =
        kinematic_state(model.evaluate(2.0), {{0.4, 0.3, 0.9}, +1}, 1.2);
    const auto c = coupling_coefficients(ks, 1.2, +1, CouplingStrategy::literal_omega_dot());
    const double expect = 2 * 1.2 * 1.2 * ks.omegadot / std::pow(ks.omega, 3);
    CHECK(c.w == doctest::Approx(expect).epsilon(1e-14));
    CHECK(c.w_perp == 0.0);
    CHECK(c.w3 == 0.0);

    SUBCASE("massless conformal decoupling is exact") {
        const KinematicState ks0 =
            kinematic_state(model.evaluate(2.0), {{0.4, 0.3, 0.9}, +1}, 0.0);
        const auto c0 =
            coupling_coefficients(ks0, 0.0, +1, CouplingStrategy::literal_omega_dot());
        CHECK(c0.w == 0.0);
        CHECK(c0.w_perp == 0.0);
        CHECK(c0.w3 == 0.0);
    }
}

TEST_CASE("coupling coefficients match a finite-difference evaluation") {
    const double m = 1.0, t = 1.0, h = 1e-6;
    for (const auto& [model, k] :
         {std::pair{kasner_axisym(), std::array<double, 3>{1, 0, 1}},
          std::pair{kasner_triaxial(), std::array<double, 3>{0.9, 0.4, -0.7}}}) {
        for (int r : {+1, -1}) {
            const ModeIndex mode{k, r};
            const KinematicState ks = kinematic_state(model.evaluate(t), mode, m);
            const auto c =
                coupling_coefficients(ks, m, r, CouplingStrategy::literal_omega_dot());
            const FdKinematics fd = fd_kinematics(model, mode, m, t, h);
            const double chi = (fd.q * fd.q - m * m) / (fd.omega * fd.omega);
            const double w_fd =
                (fd.q3 * fd.qdot - fd.q3dot * fd.q) / (fd.omega * fd.qperp) * chi +
                2 * m * m * fd.omegadot / std::pow(fd.omega, 3);
            const double wperp_fd = r * fd.qperp / fd.omega * fd.phidot;
            const double w3_fd = r * fd.q3 / fd.omega * fd.phidot * chi +
                                 2 * r * m * m * fd.qperp * fd.phidot /
                                     std::pow(fd.omega, 3);
            CHECK(std::fabs(c.w - w_fd) / std::fabs(w_fd) < 1e-6);
            CHECK(std::fabs(c.w_perp - wperp_fd) <
                  1e-6 * std::max(1.0, std::fabs(wperp_fd)));
            CHECK(std::fabs(c.w3 - w3_fd) < 1e-6 * std::max(1.0, std::fabs(w3_fd)));
        }
    }
}

TEST_CASE("regularized axial factor agrees with the literal quotient") {
    std::mt19937 rng(77);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (int i = 0; i < 500; ++i) {
        KinematicState ks{};
        ks.hubble = {uni(rng), uni(rng), uni(rng)};
        ks.q = {uni(rng) * 2, uni(rng) * 2, uni(rng) * 2};
        ks.qnorm = std::sqrt(ks.q[0] * ks.q[0] + ks.q[1] * ks.q[1] + ks.q[2] * ks.q[2]);
        ks.qperp = std::hypot(ks.q[0], ks.q[1]);
        if (ks.qperp / ks.qnorm <= 1e-3) continue;
        ks.q3 = ks.q[2];
        const double m = std::fabs(uni(rng));
        ks.omega = std::sqrt(ks.qnorm * ks.qnorm + m * m);
        for (int j = 0; j < 3; ++j) ks.qdot[j] = -ks.hubble[j] * ks.q[j];
        ks.qnormdot = -(ks.hubble[0] * ks.q[0] * ks.q[0] + ks.hubble[1] * ks.q[1] * ks.q[1] +
                        ks.hubble[2] * ks.q[2] * ks.q[2]) /
                      ks.qnorm;
        ks.q3dot = ks.qdot[2];
        ks.omegadot = ks.qnorm * ks.qnormdot / ks.omega;
        ks.phidot = ks.q[0] * ks.q[1] * (ks.hubble[0] - ks.hubble[1]) /
                    (ks.qperp * ks.qperp);

        const double literal = (ks.q3 * ks.qnormdot - ks.q3dot * ks.qnorm) / ks.qperp;
        const double regular =
            ks.q3 * ((ks.hubble[2] - ks.hubble[0]) * ks.q[0] * ks.q[0] +
                     (ks.hubble[2] - ks.hubble[1]) * ks.q[1] * ks.q[1]) /
            (ks.qnorm * ks.qperp);
        if (std::fabs(literal) > 1e-8)
            CHECK(std::fabs(regular - literal) / std::fabs(literal) < 1e-10);
    }
}

TEST_CASE("helicity symmetry of the literal coupling") {
    BackgroundModel model = kasner_triaxial();
    const ModeIndex plus{{0.6, 0.8, -0.3}, +1};
    const KinematicState ks = kinematic_state(model.evaluate(1.5), plus, 0.9);
    const auto cp = coupling_coefficients(ks, 0.9, +1, CouplingStrategy::literal_omega_dot());
    const auto cm = coupling_coefficients(ks, 0.9, -1, CouplingStrategy::literal_omega_dot());
    CHECK(cp.w == cm.w);
    CHECK(cp.w_perp == -cm.w_perp);
    CHECK(cp.w3 == -cm.w3);
}

TEST_CASE("couplings scale linearly with the expansion rates") {
    BackgroundState bg;
    bg.scale = {1.1, 0.9, 1.3};
    bg.mean_scale = std::cbrt(bg.scale[0] * bg.scale[1] * bg.scale[2]);
    for (int i = 0; i < 3; ++i) bg.alpha[i] = bg.scale[i] / bg.mean_scale;
    const std::array<double, 3> hdir{0.3, -0.2, 0.1};
    auto coupling_at = [&](double eps) {
        BackgroundState b = bg;
        for (int i = 0; i < 3; ++i) {
            b.hubble[i] = eps * hdir[i];
            b.rate[i] = b.hubble[i] * b.scale[i];
        }
        const KinematicState ks = kinematic_state(b, {{0.7, 0.4, 0.9}, +1}, 1.0);
        return coupling_coefficients(ks, 1.0, +1, CouplingStrategy::literal_omega_dot());
    };
    const auto c1 = coupling_at(1e-4);
    const auto c2 = coupling_at(5e-5);
    CHECK(c1.w == doctest::Approx(2 * c2.w).epsilon(1e-12));
    CHECK(c1.w_perp == doctest::Approx(2 * c2.w_perp).epsilon(1e-12));
    CHECK(c1.w3 == doctest::Approx(2 * c2.w3).epsilon(1e-12));
}

TEST_CASE("derived strategy relates to the literal one as documented") {
    BackgroundModel model = kasner_triaxial();
    for (int r : {+1, -1}) {
        const ModeIndex mode{{0.9, 0.4, -0.7}, r};
        const KinematicState ks = kinematic_state(model.evaluate(1.3), mode, 1.1);
        const auto lit = coupling_coefficients(ks, 1.1, r, CouplingStrategy::literal_omega_dot());
        const auto der = coupling_coefficients(ks, 1.1, r, CouplingStrategy::derived_connection());
        CHECK(der.w == doctest::Approx(r * lit.w).epsilon(1e-15));
        CHECK(der.w_perp == doctest::Approx(r * lit.w_perp).epsilon(1e-15));
        // first term of w3 carries q3/q instead of q3/omega
        const double chi =
            (ks.qnorm * ks.qnorm - 1.1 * 1.1) / (ks.omega * ks.omega);
        const double expect = r * ks.q3 / ks.qnorm * ks.phidot * chi +
                              2 * r * 1.1 * 1.1 * ks.qperp * ks.phidot /
                                  std::pow(ks.omega, 3);
        CHECK(der.w3 == doctest::Approx(expect).epsilon(1e-14));
    }
}

TEST_CASE("non-finite user couplings are rejected") {
    BackgroundModel model(StaticFactors{{1, 1, 1}});
    const KinematicState ks = kinematic_state(model.evaluate(0.0), {{1, 0, 0}, +1}, 1.0);
    auto bad = CouplingStrategy::user([](const KinematicState&, double, int) {
        return CouplingCoefficients{std::nan(""), 0, 0};
    });
    CHECK_THROWS_AS(coupling_coefficients(ks, 1.0, +1, bad), NumericError);
}

TEST_CASE("phase accumulation") {
    IntegratorConfig cfg;

    SUBCASE("constant frequency") {
        PhaseAccumulator acc{1.0, 0.0};
        acc = accumulate_phase(acc, [](double) { return 2.0; }, 4.0, cfg);
        CHECK(acc.theta == doctest::Approx(6.0).epsilon(1e-14));
        CHECK(acc.t_last == 4.0);
    }
    SUBCASE("linear frequency over [0, 2]") {
        PhaseAccumulator acc{0.0, 0.0};
        acc = accumulate_phase(acc, [](double t) { return t; }, 2.0, cfg);
        CHECK(acc.theta == doctest::Approx(2.0).epsilon(1e-14));
    }
    SUBCASE("Kasner mode frequency against a high-resolution trapezoid") {
        BackgroundModel model = kasner_axisym();
        const ModeIndex mode{{1, 1, 1}, +1};
        auto omega = [&](double t) {
            return kinematic_state(model.evaluate(t), mode, 1.0).omega;
        };
        PhaseAccumulator acc{1.0, 0.0};
        acc = accumulate_phase(acc, omega, 2.0, cfg);

        const int n = 1'000'000;
        long double trapezoid = 0.5L * (omega(1.0) + omega(2.0));
        for (int i = 1; i < n; ++i) trapezoid += omega(1.0 + i / double(n));
        trapezoid /= n;
        CHECK(std::fabs(acc.theta - double(trapezoid)) < 1e-8);
    }
    SUBCASE("monotone growth and vacuous accumulation") {
        PhaseAccumulator acc{0.0, 0.0};
        auto next = accumulate_phase(acc, [](double) { return 1.5; }, 1.0, cfg);
        CHECK(next.theta > acc.theta);
        CHECK(accumulate_phase(acc, [](double) { return 1.5; }, 0.0, cfg).theta == 0.0);
        CHECK_THROWS_AS(accumulate_phase(next, [](double) { return 1.0; }, 0.5, cfg),
                        DomainError);
    }
}
