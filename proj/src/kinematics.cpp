#include "anisofermi/kinematics.hpp"

#include <cmath>

#include "anisofermi/error.hpp"

namespace anisofermi {

std::array<double, 3> physical_momentum(const BackgroundState& bg,
                                        const std::array<double, 3>& k) {
    return {k[0] / bg.scale[0], k[1] / bg.scale[1], k[2] / bg.scale[2]};
}

KinematicState kinematic_state(const BackgroundState& bg, const ModeIndex& mode,
                               double mass) {
    KinematicState ks;
    ks.q = physical_momentum(bg, mode.k);
    ks.hubble = bg.hubble;
    for (int i = 0; i < 3; ++i) ks.qdot[i] = -bg.hubble[i] * ks.q[i];

    ks.qnorm = std::sqrt(ks.q[0] * ks.q[0] + ks.q[1] * ks.q[1] + ks.q[2] * ks.q[2]);
    if (ks.qnorm <= 0) throw DomainError("mode has zero physical momentum");
    ks.qperp = std::hypot(ks.q[0], ks.q[1]);
    ks.q3 = ks.q[2];
    ks.omega = std::sqrt(ks.qnorm * ks.qnorm + mass * mass);
    ks.phi = std::atan2(ks.q[1], ks.q[0]);

    ks.qnormdot = -(bg.hubble[0] * ks.q[0] * ks.q[0] + bg.hubble[1] * ks.q[1] * ks.q[1] +
                    bg.hubble[2] * ks.q[2] * ks.q[2]) /
                  ks.qnorm;
    ks.q3dot = ks.qdot[2];
    ks.omegadot = ks.qnorm * ks.qnormdot / ks.omega;
    const double qp2 = ks.qperp * ks.qperp;
    ks.phidot = qp2 > 0 ? ks.q[0] * ks.q[1] * (bg.hubble[0] - bg.hubble[1]) / qp2 : 0.0;
    return ks;
}

namespace {

// (q3 qdot - q3dot q) / qperp without the catastrophic cancellation of the
// literal form: q3 [(H3-H1) q1^2 + (H3-H2) q2^2] / (q qperp), which vanishes
// identically for isotropic expansion. Zero at qperp = 0 (the numerator is
// O(qperp^2) there).
double axial_tilt_rate(const KinematicState& ks) {
    if (ks.qperp <= 0) return 0.0;
    const double num = ks.q3 * ((ks.hubble[2] - ks.hubble[0]) * ks.q[0] * ks.q[0] +
                                (ks.hubble[2] - ks.hubble[1]) * ks.q[1] * ks.q[1]);
    return num / (ks.qnorm * ks.qperp);
}

CouplingCoefficients literal_coefficients(const KinematicState& ks, double mass, int r) {
    const double w2 = ks.omega * ks.omega;
    const double chi = (ks.qnorm * ks.qnorm - mass * mass) / w2;  // (q^2-m^2)/omega^2
    CouplingCoefficients c;
    c.w = axial_tilt_rate(ks) / ks.omega * chi +
          2.0 * mass * mass * ks.omegadot / (w2 * ks.omega);
    c.w_perp = r * ks.qperp / ks.omega * ks.phidot;
    c.w3 = r * ks.q3 / ks.omega * ks.phidot * chi +
           2.0 * r * mass * mass * ks.qperp * ks.phidot / (w2 * ks.omega);
    return c;
}

// Exact adiabatic connection of the instantaneous eigenbasis: relative to the
// literal reading, w and w_perp carry the helicity sign and the first term of
// w3 has q3/q in place of q3/omega. See docs/coupling_notes.md.
CouplingCoefficients derived_coefficients(const KinematicState& ks, double mass, int r) {
    CouplingCoefficients c = literal_coefficients(ks, mass, r);
    c.w *= r;
    c.w_perp *= r;
    const double w2 = ks.omega * ks.omega;
    const double chi = (ks.qnorm * ks.qnorm - mass * mass) / w2;
    c.w3 = r * ks.q3 / ks.qnorm * ks.phidot * chi +
           2.0 * r * mass * mass * ks.qperp * ks.phidot / (w2 * ks.omega);
    return c;
}

} // namespace

CouplingStrategy CouplingStrategy::literal_omega_dot() {
    CouplingStrategy s;
    s.kind_ = Kind::literal;
    return s;
}

CouplingStrategy CouplingStrategy::derived_connection() {
    CouplingStrategy s;
    s.kind_ = Kind::derived;
    return s;
}

CouplingStrategy CouplingStrategy::user(CouplingFn fn) {
    CouplingStrategy s;
    s.kind_ = Kind::user;
    s.fn_ = std::move(fn);
    return s;
}

CouplingCoefficients CouplingStrategy::evaluate(const KinematicState& ks, double mass,
                                                int helicity) const {
    CouplingCoefficients c;
    switch (kind_) {
        case Kind::literal: c = literal_coefficients(ks, mass, helicity); break;
        case Kind::derived: c = derived_coefficients(ks, mass, helicity); break;
        case Kind::user: c = fn_(ks, mass, helicity); break;
    }
    if (!std::isfinite(c.w) || !std::isfinite(c.w_perp) || !std::isfinite(c.w3))
        throw NumericError("coupling coefficients non-finite");
    return c;
}

const char* CouplingStrategy::name() const {
    switch (kind_) {
        case Kind::literal: return "literal";
        case Kind::derived: return "derived";
        default: return "user";
    }
}

CouplingCoefficients coupling_coefficients(const KinematicState& ks, double mass,
                                           int helicity,
                                           const CouplingStrategy& strategy) {
    if (!(ks.omega > 0)) throw DomainError("coupling coefficients need omega > 0");
    return strategy.evaluate(ks, mass, helicity);
}

PhaseAccumulator accumulate_phase(PhaseAccumulator acc,
                                  const std::function<double(double)>& omega,
                                  double t, const IntegratorConfig& cfg) {
    if (t < acc.t_last) throw DomainError("phase accumulation target before t_last");
    if (t == acc.t_last) return acc;
    auto rhs = [&omega](double s, const std::array<double, 1>&, std::array<double, 1>& d) {
        d[0] = omega(s);
    };
    ModeStepper<1, decltype(rhs)> stepper(rhs, cfg, cfg.max_step);
    std::array<double, 1> y{acc.theta};
    double tc = acc.t_last;
    stepper.advance(y, tc, t);
    return PhaseAccumulator{t, y[0]};
}

} // namespace anisofermi
