#pragma once

#include <array>
#include <functional>

#include "anisofermi/background.hpp"
#include "anisofermi/integrator.hpp"

namespace anisofermi {

// Comoving wave numbers and helicity label of one spinor mode.
struct ModeIndex {
    std::array<double, 3> k{};
    int helicity = +1;  // r = +-1
};

// Per-mode physical momentum and frequency at one time, with all time
// derivatives in closed form:
//   q_i = k_i / A_i,          dq_i/dt = -H_i q_i,
//   dq/dt = -(sum_i H_i q_i^2)/q,   domega/dt = q qdot / omega,
//   dPhi/dt = q1 q2 (H1 - H2) / qperp^2   (0 when qperp = 0).
struct KinematicState {
    std::array<double, 3> q{};
    std::array<double, 3> qdot{};
    std::array<double, 3> hubble{};  // carried from the background state
    double qnorm = 0;
    double qperp = 0;
    double q3 = 0;
    double omega = 0;
    double phi = 0;  // azimuth of the physical momentum, atan2(q2, q1)
    double qnormdot = 0;
    double q3dot = 0;
    double omegadot = 0;
    double phidot = 0;
};

std::array<double, 3> physical_momentum(const BackgroundState& bg,
                                        const std::array<double, 3>& k);

KinematicState kinematic_state(const BackgroundState& bg, const ModeIndex& mode,
                               double mass);

// Coupling coefficients of the reduced two-level mode system:
//   w      drives S,
//   w_perp = r (qperp/omega) Phidot,
//   w3     shifts the rotation rate 2 K0.
struct CouplingCoefficients {
    double w = 0;
    double w_perp = 0;
    double w3 = 0;
};

using CouplingFn =
    std::function<CouplingCoefficients(const KinematicState&, double mass, int helicity)>;

// The default "literal" strategy evaluates
//   w  = [(q3 qdot - q3dot q)/(omega qperp)] (q^2-m^2)/omega^2 + 2 m^2 omegadot/omega^3
//   w3 = r (q3/omega) Phidot (q^2-m^2)/omega^2 + 2 r m^2 qperp Phidot / omega^3
// with the first factor of w in the cancellation-free form
//   (q3 qdot - q3dot q)/qperp = q3 [(H3-H1) q1^2 + (H3-H2) q2^2] / (q qperp),
// defined as 0 at qperp = 0.
//
// The "derived" strategy is the exact adiabatic connection of the instantaneous
// eigenbasis (see docs/coupling_notes.md): it multiplies w and w_perp by r and
// replaces q3/omega by q3/q in the first term of w3. The two strategies give
// identical occupation numbers whenever the background is axisymmetric about
// the third axis (Phidot = 0).
class CouplingStrategy {
public:
    static CouplingStrategy literal_omega_dot();
    static CouplingStrategy derived_connection();
    static CouplingStrategy user(CouplingFn fn);

    CouplingCoefficients evaluate(const KinematicState& ks, double mass,
                                  int helicity) const;
    const char* name() const;

private:
    enum class Kind { literal, derived, user };
    Kind kind_ = Kind::literal;
    CouplingFn fn_;
};

CouplingCoefficients coupling_coefficients(const KinematicState& ks, double mass,
                                           int helicity,
                                           const CouplingStrategy& strategy);

// Accumulated WKB phase Theta(t) = int_{t0}^{t} K0 dt', K0 = omega.
struct PhaseAccumulator {
    double t_last = 0;
    double theta = 0;
};

PhaseAccumulator accumulate_phase(PhaseAccumulator acc,
                                  const std::function<double(double)>& omega,
                                  double t, const IntegratorConfig& cfg);

} // namespace anisofermi
