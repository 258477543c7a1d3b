#pragma once

#include <complex>
#include <vector>

#include "anisofermi/background.hpp"
#include "anisofermi/integrator.hpp"
#include "anisofermi/kinematics.hpp"
#include "anisofermi/spinor_basis.hpp"

namespace anisofermi {

// Bogoliubov amplitudes with the carried phase Theta. Vacuum: alpha=1, beta=0.
// |alpha|^2 + |beta|^2 = 1 along the flow.
struct BogoliubovState {
    std::complex<double> alpha{1.0, 0.0};
    std::complex<double> beta{0.0, 0.0};
    double theta = 0;
};

// Real mode variables: occupation S = |beta|^2 and the two quadratures of the
// pair correlation, U = -2 Re(alpha beta e_-^2), V = -2 Im(alpha beta e_-^2),
// obeying U^2 + V^2 = 4 S (1 - S).
struct SUVState {
    double s = 0;
    double u = 0;
    double v = 0;
    double theta = 0;
};

struct DiracModeState {
    TwoSpinor f, phi;
};

// d/dt of (alpha, beta, Theta) for given couplings and K0:
//   d(conj alpha)/dt = ( w/2 + i w_perp/2) beta e_-^2       - i (w3/2) conj(alpha)
//   d beta/dt        = (-w/2 + i w_perp/2) conj(alpha) e_+^2 + i (w3/2) beta
//   d Theta/dt       = K0
BogoliubovState rhs_complex(const BogoliubovState& st, const CouplingCoefficients& c,
                            double k0);

//   dS/dt = (w/2) U - (w_perp/2) V
//   dU/dt = w (1 - 2S) + (2 K0 - w3) V
//   dV/dt = -w_perp (1 - 2S) - (2 K0 - w3) U
SUVState rhs_suv(const SUVState& st, const CouplingCoefficients& c, double k0);

SUVState derive_suv(const BogoliubovState& st);
inline double constraint_residual(const SUVState& st) {
    return std::fabs(st.u * st.u + st.v * st.v - 4.0 * st.s * (1.0 - st.s));
}

enum class Formulation { suv, complex_pair, dirac_oracle };

struct ModeTrajectory {
    std::vector<double> times;
    std::vector<SUVState> states;
    std::vector<BogoliubovState> amplitudes;  // complex_pair / dirac_oracle only
    std::vector<double> norms;                // dirac_oracle: f^+f + phi^+phi
    double max_constraint_residual = 0;
};

// Integrates one mode from vacuum at t_start, with dense output at
// cfg.output_times (ascending, all >= t_start). Theta rides along as a state
// component so the e_+-^2 factors stay synchronized with the stepper.
ModeTrajectory integrate_mode(const ModeIndex& mode, const BackgroundModel& model,
                              double mass, double t_start,
                              const IntegratorConfig& cfg,
                              const CouplingStrategy& strategy,
                              Formulation formulation);

// Independent cross-check: integrates the first-order spinor mode equations
//   df/dt   = -i ( m f + r q_s sigma^s phi)
//   dphi/dt = -i (-m phi + r q_s sigma^s f)
// directly, starting from the instantaneous vacuum mode at t_start, and
// projects (f, phi) back onto Bogoliubov amplitudes through the instantaneous
// basis at every output time.
ModeTrajectory integrate_dirac_oracle(const ModeIndex& mode,
                                      const BackgroundModel& model, double mass,
                                      double t_start, const IntegratorConfig& cfg);

} // namespace anisofermi
