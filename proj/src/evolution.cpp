#include "anisofermi/evolution.hpp"

#include <cmath>
#include <sstream>

#include "anisofermi/error.hpp"

namespace anisofermi {

namespace {

using Complex = std::complex<double>;

std::string mode_label(const ModeIndex& mode) {
    std::ostringstream os;
    os << "mode k=(" << mode.k[0] << "," << mode.k[1] << "," << mode.k[2]
       << ") r=" << (mode.helicity > 0 ? "+1" : "-1");
    return os.str();
}

void check_outputs(double t_start, const std::vector<double>& times) {
    if (times.empty()) throw ConfigError("integrator config has no output times");
    double prev = t_start;
    for (double t : times) {
        if (t < prev) throw ConfigError("output times must be ascending and >= t_start");
        prev = t;
    }
}

} // namespace

BogoliubovState rhs_complex(const BogoliubovState& st, const CouplingCoefficients& c,
                            double k0) {
    const Complex i{0.0, 1.0};
    const Complex z1 = std::conj(st.alpha);
    const Complex e2p{std::cos(2 * st.theta), std::sin(2 * st.theta)};
    const Complex e2m = std::conj(e2p);
    const Complex dz1 = (0.5 * c.w + 0.5 * i * c.w_perp) * st.beta * e2m -
                        0.5 * i * c.w3 * z1;
    const Complex dbeta = (-0.5 * c.w + 0.5 * i * c.w_perp) * z1 * e2p +
                          0.5 * i * c.w3 * st.beta;
    BogoliubovState d;
    d.alpha = std::conj(dz1);
    d.beta = dbeta;
    d.theta = k0;
    return d;
}

SUVState rhs_suv(const SUVState& st, const CouplingCoefficients& c, double k0) {
    const double occ = 1.0 - 2.0 * st.s;
    const double rot = 2.0 * k0 - c.w3;
    SUVState d;
    d.s = 0.5 * c.w * st.u - 0.5 * c.w_perp * st.v;
    d.u = c.w * occ + rot * st.v;
    d.v = -c.w_perp * occ - rot * st.u;
    d.theta = k0;
    return d;
}

SUVState derive_suv(const BogoliubovState& st) {
    const Complex e2m{std::cos(2 * st.theta), -std::sin(2 * st.theta)};
    const Complex pair = st.alpha * st.beta * e2m;
    SUVState out;
    out.s = std::norm(st.beta);
    out.u = -2.0 * pair.real();
    out.v = -2.0 * pair.imag();
    out.theta = st.theta;
    return out;
}

namespace {

struct ModeProblem {
    const BackgroundModel& model;
    ModeIndex mode;
    double mass;
    const CouplingStrategy& strategy;
};

// d/dt of (S, U, V, Theta).
struct SuvRhs {
    const ModeProblem& p;
    void operator()(double t, const std::array<double, 4>& y,
                    std::array<double, 4>& dy) const {
        const BackgroundState bg = p.model.evaluate(t);
        const KinematicState ks = kinematic_state(bg, p.mode, p.mass);
        const CouplingCoefficients c = p.strategy.evaluate(ks, p.mass, p.mode.helicity);
        SUVState st{y[0], y[1], y[2], y[3]};
        const SUVState d = rhs_suv(st, c, ks.omega);
        dy = {d.s, d.u, d.v, d.theta};
    }
};

// d/dt of (Re z1, Im z1, Re beta, Im beta, Theta) with z1 = conj(alpha).
struct ComplexRhs {
    const ModeProblem& p;
    void operator()(double t, const std::array<double, 5>& y,
                    std::array<double, 5>& dy) const {
        const BackgroundState bg = p.model.evaluate(t);
        const KinematicState ks = kinematic_state(bg, p.mode, p.mass);
        const CouplingCoefficients c = p.strategy.evaluate(ks, p.mass, p.mode.helicity);
        const Complex i{0.0, 1.0};
        const Complex z1{y[0], y[1]};
        const Complex beta{y[2], y[3]};
        const Complex e2p{std::cos(2 * y[4]), std::sin(2 * y[4])};
        const Complex dz1 =
            (0.5 * c.w + 0.5 * i * c.w_perp) * beta * std::conj(e2p) - 0.5 * i * c.w3 * z1;
        const Complex dbeta =
            (-0.5 * c.w + 0.5 * i * c.w_perp) * z1 * e2p + 0.5 * i * c.w3 * beta;
        dy = {dz1.real(), dz1.imag(), dbeta.real(), dbeta.imag(), ks.omega};
    }
};

// d/dt of (f, phi, Theta) for the first-order spinor mode system.
struct DiracRhs {
    const BackgroundModel& model;
    ModeIndex mode;
    double mass;
    void operator()(double t, const std::array<double, 9>& y,
                    std::array<double, 9>& dy) const {
        const BackgroundState bg = model.evaluate(t);
        const auto q = physical_momentum(bg, mode.k);
        const Complex i{0.0, 1.0};
        const Complex fu{y[0], y[1]}, fd{y[2], y[3]};
        const Complex pu{y[4], y[5]}, pd{y[6], y[7]};
        const double r = mode.helicity;
        const Complex qoff{q[0], -q[1]};  // q1 - i q2
        // (q.sigma) s = (q3 s_up + (q1 - i q2) s_dn, (q1 + i q2) s_up - q3 s_dn)
        const Complex qs_phi_u = q[2] * pu + qoff * pd;
        const Complex qs_phi_d = std::conj(qoff) * pu - q[2] * pd;
        const Complex qs_f_u = q[2] * fu + qoff * fd;
        const Complex qs_f_d = std::conj(qoff) * fu - q[2] * fd;
        const Complex dfu = -i * (mass * fu + r * qs_phi_u);
        const Complex dfd = -i * (mass * fd + r * qs_phi_d);
        const Complex dpu = -i * (-mass * pu + r * qs_f_u);
        const Complex dpd = -i * (-mass * pd + r * qs_f_d);
        const double omega =
            std::sqrt(q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + mass * mass);
        dy = {dfu.real(), dfu.imag(), dfd.real(), dfd.imag(),
              dpu.real(), dpu.imag(), dpd.real(), dpd.imag(), omega};
    }
};

double step_ceiling_for(const IntegratorConfig& cfg, double omega0) {
    if (cfg.max_step > 0) return cfg.max_step;
    return 0.1 / omega0;  // resolve the 2 K0 oscillation
}

MassiveBasis instantaneous_basis(const KinematicState& ks, double mass, int r) {
    const ChiralBasis cb = chiral_spinors(ks.qnorm, ks.q3, ks.phi, r);
    return massive_spinors(cb, ks.qnorm, mass, ks.omega);
}

} // namespace

ModeTrajectory integrate_mode(const ModeIndex& mode, const BackgroundModel& model,
                              double mass, double t_start,
                              const IntegratorConfig& cfg,
                              const CouplingStrategy& strategy,
                              Formulation formulation) {
    if (formulation == Formulation::dirac_oracle)
        return integrate_dirac_oracle(mode, model, mass, t_start, cfg);
    check_outputs(t_start, cfg.output_times);

    const BackgroundState bg0 = model.evaluate(t_start);
    const KinematicState ks0 = kinematic_state(bg0, mode, mass);
    const double ceiling = step_ceiling_for(cfg, ks0.omega);
    const ModeProblem problem{model, mode, mass, strategy};

    ModeTrajectory traj;
    traj.times = cfg.output_times;
    traj.states.reserve(traj.times.size());

    try {
        if (formulation == Formulation::suv) {
            SuvRhs rhs{problem};
            ModeStepper<4, SuvRhs> stepper(rhs, cfg, ceiling);
            std::array<double, 4> y{0, 0, 0, 0};  // vacuum: S = U = V = 0
            double t = t_start;
            for (double tout : traj.times) {
                stepper.advance(y, t, tout);
                SUVState st{y[0], y[1], y[2], y[3]};
                traj.states.push_back(st);
                traj.max_constraint_residual =
                    std::max(traj.max_constraint_residual, constraint_residual(st));
            }
        } else {
            ComplexRhs rhs{problem};
            ModeStepper<5, ComplexRhs> stepper(rhs, cfg, ceiling);
            std::array<double, 5> y{1, 0, 0, 0, 0};  // vacuum: alpha = 1, beta = 0
            double t = t_start;
            traj.amplitudes.reserve(traj.times.size());
            for (double tout : traj.times) {
                stepper.advance(y, t, tout);
                BogoliubovState bst;
                bst.alpha = std::conj(Complex{y[0], y[1]});
                bst.beta = Complex{y[2], y[3]};
                bst.theta = y[4];
                traj.amplitudes.push_back(bst);
                const SUVState st = derive_suv(bst);
                traj.states.push_back(st);
                traj.max_constraint_residual =
                    std::max(traj.max_constraint_residual, constraint_residual(st));
            }
        }
    } catch (const NumericError& e) {
        throw NumericError(std::string(e.what()) + " [" + mode_label(mode) + "]");
    } catch (const DomainError& e) {
        throw DomainError(std::string(e.what()) + " [" + mode_label(mode) + "]");
    }
    return traj;
}

ModeTrajectory integrate_dirac_oracle(const ModeIndex& mode,
                                      const BackgroundModel& model, double mass,
                                      double t_start, const IntegratorConfig& cfg) {
    check_outputs(t_start, cfg.output_times);

    const BackgroundState bg0 = model.evaluate(t_start);
    const KinematicState ks0 = kinematic_state(bg0, mode, mass);
    const double ceiling = step_ceiling_for(cfg, ks0.omega);

    const MassiveBasis mb0 = instantaneous_basis(ks0, mass, mode.helicity);
    const ModePair init = reconstruct_mode(mb0, Complex{1, 0}, Complex{0, 0}, 0.0,
                                           ks0.omega, mass);

    DiracRhs rhs{model, mode, mass};
    ModeStepper<9, DiracRhs> stepper(rhs, cfg, ceiling);
    std::array<double, 9> y{init.f.up.real(),   init.f.up.imag(),
                            init.f.dn.real(),   init.f.dn.imag(),
                            init.phi.up.real(), init.phi.up.imag(),
                            init.phi.dn.real(), init.phi.dn.imag(),
                            0.0};
    double t = t_start;

    ModeTrajectory traj;
    traj.times = cfg.output_times;
    traj.states.reserve(traj.times.size());
    traj.amplitudes.reserve(traj.times.size());
    traj.norms.reserve(traj.times.size());

    try {
        for (double tout : traj.times) {
            stepper.advance(y, t, tout);
            const BackgroundState bg = model.evaluate(tout);
            const KinematicState ks = kinematic_state(bg, mode, mass);
            const MassiveBasis mb = instantaneous_basis(ks, mass, mode.helicity);
            const TwoSpinor f{{y[0], y[1]}, {y[2], y[3]}};
            const TwoSpinor phi{{y[4], y[5]}, {y[6], y[7]}};
            const auto [alpha, beta] = project_bogoliubov(mb, f, phi, y[8], ks.omega, mass);
            BogoliubovState bst{alpha, beta, y[8]};
            traj.amplitudes.push_back(bst);
            traj.norms.push_back(norm2(f) + norm2(phi));
            const SUVState st = derive_suv(bst);
            traj.states.push_back(st);
            traj.max_constraint_residual =
                std::max(traj.max_constraint_residual, constraint_residual(st));
        }
    } catch (const NumericError& e) {
        throw NumericError(std::string(e.what()) + " [" + mode_label(mode) + "]");
    } catch (const DomainError& e) {
        throw DomainError(std::string(e.what()) + " [" + mode_label(mode) + "]");
    }
    return traj;
}

} // namespace anisofermi
