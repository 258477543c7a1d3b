#include "anisofermi/observables.hpp"

#include <cmath>

#include "anisofermi/error.hpp"
#include "anisofermi/quadrature.hpp"

namespace anisofermi {

MomentumGrid MomentumGrid::logarithmic(double k_min, double k_max, std::size_t n_k,
                                       std::size_t n_theta, std::size_t n_phi) {
    if (!(k_min > 0)) throw ConfigError("k_min must be positive");
    if (!(k_max > k_min)) throw ConfigError("k_max must exceed k_min");
    if (n_k < 2 || n_theta < 2 || n_phi < 2)
        throw ConfigError("grid needs at least 2 nodes per dimension");
    if (n_theta % 2 != 0)
        throw ConfigError("n_theta must be even (keeps cos(theta) = 0 off the grid)");

    MomentumGrid grid;
    grid.k_min = k_min;
    grid.k_max = k_max;
    grid.n_k = n_k;
    grid.n_theta = n_theta;
    grid.n_phi = n_phi;
    grid.nodes.reserve(n_k * n_theta * n_phi);

    const GaussLegendre glk = gauss_legendre(n_k);
    const GaussLegendre glt = gauss_legendre(n_theta);
    const double lmin = std::log(k_min), lmax = std::log(k_max);
    const double lhalf = 0.5 * (lmax - lmin), lmid = 0.5 * (lmax + lmin);
    const double wphi = 2.0 * M_PI / double(n_phi);

    for (std::size_t ik = 0; ik < n_k; ++ik) {
        const double lnk = lmid + lhalf * glk.nodes[ik];
        const double k = std::exp(lnk);
        const double wk = lhalf * glk.weights[ik] * k * k * k;  // k^3 dlnk
        for (std::size_t it = 0; it < n_theta; ++it) {
            const double ct = glt.nodes[it];
            const double wt = glt.weights[it];
            for (std::size_t ip = 0; ip < n_phi; ++ip) {
                Node node;
                node.k = k;
                node.costheta = ct;
                node.phi = (double(ip) + 0.5) * wphi;
                node.weight = wk * wt * wphi;
                grid.nodes.push_back(node);
            }
        }
    }
    return grid;
}

KernelValues kernels(const SUVState& suv, const KinematicState& ks, double mass) {
    if (!(ks.omega > 0)) throw DomainError("kernels need omega > 0");
    if (ks.qperp == 0) throw DomainError("kernels are singular at qperp = 0");
    if (ks.q3 == 0) throw DomainError("kernels are singular at q3 = 0");

    const double w2 = ks.omega * ks.omega;
    const double chi = (ks.qnorm * ks.qnorm - mass * mass) / w2;
    const double mterm = mass * mass * suv.u / (w2 * ks.omega);

    KernelValues kv;
    kv.x = suv.s / ks.omega + 0.5 * (ks.q3 * suv.u) / (ks.omega * ks.qperp) * chi + mterm;
    kv.y = suv.s / ks.omega - 0.5 * (ks.qperp * suv.u) / (ks.omega * ks.q3) * chi + mterm;
    kv.z = -0.5 * suv.v / ks.qperp;
    return kv;
}

std::array<double, 7> stress_integrand(const SUVState& suv, const KinematicState& ks,
                                       double mass, const StressOptions& opt) {
    const KernelValues kv = kernels(suv, ks, mass);
    const double qp2 = ks.qperp * ks.qperp;
    const double c1 = std::cos(ks.phi), s1 = std::sin(ks.phi);
    const double c2 = std::cos(2 * ks.phi), s2 = std::sin(2 * ks.phi);
    const double mix = kv.x * c2 - kv.z * s2;
    const double zsign = opt.t23_z_plus ? +1.0 : -1.0;

    return {
        ks.omega * suv.s,
        qp2 * (kv.x + mix),
        qp2 * (kv.x - mix),
        ks.q3 * ks.q3 * kv.y,
        qp2 * ks.qperp * kv.x * s2,  // the printed extra power of qperp
        ks.qperp * ks.q3 * ((kv.x + kv.y) * c1 - kv.z * s1),
        ks.qperp * ks.q3 * ((kv.x + kv.y) * s1 + zsign * kv.z * c1),
    };
}

namespace {

// Neumaier compensated accumulator; deterministic given a fixed visit order.
struct Compensated {
    double sum = 0;
    double comp = 0;
    void add(double x) {
        const double t = sum + x;
        if (std::fabs(sum) >= std::fabs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

} // namespace

StressTensor integrate_stress(const MomentumGrid& grid, std::span<const SUVState> states,
                              const BackgroundState& bg, double mass,
                              const StressOptions& opt) {
    const std::size_t n = grid.nodes.size();
    if (states.size() != 2 * n)
        throw ConfigError("integrate_stress needs one state per (node, helicity)");

    std::array<Compensated, 7> acc{};
    Compensated occ;
    for (std::size_t ir = 0; ir < 2; ++ir) {  // r = +1 first, then r = -1
        for (std::size_t j = 0; j < n; ++j) {
            const auto& node = grid.nodes[j];
            const ModeIndex mode{grid.wavevector(node), ir == 0 ? +1 : -1};
            const KinematicState ks = kinematic_state(bg, mode, mass);
            const auto integrand = stress_integrand(states[ir * n + j], ks, mass, opt);
            for (int c = 0; c < 7; ++c) acc[c].add(node.weight * integrand[c]);
            occ.add(node.weight * states[ir * n + j].s);
        }
    }

    const double a = bg.mean_scale;
    const double pref = 1.0 / (8.0 * M_PI * M_PI * M_PI * a * a * a * a);
    StressTensor out;
    out.t00 = pref * acc[0].value();
    out.t11 = pref * acc[1].value();
    out.t22 = pref * acc[2].value();
    out.t33 = pref * acc[3].value();
    out.t12 = pref * acc[4].value();
    out.t13 = pref * acc[5].value();
    out.t23 = pref * acc[6].value();
    out.n = occ.value() / (8.0 * M_PI * M_PI * M_PI * a * a * a);
    return out;
}

double number_density(const MomentumGrid& grid, std::span<const SUVState> states,
                      const BackgroundState& bg) {
    const std::size_t n = grid.nodes.size();
    if (states.size() != 2 * n)
        throw ConfigError("number_density needs one state per (node, helicity)");
    Compensated acc;
    for (std::size_t ir = 0; ir < 2; ++ir)
        for (std::size_t j = 0; j < n; ++j)
            acc.add(grid.nodes[j].weight * states[ir * n + j].s);
    const double a = bg.mean_scale;
    return acc.value() / (8.0 * M_PI * M_PI * M_PI * a * a * a);
}

} // namespace anisofermi
