#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "anisofermi/background.hpp"
#include "anisofermi/evolution.hpp"
#include "anisofermi/kinematics.hpp"

namespace anisofermi {

// Momentum-space quadrature for the stress-tensor integrals:
// Gauss-Legendre in ln k over [k_min, k_max] (weight carries the k^3 Jacobian
// of d^3k = k^3 dlnk dcos(theta) dphi), Gauss-Legendre in cos(theta) with an
// even node count (excludes cos(theta) = 0), and uniform half-offset azimuth
// nodes phi_j = (j + 1/2) 2 pi / N_phi (exclude the coordinate planes and
// annihilate low azimuthal harmonics exactly).
struct MomentumGrid {
    struct Node {
        double k = 0;
        double costheta = 0;
        double phi = 0;
        double weight = 0;  // includes the k^3 Jacobian factor
    };

    std::vector<Node> nodes;  // k-major, then costheta, then phi
    double k_min = 0, k_max = 0;
    std::size_t n_k = 0, n_theta = 0, n_phi = 0;

    static MomentumGrid logarithmic(double k_min, double k_max, std::size_t n_k,
                                    std::size_t n_theta, std::size_t n_phi);

    std::array<double, 3> wavevector(const Node& node) const {
        double sintheta = std::sqrt(std::max(0.0, 1.0 - node.costheta * node.costheta));
        return {node.k * sintheta * std::cos(node.phi),
                node.k * sintheta * std::sin(node.phi), node.k * node.costheta};
    }
};

// Per-mode kernels entering the stress integrands:
//   X = S/omega + (1/2) (q3 U)/(omega qperp) (q^2-m^2)/omega^2 + m^2 U / omega^3
//   Y = S/omega - (1/2) (qperp U)/(omega q3) (q^2-m^2)/omega^2 + m^2 U / omega^3
//   Z = -(1/2) V / qperp
struct KernelValues {
    double x = 0, y = 0, z = 0;
};

KernelValues kernels(const SUVState& suv, const KinematicState& ks, double mass);

// The seven nonzero mixed components T^mu_nu (T^0_i = 0 identically) plus the
// comoving number density.
struct StressTensor {
    double t00 = 0, t11 = 0, t22 = 0, t33 = 0, t12 = 0, t13 = 0, t23 = 0;
    double n = 0;
};

struct StressOptions {
    // T^2_3 integrand as printed is qperp q3 [(X+Y) sin(Phi) - Z cos(Phi)];
    // set to flip the Z term to +Z cos(Phi) (the sign symmetric with T^1_3).
    bool t23_z_plus = false;
};

// Integrands in the fixed order (T00, T11, T22, T33, T12, T13, T23):
//   omega S
//   qperp^2 (X + X cos2Phi - Z sin2Phi)
//   qperp^2 (X - X cos2Phi + Z sin2Phi)
//   q3^2 Y
//   qperp^3 X sin2Phi
//   qperp q3 [(X+Y) cosPhi - Z sinPhi]
//   qperp q3 [(X+Y) sinPhi -+ Z cosPhi]
std::array<double, 7> stress_integrand(const SUVState& suv, const KinematicState& ks,
                                       double mass, const StressOptions& opt = {});

// Quadrature assembly: component = 1/((2 pi)^3 a^4) sum_r sum_nodes w * integrand.
// `states` holds one SUVState per (r, node), r-major with r = +1 first, node
// order as in grid.nodes. Summation is compensated and runs in that fixed
// order, so results are bit-identical across runs and thread counts.
StressTensor integrate_stress(const MomentumGrid& grid, std::span<const SUVState> states,
                              const BackgroundState& bg, double mass,
                              const StressOptions& opt = {});

// n = 1/((2 pi)^3 a^3) sum_r int d^3k S_kr >= 0.
double number_density(const MomentumGrid& grid, std::span<const SUVState> states,
                      const BackgroundState& bg);

} // namespace anisofermi
