#pragma once

#include <complex>
#include <utility>

namespace anisofermi {

struct TwoSpinor {
    std::complex<double> up{};
    std::complex<double> dn{};
};

inline TwoSpinor operator+(const TwoSpinor& a, const TwoSpinor& b) {
    return {a.up + b.up, a.dn + b.dn};
}
inline TwoSpinor operator-(const TwoSpinor& a, const TwoSpinor& b) {
    return {a.up - b.up, a.dn - b.dn};
}
inline TwoSpinor operator*(std::complex<double> c, const TwoSpinor& s) {
    return {c * s.up, c * s.dn};
}
inline TwoSpinor operator*(double c, const TwoSpinor& s) {
    return {c * s.up, c * s.dn};
}

// a^dagger b
inline std::complex<double> dot(const TwoSpinor& a, const TwoSpinor& b) {
    return std::conj(a.up) * b.up + std::conj(a.dn) * b.dn;
}
inline double norm2(const TwoSpinor& a) { return std::norm(a.up) + std::norm(a.dn); }

// -i sigma_2 conj(s): the literal matrix action (x, y) -> (-conj(y), conj(x)).
inline TwoSpinor flip_conj(const TwoSpinor& s) {
    return {-std::conj(s.dn), std::conj(s.up)};
}

// Chiral (massless-limit) helicity basis built from (q, q3, Phi, r):
//   R1 = (  sqrt((q-r q3)/q) e^{-i Phi/2}, -r sqrt((q+r q3)/q) e^{+i Phi/2} )
//   R2 = ( r sqrt((q+r q3)/q) e^{-i Phi/2},   sqrt((q-r q3)/q) e^{+i Phi/2} )
// Normalization R_i^+ R_i = 2, R1^+ R2 = 0, and R2 = -i sigma_2 conj(R1).
// sigma.qhat R1 = -r R1, sigma.qhat R2 = +r R2.
struct ChiralBasis {
    TwoSpinor R1, R2;
    int helicity = +1;
};

ChiralBasis chiral_spinors(double q, double q3, double phi, int r);

// Massive basis mixing the chiral states with weights c = q/omega, s = m/omega:
//   P1 = c R1 + s R2          P2 = r (c R1 - s R2)
//   P3 = s R1 + c R2          P4 = r (c R2 - s R1)
// These diagonalize the instantaneous mode Hamiltonian: the pairs
// (sqrt(omega-m) P1, r sqrt(omega+m) P2) and (r sqrt(omega+m) P3, sqrt(omega-m) P4)
// are the energy -omega / +omega eigenmodes of the (f, phi) system. They obey
//   P_i^+ P_i = 2,  P1^+ P3 = -P2^+ P4 = 4 m q / omega^2,
//   P3 = r (-i sigma_2 conj P2),  P4 = r (-i sigma_2 conj P1),
// and P1 -> R1, P3 -> R2 in the massless limit.
struct MassiveBasis {
    TwoSpinor P1, P2, P3, P4;
    int helicity = +1;
};

MassiveBasis massive_spinors(const ChiralBasis& cb, double q, double mass,
                             double omega);

struct ModePair {
    TwoSpinor f, phi;
};

// Mode functions from Bogoliubov amplitudes, e_pm = exp(+-i Theta):
//   f   = (1/2) omega^{-1/2} [ sqrt(omega-m) P1 conj(alpha) e_+ + r sqrt(omega+m) P3 beta e_- ]
//   phi = (1/2) omega^{-1/2} [ r sqrt(omega+m) P2 conj(alpha) e_+ + sqrt(omega-m) P4 beta e_- ]
ModePair reconstruct_mode(const MassiveBasis& mb, std::complex<double> alpha,
                          std::complex<double> beta, double theta, double omega,
                          double mass);

// Exact inverse of reconstruct_mode (the adjoint of the orthonormal mode pair):
//   conj(alpha) = (1/2) omega^{-1/2} e_- [ sqrt(omega-m) P1^+ f + r sqrt(omega+m) P2^+ phi ]
//   beta        = (1/2) omega^{-1/2} e_+ [ r sqrt(omega+m) P3^+ f + sqrt(omega-m) P4^+ phi ]
// Returns (alpha, beta).
std::pair<std::complex<double>, std::complex<double>>
project_bogoliubov(const MassiveBasis& mb, const TwoSpinor& f, const TwoSpinor& phi,
                   double theta, double omega, double mass);

} // namespace anisofermi
