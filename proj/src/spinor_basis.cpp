#include "anisofermi/spinor_basis.hpp"

#include <cmath>

#include "anisofermi/error.hpp"

namespace anisofermi {

ChiralBasis chiral_spinors(double q, double q3, double phi, int r) {
    if (!(q > 0)) throw DomainError("chiral spinors need q > 0");
    if (r != 1 && r != -1) throw DomainError("helicity must be +-1");
    if (std::fabs(q3) > q * (1.0 + 4e-16))
        throw DomainError("chiral spinors need |q3| <= q");

    // max(.,0) absorbs 1-ulp negatives at the poles q3 = -+ r q.
    const double u = std::sqrt(std::max(0.0, (q - r * q3) / q));
    const double v = std::sqrt(std::max(0.0, (q + r * q3) / q));
    const std::complex<double> em{std::cos(phi / 2), -std::sin(phi / 2)};  // e^{-i phi/2}
    const std::complex<double> ep = std::conj(em);

    ChiralBasis cb;
    cb.helicity = r;
    cb.R1 = {u * em, -double(r) * v * ep};
    cb.R2 = {double(r) * v * em, u * ep};
    return cb;
}

MassiveBasis massive_spinors(const ChiralBasis& cb, double q, double mass,
                             double omega) {
    if (!(q > 0) || mass < 0) throw DomainError("massive spinors need q > 0, m >= 0");
    const double expected = std::hypot(q, mass);
    if (std::fabs(omega - expected) > 1e-12 * std::max(1.0, expected))
        throw DomainError("massive spinors: omega inconsistent with sqrt(q^2 + m^2)");

    const double c = q / omega;
    const double s = mass / omega;
    const double r = cb.helicity;

    MassiveBasis mb;
    mb.helicity = cb.helicity;
    mb.P1 = c * cb.R1 + s * cb.R2;
    mb.P2 = r * (c * cb.R1 - s * cb.R2);
    mb.P3 = s * cb.R1 + c * cb.R2;
    mb.P4 = r * (c * cb.R2 - s * cb.R1);
    return mb;
}

ModePair reconstruct_mode(const MassiveBasis& mb, std::complex<double> alpha,
                          std::complex<double> beta, double theta, double omega,
                          double mass) {
    if (!(omega >= mass)) throw DomainError("reconstruct_mode needs omega >= m");
    const double gm = std::sqrt(std::max(0.0, omega - mass));
    const double gp = std::sqrt(omega + mass);
    const double norm = 0.5 / std::sqrt(omega);
    const double r = mb.helicity;
    const std::complex<double> eplus{std::cos(theta), std::sin(theta)};
    const std::complex<double> eminus = std::conj(eplus);
    const std::complex<double> za = std::conj(alpha) * eplus;
    const std::complex<double> zb = beta * eminus;

    ModePair out;
    out.f = norm * ((gm * za) * mb.P1 + (r * gp * zb) * mb.P3);
    out.phi = norm * ((r * gp * za) * mb.P2 + (gm * zb) * mb.P4);
    return out;
}

std::pair<std::complex<double>, std::complex<double>>
project_bogoliubov(const MassiveBasis& mb, const TwoSpinor& f, const TwoSpinor& phi,
                   double theta, double omega, double mass) {
    if (!(omega >= mass)) throw DomainError("project_bogoliubov needs omega >= m");
    const double gm = std::sqrt(std::max(0.0, omega - mass));
    const double gp = std::sqrt(omega + mass);
    const double norm = 0.5 / std::sqrt(omega);
    const double r = mb.helicity;
    const std::complex<double> eplus{std::cos(theta), std::sin(theta)};
    const std::complex<double> eminus = std::conj(eplus);

    const std::complex<double> conj_alpha =
        norm * eminus * (gm * dot(mb.P1, f) + r * gp * dot(mb.P2, phi));
    const std::complex<double> beta =
        norm * eplus * (r * gp * dot(mb.P3, f) + gm * dot(mb.P4, phi));
    return {std::conj(conj_alpha), beta};
}

} // namespace anisofermi
