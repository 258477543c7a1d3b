#include "anisofermi/quadrature.hpp"

#include <cmath>

#include "anisofermi/error.hpp"

namespace anisofermi {

GaussLegendre gauss_legendre(std::size_t n) {
    if (n < 1) throw ConfigError("Gauss-Legendre rule needs n >= 1");
    GaussLegendre gl;
    gl.nodes.resize(n);
    gl.weights.resize(n);

    const std::size_t half = (n + 1) / 2;
    for (std::size_t i = 0; i < half; ++i) {
        // Tricomi initial guess, then Newton on P_n.
        double x = std::cos(M_PI * (double(i) + 0.75) / (double(n) + 0.5));
        double pp = 0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (std::size_t j = 2; j <= n; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / double(j);
                p0 = p1;
                p1 = p2;
            }
            // p1 = P_n(x), p0 = P_{n-1}(x)
            pp = double(n) * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / pp;
            x -= dx;
            if (std::fabs(dx) < 1e-15) break;
        }
        gl.nodes[i] = -x;
        gl.nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        gl.weights[i] = w;
        gl.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) gl.nodes[n / 2] = 0.0;  // exact symmetry for odd rules
    return gl;
}

} // namespace anisofermi
