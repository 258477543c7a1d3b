#pragma once

#include <cstddef>
#include <vector>

namespace anisofermi {

// Gauss-Legendre nodes and weights on (-1, 1), Newton iteration on P_n.
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
};

GaussLegendre gauss_legendre(std::size_t n);

} // namespace anisofermi
