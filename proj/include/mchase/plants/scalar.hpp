#pragma once

#include <cmath>
#include <stdexcept>

namespace mchase::plants {

/// x+ = alpha x + beta u + w with |w| <= eta checked by the caller contract.
inline double scalar_step(double alpha, double beta, double x, double u, double w,
                          double eta) {
    if (std::abs(w) > eta * (1.0 + 1e-12))
        throw std::invalid_argument("scalar_step: disturbance out of bound");
    return alpha * x + beta * u + w;
}

}  // namespace mchase::plants
