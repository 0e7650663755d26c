#pragma once

#include <random>

#include "phasekit/linalg.hpp"

namespace phasekit {

using Rng = std::mt19937_64;

// Normalized Ginibre density on the first `support` basis states of a D-dim space.
CMatrix random_density(int D, int support, Rng& rng);
// Unit vector with Gaussian coefficients on the first `support` basis states.
CVector random_pure(int D, int support, Rng& rng);
CMatrix random_hermitian(int D, Rng& rng);

} // namespace phasekit
