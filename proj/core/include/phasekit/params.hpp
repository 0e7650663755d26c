#pragma once

#include <cmath>

namespace phasekit {

// Oscillator and frame parameters, hbar = 1.
//
// sigma is the width of the frame Gaussian; it is independent of the
// ladder width sigma_g = 1/sqrt(2 m omega) that fixes the Fock basis.
struct OscParams {
  double m = 1.0;
  double omega = 1.0;
  double sigma = 1.0 / std::sqrt(2.0);

  // Throws InvalidArgument unless m, omega, sigma are finite and positive.
  void validate() const;

  double ladder_width() const { return 1.0 / std::sqrt(2.0 * m * omega); }
  bool matched() const { return std::abs(sigma - ladder_width()) <= 1e-12; }

  // Classical Hamiltonian p^2/2m + m omega^2 q^2/2.
  double energy(double q, double p) const {
    return 0.5 * p * p / m + 0.5 * m * omega * omega * q * q;
  }

  static OscParams matched_to(double m, double omega) {
    return {m, omega, 1.0 / std::sqrt(2.0 * m * omega)};
  }
  OscParams with_sigma(double s) const { return {m, omega, s}; }
};

} // namespace phasekit
