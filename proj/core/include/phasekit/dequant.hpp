#pragma once

#include <string>
#include <vector>

#include "phasekit/classrep.hpp"
#include "phasekit/frame.hpp"

namespace phasekit {

// c * q^a * p^b
struct Monomial {
  int q_power = 0;
  int p_power = 0;
  double coefficient = 0.0;
};

// Polynomial-plus-constant phase-space function f_A whose Husimi integral
// reproduces tr(W A). Symbols: Q, P, Q2, P2, H, custom.
struct Dequantizer {
  std::string symbol;
  std::vector<Monomial> terms;
  double constant = 0.0;
  OscParams params;

  double operator()(double q, double p) const;
  // The paired quantum operator on the first D basis states. Q2 and P2 are the
  // exact blocks of Q^2 and P^2, not squares of truncated matrices.
  CMatrix quantum_operator(int D) const;
};

// Built from the frame's confidence-function moments:
//   f_Q = q - <eta^Q>,  f_Q2 = (q - <eta^Q>)^2 - var eta^Q, and likewise for P;
//   f_H = f_P2 / 2m + m omega^2 f_Q2 / 2.
// For a centred Gaussian frame f_H = H(q,p) - (1/(8 m s^2) + m omega^2 s^2 / 2).
Dequantizer dequantizer_for(const std::string& symbol, const FrameSpec& frame);
// Closed forms for the pure Gaussian frame of width params.sigma.
Dequantizer dequantizer_for(const std::string& symbol, const OscParams& params);

struct DequantizerCheck {
  double quantum = 0.0;   // tr(W A)
  double classical = 0.0; // sum rho f dq dp
  double discrepancy = 0.0;
};

// Throws PreconditionError when symbol is Q2, P2 or H and W has weight above
// the trusted block exceeding 1e-8.
DequantizerCheck check_dequantizer(const CMatrix& W, const std::string& symbol, const FrameSpec& frame,
                                   const PhaseGrid& grid);
DequantizerCheck check_dequantizer(const CMatrix& W, const Dequantizer& f, const DensityField& rho);

// rho_n(q,p) = (1/(2 pi n!)) (H/omega)^n e^{-H/omega}; matched frame only.
PhaseFunction oscillator_density(int n, const OscParams& params);
DensityField oscillator_density_field(int n, const OscParams& params, const PhaseGrid& grid);

// rho^_n(E) = E^n e^{-E/omega} / (n! omega^{n+1}) and its distribution function.
std::function<double(double)> energy_density(int n, const OscParams& params);
double energy_cdf(int n, const OscParams& params, double E);

// Default upper energy for histograms: omega (D + 10 sqrt(D)).
inline double default_energy_max(const OscParams& params, int D) {
  return params.omega * (D + 10.0 * std::sqrt(static_cast<double>(D)));
}

struct EnergyHistogram {
  double bin_width = 0.0;
  std::vector<double> density; // bin b covers [b w, (b+1) w)
  double overflow = 0.0;       // mass above the last bin
  double mean = 0.0;           // mean energy of the binned mass (bin centres)

  double bin_center(int b) const { return (b + 0.5) * bin_width; }
};

// Push-forward of rho under H(q,p). Each grid cell is split into subsample^2
// sub-points carrying equal shares of its mass.
EnergyHistogram energy_histogram(const DensityField& rho, const OscParams& params, double bin_width,
                                 double energy_max, int subsample = 8);

struct EffectDequantization {
  std::vector<double> f;       // samples on the grid
  Dequantizer polynomial;      // least-squares quadratic part
  bool corrected = false;      // a minimum-norm grid correction was added
  int rank = 0;                // numerical rank of the Husimi map on D x D operators
  double residual = 0.0;       // || (1/2pi) sum f_k a_k dq dp - A ||_F
  double probe_discrepancy = 0.0; // max over probes of |tr W A - sum rho_W f|
};

// Least-squares f with (1/2pi) sum_k f_k a_k dq dp ~ A. First fits a quadratic
// polynomial in (q,p); if that leaves a Frobenius residual above 1e-6, adds the
// minimum-norm grid correction (truncated SVD, relative threshold 1e-8).
EffectDequantization dequantize_effect(const CMatrix& A, const FrameSpec& frame, const PhaseGrid& grid,
                                       const std::vector<CMatrix>& probes);

} // namespace phasekit
