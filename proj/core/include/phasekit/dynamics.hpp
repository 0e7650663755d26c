#pragma once

#include <vector>

#include "phasekit/classrep.hpp"
#include "phasekit/frame.hpp"

namespace phasekit {

// e^{-iHt} W e^{iHt}
CMatrix evolve_state(const CMatrix& W, const CMatrix& H, double t);

struct FlowPoint {
  double q = 0.0;
  double p = 0.0;
  double t = 0.0;
};

// Oscillator flow: q_t = q cos wt + (p/mw) sin wt, p_t = p cos wt - mwq sin wt.
FlowPoint classical_flow(double q, double p, double t, const OscParams& params);

// Husimi density of the evolved state; oscillator Hamiltonian unless H is given.
DensityField evolve_density(const CMatrix& W, const FrameSpec& frame, const PhaseGrid& grid, double t);
DensityField evolve_density(const CMatrix& W, const CMatrix& H, const FrameSpec& frame, const PhaseGrid& grid,
                            double t);
std::vector<DensityField> evolve_density(const CMatrix& W, const FrameSpec& frame, const PhaseGrid& grid,
                                         const std::vector<double>& times);

// Bilinear interpolation of a density at an arbitrary point; false outside the grid.
bool interpolate(const DensityField& rho, double q, double p, double& value);

struct LiouvilleReport {
  double max_error = 0.0;   // rho_0 o Phi_{-t} by bilinear interpolation of the rho_0 samples
  double exact_error = 0.0; // rho_0 o Phi_{-t} evaluated directly at the pre-image
  std::size_t points = 0;   // interior points whose pre-image lies on the grid
};

// max over the interior (two cells in from the edge) of |rho_t - rho_0 o Phi_{-t}|.
// max_error is interpolation-limited (second order in the spacing); exact_error
// isolates the identity itself. Matched frame only.
LiouvilleReport liouville_match(const CMatrix& W, const FrameSpec& frame, const PhaseGrid& grid, double t);

struct CoherentEvolutionReport {
  double defect = 0.0;  // |1 - <e^{-iHt} u_qp, e^{i(qp - q_t p_t - wt)/2} u_{q_t p_t}>|
  cplx return_amplitude; // <u_qp, e^{-iHt} u_qp>
  FlowPoint end;
};

CoherentEvolutionReport coherent_evolution_check(double q, double p, double t, const OscParams& params, int D);

// -1/(4 m s^2) + m omega^2 s^2: zero for the matched width.
double correction_coefficient(const OscParams& params);

struct GeneratorResidual {
  DensityField residual; // zero within two cells of the edge
  double max_residual = 0.0;
  double max_time_derivative = 0.0;
  double max_rhs = 0.0;
  double coefficient = 0.0;
};

// d rho/dt at t = 0 (symmetric difference, step 1e-4/omega) against
// -(p/m) d_q rho + m omega^2 q d_p rho + c d_q d_p rho (fourth-order stencils).
// Pure states only.
GeneratorResidual generator_residual(const CMatrix& W, const FrameSpec& frame, const PhaseGrid& grid);

} // namespace phasekit
