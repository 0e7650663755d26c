#pragma once

#include <vector>

#include "phasekit/frame.hpp"
#include "phasekit/grid.hpp"

namespace phasekit {

struct PhasePoint {
  double q = 0.0;
  double p = 0.0;
};

// <phi_n|u^sigma_qp>, n < D. Closed form e^{iqp/2} e^{-|z|^2/2} conj(z)^n / sqrt(n!)
// when sigma = sigma_g; otherwise the displaced-Gaussian route (closed_form = false).
struct CoherentOverlaps {
  CVector c;
  bool closed_form = true;
};
CoherentOverlaps coherent_overlaps(double q, double p, const OscParams& params, int D);

// z = (q/sigma - 2 i sigma p)/2 for the frame width sigma.
cplx frame_z(double q, double p, const OscParams& params);

// A grid is adequate for (frame, D) when max_{n<D} |<phi_n|U_qp u>| < 1e-12 at
// the four boundary mid-edges.
struct GridAdequacy {
  bool adequate = false;
  double boundary_max = 0.0;
};
GridAdequacy grid_adequacy(const FrameSpec& frame, const PhaseGrid& grid);

// Smallest centred grid (half-widths on a 0.25 lattice) that is adequate.
PhaseGrid auto_grid(const FrameSpec& frame, double spacing);

// Psi(q,p) = (1/sqrt(2 pi)) <u_qp|psi>. Pure frames only.
WaveField phase_transform(const CVector& psi, const FrameSpec& frame, const PhaseGrid& grid);
cplx phase_value(const CVector& psi, const FrameSpec& frame, double q, double p);

// Same with Weyl-ordered frame vectors U^W_qp u.
WaveField weyl_phase_transform(const CVector& psi, const FrameSpec& frame, const PhaseGrid& grid);

struct ResolutionReport {
  double defect = 0.0; // max |(1/2pi) sum |u_k><u_k| w - I| over the block
  int block = 0;
  bool adequate = false;
  double boundary_max = 0.0;
};
// block = 0 selects the trusted block ceil(D/2). Throws InadequateGridError for an
// empty grid; an under-sized grid is reported, not rejected.
ResolutionReport resolution_check(const FrameSpec& frame, const PhaseGrid& grid, int block = 0);

// K(x,y) = (1/2pi) <u_x|u_y>, pure frames.
cplx kernel(PhasePoint x, PhasePoint y, const FrameSpec& frame);
// max over probe pairs of |K(x,y) - sum_z K(x,z) K(z,y) dq dp|
double kernel_reproducing_check(const FrameSpec& frame, const PhaseGrid& grid, const std::vector<PhasePoint>& probe);

enum class PdeOperator { Q, P, H_general, H_matched };

// Finite-difference image of Psi under the phase-space form of the operator.
// Generic forms: Q -> i d/dp, P -> p - i d/dq, H -> (6.26 form). With
// `gaussian_form` the coherent-frame forms are used instead
// (Q -> q + 2 s^2 d/dq, P -> p + (iq + d/dp)/(2 s^2), H -> second-order q-only form);
// H_matched always uses the first-order matched form. Values within two cells of
// the boundary are left at zero.
WaveField apply_phase_operator(PdeOperator op, const WaveField& Psi, const OscParams& params, bool gaussian_form);

struct PdeReport {
  double residual = 0.0;
  bool spacing_ok = true; // false when the stencil step exceeds 0.1
  std::size_t points = 0; // interior points compared
};
// max |V(A psi) - A_phase (V psi)| over the interior, maximized over all forms
// valid for the frame.
PdeReport pde_residual(PdeOperator op, const CVector& psi, const FrameSpec& frame, const PhaseGrid& grid);

enum class Gauge { none, qp, half_qp };
WaveField gauge_transform(const WaveField& Psi, Gauge gauge);

// a_n = <phi_n|psi> / sqrt(n!): monomial coefficients of f(z) = sum a_n z^n.
CVector bargmann_transform(const CVector& psi, const FrameSpec& frame);
cplx bargmann_eval(const CVector& coeffs, cplx z);
// sum |a_n|^2 n!
double bargmann_norm2(const CVector& coeffs);

enum class BargmannOp { Q, P, a, adag, H };
struct BargmannOpsReport {
  double residual = 0.0;
  bool truncated = false; // the operator pushed weight past index D-1
};
BargmannOpsReport bargmann_ops_check(BargmannOp op, const CVector& psi, const FrameSpec& frame);

// f(xi,eta) = sqrt(2pi) e^{(xi^2+eta^2)/2 - i xi eta} Psi(2 s xi, -eta/s) sampled on a
// grid in (xi, eta); returns max interior |df/deta - i df/dxi|.
double cauchy_riemann_residual(const CVector& psi, const FrameSpec& frame, const PhaseGrid& xi_eta);

} // namespace phasekit
