#pragma once

#include <string>
#include <vector>

#include "phasekit/fock.hpp"
#include "phasekit/grid.hpp"

namespace phasekit {

// Ladder-width displacement amplitude alpha = q/(2 sigma_g) + i sigma_g p, so that
// U_qp = e^{iqp/2} D(alpha). Equals conj(z) with z = (q/sigma_g - 2 i sigma_g p)/2.
cplx displacement_alpha(double q, double p, const OscParams& params);

// |z|^2 <= D/4: displaced low-lying states stay inside the basis.
bool in_trusted_region(double q, double p, const OscParams& params, int D);

struct Displacement {
  CMatrix matrix;
  double z_norm2 = 0.0;
  bool trusted = true; // false when |z|^2 > D/4
};

// U_qp = exp(i p Q) exp(-i q P) from the truncated Q, P. The two eigendecompositions
// are done once per builder.
class DisplacementBuilder {
public:
  DisplacementBuilder(const OscParams& params, int D);
  Displacement operator()(double q, double p) const;
  int dim() const { return D_; }

private:
  OscParams params_;
  int D_;
  HermitianEig q_eig_, p_eig_;
};

Displacement displacement_op(double q, double p, const OscParams& params, int D);

// U^W_qp = e^{iqp/2} U_{-q,p}
Displacement weyl_op(double q, double p, const OscParams& params, int D);

// Untruncated matrix elements <phi_m|U_qp|phi_n>, m < rows, n < cols, in
// closed Laguerre form. This is what every phase-space integral uses: the
// truncated exponential is only reliable for |z|^2 << D, while quadrature grids
// reach far beyond that.
void displacement_block(double q, double p, const OscParams& params, int rows, int cols, CMatrix& out);
CMatrix displacement_block(double q, double p, const OscParams& params, int rows, int cols);

// Values of (q,p) -> tr(V U_qp) on a grid.
struct CharSamples {
  PhaseGrid grid;
  std::vector<cplx> values;
  std::string source;
  int D = 0;
  OscParams params;
};

CharSamples char_function(const CMatrix& V, const PhaseGrid& grid, const OscParams& params,
                          const std::string& source = "V");

struct CharReconstruction {
  CMatrix V;
  double boundary_max = 0.0; // largest |tr V U| on the grid boundary
  bool covered = true;       // boundary_max below 1e-10
};

// (1/2pi) sum_k chi_k U_k^dag dq dp
CharReconstruction reconstruct_from_char(const CharSamples& samples, const OscParams& params, int D);

// (1/2pi) sum conj(tr V1 U) tr V2 U dq dp, approximating tr(V1^dag V2).
cplx hs_inner_via_char(const CMatrix& V1, const CMatrix& V2, const PhaseGrid& grid, const OscParams& params);

} // namespace phasekit
