#pragma once

#include <string>
#include <vector>

#include "phasekit/grid.hpp"
#include "phasekit/linalg.hpp"
#include "phasekit/params.hpp"

namespace phasekit {

enum class OperatorKind { general, hermitian, density, unitary };

const char* to_string(OperatorKind k);
OperatorKind operator_kind_from_string(const std::string& s);

struct CanonicalOps {
  CMatrix Q, P, a, adag, H;
};

// Truncated canonical operators in the number basis of width sigma_g.
// Q = sigma_g (a + a^dag), P = (a - a^dag) / (2 i sigma_g), H = omega (n + 1/2).
CanonicalOps build_canonical(const OscParams& params, int D);

// Top-left D x D block of the untruncated Q^2 and P^2. Differs from the square of
// the truncated Q in the last diagonal entry.
CMatrix position_squared(const OscParams& params, int D);
CMatrix momentum_squared(const OscParams& params, int D);

// Identity checks are asserted on the top-left ceil(D/2) block only.
inline int trusted_block(int D) { return (D + 1) / 2; }

CVector basis_vector(int n, int D);
CMatrix projector(const CVector& psi);

// phi_0(x) .. phi_{count-1}(x) for Hermite functions of the given width:
// phi_0 = (2 pi w^2)^{-1/4} exp(-x^2 / 4w^2). Three-term recurrence, no factorials.
void hermite_functions(double x, double width, int count, double* out);
RVector hermite_functions(double x, double width, int count);

struct AxisDensity {
  AxisGrid axis;
  std::vector<double> values;
  std::vector<std::string> warnings;
};

// <x|W|x> on a uniform axis.
AxisDensity hermite_position_density(const CMatrix& W, const OscParams& params, const AxisGrid& x);
// <k|W|k> in momentum space: phi~_n(k) = (-i)^n phi_n(k) with width 1/(2 sigma_g).
AxisDensity hermite_momentum_density(const CMatrix& W, const OscParams& params, const AxisGrid& k);

// Real part of tr(W A).
double quantum_expectation(const CMatrix& W, const CMatrix& A);
// tr(W A^2) - tr(W A)^2 with A^2 formed from the truncated A.
double quantum_variance(const CMatrix& W, const CMatrix& A);
// Same, with the second moment taken from A2 (e.g. position_squared()).
double quantum_variance(const CMatrix& W, const CMatrix& A, const CMatrix& A2);

struct DensityDiagnostics {
  double hermiticity_defect = 0.0;
  double trace_defect = 0.0;
  double min_eigenvalue = 0.0;
  bool pass = false;
};

DensityDiagnostics validate_density(const CMatrix& W, double tol = 1e-10);

// Throws PreconditionError with a readable message unless validate_density passes.
void require_density(const CMatrix& W, const char* who, double tol = 1e-10);

// sum_{n >= from} W_nn
double weight_above(const CMatrix& W, int from);

} // namespace phasekit
