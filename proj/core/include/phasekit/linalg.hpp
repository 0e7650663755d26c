#pragma once

#include <complex>
#include <functional>

#include <Eigen/Dense>

namespace phasekit {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

struct HermitianEig {
  RVector values;  // ascending
  CMatrix vectors; // columns
};

// Eigendecomposition of the hermitian part of A. All matrix functions in the
// library go through this one primitive.
HermitianEig hermitian_eig(const CMatrix& A);

CMatrix apply_function(const HermitianEig& eig, const std::function<cplx(double)>& f);

// exp(i s A) for hermitian A.
CMatrix expi(const CMatrix& A, double s);

// Largest |A_ij - conj(A_ji)|.
double hermiticity_defect(const CMatrix& A);

// Largest |(A A^dag - I)_ij|.
double unitarity_defect(const CMatrix& A);

// Clip eigenvalues below zero and renormalize to unit trace.
// `clipped` receives the total weight removed (0 if nothing was clipped).
CMatrix psd_project(const CMatrix& W, double* clipped = nullptr);

// (1/2) sum |eig(A - B)| for hermitian A, B.
double trace_distance(const CMatrix& A, const CMatrix& B);

double max_abs(const CMatrix& A);

// Hermitian coordinates: D diagonal reals, then for i<j the pairs
// (sqrt2 Re A_ij, sqrt2 Im A_ij). The map is an isometry from the
// Hilbert-Schmidt norm to the Euclidean norm.
RVector hermitian_coords(const CMatrix& A);
CMatrix from_hermitian_coords(const RVector& x, int D);

} // namespace phasekit
