#include "phasekit/linalg.hpp"

#include <cmath>

#include "phasekit/error.hpp"

namespace phasekit {

HermitianEig hermitian_eig(const CMatrix& A) {
  if (A.rows() != A.cols()) throw InvalidArgument("hermitian_eig: matrix is not square");
  const CMatrix h = 0.5 * (A + A.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  if (es.info() != Eigen::Success) throw InvalidArgument("hermitian_eig: no convergence");
  return {es.eigenvalues(), es.eigenvectors()};
}

CMatrix apply_function(const HermitianEig& eig, const std::function<cplx(double)>& f) {
  CVector d(eig.values.size());
  for (Eigen::Index i = 0; i < d.size(); ++i) d(i) = f(eig.values(i));
  return eig.vectors * d.asDiagonal() * eig.vectors.adjoint();
}

CMatrix expi(const CMatrix& A, double s) {
  if (s == 0.0) return CMatrix::Identity(A.rows(), A.cols());
  return apply_function(hermitian_eig(A), [s](double x) { return std::polar(1.0, s * x); });
}

double hermiticity_defect(const CMatrix& A) {
  if (A.rows() != A.cols()) return INFINITY;
  return (A - A.adjoint()).cwiseAbs().maxCoeff();
}

double unitarity_defect(const CMatrix& A) {
  const auto n = A.rows();
  return (A * A.adjoint() - CMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
}

CMatrix psd_project(const CMatrix& W, double* clipped) {
  auto eig = hermitian_eig(W);
  double removed = 0.0;
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    if (eig.values(i) < 0.0) {
      removed -= eig.values(i);
      eig.values(i) = 0.0;
    }
  }
  const double tr = eig.values.sum();
  if (tr <= 0.0) throw InvalidArgument("psd_project: no positive spectrum left");
  eig.values /= tr;
  if (clipped) *clipped = removed;
  return apply_function(eig, [](double x) { return cplx(x, 0.0); });
}

double trace_distance(const CMatrix& A, const CMatrix& B) {
  const auto eig = hermitian_eig(A - B);
  return 0.5 * eig.values.cwiseAbs().sum();
}

double max_abs(const CMatrix& A) { return A.size() ? A.cwiseAbs().maxCoeff() : 0.0; }

RVector hermitian_coords(const CMatrix& A) {
  const int D = static_cast<int>(A.rows());
  RVector x(D * D);
  int k = 0;
  for (int i = 0; i < D; ++i) x(k++) = A(i, i).real();
  const double r2 = std::sqrt(2.0);
  for (int i = 0; i < D; ++i)
    for (int j = i + 1; j < D; ++j) {
      const cplx v = 0.5 * (A(i, j) + std::conj(A(j, i)));
      x(k++) = r2 * v.real();
      x(k++) = r2 * v.imag();
    }
  return x;
}

CMatrix from_hermitian_coords(const RVector& x, int D) {
  if (x.size() != D * D) throw InvalidArgument("from_hermitian_coords: size mismatch");
  CMatrix A = CMatrix::Zero(D, D);
  int k = 0;
  for (int i = 0; i < D; ++i) A(i, i) = x(k++);
  const double r2 = std::sqrt(0.5);
  for (int i = 0; i < D; ++i)
    for (int j = i + 1; j < D; ++j) {
      const cplx v(r2 * x(k), r2 * x(k + 1));
      k += 2;
      A(i, j) = v;
      A(j, i) = std::conj(v);
    }
  return A;
}

} // namespace phasekit
