#include "phasekit/fock.hpp"

#include <cmath>
#include <sstream>

#include "phasekit/error.hpp"

namespace phasekit {

const char* to_string(OperatorKind k) {
  switch (k) {
  case OperatorKind::general: return "general";
  case OperatorKind::hermitian: return "hermitian";
  case OperatorKind::density: return "density";
  case OperatorKind::unitary: return "unitary";
  }
  return "general";
}

OperatorKind operator_kind_from_string(const std::string& s) {
  if (s == "general") return OperatorKind::general;
  if (s == "hermitian") return OperatorKind::hermitian;
  if (s == "density") return OperatorKind::density;
  if (s == "unitary") return OperatorKind::unitary;
  throw InvalidArgument("unknown operator kind '" + s + "'");
}

namespace {

void check_dim(int D) {
  if (D < 2) throw InvalidArgument("truncation D must be at least 2");
}

CMatrix lowering(int D) {
  CMatrix a = CMatrix::Zero(D, D);
  for (int n = 1; n < D; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

} // namespace

CanonicalOps build_canonical(const OscParams& params, int D) {
  params.validate();
  check_dim(D);
  const double sg = params.ladder_width();
  CanonicalOps ops;
  ops.a = lowering(D);
  ops.adag = ops.a.adjoint();
  ops.Q = sg * (ops.a + ops.adag);
  ops.P = (ops.a - ops.adag) / cplx(0.0, 2.0 * sg);
  ops.H = CMatrix::Zero(D, D);
  for (int n = 0; n < D; ++n) ops.H(n, n) = params.omega * (n + 0.5);
  return ops;
}

CMatrix position_squared(const OscParams& params, int D) {
  const auto ops = build_canonical(params, D + 1);
  return (ops.Q * ops.Q).topLeftCorner(D, D);
}

CMatrix momentum_squared(const OscParams& params, int D) {
  const auto ops = build_canonical(params, D + 1);
  return (ops.P * ops.P).topLeftCorner(D, D);
}

CVector basis_vector(int n, int D) {
  if (n < 0 || n >= D) throw InvalidArgument("basis index out of range");
  CVector v = CVector::Zero(D);
  v(n) = 1.0;
  return v;
}

CMatrix projector(const CVector& psi) { return psi * psi.adjoint(); }

void hermite_functions(double x, double width, int count, double* out) {
  if (count <= 0) return;
  const double u = x / width;
  out[0] = std::pow(kTwoPi * width * width, -0.25) * std::exp(-0.25 * u * u);
  if (count == 1) return;
  out[1] = u * out[0];
  for (int n = 1; n + 1 < count; ++n)
    out[n + 1] = (u * out[n] - std::sqrt(static_cast<double>(n)) * out[n - 1]) /
                 std::sqrt(static_cast<double>(n + 1));
}

RVector hermite_functions(double x, double width, int count) {
  RVector v(count);
  hermite_functions(x, width, count, v.data());
  return v;
}

namespace {

void truncation_warning(const CMatrix& W, std::vector<std::string>& warnings) {
  const int D = static_cast<int>(W.rows());
  const double top = weight_above(W, D - D / 4);
  if (top > 1e-6) {
    std::ostringstream os;
    os << "state carries weight " << top << " in the top quarter of the basis; truncation effects likely";
    warnings.push_back(os.str());
  }
}

} // namespace

AxisDensity hermite_position_density(const CMatrix& W, const OscParams& params, const AxisGrid& x) {
  params.validate();
  if (W.rows() != W.cols()) throw InvalidArgument("density matrix is not square");
  const int D = static_cast<int>(W.rows());
  AxisDensity out{x, std::vector<double>(x.n), {}};
  truncation_warning(W, out.warnings);
  const double sg = params.ladder_width();
  RVector phi(D);
  for (int i = 0; i < x.n; ++i) {
    hermite_functions(x.at(i), sg, D, phi.data());
    out.values[i] = (phi.transpose().cast<cplx>() * W * phi.cast<cplx>()).value().real();
  }
  return out;
}

AxisDensity hermite_momentum_density(const CMatrix& W, const OscParams& params, const AxisGrid& k) {
  params.validate();
  if (W.rows() != W.cols()) throw InvalidArgument("density matrix is not square");
  const int D = static_cast<int>(W.rows());
  AxisDensity out{k, std::vector<double>(k.n), {}};
  truncation_warning(W, out.warnings);
  const double width = 0.5 / params.ladder_width();
  static const cplx phase[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
  RVector h(D);
  CVector phi(D);
  for (int i = 0; i < k.n; ++i) {
    hermite_functions(k.at(i), width, D, h.data());
    for (int n = 0; n < D; ++n) phi(n) = phase[n % 4] * h(n);
    // <k|W|k> = sum_mn phi~_m(k) W_mn conj(phi~_n(k))
    out.values[i] = (phi.transpose() * W * phi.conjugate()).value().real();
  }
  return out;
}

double quantum_expectation(const CMatrix& W, const CMatrix& A) {
  if (W.rows() != A.rows() || W.cols() != A.cols() || W.rows() != W.cols())
    throw InvalidArgument("quantum_expectation: dimension mismatch");
  return (W.cwiseProduct(A.transpose())).sum().real();
}

double quantum_variance(const CMatrix& W, const CMatrix& A) { return quantum_variance(W, A, A * A); }

double quantum_variance(const CMatrix& W, const CMatrix& A, const CMatrix& A2) {
  const double m1 = quantum_expectation(W, A);
  return quantum_expectation(W, A2) - m1 * m1;
}

DensityDiagnostics validate_density(const CMatrix& W, double tol) {
  DensityDiagnostics d;
  if (W.rows() != W.cols() || W.rows() == 0) {
    d.hermiticity_defect = INFINITY;
    d.trace_defect = INFINITY;
    d.min_eigenvalue = -INFINITY;
    return d;
  }
  d.hermiticity_defect = hermiticity_defect(W);
  d.trace_defect = std::abs(W.trace() - 1.0);
  d.min_eigenvalue = hermitian_eig(W).values.minCoeff();
  d.pass = d.hermiticity_defect <= tol && d.trace_defect <= tol && d.min_eigenvalue >= -tol;
  return d;
}

void require_density(const CMatrix& W, const char* who, double tol) {
  const auto d = validate_density(W, tol);
  if (d.pass) return;
  std::ostringstream os;
  os << who << ": not a density operator (hermiticity defect " << d.hermiticity_defect << ", trace defect "
     << d.trace_defect << ", min eigenvalue " << d.min_eigenvalue << ")";
  throw PreconditionError(os.str());
}

double weight_above(const CMatrix& W, int from) {
  double s = 0.0;
  for (Eigen::Index n = std::max(from, 0); n < W.rows(); ++n) s += W(n, n).real();
  return s;
}

} // namespace phasekit
