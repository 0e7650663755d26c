#include "phasekit/random.hpp"

#include "phasekit/error.hpp"

namespace phasekit {

namespace {

CMatrix gaussian_matrix(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  CMatrix G(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) {
      const double re = n(rng);
      const double im = n(rng);
      G(i, j) = cplx(re, im);
    }
  return G;
}

void check(int D, int support) {
  if (D < 1 || support < 1 || support > D) throw InvalidArgument("random state: need 1 <= support <= D");
}

} // namespace

CMatrix random_density(int D, int support, Rng& rng) {
  check(D, support);
  const CMatrix G = gaussian_matrix(support, support, rng);
  CMatrix W = CMatrix::Zero(D, D);
  W.topLeftCorner(support, support) = G * G.adjoint();
  W /= W.trace().real();
  return 0.5 * (W + W.adjoint());
}

CVector random_pure(int D, int support, Rng& rng) {
  check(D, support);
  CVector v = CVector::Zero(D);
  v.head(support) = gaussian_matrix(support, 1, rng).col(0);
  return v / v.norm();
}

CMatrix random_hermitian(int D, Rng& rng) {
  const CMatrix G = gaussian_matrix(D, D, rng);
  return 0.5 * (G + G.adjoint());
}

} // namespace phasekit
