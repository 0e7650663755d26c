#include "phasekit/frame.hpp"

#include <cmath>
#include <sstream>

#include "phasekit/displacement.hpp"
#include "phasekit/error.hpp"

namespace phasekit {

namespace {

constexpr int kMaxGeneratorDim = 4096;

void check_dim(int D) {
  if (D < 2) throw InvalidArgument("truncation D must be at least 2");
}

GeneratorMoments generator_moments(const OscParams& params, const CMatrix& a) {
  const int K = static_cast<int>(a.rows());
  const int K2 = std::max(K, 2);
  CMatrix aa = CMatrix::Zero(K2, K2);
  aa.topLeftCorner(K, K) = a;
  const auto ops = build_canonical(params, K2);
  GeneratorMoments m;
  m.mean_q = quantum_expectation(aa, ops.Q);
  m.var_q = quantum_variance(aa, ops.Q, position_squared(params, K2));
  m.mean_p = quantum_expectation(aa, ops.P);
  m.var_p = quantum_variance(aa, ops.P, momentum_squared(params, K2));
  return m;
}

} // namespace

CVector gaussian_coefficients(const OscParams& params, int min_len) {
  params.validate();
  const double sg = params.ladder_width();
  const double s = params.sigma;
  const double gamma = (s * s - sg * sg) / (s * s + sg * sg);
  const double c0 = std::sqrt(2.0 * sg * s / (sg * sg + s * s));
  std::vector<double> c{c0, 0.0};
  // even coefficients decay like |gamma|^{n/2}
  while (static_cast<int>(c.size()) < min_len || std::max(std::abs(c[c.size() - 1]), std::abs(c[c.size() - 2])) > 1e-17) {
    const int n = static_cast<int>(c.size()) - 1; // next index n+1 from n-1
    c.push_back(gamma * std::sqrt(static_cast<double>(n) / (n + 1)) * c[n - 1]);
    if (static_cast<int>(c.size()) > kMaxGeneratorDim)
      throw InvalidArgument("frame width too far from the ladder width: Gaussian needs more than 4096 basis states");
  }
  CVector v(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) v(i) = c[i];
  return v;
}

FrameSpec::FrameSpec(const OscParams& params, int D, CMatrix a, FrameKind kind, const CVector* pure)
    : params_(params), D_(D), generator_(std::move(a)), kind_(kind) {
  const double sg = params.ladder_width();
  gamma_ = (params.sigma * params.sigma - sg * sg) / (params.sigma * params.sigma + sg * sg);
  if (pure) {
    // keep the real, positive phase of u^sigma; an eigensolver would pick an arbitrary one
    weights_.push_back(1.0);
    components_.push_back(*pure);
  } else {
    const auto eig = hermitian_eig(generator_);
    for (Eigen::Index i = eig.values.size() - 1; i >= 0; --i) {
      if (eig.values(i) <= 1e-15) continue;
      weights_.push_back(eig.values(i));
      components_.push_back(eig.vectors.col(i));
    }
  }
  moments_ = generator_moments(params_, generator_);
}

FrameSpec FrameSpec::coherent(const OscParams& params, int D) {
  params.validate();
  check_dim(D);
  if (params.matched()) {
    const CVector u = basis_vector(0, D);
    return FrameSpec(params, D, projector(u), FrameKind::matched_coherent, &u);
  }
  CVector u = gaussian_coefficients(params, D);
  u /= u.norm();
  return FrameSpec(params, D, projector(u), FrameKind::gaussian, &u);
}

FrameSpec FrameSpec::from_generator(const OscParams& params, int D, const CMatrix& a) {
  params.validate();
  check_dim(D);
  require_density(a, "frame generator");
  return FrameSpec(params, D, a, FrameKind::general, nullptr);
}

FrameSpec FrameSpec::fock_mixture(const OscParams& params, int D, const std::vector<double>& weights) {
  if (weights.empty()) throw InvalidArgument("fock_mixture: no weights");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw InvalidArgument("fock_mixture: weights must be non-negative");
    total += w;
  }
  if (!(total > 0.0)) throw InvalidArgument("fock_mixture: weights sum to zero");
  const int K = std::max<int>(static_cast<int>(weights.size()), 2);
  CMatrix a = CMatrix::Zero(K, K);
  for (std::size_t n = 0; n < weights.size(); ++n) a(n, n) = weights[n] / total;
  return from_generator(params, D, a);
}

void FrameSpec::overlaps(double q, double p, int rows, CMatrix& out) const {
  const cplx alpha = displacement_alpha(q, p, params_);
  const double x = std::norm(alpha);
  switch (kind_) {
  case FrameKind::matched_coherent: {
    // c_n = e^{iqp/2} e^{-|z|^2/2} conj(z)^n / sqrt(n!)
    out.resize(rows, 1);
    cplx c = std::polar(std::exp(-0.5 * x), 0.5 * q * p);
    for (int n = 0; n < rows; ++n) {
      out(n, 0) = c;
      c *= alpha / std::sqrt(n + 1.0);
    }
    return;
  }
  case FrameKind::gaussian: {
    // v = U_qp u satisfies (a - alpha) v = gamma (a^dag - conj(alpha)) v
    out.resize(rows, 1);
    const cplx v0 = components_[0](0).real() * std::exp(cplx(-0.5 * x, 0.5 * q * p) + 0.5 * gamma_ * std::conj(alpha * alpha));
    const cplx drift = alpha - gamma_ * std::conj(alpha);
    cplx prev = 0.0, cur = v0;
    for (int n = 0; n < rows; ++n) {
      out(n, 0) = cur;
      const cplx next = (drift * cur + gamma_ * std::sqrt(static_cast<double>(n)) * prev) / std::sqrt(n + 1.0);
      prev = cur;
      cur = next;
    }
    return;
  }
  case FrameKind::general: {
    const int K = generator_dim();
    CMatrix U;
    displacement_block(q, p, params_, rows, K, U);
    out.resize(rows, static_cast<Eigen::Index>(weights_.size()));
    for (std::size_t i = 0; i < weights_.size(); ++i)
      out.col(i) = std::sqrt(weights_[i]) * (U * components_[i]);
    return;
  }
  }
}

CMatrix FrameSpec::overlaps(double q, double p, int rows) const {
  CMatrix out;
  overlaps(q, p, rows, out);
  return out;
}

cplx FrameSpec::trace_displaced(double q, double p) const {
  if (kind_ == FrameKind::matched_coherent) {
    const double x = std::norm(displacement_alpha(q, p, params_));
    return std::polar(std::exp(-0.5 * x), 0.5 * q * p);
  }
  const int K = generator_dim();
  const CMatrix c = overlaps(q, p, K);
  cplx s = 0.0;
  for (std::size_t i = 0; i < weights_.size(); ++i)
    s += std::sqrt(weights_[i]) * components_[i].dot(c.col(i));
  return s;
}

} // namespace phasekit
