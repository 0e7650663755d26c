#pragma once

#include <vector>

#include "phasekit/fock.hpp"
#include "phasekit/grid.hpp"

namespace phasekit {

enum class FrameKind {
  matched_coherent, // generator |phi_0><phi_0|, sigma = sigma_g: closed-form overlaps
  gaussian,         // generator |u^sigma><u^sigma| with sigma != sigma_g
  general           // any density operator
};

// Means and variances of Q and P in the generator a. The confidence functions are
// eta^Q(x) = <-x|a|-x> etc., so <eta^Q> = -mean_q and var eta^Q = var_q.
struct GeneratorMoments {
  double mean_q = 0.0, var_q = 0.0;
  double mean_p = 0.0, var_p = 0.0;
};

// A coherent frame: oscillator parameters, truncation D of the states it acts on, and
// the generator density operator a (dimension K, possibly larger than D so the
// frame Gaussian is represented to 1e-17).
class FrameSpec {
public:
  // Pure frame generated by u^sigma(x) = (2 pi sigma^2)^{-1/4} exp(-x^2/4 sigma^2).
  static FrameSpec coherent(const OscParams& params, int D);
  static FrameSpec from_generator(const OscParams& params, int D, const CMatrix& a);
  // a = sum_n w_n |phi_n><phi_n| (weights normalized here).
  static FrameSpec fock_mixture(const OscParams& params, int D, const std::vector<double>& weights);

  const OscParams& params() const { return params_; }
  int dim() const { return D_; }
  int generator_dim() const { return static_cast<int>(generator_.rows()); }
  const CMatrix& generator() const { return generator_; }
  FrameKind kind() const { return kind_; }
  bool pure() const { return weights_.size() == 1; }
  bool matched_coherent() const { return kind_ == FrameKind::matched_coherent; }
  bool is_gaussian() const { return kind_ != FrameKind::general; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<CVector>& components() const { return components_; }
  // Ratio u_{n+1}/u_{n-1} scale of the width-sigma Gaussian in the sigma_g basis.
  double squeeze() const { return gamma_; }
  const GeneratorMoments& moments() const { return moments_; }

  // out(:, i) = sqrt(lambda_i) * first `rows` components of U_qp u_i, so that the
  // rows x rows block of a_qp = U a U^dag is out * out^dag.
  void overlaps(double q, double p, int rows, CMatrix& out) const;
  CMatrix overlaps(double q, double p, int rows) const;

  // tr(a U_qp)
  cplx trace_displaced(double q, double p) const;

private:
  FrameSpec(const OscParams& params, int D, CMatrix a, FrameKind kind, const CVector* pure);

  OscParams params_;
  int D_ = 0;
  CMatrix generator_;
  FrameKind kind_ = FrameKind::general;
  std::vector<double> weights_;
  std::vector<CVector> components_;
  double gamma_ = 0.0;
  GeneratorMoments moments_;
};

// Coefficients of u^sigma in the sigma_g Hermite basis, even terms only:
// u_{n+1} = gamma sqrt(n/(n+1)) u_{n-1}, gamma = (s^2 - sg^2)/(s^2 + sg^2).
// Length chosen so the dropped tail is below 1e-17 (at least min_len).
CVector gaussian_coefficients(const OscParams& params, int min_len);

} // namespace phasekit
