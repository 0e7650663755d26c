#include "phasekit/displacement.hpp"

#include <cmath>

#include "parallel.hpp"
#include "phasekit/error.hpp"

namespace phasekit {

cplx displacement_alpha(double q, double p, const OscParams& params) {
  const double sg = params.ladder_width();
  return {q / (2.0 * sg), sg * p};
}

bool in_trusted_region(double q, double p, const OscParams& params, int D) {
  return std::norm(displacement_alpha(q, p, params)) <= 0.25 * D;
}

DisplacementBuilder::DisplacementBuilder(const OscParams& params, int D) : params_(params), D_(D) {
  const auto ops = build_canonical(params, D);
  q_eig_ = hermitian_eig(ops.Q);
  p_eig_ = hermitian_eig(ops.P);
}

Displacement DisplacementBuilder::operator()(double q, double p) const {
  if (!std::isfinite(q) || !std::isfinite(p)) throw InvalidArgument("displacement: non-finite argument");
  Displacement d;
  // a vanishing argument gives an exact identity factor
  const CMatrix I = CMatrix::Identity(D_, D_);
  const CMatrix eq = p == 0.0 ? I : apply_function(q_eig_, [p](double x) { return std::polar(1.0, p * x); });
  const CMatrix ep = q == 0.0 ? I : apply_function(p_eig_, [q](double x) { return std::polar(1.0, -q * x); });
  d.matrix = eq * ep;
  d.z_norm2 = std::norm(displacement_alpha(q, p, params_));
  d.trusted = d.z_norm2 <= 0.25 * D_;
  return d;
}

Displacement displacement_op(double q, double p, const OscParams& params, int D) {
  return DisplacementBuilder(params, D)(q, p);
}

Displacement weyl_op(double q, double p, const OscParams& params, int D) {
  Displacement d = displacement_op(-q, p, params, D);
  d.matrix *= std::polar(1.0, 0.5 * q * p);
  return d;
}

void displacement_block(double q, double p, const OscParams& params, int rows, int cols, CMatrix& out) {
  out.resize(rows, cols);
  const cplx alpha = displacement_alpha(q, p, params);
  const double x = std::norm(alpha);
  const cplx global = std::polar(1.0, 0.5 * q * p);
  if (x == 0.0) {
    out.setZero();
    for (int n = 0; n < std::min(rows, cols); ++n) out(n, n) = global;
    return;
  }
  const double logr = 0.5 * std::log(x);
  const double theta = std::arg(alpha);
  const int kmax = std::max(rows, cols);

  // g(j,k) = sqrt(j!/(j+k)!) |alpha|^k e^{-x/2} L_j^{(k)}(x), j = 0..count-1.
  // Lower triangle: <j+k|D|j> = e^{ik theta} g; upper: <j|D|j+k> = (-1)^k e^{-ik theta} g.
  for (int k = 0; k < kmax; ++k) {
    const int lower = std::min(rows - k, cols); // entries (j+k, j)
    const int upper = k > 0 ? std::min(cols - k, rows) : 0;
    const int count = std::max(lower, upper);
    if (count <= 0) continue;

    const double la = k * logr - 0.5 * std::lgamma(k + 1.0) - 0.5 * x;
    const double la_c = std::max(la, -700.0);
    double amp = std::exp(la_c);
    double L_prev = 0.0;
    double L = std::exp(la - la_c);
    const cplx ph_lo = global * std::polar(1.0, k * theta);
    const cplx ph_up = global * std::polar((k % 2) ? -1.0 : 1.0, -k * theta);
    for (int j = 0; j < count; ++j) {
      const double g = amp * L;
      if (j < lower) out(j + k, j) = ph_lo * g;
      if (k > 0 && j < upper) out(j, j + k) = ph_up * g;
      // L_{j+1} = ((2j+1+k-x) L_j - (j+k) L_{j-1}) / (j+1)
      const double L_next = ((2.0 * j + 1.0 + k - x) * L - (j + k) * L_prev) / (j + 1.0);
      L_prev = L;
      L = L_next;
      amp *= std::sqrt((j + 1.0) / (j + 1.0 + k));
      if (std::abs(L) > 1e200) {
        L *= 1e-200;
        L_prev *= 1e-200;
        amp *= 1e200;
      }
    }
  }
}

CMatrix displacement_block(double q, double p, const OscParams& params, int rows, int cols) {
  CMatrix out;
  displacement_block(q, p, params, rows, cols, out);
  return out;
}

CharSamples char_function(const CMatrix& V, const PhaseGrid& grid, const OscParams& params,
                          const std::string& source) {
  params.validate();
  grid.validate();
  if (V.rows() != V.cols()) throw InvalidArgument("char_function: operator is not square");
  const int D = static_cast<int>(V.rows());
  CharSamples out{grid, std::vector<cplx>(grid.size()), source, D, params};
  const CMatrix Vt = V.transpose();
  detail::parallel_for(grid.np, [&](int j) {
    CMatrix U;
    for (int i = 0; i < grid.nq; ++i) {
      displacement_block(grid.q(i), grid.p(j), params, D, D, U);
      out.values[grid.index(i, j)] = Vt.cwiseProduct(U).sum(); // sum V_mn U_nm
    }
  });
  return out;
}

CharReconstruction reconstruct_from_char(const CharSamples& samples, const OscParams& params, int D) {
  params.validate();
  const PhaseGrid& g = samples.grid;
  g.validate();
  if (samples.values.size() != g.size()) throw InvalidArgument("reconstruct_from_char: sample count mismatch");
  std::vector<CMatrix> rows(g.np, CMatrix::Zero(D, D));
  detail::parallel_for(g.np, [&](int j) {
    CMatrix U;
    for (int i = 0; i < g.nq; ++i) {
      displacement_block(g.q(i), g.p(j), params, D, D, U);
      rows[j].noalias() += samples.values[g.index(i, j)] * U.adjoint();
    }
  });
  CharReconstruction r;
  r.V = CMatrix::Zero(D, D);
  for (const auto& m : rows) r.V += m;
  r.V *= g.weight() / kTwoPi;
  for (int j = 0; j < g.np; ++j)
    for (int i = 0; i < g.nq; ++i)
      if (i == 0 || j == 0 || i == g.nq - 1 || j == g.np - 1)
        r.boundary_max = std::max(r.boundary_max, std::abs(samples.values[g.index(i, j)]));
  r.covered = r.boundary_max < 1e-10;
  return r;
}

cplx hs_inner_via_char(const CMatrix& V1, const CMatrix& V2, const PhaseGrid& grid, const OscParams& params) {
  if (V1.rows() != V2.rows()) throw InvalidArgument("hs_inner_via_char: dimension mismatch");
  const auto c1 = char_function(V1, grid, params, "V1");
  const auto c2 = char_function(V2, grid, params, "V2");
  cplx s = 0.0;
  for (std::size_t k = 0; k < c1.values.size(); ++k) s += std::conj(c1.values[k]) * c2.values[k];
  return s * grid.weight() / kTwoPi;
}

} // namespace phasekit
