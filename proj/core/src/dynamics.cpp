#include "phasekit/dynamics.hpp"

#include <cmath>

#include "parallel.hpp"
#include "phasekit/displacement.hpp"
#include "phasekit/error.hpp"
#include "stencil.hpp"

namespace phasekit {

CMatrix evolve_state(const CMatrix& W, const CMatrix& H, double t) {
  if (H.rows() != H.cols() || W.rows() != H.rows() || W.cols() != W.rows())
    throw InvalidArgument("evolve_state: dimension mismatch");
  if (hermiticity_defect(H) > 1e-10) throw InvalidArgument("evolve_state: Hamiltonian is not hermitian");
  const CMatrix U = expi(H, -t);
  return U * W * U.adjoint();
}

FlowPoint classical_flow(double q, double p, double t, const OscParams& params) {
  const double w = params.omega, mw = params.m * params.omega;
  const double c = std::cos(w * t), s = std::sin(w * t);
  return {q * c + (p / mw) * s, p * c - mw * q * s, t};
}

DensityField evolve_density(const CMatrix& W, const CMatrix& H, const FrameSpec& frame, const PhaseGrid& grid,
                            double t) {
  return husimi(evolve_state(W, H, t), frame, grid);
}

DensityField evolve_density(const CMatrix& W, const FrameSpec& frame, const PhaseGrid& grid, double t) {
  return evolve_density(W, build_canonical(frame.params(), frame.dim()).H, frame, grid, t);
}

std::vector<DensityField> evolve_density(const CMatrix& W, const FrameSpec& frame, const PhaseGrid& grid,
                                         const std::vector<double>& times) {
  const CMatrix H = build_canonical(frame.params(), frame.dim()).H;
  std::vector<CMatrix> states;
  states.reserve(times.size());
  for (double t : times) states.push_back(evolve_state(W, H, t));
  return husimi_batch(states, frame, grid);
}

bool interpolate(const DensityField& rho, double q, double p, double& value) {
  const PhaseGrid& g = rho.grid;
  const double x = (q - g.q_min) / g.dq, y = (p - g.p_min) / g.dp;
  if (!(x >= 0.0 && y >= 0.0 && x <= g.nq - 1 && y <= g.np - 1)) return false;
  const int i = std::min(static_cast<int>(x), g.nq - 2);
  const int j = std::min(static_cast<int>(y), g.np - 2);
  const double fx = x - i, fy = y - j;
  value = (1 - fx) * (1 - fy) * rho.at(i, j) + fx * (1 - fy) * rho.at(i + 1, j) + (1 - fx) * fy * rho.at(i, j + 1) +
          fx * fy * rho.at(i + 1, j + 1);
  return true;
}

LiouvilleReport liouville_match(const CMatrix& W, const FrameSpec& frame, const PhaseGrid& grid, double t) {
  if (!frame.matched_coherent())
    throw PreconditionError("liouville_match: rho_t = rho_0 o Phi_{-t} holds only for the matched frame "
                            "sigma = 1/sqrt(2 m omega)");
  const auto rhos = evolve_density(W, frame, grid, {0.0, t});
  const DensityField& rho0 = rhos[0];
  const DensityField& rhot = rhos[1];
  const int D = frame.dim();
  const int rows = grid.np - 4;
  std::vector<double> interp(std::max(rows, 0), 0.0), exact(std::max(rows, 0), 0.0);
  std::vector<std::size_t> count(std::max(rows, 0), 0);
  detail::parallel_for(std::max(rows, 0), [&](int r) {
    const int j = r + 2;
    CMatrix ov;
    for (int i = 2; i < grid.nq - 2; ++i) {
      const FlowPoint back = classical_flow(grid.q(i), grid.p(j), -t, frame.params());
      double v;
      if (!interpolate(rho0, back.q, back.p, v)) continue;
      frame.overlaps(back.q, back.p, D, ov);
      const double direct = (ov.adjoint() * W * ov).trace().real() / kTwoPi;
      interp[r] = std::max(interp[r], std::abs(rhot.at(i, j) - v));
      exact[r] = std::max(exact[r], std::abs(rhot.at(i, j) - direct));
      ++count[r];
    }
  });
  LiouvilleReport rep;
  for (int r = 0; r < rows; ++r) {
    rep.max_error = std::max(rep.max_error, interp[r]);
    rep.exact_error = std::max(rep.exact_error, exact[r]);
    rep.points += count[r];
  }
  return rep;
}

CoherentEvolutionReport coherent_evolution_check(double q, double p, double t, const OscParams& params, int D) {
  params.validate();
  if (!params.matched()) throw PreconditionError("coherent_evolution_check: requires the matched frame width");
  if (!in_trusted_region(q, p, params, D))
    throw PreconditionError("coherent_evolution_check: orbit leaves the trusted region |z|^2 <= D/4");
  const FrameSpec frame = FrameSpec::coherent(params, D);
  const CVector u = frame.overlaps(q, p, D).col(0);
  CVector evolved(D);
  for (int n = 0; n < D; ++n) evolved(n) = std::polar(1.0, -params.omega * (n + 0.5) * t) * u(n);
  CoherentEvolutionReport rep;
  rep.end = classical_flow(q, p, t, params);
  const cplx phase = std::polar(1.0, 0.5 * (q * p - rep.end.q * rep.end.p - params.omega * t));
  const CVector target = phase * frame.overlaps(rep.end.q, rep.end.p, D).col(0);
  rep.defect = std::abs(1.0 - evolved.dot(target));
  rep.return_amplitude = u.dot(evolved);
  return rep;
}

double correction_coefficient(const OscParams& params) {
  const double s2 = params.sigma * params.sigma;
  return -0.25 / (params.m * s2) + params.m * params.omega * params.omega * s2;
}

GeneratorResidual generator_residual(const CMatrix& W, const FrameSpec& frame, const PhaseGrid& grid) {
  require_density(W, "generator_residual");
  const auto eig = hermitian_eig(W);
  if (eig.values.size() > 1 && eig.values(eig.values.size() - 2) > 1e-10)
    throw PreconditionError("generator_residual: the Liouville equation with correction term is established for "
                            "pure states rho = T(P_psi) only; mixed input rejected");
  if (grid.nq < 5 || grid.np < 5) throw InadequateGridError("inadequate grid: stencils need at least 5x5 points");
  const OscParams& params = frame.params();
  const double h = 1e-4 / params.omega;
  const auto rhos = evolve_density(W, frame, grid, {-h, 0.0, h});
  const auto& f = rhos[1].values;

  GeneratorResidual out;
  out.coefficient = correction_coefficient(params);
  out.residual = DensityField(grid);
  const double m = params.m, w2 = params.omega * params.omega;
  const std::ptrdiff_t sq = 1, sp = grid.nq;
  for (int j = 2; j < grid.np - 2; ++j)
    for (int i = 2; i < grid.nq - 2; ++i) {
      const std::size_t k = grid.index(i, j);
      const double q = grid.q(i), p = grid.p(j);
      const double dt = (rhos[2].values[k] - rhos[0].values[k]) / (2.0 * h);
      const double rhs = -(p / m) * detail::d1(f, k, sq, grid.dq) + m * w2 * q * detail::d1(f, k, sp, grid.dp) +
                         out.coefficient * detail::dqp(f, k, sq, sp, grid.dq, grid.dp);
      const double r = dt - rhs;
      out.residual.values[k] = r;
      out.max_residual = std::max(out.max_residual, std::abs(r));
      out.max_time_derivative = std::max(out.max_time_derivative, std::abs(dt));
      out.max_rhs = std::max(out.max_rhs, std::abs(rhs));
    }
  return out;
}

} // namespace phasekit
