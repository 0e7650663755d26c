#include "phasekit/coherent.hpp"

#include <cmath>
#include <sstream>

#include "parallel.hpp"
#include "phasekit/displacement.hpp"
#include "phasekit/error.hpp"
#include "stencil.hpp"

namespace phasekit {

namespace {

const double kInvSqrt2Pi = 1.0 / std::sqrt(kTwoPi);

void require_pure(const FrameSpec& frame, const char* who) {
  if (!frame.pure()) throw PreconditionError(std::string(who) + ": frame generator must be a pure state");
}

void require_matched(const FrameSpec& frame, const char* who) {
  if (!frame.matched_coherent())
    throw PreconditionError(std::string(who) + ": requires the matched coherent frame (sigma = 1/sqrt(2 m omega))");
}

} // namespace

CoherentOverlaps coherent_overlaps(double q, double p, const OscParams& params, int D) {
  const FrameSpec frame = FrameSpec::coherent(params, D);
  return {frame.overlaps(q, p, D).col(0), frame.matched_coherent()};
}

cplx frame_z(double q, double p, const OscParams& params) {
  const double s = params.sigma;
  return {0.5 * q / s, -s * p};
}

GridAdequacy grid_adequacy(const FrameSpec& frame, const PhaseGrid& grid) {
  GridAdequacy out;
  if (grid.nq < 1 || grid.np < 1) return out;
  const double qc = 0.5 * (grid.q_min + grid.q_max());
  const double pc = 0.5 * (grid.p_min + grid.p_max());
  const PhasePoint edges[4] = {{grid.q_min, pc}, {grid.q_max(), pc}, {qc, grid.p_min}, {qc, grid.p_max()}};
  CMatrix c;
  for (const auto& e : edges) {
    frame.overlaps(e.q, e.p, frame.dim(), c);
    out.boundary_max = std::max(out.boundary_max, c.cwiseAbs().maxCoeff());
  }
  out.adequate = grid.size() >= 4 && out.boundary_max < 1e-12;
  return out;
}

PhaseGrid auto_grid(const FrameSpec& frame, double spacing) {
  if (!(spacing > 0.0)) throw InvalidArgument("grid spacing must be positive");
  CMatrix c;
  auto decayed = [&](double q, double p) {
    frame.overlaps(q, p, frame.dim(), c);
    return c.cwiseAbs().maxCoeff() < 1e-12;
  };
  auto half = [&](bool along_q) {
    for (double L = 0.25; L <= 400.0; L += 0.25) {
      const bool ok = along_q ? decayed(L, 0.0) && decayed(-L, 0.0) : decayed(0.0, L) && decayed(0.0, -L);
      if (ok) return L;
    }
    throw InadequateGridError("inadequate grid: no half-width up to 400 reaches the decay threshold");
  };
  // round half-widths up to a whole number of cells so the edges stay decayed
  auto snap = [&](double L) { return std::ceil(L / spacing - 1e-9) * spacing; };
  return PhaseGrid::centered(snap(half(true)), snap(half(false)), spacing);
}

WaveField phase_transform(const CVector& psi, const FrameSpec& frame, const PhaseGrid& grid) {
  require_pure(frame, "phase_transform");
  grid.validate();
  const int n = static_cast<int>(psi.size());
  WaveField out(grid);
  out.adequate = grid_adequacy(frame, grid).adequate;
  detail::parallel_for(grid.np, [&](int j) {
    CMatrix c;
    for (int i = 0; i < grid.nq; ++i) {
      frame.overlaps(grid.q(i), grid.p(j), n, c);
      out.at(i, j) = kInvSqrt2Pi * c.col(0).dot(psi);
    }
  });
  return out;
}

cplx phase_value(const CVector& psi, const FrameSpec& frame, double q, double p) {
  require_pure(frame, "phase_value");
  return kInvSqrt2Pi * frame.overlaps(q, p, static_cast<int>(psi.size())).col(0).dot(psi);
}

WaveField weyl_phase_transform(const CVector& psi, const FrameSpec& frame, const PhaseGrid& grid) {
  require_pure(frame, "weyl_phase_transform");
  grid.validate();
  const int n = static_cast<int>(psi.size());
  WaveField out(grid);
  out.adequate = grid_adequacy(frame, grid).adequate;
  detail::parallel_for(grid.np, [&](int j) {
    CMatrix c;
    for (int i = 0; i < grid.nq; ++i) {
      const double q = grid.q(i), p = grid.p(j);
      frame.overlaps(-q, p, n, c); // U^W_qp u = e^{iqp/2} U_{-q,p} u
      out.at(i, j) = kInvSqrt2Pi * std::polar(1.0, -0.5 * q * p) * c.col(0).dot(psi);
    }
  });
  return out;
}

ResolutionReport resolution_check(const FrameSpec& frame, const PhaseGrid& grid, int block) {
  grid.validate();
  ResolutionReport r;
  r.block = block > 0 ? std::min(block, frame.dim()) : trusted_block(frame.dim());
  const auto adequacy = grid_adequacy(frame, grid);
  r.adequate = adequacy.adequate;
  r.boundary_max = adequacy.boundary_max;
  const int B = r.block;
  std::vector<CMatrix> rows(grid.np, CMatrix::Zero(B, B));
  detail::parallel_for(grid.np, [&](int j) {
    CMatrix c;
    for (int i = 0; i < grid.nq; ++i) {
      frame.overlaps(grid.q(i), grid.p(j), B, c);
      rows[j].noalias() += c * c.adjoint();
    }
  });
  CMatrix R = CMatrix::Zero(B, B);
  for (const auto& m : rows) R += m;
  R *= grid.weight() / kTwoPi;
  r.defect = max_abs(R - CMatrix::Identity(B, B));
  return r;
}

cplx kernel(PhasePoint x, PhasePoint y, const FrameSpec& frame) {
  require_pure(frame, "kernel");
  const double dq = y.q - x.q, dp = y.p - x.p;
  const cplx pre = std::polar(1.0 / kTwoPi, x.q * dp);
  return pre * frame.trace_displaced(dq, dp);
}

double kernel_reproducing_check(const FrameSpec& frame, const PhaseGrid& grid, const std::vector<PhasePoint>& probe) {
  require_pure(frame, "kernel_reproducing_check");
  grid.validate();
  const std::size_t n = probe.size();
  // K(x, z) for every probe x and grid z
  std::vector<std::vector<cplx>> kx(n, std::vector<cplx>(grid.size()));
  for (std::size_t a = 0; a < n; ++a) {
    detail::parallel_for(grid.np, [&](int j) {
      for (int i = 0; i < grid.nq; ++i) kx[a][grid.index(i, j)] = kernel(probe[a], {grid.q(i), grid.p(j)}, frame);
    });
  }
  double worst = 0.0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      cplx s = 0.0;
      // K(z, y) = conj(K(y, z))
      for (std::size_t k = 0; k < grid.size(); ++k) s += kx[a][k] * std::conj(kx[b][k]);
      s *= grid.weight();
      worst = std::max(worst, std::abs(s - kernel(probe[a], probe[b], frame)));
    }
  return worst;
}

WaveField apply_phase_operator(PdeOperator op, const WaveField& Psi, const OscParams& params, bool gaussian_form) {
  using detail::d1;
  using detail::d2;
  const PhaseGrid& g = Psi.grid;
  if (g.nq < 5 || g.np < 5) throw InadequateGridError("inadequate grid: stencils need at least 5x5 points");
  WaveField out(g);
  out.adequate = Psi.adequate;
  const auto& f = Psi.values;
  const std::ptrdiff_t sq = 1, sp = g.nq;
  const double m = params.m, w = params.omega, s2 = params.sigma * params.sigma;
  const cplx I(0.0, 1.0);
  for (int j = 2; j < g.np - 2; ++j)
    for (int i = 2; i < g.nq - 2; ++i) {
      const std::size_t k = g.index(i, j);
      const double q = g.q(i), p = g.p(j);
      cplx v;
      switch (op) {
      case PdeOperator::Q:
        v = gaussian_form ? q * f[k] + 2.0 * s2 * d1(f, k, sq, g.dq) : I * d1(f, k, sp, g.dp);
        break;
      case PdeOperator::P:
        v = gaussian_form ? p * f[k] + (I * q * f[k] + d1(f, k, sp, g.dp)) / (2.0 * s2)
                          : p * f[k] - I * d1(f, k, sq, g.dq);
        break;
      case PdeOperator::H_general:
        if (gaussian_form) {
          v = (-0.5 / m + 2.0 * m * w * w * s2 * s2) * d2(f, k, sq, g.dq) +
              (2.0 * m * w * w * s2 * q - I * p / m) * d1(f, k, sq, g.dq) +
              (0.5 * p * p / m + 0.5 * m * w * w * q * q + m * w * w * s2) * f[k];
        } else {
          v = -(0.5 / m) * d2(f, k, sq, g.dq) - (0.5 * m * w * w) * d2(f, k, sp, g.dp) -
              (I * p / m) * d1(f, k, sq, g.dq) + (0.5 * p * p / m) * f[k];
        }
        break;
      case PdeOperator::H_matched:
        v = (w * q - I * p / m) * d1(f, k, sq, g.dq) + (0.5 * p * p / m + 0.5 * m * w * w * q * q + 0.5 * w) * f[k];
        break;
      }
      out.values[k] = v;
    }
  return out;
}

PdeReport pde_residual(PdeOperator op, const CVector& psi, const FrameSpec& frame, const PhaseGrid& grid) {
  require_pure(frame, "pde_residual");
  if (op == PdeOperator::H_matched) require_matched(frame, "pde_residual(H_matched)");
  const int D = static_cast<int>(psi.size());
  if (D < 2) throw InvalidArgument("pde_residual: state dimension must be at least 2");
  double above = 0.0;
  for (int n = trusted_block(D); n < D; ++n) above += std::norm(psi(n));
  if (above > 1e-12) throw PreconditionError("pde_residual: state has weight above the trusted block");

  PdeReport rep;
  rep.spacing_ok = std::max(grid.dq, grid.dp) <= 0.1;
  const OscParams& params = frame.params();
  const auto ops = build_canonical(params, D);
  const CMatrix& A = op == PdeOperator::Q ? ops.Q : op == PdeOperator::P ? ops.P : ops.H;
  const WaveField direct = phase_transform(A * psi, frame, grid);
  const WaveField Psi = phase_transform(psi, frame, grid);

  std::vector<bool> forms;
  if (op == PdeOperator::H_matched) {
    forms = {false};
  } else {
    forms = {false};
    if (frame.is_gaussian()) forms.push_back(true);
  }
  for (bool gf : forms) {
    const WaveField fd = apply_phase_operator(op, Psi, params, gf);
    std::size_t count = 0;
    for (int j = 2; j < grid.np - 2; ++j)
      for (int i = 2; i < grid.nq - 2; ++i) {
        const std::size_t k = grid.index(i, j);
        rep.residual = std::max(rep.residual, std::abs(fd.values[k] - direct.values[k]));
        ++count;
      }
    rep.points = count;
  }
  return rep;
}

WaveField gauge_transform(const WaveField& Psi, Gauge gauge) {
  WaveField out = Psi;
  if (gauge == Gauge::none) return out;
  const double scale = gauge == Gauge::qp ? 1.0 : 0.5;
  const PhaseGrid& g = Psi.grid;
  for (int j = 0; j < g.np; ++j)
    for (int i = 0; i < g.nq; ++i) out.at(i, j) *= std::polar(1.0, scale * g.q(i) * g.p(j));
  return out;
}

CVector bargmann_transform(const CVector& psi, const FrameSpec& frame) {
  require_matched(frame, "bargmann_transform");
  CVector a(psi.size());
  double inv_sqrt_fact = 1.0;
  for (Eigen::Index n = 0; n < psi.size(); ++n) {
    if (n > 0) inv_sqrt_fact /= std::sqrt(static_cast<double>(n));
    a(n) = psi(n) * inv_sqrt_fact;
  }
  return a;
}

cplx bargmann_eval(const CVector& coeffs, cplx z) {
  cplx s = 0.0;
  for (Eigen::Index n = coeffs.size() - 1; n >= 0; --n) s = s * z + coeffs(n);
  return s;
}

double bargmann_norm2(const CVector& coeffs) {
  double s = 0.0, fact = 1.0;
  for (Eigen::Index n = 0; n < coeffs.size(); ++n) {
    if (n > 0) fact *= static_cast<double>(n);
    s += std::norm(coeffs(n)) * fact;
  }
  return s;
}

BargmannOpsReport bargmann_ops_check(BargmannOp op, const CVector& psi, const FrameSpec& frame) {
  require_matched(frame, "bargmann_ops_check");
  const int D = static_cast<int>(psi.size());
  if (D < 2) throw InvalidArgument("bargmann_ops_check: state dimension must be at least 2");
  const CVector b = bargmann_transform(psi, frame);
  // coefficient-level images of d/dz and z
  CVector dz = CVector::Zero(D), mz = CVector::Zero(D);
  for (int n = 0; n + 1 < D; ++n) dz(n) = (n + 1.0) * b(n + 1);
  for (int n = 1; n < D; ++n) mz(n) = b(n - 1);
  const double s = frame.params().sigma, w = frame.params().omega;
  const cplx I(0.0, 1.0);
  CVector image;
  BargmannOpsReport rep;
  const bool raises = op == BargmannOp::adag || op == BargmannOp::Q || op == BargmannOp::P;
  rep.truncated = raises && std::abs(psi(D - 1)) > 0.0;
  switch (op) {
  case BargmannOp::a: image = dz; break;
  case BargmannOp::adag: image = mz; break;
  case BargmannOp::H:
    image.resize(D);
    for (int n = 0; n < D; ++n) image(n) = w * (n + 0.5) * b(n);
    break;
  case BargmannOp::Q: image = s * (mz + dz); break;
  case BargmannOp::P: image = (I / (2.0 * s)) * (mz - dz); break;
  }
  const auto ops = build_canonical(frame.params(), D);
  const CMatrix& A = op == BargmannOp::a      ? ops.a
                     : op == BargmannOp::adag ? ops.adag
                     : op == BargmannOp::H    ? ops.H
                     : op == BargmannOp::Q    ? ops.Q
                                              : ops.P;
  const CVector ref = bargmann_transform(A * psi, frame);
  rep.residual = (image - ref).cwiseAbs().maxCoeff();
  return rep;
}

double cauchy_riemann_residual(const CVector& psi, const FrameSpec& frame, const PhaseGrid& xe) {
  require_matched(frame, "cauchy_riemann_residual");
  if (xe.nq < 5 || xe.np < 5) throw InadequateGridError("inadequate grid: stencils need at least 5x5 points");
  const double s = frame.params().sigma;
  const double root = std::sqrt(kTwoPi);
  std::vector<cplx> f(xe.size());
  detail::parallel_for(xe.np, [&](int j) {
    for (int i = 0; i < xe.nq; ++i) {
      const double xi = xe.q(i), eta = xe.p(j);
      const cplx pre = root * std::exp(cplx(0.5 * (xi * xi + eta * eta), -xi * eta));
      f[xe.index(i, j)] = pre * phase_value(psi, frame, 2.0 * s * xi, -eta / s);
    }
  });
  double worst = 0.0;
  const cplx I(0.0, 1.0);
  for (int j = 2; j < xe.np - 2; ++j)
    for (int i = 2; i < xe.nq - 2; ++i) {
      const std::size_t k = xe.index(i, j);
      const cplx r = detail::d1(f, k, xe.nq, xe.dp) - I * detail::d1(f, k, 1, xe.dq);
      worst = std::max(worst, std::abs(r));
    }
  return worst;
}

} // namespace phasekit
