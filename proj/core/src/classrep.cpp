#include "phasekit/classrep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "parallel.hpp"
#include "phasekit/displacement.hpp"
#include "phasekit/error.hpp"

namespace phasekit {

namespace {

void require_adequate(const FrameSpec& frame, const PhaseGrid& grid, const char* who) {
  grid.validate();
  const auto a = grid_adequacy(frame, grid);
  if (!a.adequate) {
    std::ostringstream os;
    os << "inadequate grid for " << who << ": frame overlap " << a.boundary_max
       << " at the boundary exceeds 1e-12";
    throw InadequateGridError(os.str());
  }
}

struct Spectral {
  CMatrix vectors; // D x r
  RVector values;
};

Spectral spectral(const CMatrix& W) {
  const auto eig = hermitian_eig(W);
  const double scale = std::max(eig.values.cwiseAbs().maxCoeff(), 1e-300);
  std::vector<int> keep;
  for (Eigen::Index i = 0; i < eig.values.size(); ++i)
    if (std::abs(eig.values(i)) > 1e-15 * scale) keep.push_back(static_cast<int>(i));
  Spectral s{CMatrix(W.rows(), keep.size()), RVector(keep.size())};
  for (std::size_t k = 0; k < keep.size(); ++k) {
    s.vectors.col(k) = eig.vectors.col(keep[k]);
    s.values(k) = eig.values(keep[k]);
  }
  return s;
}

// Grid indices i with lo <= x_i < hi (half-open, tolerant to rounding on the edges).
std::pair<int, int> index_range(double lo, double hi, double x0, double h, int n) {
  const double eps = 1e-9;
  int a = static_cast<int>(std::ceil((lo - x0) / h - eps));
  int b = static_cast<int>(std::ceil((hi - x0) / h - eps));
  a = std::clamp(a, 0, n);
  b = std::clamp(b, 0, n);
  return {a, b};
}

} // namespace

std::vector<DensityField> husimi_batch(const std::vector<CMatrix>& Ws, const FrameSpec& frame,
                                       const PhaseGrid& grid) {
  const int D = frame.dim();
  for (const auto& W : Ws) {
    if (W.rows() != D || W.cols() != D) throw InvalidArgument("husimi: state dimension differs from frame truncation");
    require_density(W, "husimi");
  }
  require_adequate(frame, grid, "husimi");
  std::vector<Spectral> specs;
  for (const auto& W : Ws) specs.push_back(spectral(W));
  std::vector<DensityField> out(Ws.size(), DensityField(grid));
  const double inv = 1.0 / kTwoPi;
  detail::parallel_for(grid.np, [&](int j) {
    CMatrix c, m;
    for (int i = 0; i < grid.nq; ++i) {
      frame.overlaps(grid.q(i), grid.p(j), D, c);
      for (std::size_t s = 0; s < specs.size(); ++s) {
        m.noalias() = specs[s].vectors.adjoint() * c;
        out[s].at(i, j) = inv * specs[s].values.dot(m.rowwise().squaredNorm());
      }
    }
  });
  return out;
}

DensityField husimi(const CMatrix& W, const FrameSpec& frame, const PhaseGrid& grid) {
  return husimi_batch({W}, frame, grid).front();
}

std::pair<AxisDensity, AxisDensity> marginals(const DensityField& rho) {
  const PhaseGrid& g = rho.grid;
  AxisDensity mq{g.q_axis(), std::vector<double>(g.nq, 0.0), {}};
  AxisDensity mp{g.p_axis(), std::vector<double>(g.np, 0.0), {}};
  for (int j = 0; j < g.np; ++j)
    for (int i = 0; i < g.nq; ++i) {
      const double v = rho.at(i, j);
      mq.values[i] += v * g.dp;
      mp.values[j] += v * g.dq;
    }
  return {mq, mp};
}

std::pair<ConfidenceFunction, ConfidenceFunction> confidence_functions(const FrameSpec& frame, double spacing) {
  if (!(spacing > 0.0)) throw InvalidArgument("confidence_functions: spacing must be positive");
  const auto& mom = frame.moments();
  auto make = [&](double mean, double var, bool momentum) {
    ConfidenceFunction cf;
    cf.mean = mean;
    cf.variance = var;
    const double half = 12.0 * std::sqrt(var);
    const int k = static_cast<int>(std::ceil(half / spacing));
    cf.axis = {mean - k * spacing, spacing, 2 * k + 1};
    // evaluate the generator density at the reflected points -x
    const AxisGrid reflected{-cf.axis.start, -spacing, cf.axis.n};
    const auto d = momentum ? hermite_momentum_density(frame.generator(), frame.params(), reflected)
                            : hermite_position_density(frame.generator(), frame.params(), reflected);
    cf.values = d.values;
    return cf;
  };
  return {make(-mom.mean_q, mom.var_q, false), make(-mom.mean_p, mom.var_p, true)};
}

double classical_expectation(const DensityField& rho, const std::vector<double>& f) {
  if (f.size() != rho.values.size()) throw InvalidArgument("classical_expectation: sample count mismatch");
  double s = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) s += rho.values[k] * f[k];
  return s * rho.grid.weight();
}

double classical_variance(const DensityField& rho, const std::vector<double>& f) {
  std::vector<double> f2(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) f2[k] = f[k] * f[k];
  const double m = classical_expectation(rho, f);
  return classical_expectation(rho, f2) - m * m;
}

namespace {
std::vector<double> sample(const PhaseGrid& g, const PhaseFunction& f) {
  std::vector<double> v(g.size());
  for (int j = 0; j < g.np; ++j)
    for (int i = 0; i < g.nq; ++i) v[g.index(i, j)] = f(g.q(i), g.p(j));
  return v;
}
} // namespace

double classical_expectation(const DensityField& rho, const PhaseFunction& f) {
  return classical_expectation(rho, sample(rho.grid, f));
}

double classical_variance(const DensityField& rho, const PhaseFunction& f) {
  return classical_variance(rho, sample(rho.grid, f));
}

UncertaintyReport uncertainty_report(const CMatrix& W, const FrameSpec& frame, const PhaseGrid& grid) {
  const int D = frame.dim();
  const OscParams& params = frame.params();
  const auto ops = build_canonical(params, D);
  UncertaintyReport r;
  r.var_EQ = quantum_variance(W, ops.Q, position_squared(params, D));
  r.var_EP = quantum_variance(W, ops.P, momentum_squared(params, D));
  r.var_etaQ = frame.moments().var_q;
  r.var_etaP = frame.moments().var_p;
  const DensityField rho = husimi(W, frame, grid);
  r.var_FQ = classical_variance(rho, [](double q, double) { return q; });
  r.var_FP = classical_variance(rho, [](double, double p) { return p; });
  r.product_E = r.var_EQ * r.var_EP;
  r.product_eta = r.var_etaQ * r.var_etaP;
  r.product_F = r.var_FQ * r.var_FP;
  r.additivity_defect_Q = std::abs(r.var_FQ - r.var_EQ - r.var_etaQ);
  r.additivity_defect_P = std::abs(r.var_FP - r.var_EP - r.var_etaP);
  r.additivity_ok = r.additivity_defect_Q < 1e-6 && r.additivity_defect_P < 1e-6;
  r.heisenberg_ok = r.product_E >= 0.25 - 1e-9;
  r.confidence_ok = r.product_eta >= 0.25 - 1e-9;
  r.joint_ok = r.product_F >= 1.0 - 1e-9;
  return r;
}

UncertaintyReport uncertainty_report(const CMatrix& W, const FrameSpec& frame) {
  return uncertainty_report(W, frame, auto_grid(frame, 0.05));
}

EffectSet effect_of_region(const std::vector<Cell>& cells, const FrameSpec& frame, const PhaseGrid& grid) {
  require_adequate(frame, grid, "effect_of_region");
  const int D = frame.dim();
  const double tol = 1e-9;
  const double qlo = grid.q_min - 0.5 * grid.dq - tol, qhi = grid.q_max() + 0.5 * grid.dq + tol;
  const double plo = grid.p_min - 0.5 * grid.dp - tol, phi = grid.p_max() + 0.5 * grid.dp + tol;
  for (const auto& c : cells) {
    if (c.q0 < qlo || c.q1 > qhi || c.p0 < plo || c.p1 > phi)
      throw InvalidArgument("effect_of_region: cell extends outside the grid");
    if (c.q1 < c.q0 || c.p1 < c.p0) throw InvalidArgument("effect_of_region: cell has negative extent");
  }
  EffectSet set{cells, std::vector<CMatrix>(cells.size()), D};
  const double scale = grid.weight() / kTwoPi;
  detail::parallel_for(static_cast<int>(cells.size()), [&](int n) {
    const Cell& c = cells[n];
    const auto [i0, i1] = index_range(c.q0, c.q1, grid.q_min, grid.dq, grid.nq);
    const auto [j0, j1] = index_range(c.p0, c.p1, grid.p_min, grid.dp, grid.np);
    CMatrix F = CMatrix::Zero(D, D), ov;
    for (int j = j0; j < j1; ++j)
      for (int i = i0; i < i1; ++i) {
        frame.overlaps(grid.q(i), grid.p(j), D, ov);
        F.noalias() += ov * ov.adjoint();
      }
    set.effects[n] = scale * F;
  });
  return set;
}

std::vector<Cell> tile_grid(const PhaseGrid& grid, int n) {
  if (n < 1) throw InvalidArgument("tile_grid: need at least one cell per axis");
  const double q0 = grid.q_min - 0.5 * grid.dq, q1 = grid.q_max() + 0.5 * grid.dq;
  const double p0 = grid.p_min - 0.5 * grid.dp, p1 = grid.p_max() + 0.5 * grid.dp;
  std::vector<Cell> cells;
  for (int b = 0; b < n; ++b)
    for (int a = 0; a < n; ++a)
      cells.push_back({q0 + (q1 - q0) * a / n, q0 + (q1 - q0) * (a + 1) / n, p0 + (p1 - p0) * b / n,
                       p0 + (p1 - p0) * (b + 1) / n});
  return cells;
}

CompletenessReport completeness_rank(const std::vector<CMatrix>& effects) {
  CompletenessReport r;
  if (effects.empty()) throw InvalidArgument("completeness_rank: no effects");
  const int D = static_cast<int>(effects.front().rows());
  r.required = D * D;
  r.too_few_cells = static_cast<int>(effects.size()) < r.required;
  RMatrix M(effects.size(), D * D);
  for (std::size_t k = 0; k < effects.size(); ++k) {
    if (effects[k].rows() != D || effects[k].cols() != D)
      throw InvalidArgument("completeness_rank: effects differ in dimension");
    M.row(k) = hermitian_coords(effects[k]).transpose();
    // The span does not depend on how each effect is scaled; unit rows keep the far
    // cells of a wide tiling from being lost under the relative threshold.
    const double n = M.row(k).norm();
    if (n > 0.0) M.row(k) /= n;
  }
  Eigen::JacobiSVD<RMatrix> svd(M);
  const RVector s = svd.singularValues();
  r.singular_values.assign(s.data(), s.data() + s.size());
  const double thr = 1e-8 * (s.size() ? s(0) : 0.0);
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > thr) ++r.rank;
  r.complete = r.rank == r.required;
  return r;
}

CompletenessReport completeness_rank(const EffectSet& effects) { return completeness_rank(effects.effects); }

CompletenessReport completeness_rank(const FrameSpec& frame, const PhaseGrid& grid) {
  const int n = frame.dim() + 2; // ceil(sqrt(D^2)) + 2
  return completeness_rank(effect_of_region(tile_grid(grid, n), frame, grid));
}

FourierReport fourier_criterion(const FrameSpec& frame, const PhaseGrid& grid) {
  grid.validate();
  std::vector<cplx> t(grid.size());
  detail::parallel_for(grid.np, [&](int j) {
    for (int i = 0; i < grid.nq; ++i) t[grid.index(i, j)] = frame.trace_displaced(grid.q(i), grid.p(j));
  });
  FourierReport r;
  r.min_modulus = std::numeric_limits<double>::infinity();
  double closed = 0.0;
  const OscParams& params = frame.params();
  for (int j = 0; j < grid.np; ++j)
    for (int i = 0; i < grid.nq; ++i) {
      const double q = grid.q(i), p = grid.p(j);
      const double mod = std::abs(t[grid.index(i, j)]);
      if (mod < r.min_modulus) {
        r.min_modulus = mod;
        r.argmin = {q, p};
      }
      if (frame.matched_coherent() && in_trusted_region(q, p, params, frame.dim())) {
        const double x = std::norm(displacement_alpha(q, p, params));
        closed = std::max(closed, std::abs(mod - std::exp(-0.5 * x)));
      }
    }
  if (frame.matched_coherent()) r.closed_form_defect = closed;
  // strip the e^{iqp/2} factor so rotation-invariant generators give real values
  auto val = [&](int i, int j) { return t[grid.index(i, j)] * std::polar(1.0, -0.5 * grid.q(i) * grid.p(j)); };
  // A cell brackets a zero when the real part changes sign and the imaginary part
  // is small against the cell's largest modulus. |tr aU| <= 1, so cells below
  // 1e-12 are roundoff in the tails and are not scanned.
  for (int j = 0; j + 1 < grid.np; ++j)
    for (int i = 0; i + 1 < grid.nq; ++i) {
      const cplx c[4] = {val(i, j), val(i + 1, j), val(i, j + 1), val(i + 1, j + 1)};
      double re_lo = INFINITY, re_hi = -INFINITY, im_lo = INFINITY, im_hi = -INFINITY, big = 0.0;
      for (const auto& v : c) {
        re_lo = std::min(re_lo, v.real());
        re_hi = std::max(re_hi, v.real());
        im_lo = std::min(im_lo, v.imag());
        im_hi = std::max(im_hi, v.imag());
        big = std::max(big, std::abs(v));
      }
      const double tol = 1e-10 * big;
      if (big > 1e-12 && re_lo < 0.0 && re_hi > 0.0 && im_lo <= tol && im_hi >= -tol)
        ++r.zero_cells;
    }
  return r;
}

ReconstructionResult reconstruct_state(const DensityField& rho, const FrameSpec& frame,
                                       const ReconstructionOptions& options) {
  const PhaseGrid& g = rho.grid;
  g.validate();
  if (rho.values.size() != g.size()) throw InvalidArgument("reconstruct_state: sample count mismatch");
  const int D = frame.dim();
  const int n = D * D;
  if (static_cast<int>(g.size()) < n) {
    std::ostringstream os;
    os << "rank deficiency: " << g.size() << " samples cannot determine " << n << " unknowns";
    throw RankDeficiencyError(os.str(), static_cast<int>(g.size()), n);
  }
  // rows r_k = coords(a_k) / 2pi, so rho_k = r_k . coords(W). Partial sums over fixed
  // blocks of grid rows keep the reduction order independent of the thread count.
  auto design_row = [&](int i, int j, CMatrix& c) {
    frame.overlaps(g.q(i), g.p(j), D, c);
    return RVector(hermitian_coords(c * c.adjoint()) / kTwoPi);
  };
  constexpr int kBlock = 16;
  const int nblocks = (g.np + kBlock - 1) / kBlock;
  std::vector<RMatrix> G_part(nblocks);
  std::vector<RVector> b_part(nblocks);
  detail::parallel_for(nblocks, [&](int blk) {
    RMatrix Gb = RMatrix::Zero(n, n);
    RVector bb = RVector::Zero(n);
    CMatrix c;
    for (int j = blk * kBlock; j < std::min(g.np, (blk + 1) * kBlock); ++j)
      for (int i = 0; i < g.nq; ++i) {
        const RVector r = design_row(i, j, c);
        Gb.selfadjointView<Eigen::Lower>().rankUpdate(r);
        bb += rho.at(i, j) * r;
      }
    G_part[blk] = std::move(Gb);
    b_part[blk] = std::move(bb);
  });
  RMatrix G = RMatrix::Zero(n, n);
  RVector b = RVector::Zero(n);
  for (int blk = 0; blk < nblocks; ++blk) {
    G += G_part[blk];
    b += b_part[blk];
  }
  G = G.selfadjointView<Eigen::Lower>();

  ReconstructionResult res;
  Eigen::SelfAdjointEigenSolver<RMatrix> es(G);
  const RVector ev = es.eigenvalues();
  const double top = ev.maxCoeff();
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev(i) > 1e-14 * top) ++res.rank;
  if (res.rank < n) {
    std::ostringstream os;
    os << "rank deficiency: sample set determines " << res.rank << " of " << n << " state coordinates";
    throw RankDeficiencyError(os.str(), res.rank, n);
  }

  // KKT system for min |A x - rho|^2 subject to tr W = 1
  const double ridge = options.ridge * G.diagonal().maxCoeff();
  RMatrix K = RMatrix::Zero(n + 1, n + 1);
  K.topLeftCorner(n, n) = G + ridge * RMatrix::Identity(n, n);
  RVector t = RVector::Zero(n);
  t.head(D).setOnes(); // coords(I): unit diagonal, zero off-diagonal
  K.block(0, n, n, 1) = t;
  K.block(n, 0, 1, n) = t.transpose();
  RVector rhs(n + 1);
  rhs.head(n) = b;
  rhs(n) = 1.0;
  const RVector x = K.fullPivLu().solve(rhs).head(n);

  res.W_raw = from_hermitian_coords(x, D);
  res.W = psd_project(res.W_raw, &res.clipped_weight);
  res.psd_projection_engaged = res.clipped_weight > 0.0;
  const RVector xp = hermitian_coords(res.W);
  std::vector<double> raw_rows(g.np, 0.0), proj_rows(g.np, 0.0);
  detail::parallel_for(g.np, [&](int j) {
    CMatrix c;
    for (int i = 0; i < g.nq; ++i) {
      const RVector r = design_row(i, j, c);
      raw_rows[j] += std::abs(rho.at(i, j) - r.dot(x));
      proj_rows[j] += std::abs(rho.at(i, j) - r.dot(xp));
    }
  });
  for (int j = 0; j < g.np; ++j) {
    res.residual_raw += raw_rows[j];
    res.residual_projected += proj_rows[j];
  }
  res.residual_raw *= g.weight();
  res.residual_projected *= g.weight();
  if (options.truth) res.trace_distance = trace_distance(res.W, *options.truth);
  if (options.max_residual && res.residual_projected > *options.max_residual) {
    std::ostringstream os;
    os << "reconstruction residual " << res.residual_projected << " exceeds threshold " << *options.max_residual;
    throw PreconditionError(os.str());
  }
  return res;
}

DensityField cell_indicator(const PhaseGrid& grid) {
  grid.validate();
  DensityField f(grid);
  const int i = std::clamp(static_cast<int>(std::lround(-grid.q_min / grid.dq)), 0, grid.nq - 1);
  const int j = std::clamp(static_cast<int>(std::lround(-grid.p_min / grid.dp)), 0, grid.np - 1);
  f.at(i, j) = 1.0 / grid.weight();
  return f;
}

} // namespace phasekit
