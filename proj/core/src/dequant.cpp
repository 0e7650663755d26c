#include "phasekit/dequant.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include "parallel.hpp"
#include "phasekit/error.hpp"

namespace phasekit {

namespace {

double ipow(double x, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

// (x - mu)^2 - v along one axis, as monomials in that variable
void add_centered_square(std::map<std::pair<int, int>, double>& t, bool along_q, double mu, double v,
                         double scale, double& constant) {
  const auto sq = along_q ? std::make_pair(2, 0) : std::make_pair(0, 2);
  const auto lin = along_q ? std::make_pair(1, 0) : std::make_pair(0, 1);
  t[sq] += scale;
  t[lin] += -2.0 * mu * scale;
  constant += scale * (mu * mu - v);
}

Dequantizer build(const std::string& symbol, const OscParams& params, double eta_q_mean, double eta_q_var,
                  double eta_p_mean, double eta_p_var) {
  std::map<std::pair<int, int>, double> t;
  double constant = 0.0;
  if (symbol == "Q") {
    t[{1, 0}] = 1.0;
    constant = -eta_q_mean;
  } else if (symbol == "P") {
    t[{0, 1}] = 1.0;
    constant = -eta_p_mean;
  } else if (symbol == "Q2") {
    add_centered_square(t, true, eta_q_mean, eta_q_var, 1.0, constant);
  } else if (symbol == "P2") {
    add_centered_square(t, false, eta_p_mean, eta_p_var, 1.0, constant);
  } else if (symbol == "H") {
    add_centered_square(t, false, eta_p_mean, eta_p_var, 0.5 / params.m, constant);
    add_centered_square(t, true, eta_q_mean, eta_q_var, 0.5 * params.m * params.omega * params.omega, constant);
  } else {
    throw InvalidArgument("unknown dequantizer symbol '" + symbol + "' (expected Q, P, Q2, P2 or H)");
  }
  Dequantizer d{symbol, {}, constant, params};
  for (const auto& [k, c] : t)
    if (c != 0.0) d.terms.push_back({k.first, k.second, c});
  return d;
}

} // namespace

double Dequantizer::operator()(double q, double p) const {
  double s = constant;
  for (const auto& t : terms) s += t.coefficient * ipow(q, t.q_power) * ipow(p, t.p_power);
  return s;
}

CMatrix Dequantizer::quantum_operator(int D) const {
  const auto ops = build_canonical(params, D);
  if (symbol == "Q") return ops.Q;
  if (symbol == "P") return ops.P;
  if (symbol == "Q2") return position_squared(params, D);
  if (symbol == "P2") return momentum_squared(params, D);
  if (symbol == "H") return ops.H;
  throw InvalidArgument("dequantizer '" + symbol + "' has no paired operator");
}

Dequantizer dequantizer_for(const std::string& symbol, const FrameSpec& frame) {
  const auto& m = frame.moments();
  return build(symbol, frame.params(), -m.mean_q, m.var_q, -m.mean_p, m.var_p);
}

Dequantizer dequantizer_for(const std::string& symbol, const OscParams& params) {
  params.validate();
  const double s2 = params.sigma * params.sigma;
  return build(symbol, params, 0.0, s2, 0.0, 0.25 / s2);
}

DequantizerCheck check_dequantizer(const CMatrix& W, const Dequantizer& f, const DensityField& rho) {
  DequantizerCheck c;
  c.quantum = quantum_expectation(W, f.quantum_operator(static_cast<int>(W.rows())));
  c.classical = classical_expectation(rho, [&f](double q, double p) { return f(q, p); });
  c.discrepancy = std::abs(c.quantum - c.classical);
  return c;
}

DequantizerCheck check_dequantizer(const CMatrix& W, const std::string& symbol, const FrameSpec& frame,
                                   const PhaseGrid& grid) {
  const Dequantizer f = dequantizer_for(symbol, frame);
  if (symbol != "Q" && symbol != "P") {
    const double above = weight_above(W, trusted_block(static_cast<int>(W.rows())));
    if (above > 1e-8) {
      std::ostringstream os;
      os << "check_dequantizer(" << symbol << "): state has weight " << above << " above the trusted block";
      throw PreconditionError(os.str());
    }
  }
  return check_dequantizer(W, f, husimi(W, frame, grid));
}

PhaseFunction oscillator_density(int n, const OscParams& params) {
  params.validate();
  if (n < 0) throw InvalidArgument("oscillator_density: negative level");
  if (!params.matched()) throw PreconditionError("oscillator_density: closed form holds for the matched frame only");
  const double lf = std::lgamma(n + 1.0);
  return [n, params, lf](double q, double p) {
    const double x = params.energy(q, p) / params.omega;
    if (x == 0.0) return n == 0 ? 1.0 / kTwoPi : 0.0;
    return std::exp(n * std::log(x) - x - lf) / kTwoPi;
  };
}

DensityField oscillator_density_field(int n, const OscParams& params, const PhaseGrid& grid) {
  const auto f = oscillator_density(n, params);
  DensityField out(grid);
  for (int j = 0; j < grid.np; ++j)
    for (int i = 0; i < grid.nq; ++i) out.at(i, j) = f(grid.q(i), grid.p(j));
  return out;
}

std::function<double(double)> energy_density(int n, const OscParams& params) {
  params.validate();
  if (n < 0) throw InvalidArgument("energy_density: negative level");
  const double w = params.omega;
  const double lf = std::lgamma(n + 1.0);
  return [n, w, lf](double E) {
    if (E < 0.0) return 0.0;
    if (E == 0.0) return n == 0 ? 1.0 / w : 0.0;
    return std::exp(n * std::log(E / w) - E / w - lf) / w;
  };
}

double energy_cdf(int n, const OscParams& params, double E) {
  if (E <= 0.0) return 0.0;
  const double x = E / params.omega;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k <= n; ++k) {
    term *= x / k;
    sum += term;
  }
  return 1.0 - std::exp(-x) * sum;
}

EnergyHistogram energy_histogram(const DensityField& rho, const OscParams& params, double bin_width,
                                 double energy_max, int subsample) {
  params.validate();
  if (!(bin_width > 0.0) || !(energy_max > bin_width) || subsample < 1)
    throw InvalidArgument("energy_histogram: need bin width > 0, energy_max > bin width, subsample >= 1");
  const PhaseGrid& g = rho.grid;
  const int nbins = static_cast<int>(std::ceil(energy_max / bin_width - 1e-9));
  EnergyHistogram h;
  h.bin_width = bin_width;
  h.density.assign(nbins, 0.0);
  double total = 0.0;
  const double share = g.weight() / (subsample * subsample);
  for (int j = 0; j < g.np; ++j)
    for (int i = 0; i < g.nq; ++i) {
      const double mass = rho.at(i, j) * share;
      if (mass == 0.0) continue;
      for (int b = 0; b < subsample; ++b)
        for (int a = 0; a < subsample; ++a) {
          const double q = g.q(i) + g.dq * ((a + 0.5) / subsample - 0.5);
          const double p = g.p(j) + g.dp * ((b + 0.5) / subsample - 0.5);
          const int bin = static_cast<int>(params.energy(q, p) / bin_width);
          total += mass;
          if (bin < nbins)
            h.density[bin] += mass;
          else
            h.overflow += mass;
        }
    }
  if (!(total > 0.0)) throw InvalidArgument("energy_histogram: density has no mass");
  double mean = 0.0;
  for (int b = 0; b < nbins; ++b) {
    mean += h.density[b] * h.bin_center(b);
    h.density[b] /= total * bin_width;
  }
  h.overflow /= total;
  h.mean = mean / total;
  return h;
}

EffectDequantization dequantize_effect(const CMatrix& A, const FrameSpec& frame, const PhaseGrid& grid,
                                       const std::vector<CMatrix>& probes) {
  const int D = frame.dim();
  if (A.rows() != D || A.cols() != D) throw InvalidArgument("dequantize_effect: operator dimension differs from frame");
  if (hermiticity_defect(A) > 1e-10) throw InvalidArgument("dequantize_effect: operator is not hermitian");
  if (!grid_adequacy(frame, grid).adequate)
    throw InadequateGridError("inadequate grid for dequantize_effect");
  const int n = D * D;
  const double scale = grid.weight() / kTwoPi;
  // basis of the polynomial stage
  static const int powers[6][2] = {{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}};

  auto design = [&](int i, int j, CMatrix& c) {
    frame.overlaps(grid.q(i), grid.p(j), D, c);
    return RVector(scale * hermitian_coords(c * c.adjoint()));
  };

  // Accumulate T(phi_m) for the six monomials and the Gram matrix B B^T.
  constexpr int kBlock = 16;
  const int nblocks = (grid.np + kBlock - 1) / kBlock;
  std::vector<RMatrix> T_part(nblocks), G_part(nblocks);
  detail::parallel_for(nblocks, [&](int blk) {
    RMatrix T = RMatrix::Zero(n, 6), G = RMatrix::Zero(n, n);
    CMatrix c;
    for (int j = blk * kBlock; j < std::min(grid.np, (blk + 1) * kBlock); ++j)
      for (int i = 0; i < grid.nq; ++i) {
        const RVector r = design(i, j, c);
        const double q = grid.q(i), p = grid.p(j);
        for (int m = 0; m < 6; ++m) T.col(m) += ipow(q, powers[m][0]) * ipow(p, powers[m][1]) * r;
        G.selfadjointView<Eigen::Lower>().rankUpdate(r);
      }
    T_part[blk] = std::move(T);
    G_part[blk] = std::move(G);
  });
  RMatrix T = RMatrix::Zero(n, 6), G = RMatrix::Zero(n, n);
  for (int b = 0; b < nblocks; ++b) {
    T += T_part[b];
    G += G_part[b];
  }
  G = G.selfadjointView<Eigen::Lower>();

  EffectDequantization out;
  Eigen::SelfAdjointEigenSolver<RMatrix> es(G);
  const RVector ev = es.eigenvalues();
  const double top = ev.maxCoeff();
  const double thr = 1e-16 * top; // singular values of B at 1e-8 relative
  for (Eigen::Index k = 0; k < ev.size(); ++k)
    if (ev(k) > thr) ++out.rank;
  if (out.rank < n) {
    std::ostringstream os;
    os << "rank deficiency: the frame on this grid spans " << out.rank << " of " << n << " operator directions";
    throw RankDeficiencyError(os.str(), out.rank, n);
  }

  const RVector target = hermitian_coords(A);
  const RVector coef = T.colPivHouseholderQr().solve(target);
  RVector fitted = T * coef;
  out.polynomial = Dequantizer{"custom", {}, coef(0), frame.params()};
  for (int m = 1; m < 6; ++m)
    if (coef(m) != 0.0) out.polynomial.terms.push_back({powers[m][0], powers[m][1], coef(m)});
  out.f.resize(grid.size());
  for (int j = 0; j < grid.np; ++j)
    for (int i = 0; i < grid.nq; ++i) out.f[grid.index(i, j)] = out.polynomial(grid.q(i), grid.p(j));

  RVector R = target - fitted;
  if (R.norm() > 1e-6) {
    // minimum-norm correction g = B^T y with (B B^T) y = R on the retained spectrum
    RVector y = RVector::Zero(n);
    for (Eigen::Index k = 0; k < ev.size(); ++k)
      if (ev(k) > thr) y += (es.eigenvectors().col(k).dot(R) / ev(k)) * es.eigenvectors().col(k);
    std::vector<RVector> corr_part(nblocks, RVector::Zero(n));
    detail::parallel_for(nblocks, [&](int blk) {
      CMatrix c;
      for (int j = blk * kBlock; j < std::min(grid.np, (blk + 1) * kBlock); ++j)
        for (int i = 0; i < grid.nq; ++i) {
          const RVector r = design(i, j, c);
          const double g = r.dot(y);
          out.f[grid.index(i, j)] += g;
          corr_part[blk] += g * r;
        }
    });
    for (const auto& v : corr_part) fitted += v;
    out.corrected = true;
  }
  out.residual = (target - fitted).norm();

  if (!probes.empty()) {
    const auto rhos = husimi_batch(probes, frame, grid);
    for (std::size_t k = 0; k < probes.size(); ++k) {
      const double q = quantum_expectation(probes[k], A);
      const double c = classical_expectation(rhos[k], out.f);
      out.probe_discrepancy = std::max(out.probe_discrepancy, std::abs(q - c));
    }
  }
  return out;
}

} // namespace phasekit
