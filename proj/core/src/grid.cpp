#include "phasekit/grid.hpp"

#include <cmath>

#include "phasekit/error.hpp"

namespace phasekit {

AxisGrid AxisGrid::centered(double half, double step) {
  if (!(step > 0.0)) throw InvalidArgument("grid spacing must be positive");
  if (!(half >= 0.0)) throw InvalidArgument("grid half-width must be non-negative");
  const int k = static_cast<int>(std::lround(half / step));
  return {-k * step, step, 2 * k + 1};
}

PhaseGrid PhaseGrid::centered(double half_q, double half_p, double spacing) {
  return from_axes(AxisGrid::centered(half_q, spacing), AxisGrid::centered(half_p, spacing));
}

PhaseGrid PhaseGrid::from_axes(const AxisGrid& q, const AxisGrid& p) {
  return {q.start, p.start, q.step, p.step, q.n, p.n};
}

void PhaseGrid::validate() const {
  if (!(dq > 0.0) || !(dp > 0.0)) throw InvalidArgument("grid spacing must be positive");
  if (nq < 1 || np < 1 || static_cast<long long>(nq) * np < 4)
    throw InadequateGridError("inadequate grid: fewer than four points");
}

double quadrature_sum(const DensityField& rho) {
  double s = 0.0;
  for (double v : rho.values) s += v;
  return s * rho.grid.weight();
}

double quadrature_norm2(const WaveField& psi) {
  double s = 0.0;
  for (const cplx& v : psi.values) s += std::norm(v);
  return s * psi.grid.weight();
}

} // namespace phasekit
