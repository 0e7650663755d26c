#pragma once

#include <cstddef>
#include <vector>

#include "phasekit/linalg.hpp"

namespace phasekit {

// Uniform 1-D grid: start, start + step, ..., start + (n-1) step.
struct AxisGrid {
  double start = 0.0;
  double step = 1.0;
  int n = 0;

  double at(int i) const { return start + step * i; }
  double last() const { return at(n - 1); }

  // Symmetric about zero, origin included; n = 2 round(half/step) + 1.
  static AxisGrid centered(double half, double step);
};

// Uniform rectangular grid on phase space. Point (i, j) sits at
// (q_min + i dq, p_min + j dp) and carries midpoint weight dq dp.
// Flat index is p-major: j * nq + i.
struct PhaseGrid {
  double q_min = 0.0;
  double p_min = 0.0;
  double dq = 1.0;
  double dp = 1.0;
  int nq = 0;
  int np = 0;

  static PhaseGrid centered(double half_q, double half_p, double spacing);
  static PhaseGrid from_axes(const AxisGrid& q, const AxisGrid& p);

  double q(int i) const { return q_min + dq * i; }
  double p(int j) const { return p_min + dp * j; }
  double q_max() const { return q(nq - 1); }
  double p_max() const { return p(np - 1); }
  double weight() const { return dq * dp; }
  std::size_t size() const { return static_cast<std::size_t>(nq) * static_cast<std::size_t>(np); }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nq + i; }
  AxisGrid q_axis() const { return {q_min, dq, nq}; }
  AxisGrid p_axis() const { return {p_min, dp, np}; }

  // Throws InadequateGridError for fewer than four points, InvalidArgument
  // for non-positive spacing.
  void validate() const;
};

template <class T>
struct PhaseField {
  PhaseGrid grid;
  std::vector<T> values;
  // False when the grid fails the boundary-decay criterion for the frame that
  // produced the field.
  bool adequate = true;

  PhaseField() = default;
  explicit PhaseField(const PhaseGrid& g, T fill = T{}) : grid(g), values(g.size(), fill) {}

  T& at(int i, int j) { return values[grid.index(i, j)]; }
  const T& at(int i, int j) const { return values[grid.index(i, j)]; }
};

using WaveField = PhaseField<cplx>;     // phase-space wave function Psi(q,p)
using DensityField = PhaseField<double>; // probability density rho(q,p)

// sum rho * dq dp
double quadrature_sum(const DensityField& rho);
// sum |Psi|^2 dq dp
double quadrature_norm2(const WaveField& psi);

} // namespace phasekit
