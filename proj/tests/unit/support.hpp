#pragma once

#include <doctest.h>

#include <phasekit/phasekit.hpp>

namespace pk = phasekit;

inline pk::CVector unit_sum(int D, std::initializer_list<int> ns) {
  pk::CVector v = pk::CVector::Zero(D);
  for (int n : ns) v(n) = 1.0;
  return v.normalized();
}

inline double field_max_diff(const pk::DensityField& a, const pk::DensityField& b) {
  double e = 0.0;
  for (std::size_t k = 0; k < a.values.size(); ++k) e = std::max(e, std::abs(a.values[k] - b.values[k]));
  return e;
}
