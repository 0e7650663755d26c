#pragma once

// Fourth-order central differences on p-major fields. Callers keep two cells
// away from the boundary.
namespace phasekit::detail {

template <class F>
auto d1(const F& f, std::size_t idx, std::ptrdiff_t stride, double h) {
  return (-f[idx + 2 * stride] + 8.0 * f[idx + stride] - 8.0 * f[idx - stride] + f[idx - 2 * stride]) /
         (12.0 * h);
}

template <class F>
auto d2(const F& f, std::size_t idx, std::ptrdiff_t stride, double h) {
  return (-f[idx + 2 * stride] + 16.0 * f[idx + stride] - 30.0 * f[idx] + 16.0 * f[idx - stride] -
          f[idx - 2 * stride]) /
         (12.0 * h * h);
}

// d^2 f / dq dp as the q-stencil applied to p-stencils.
template <class F>
auto dqp(const F& f, std::size_t idx, std::ptrdiff_t sq, std::ptrdiff_t sp, double hq, double hp) {
  auto dp_at = [&](std::size_t k) { return d1(f, k, sp, hp); };
  return (-dp_at(idx + 2 * sq) + 8.0 * dp_at(idx + sq) - 8.0 * dp_at(idx - sq) + dp_at(idx - 2 * sq)) /
         (12.0 * hq);
}

} // namespace phasekit::detail
