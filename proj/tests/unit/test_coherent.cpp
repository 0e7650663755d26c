#include "support.hpp"

using namespace phasekit;

namespace {

// (6.29)-type closed form for the matched frame:
// Psi_n(q,p) = (1/sqrt(2pi)) e^{-iqp/2} e^{-|z|^2/2} z^n / sqrt(n!)
cplx oscillator_wave(int n, double q, double p, const OscParams& P) {
  const cplx z = frame_z(q, p, P);
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return std::polar(1.0 / std::sqrt(kTwoPi), -q * p / 2) * std::exp(-std::norm(z) / 2) * std::pow(z, n) /
         std::sqrt(f);
}

} // namespace

TEST_CASE("coherent_overlaps examples") {
  const OscParams P;
  const auto o = coherent_overlaps(0, 0, P, 8);
  CHECK(o.closed_form);
  CHECK(std::abs(o.c(0) - 1.0) < 1e-15);
  CHECK(o.c.tail(7).norm() == 0.0);
  const auto c = coherent_overlaps(2, 0, P, 32);
  CHECK(c.c(0).real() == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  CHECK(c.c(1).real() == doctest::Approx(std::sqrt(2.0) * std::exp(-1.0)).epsilon(1e-14));
  CHECK(std::abs(c.c.squaredNorm() - 1.0) < 1e-10);
  CHECK_FALSE(coherent_overlaps(2, 0, P.with_sigma(0.9), 8).closed_form);
}

TEST_CASE("phase_transform: ground state, eigenstates, isometry") {
  const OscParams P;
  const FrameSpec f = FrameSpec::coherent(P, 8);
  const PhaseGrid g = auto_grid(f, 0.05);
  const int i0 = g.nq / 2, j0 = g.np / 2;
  REQUIRE(g.q(i0) == doctest::Approx(0.0));
  const WaveField psi0 = phase_transform(basis_vector(0, 8), f, g);
  CHECK(std::norm(psi0.at(i0, j0)) == doctest::Approx(1.0 / kTwoPi).epsilon(1e-14));
  for (int n = 0; n < 8; ++n) {
    const WaveField psi = phase_transform(basis_vector(n, 8), f, g);
    double e = 0.0;
    for (int j = 0; j < g.np; j += 7)
      for (int i = 0; i < g.nq; i += 7) e = std::max(e, std::abs(psi.at(i, j) - oscillator_wave(n, g.q(i), g.p(j), P)));
    CHECK(e < 1e-10);
  }
  Rng rng(17);
  for (double s : {1.0 / std::sqrt(2.0), 0.9}) {
    const FrameSpec fs = FrameSpec::coherent(P.with_sigma(s), 8);
    const PhaseGrid gs = auto_grid(fs, 0.05);
    const CVector v = random_pure(8, 8, rng);
    const WaveField psi = phase_transform(v, fs, gs);
    CHECK(std::abs(quadrature_norm2(psi) - 1.0) < 1e-6);
    double mx = 0.0;
    for (const cplx& x : psi.values) mx = std::max(mx, std::abs(x));
    CHECK(mx <= 1.0 / std::sqrt(kTwoPi) + 1e-12);
  }
  // mixed frames have no wave function
  CHECK_THROWS_AS(phase_transform(basis_vector(0, 4), FrameSpec::fock_mixture(P, 4, {1, 1}), g), PreconditionError);
}

TEST_CASE("auto grid is adequate; truncated grids are not") {
  const OscParams P;
  for (double s : {1.0 / std::sqrt(2.0), 0.5, 1.2}) {
    const FrameSpec f = FrameSpec::coherent(P.with_sigma(s), 10);
    const PhaseGrid g = auto_grid(f, 0.05);
    CHECK(grid_adequacy(f, g).adequate);
    CHECK(grid_adequacy(f, g).boundary_max < 1e-12);
    CHECK_FALSE(grid_adequacy(f, PhaseGrid::centered(2.0, 2.0, 0.05)).adequate);
  }
}

TEST_CASE("resolution_check") {
  const OscParams P;
  const FrameSpec f = FrameSpec::coherent(P, 16);
  const auto r = resolution_check(f, PhaseGrid::centered(10, 10, 0.05));
  CHECK(r.block == 8);
  CHECK(r.defect < 1e-8);
  const auto ra = resolution_check(f, auto_grid(f, 0.05));
  CHECK(ra.adequate);
  CHECK(ra.defect < 1e-8);
  const auto small = resolution_check(f, PhaseGrid::centered(2, 2, 0.05));
  CHECK(small.defect > 1e-3);
  CHECK_FALSE(small.adequate);
  CHECK_THROWS_AS(resolution_check(f, PhaseGrid{}), InadequateGridError);
  // unmatched and mixed frames resolve the identity too
  for (const FrameSpec& h : {FrameSpec::coherent(P.with_sigma(1.1), 8), FrameSpec::fock_mixture(P, 8, {0.5, 0.3, 0.2})}) {
    const auto rh = resolution_check(h, auto_grid(h, 0.1));
    CHECK(rh.defect < 1e-8);
  }
}

TEST_CASE("kernel") {
  const OscParams P;
  const FrameSpec f = FrameSpec::coherent(P, 16);
  for (PhasePoint x : {PhasePoint{0, 0}, PhasePoint{1.3, -0.4}, PhasePoint{-2, 2}})
    CHECK(std::abs(kernel(x, x, f) - 1.0 / kTwoPi) < 1e-14);
  CHECK(std::abs(kernel({0, 0}, {1, 0}, f)) == doctest::Approx(std::exp(-0.25) / kTwoPi).epsilon(1e-13));
  const PhasePoint x{0.4, 0.2}, y{-0.7, 1.1};
  CHECK(std::abs(kernel(x, y, f) - std::conj(kernel(y, x, f))) < 1e-15);

  const std::vector<PhasePoint> probe{{0, 0}, {1, 0}, {0.5, -1.5}, {-1, 1}};
  CHECK(kernel_reproducing_check(f, auto_grid(f, 0.05), probe) < 1e-8);

  // Gram matrix of the kernel is positive semidefinite
  const std::vector<PhasePoint> pts{{0, 0}, {0.1, 0}, {0.3, 0.2}, {-1, 2}, {2, -1}, {0.05, 0.05}};
  CMatrix G(pts.size(), pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = 0; j < pts.size(); ++j) G(i, j) = kernel(pts[i], pts[j], f);
  CHECK(hermitian_eig(G).values.minCoeff() >= -1e-10);
}

TEST_CASE("pde_residual: two routes agree") {
  const OscParams P;
  const FrameSpec f = FrameSpec::coherent(P, 16);
  const PhaseGrid g = PhaseGrid::centered(6.0, 6.0, 0.02);
  for (auto op : {PdeOperator::Q, PdeOperator::P, PdeOperator::H_general, PdeOperator::H_matched}) {
    for (int n : {0, 1, 3}) {
      const auto r = pde_residual(op, basis_vector(n, 16), f, g);
      CAPTURE(n);
      CHECK(r.residual < 1e-6);
      CHECK(r.spacing_ok);
      CHECK(r.points > 0);
    }
  }
  CHECK(pde_residual(PdeOperator::Q, CVector::Zero(16), f, g).residual == 0.0);
  CHECK_FALSE(pde_residual(PdeOperator::Q, basis_vector(0, 16), f, PhaseGrid::centered(6, 6, 0.2)).spacing_ok);
  // matched form is refused for unmatched frames
  const FrameSpec u = FrameSpec::coherent(P.with_sigma(0.9), 16);
  CHECK_THROWS_AS(pde_residual(PdeOperator::H_matched, basis_vector(0, 16), u, g), PreconditionError);
  CHECK(pde_residual(PdeOperator::P, basis_vector(1, 16), u, g).residual < 1e-6);
  // states reaching the truncation edge are refused
  CHECK_THROWS_AS(pde_residual(PdeOperator::Q, basis_vector(15, 16), f, g), PreconditionError);
}

TEST_CASE("H_matched eigen-relation V H phi_n = omega (n + 1/2) Psi_n") {
  const OscParams P;
  const FrameSpec f = FrameSpec::coherent(P, 16);
  const PhaseGrid g = PhaseGrid::centered(6.0, 6.0, 0.02);
  for (int n = 0; n <= 3; ++n) {
    const WaveField psi = phase_transform(basis_vector(n, 16), f, g);
    const WaveField hpsi = apply_phase_operator(PdeOperator::H_matched, psi, P, false);
    double e = 0.0;
    for (int j = 2; j < g.np - 2; ++j)
      for (int i = 2; i < g.nq - 2; ++i) e = std::max(e, std::abs(hpsi.at(i, j) - (n + 0.5) * psi.at(i, j)));
    CHECK(e < 1e-6);
  }
}

TEST_CASE("gauge transforms") {
  const OscParams P;
  const FrameSpec f = FrameSpec::coherent(P, 8);
  const PhaseGrid g = PhaseGrid::centered(3.0, 3.0, 0.1);
  Rng rng(23);
  const CVector v = random_pure(8, 6, rng);
  const WaveField psi = phase_transform(v, f, g);
  const WaveField same = gauge_transform(psi, Gauge::none);
  CHECK(same.values == psi.values);
  const WaveField h = gauge_transform(psi, Gauge::half_qp);
  for (std::size_t k = 0; k < psi.values.size(); ++k) CHECK(std::abs(std::abs(h.values[k]) - std::abs(psi.values[k])) < 1e-15);
  const WaveField w = weyl_phase_transform(v, f, g);
  double e = 0.0;
  for (int j = 0; j < g.np; ++j)
    for (int i = 0; i < g.nq; ++i) e = std::max(e, std::abs(h.at(i, j) - w.at(g.nq - 1 - i, j)));
  CHECK(e < 1e-8);
  const WaveField full = gauge_transform(psi, Gauge::qp);
  CHECK(std::abs(full.at(3, 5) - std::polar(1.0, g.q(3) * g.p(5)) * psi.at(3, 5)) < 1e-15);
}

TEST_CASE("orthogonality <Phi, d/dq Psi> = 0 for the coherent frame") {
  const OscParams P;
  const FrameSpec f = FrameSpec::coherent(P, 8);
  const PhaseGrid g = auto_grid(f, 0.05);
  Rng rng(31);
  const WaveField a = phase_transform(random_pure(8, 4, rng), f, g);
  const WaveField b = phase_transform(random_pure(8, 4, rng), f, g);
  cplx s = 0.0;
  for (int j = 0; j < g.np; ++j)
    for (int i = 2; i < g.nq - 2; ++i) {
      const cplx d = (-b.at(i + 2, j) + 8.0 * b.at(i + 1, j) - 8.0 * b.at(i - 1, j) + b.at(i - 2, j)) / (12.0 * g.dq);
      s += std::conj(a.at(i, j)) * d * g.weight();
    }
  CHECK(std::abs(s) < 1e-6);
}

TEST_CASE("Bargmann transform") {
  const OscParams P;
  const FrameSpec f = FrameSpec::coherent(P, 32);
  for (int n = 0; n < 6; ++n) {
    const CVector a = bargmann_transform(basis_vector(n, 32), f);
    double fact = 1.0;
    for (int k = 2; k <= n; ++k) fact *= k;
    CHECK(std::abs(a(n) - 1.0 / std::sqrt(fact)) < 1e-15);
    CHECK(a.norm() == doctest::Approx(1.0 / std::sqrt(fact)));
  }
  CVector v = CVector::Zero(32);
  v(0) = v(1) = 1.0;
  CHECK(bargmann_norm2(bargmann_transform(v, f)) == doctest::Approx(2.0).epsilon(1e-15));

  Rng rng(41);
  const CVector psi = random_pure(32, 12, rng);
  const CVector a = bargmann_transform(psi, f);
  CHECK(std::abs(bargmann_norm2(a) - 1.0) < 1e-12);
  const double q = 1.0, p = 1.0;
  const cplx z = frame_z(q, p, P);
  const cplx lhs = bargmann_eval(a, z);
  const cplx rhs = std::exp(std::norm(z) / 2) * std::polar(1.0, q * p / 2) * std::sqrt(kTwoPi) * phase_value(psi, f, q, p);
  CHECK(std::abs(lhs - rhs) < 1e-8);
  CHECK_THROWS_AS(bargmann_transform(psi, FrameSpec::coherent(P.with_sigma(0.9), 32)), PreconditionError);
}

TEST_CASE("Bargmann operators act as d/dz, z, omega (z d/dz + 1/2)") {
  const OscParams P;
  const FrameSpec f = FrameSpec::coherent(P, 16);
  CHECK(bargmann_ops_check(BargmannOp::a, basis_vector(1, 16), f).residual < 1e-15);
  const CVector a1 = bargmann_transform(build_canonical(P, 16).a * basis_vector(1, 16), f);
  CHECK(std::abs(a1(0) - 1.0) < 1e-15);
  const CVector shifted = bargmann_transform(build_canonical(P, 16).adag * basis_vector(2, 16), f);
  const CVector a2 = bargmann_transform(basis_vector(2, 16), f);
  CHECK(std::abs(shifted(3) - a2(2)) < 1e-15);

  Rng rng(43);
  const CVector psi = random_pure(16, 12, rng);
  for (auto op : {BargmannOp::Q, BargmannOp::P, BargmannOp::a, BargmannOp::adag, BargmannOp::H}) {
    const auto r = bargmann_ops_check(op, psi, f);
    CHECK(r.residual < 1e-12);
    CHECK_FALSE(r.truncated);
  }
  CHECK(bargmann_ops_check(BargmannOp::adag, basis_vector(15, 16), f).truncated);
}

TEST_CASE("Cauchy-Riemann residual of the Bargmann function") {
  const OscParams P;
  const FrameSpec f = FrameSpec::coherent(P, 16);
  const PhaseGrid xe = PhaseGrid::centered(2.0, 2.0, 0.02);
  Rng rng(47);
  for (const CVector& psi : {basis_vector(0, 16), unit_sum(16, {1, 3}), random_pure(16, 6, rng)})
    CHECK(cauchy_riemann_residual(psi, f, xe) < 1e-5);
}
