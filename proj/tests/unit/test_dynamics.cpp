#include "support.hpp"

using namespace phasekit;

TEST_CASE("evolve_state") {
  const OscParams P;
  const auto ops = build_canonical(P, 8);
  Rng rng(91);
  const CMatrix W = random_density(8, 8, rng);
  CHECK(max_abs(evolve_state(W, ops.H, 0.0) - W) < 1e-15);
  for (int n = 0; n < 8; ++n) {
    const CMatrix Pn = projector(basis_vector(n, 8));
    CHECK(max_abs(evolve_state(Pn, ops.H, 1.37) - Pn) < 1e-12);
  }
  const CMatrix S = projector(unit_sum(8, {0, 1}));
  CHECK(max_abs(evolve_state(S, ops.H, kTwoPi) - S) < 1e-10);

  const CMatrix Wt = evolve_state(W, ops.H, 0.8);
  CHECK((hermitian_eig(Wt).values - hermitian_eig(W).values).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(quantum_expectation(Wt, ops.H) == doctest::Approx(quantum_expectation(W, ops.H)).epsilon(1e-12));
  CHECK(max_abs(evolve_state(evolve_state(W, ops.H, 0.3), ops.H, 0.5) - evolve_state(W, ops.H, 0.8)) < 1e-10);
  // any hermitian generator
  const CMatrix Hr = random_hermitian(8, rng);
  CHECK(max_abs(evolve_state(evolve_state(W, Hr, 0.4), Hr, -0.4) - W) < 1e-12);
  CHECK_THROWS_AS(evolve_state(W, ops.a, 1.0), InvalidArgument);
}

TEST_CASE("classical_flow") {
  const OscParams P;
  const auto id = classical_flow(0.3, -0.2, 0.0, P);
  CHECK(id.q == 0.3);
  CHECK(id.p == -0.2);
  const auto r = classical_flow(1, 0, kPi / 2, P);
  CHECK(std::abs(r.q) < 1e-15);
  CHECK(r.p == doctest::Approx(-1.0));
  const OscParams U{2.0, 1.3, 0.4};
  const auto full = classical_flow(0.7, 1.1, kTwoPi / U.omega, U);
  CHECK(std::abs(full.q - 0.7) < 1e-12);
  CHECK(std::abs(full.p - 1.1) < 1e-12);
  const auto e = classical_flow(0.7, 1.1, 0.37, U);
  CHECK(std::abs(U.energy(e.q, e.p) - U.energy(0.7, 1.1)) < 1e-12);
  // Jacobian determinant by central differences
  const double h = 1e-6;
  const auto a = classical_flow(0.7 + h, 1.1, 0.37, U), b = classical_flow(0.7 - h, 1.1, 0.37, U);
  const auto c = classical_flow(0.7, 1.1 + h, 0.37, U), d = classical_flow(0.7, 1.1 - h, 0.37, U);
  const double det = ((a.q - b.q) * (c.p - d.p) - (a.p - b.p) * (c.q - d.q)) / (4 * h * h);
  CHECK(det == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("evolve_density") {
  const OscParams P;
  const FrameSpec f = FrameSpec::coherent(P, 16);
  const PhaseGrid g = auto_grid(f, 0.05);
  const CMatrix G = projector(basis_vector(0, 16));
  const DensityField r0 = husimi(G, f, g);
  CHECK(field_max_diff(evolve_density(G, f, g, 1.234), r0) < 1e-10);

  const CMatrix C = projector(coherent_overlaps(2, 0, P, 16).c.normalized());
  const DensityField rt = evolve_density(C, f, g, kPi / 2);
  const auto it = std::max_element(rt.values.begin(), rt.values.end());
  const std::size_t k = static_cast<std::size_t>(it - rt.values.begin());
  const double qpk = g.q(static_cast<int>(k % g.nq)), ppk = g.p(static_cast<int>(k / g.nq));
  CHECK(std::abs(qpk - 0.0) <= g.dq);
  CHECK(std::abs(ppk + 2.0) <= g.dp);

  Rng rng(97);
  const CMatrix W = random_density(16, 8, rng);
  const auto series = evolve_density(W, f, g, std::vector<double>{0.0, 0.5, 2.0});
  for (const auto& r : series) CHECK(std::abs(quadrature_sum(r) - 1.0) < 1e-6);
  CHECK(field_max_diff(series[0], husimi(W, f, g)) < 1e-15);
}

TEST_CASE("liouville_match") {
  const OscParams P;
  const FrameSpec f = FrameSpec::coherent(P, 16);
  const PhaseGrid g = auto_grid(f, 0.05);
  {
    // the ground-state density is rotation invariant: the identity holds to roundoff,
    // and the interpolated comparison only sees the bilinear error h^2/8 |rho''|
    const auto r = liouville_match(projector(basis_vector(0, 16)), f, g, 0.7);
    CHECK(r.exact_error < 1e-8);
    CHECK(r.max_error < g.dq * g.dq / 8 * 2 / kTwoPi);
  }
  const CMatrix C = projector(coherent_overlaps(2, 0, P, 16).c.normalized());
  for (double t : {0.3, 1.0, kPi}) {
    const auto r = liouville_match(C, f, g, t);
    CHECK(r.max_error < 5e-4);
    CHECK(r.exact_error < 1e-8);
    CHECK(r.points > 0);
  }
  const PhaseGrid fine = auto_grid(f, 0.025);
  const double coarse_err = liouville_match(C, f, g, 1.0).max_error;
  const double fine_err = liouville_match(C, f, fine, 1.0).max_error;
  CHECK(coarse_err / fine_err >= 3.0);

  const FrameSpec u = FrameSpec::coherent(P.with_sigma(1.0), 16);
  CHECK_THROWS_AS(liouville_match(C, u, auto_grid(u, 0.05), 1.0), PreconditionError);
}

TEST_CASE("coherent_evolution_check") {
  const OscParams P;
  const auto g = coherent_evolution_check(0, 0, 0.9, P, 16);
  CHECK(g.defect < 1e-12);
  CHECK(std::abs(g.return_amplitude - std::polar(1.0, -0.45)) < 1e-12);
  for (double t : {0.3, 1.0, kTwoPi}) CHECK(coherent_evolution_check(2, 0, t, P, 48).defect < 1e-8);
  const auto full = coherent_evolution_check(0, 0, kTwoPi, P, 16);
  CHECK(std::abs(full.return_amplitude + 1.0) < 1e-12);
  CHECK_THROWS_AS(coherent_evolution_check(6, 0, 1.0, P, 16), PreconditionError);
  CHECK_THROWS_AS(coherent_evolution_check(1, 0, 1.0, P.with_sigma(0.9), 16), PreconditionError);
}

TEST_CASE("generator_residual") {
  const OscParams P;
  CHECK(correction_coefficient(P) == doctest::Approx(0.0).scale(1.0));
  CHECK(correction_coefficient(P.with_sigma(1.0)) == doctest::Approx(0.75));
  Rng rng(101);
  for (double s : {1.0 / std::sqrt(2.0), 1.0}) {
    const FrameSpec f = FrameSpec::coherent(P.with_sigma(s), 8);
    const PhaseGrid g = auto_grid(f, 0.05);
    const auto r = generator_residual(projector(random_pure(8, 4, rng)), f, g);
    CHECK(r.max_residual < 1e-4);
    CHECK(r.max_time_derivative > 1e-2); // the check is not vacuous
    const auto st = generator_residual(projector(basis_vector(2, 8)), f, g);
    CHECK(st.max_time_derivative < 1e-6);
    CHECK(st.max_rhs < 1e-6);
  }
  const FrameSpec f = FrameSpec::coherent(P, 8);
  CHECK_THROWS_AS(generator_residual(CMatrix::Identity(8, 8) / 8.0, f, auto_grid(f, 0.05)), PreconditionError);
}
