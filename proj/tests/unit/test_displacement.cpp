#include "support.hpp"

using namespace phasekit;

TEST_CASE("displacement_op: identity, unitarity, coherent column") {
  const OscParams P;
  CHECK(max_abs(displacement_op(0, 0, P, 8).matrix - CMatrix::Identity(8, 8)) == 0.0);

  const DisplacementBuilder U(P, 32);
  for (auto [q, p] : {std::pair{1.0, 0.5}, std::pair{-1.5, 0.8}, std::pair{0.3, -1.9}}) {
    const Displacement d = U(q, p);
    REQUIRE(d.z_norm2 <= 2.0);
    CHECK(d.trusted);
    const CVector c = coherent_overlaps(q, p, P, 32).c;
    CHECK((d.matrix.col(0) - c).cwiseAbs().maxCoeff() < 1e-8);
    const int b = trusted_block(32);
    const CMatrix UUd = d.matrix * d.matrix.adjoint();
    CHECK(max_abs((UUd - CMatrix::Identity(32, 32)).topLeftCorner(b, b)) < 1e-8);
  }
}

TEST_CASE("displacement_op flags the truncation-dominated regime") {
  const OscParams P;
  CHECK_FALSE(displacement_op(6.0, 0.0, P, 16).trusted); // |z|^2 = 18 > 4
  CHECK(displacement_op(1.0, 1.0, P, 16).trusted);
  CHECK(displacement_alpha(2.0, 0.0, P) == cplx(std::sqrt(2.0), 0.0));
}

TEST_CASE("composition law U_x U_x' = e^{-iqp'} U_{x+x'}") {
  const OscParams P;
  const DisplacementBuilder U(P, 48);
  const double q = 0.3, p = 0.2, q2 = -0.1, p2 = 0.4;
  const CMatrix lhs = U(q, p).matrix * U(q2, p2).matrix;
  const CMatrix rhs = std::polar(1.0, -q * p2) * U(q + q2, p + p2).matrix;
  CHECK(max_abs((lhs - rhs).topLeftCorner(24, 24)) < 1e-7);
}

TEST_CASE("weyl_op") {
  const OscParams P;
  CHECK(max_abs(weyl_op(0, 0, P, 8).matrix - CMatrix::Identity(8, 8)) == 0.0);
  const double q = 0.5, p = 0.7;
  const CMatrix W = weyl_op(q, p, P, 32).matrix;
  const CMatrix ref = std::polar(1.0, q * p / 2) * displacement_op(-q, p, P, 32).matrix;
  CHECK(max_abs(W - ref) == 0.0);
  const CMatrix Wm = weyl_op(-q, -p, P, 32).matrix;
  CHECK(max_abs((W.adjoint() - Wm).topLeftCorner(16, 16)) < 1e-8);
}

TEST_CASE("Laguerre block matches the exponential route on the trusted block") {
  const OscParams P{1.4, 0.6, 0.5};
  const DisplacementBuilder U(P, 40);
  for (auto [q, p] : {std::pair{0.7, -0.3}, std::pair{-1.0, 0.9}}) {
    const CMatrix B = displacement_block(q, p, P, 20, 20);
    CHECK(max_abs(B - U(q, p).matrix.topLeftCorner(20, 20)) < 1e-9);
  }
  // far outside: entries stay finite and bounded by 1
  const CMatrix far = displacement_block(40.0, -35.0, P, 64, 64);
  CHECK(far.allFinite());
  CHECK(max_abs(far) <= 1.0 + 1e-12);
}

TEST_CASE("char_function examples") {
  const OscParams P;
  const PhaseGrid g = PhaseGrid::centered(2.0, 2.0, 0.5);
  const CharSamples s = char_function(projector(basis_vector(0, 4)), g, P, "phi0");
  const int i1 = 6, j0 = 4; // q = 1, p = 0
  REQUIRE(g.q(i1) == 1.0);
  REQUIRE(g.p(j0) == 0.0);
  CHECK(std::abs(s.values[g.index(i1, j0)] - std::exp(-0.25)) < 1e-14);
  CHECK(s.source == "phi0");

  Rng rng(2);
  const CMatrix W = random_density(6, 6, rng);
  const CharSamples sw = char_function(W, g, P);
  CHECK(std::abs(sw.values[g.index(4, 4)] - 1.0) < 1e-12);
  for (const cplx& v : sw.values) CHECK(std::abs(v) <= 1.0 + 1e-10);

  // conj(tr V U) = tr(V^dag U^dag) = tr(V^dag U_{-q,-p}) e^{...}: check via matrices
  const CMatrix V = random_hermitian(6, rng) + cplx(0, 1) * random_hermitian(6, rng);
  const CMatrix Ub = displacement_block(0.4, -0.6, P, 6, 6);
  const cplx lhs = std::conj((V * Ub).trace());
  const cplx rhs = (V.adjoint() * Ub.adjoint()).trace();
  CHECK(std::abs(lhs - rhs) < 1e-14);
}

TEST_CASE("reconstruct_from_char roundtrips") {
  const OscParams P;
  const PhaseGrid g = PhaseGrid::centered(10.0, 10.0, 0.05);
  {
    const CMatrix V = projector(basis_vector(0, 6));
    const auto r = reconstruct_from_char(char_function(V, g, P), P, 6);
    CHECK((r.V - V).norm() < 1e-6);
    CHECK(r.covered);
  }
  {
    const auto r = reconstruct_from_char(char_function(CMatrix::Zero(6, 6), g, P), P, 6);
    CHECK(r.V.norm() == 0.0);
  }
  {
    Rng rng(4);
    const CMatrix V = random_hermitian(6, rng);
    const auto r = reconstruct_from_char(char_function(V, g, P), P, 6);
    CHECK((r.V - V).norm() < 1e-6);
  }
  {
    // too narrow a grid is diagnosed
    const CMatrix V = projector(basis_vector(3, 6));
    const auto r = reconstruct_from_char(char_function(V, PhaseGrid::centered(1.5, 1.5, 0.05), P), P, 6);
    CHECK_FALSE(r.covered);
    CHECK(r.boundary_max > 1e-3);
  }
}

TEST_CASE("hs_inner_via_char: Parseval identity") {
  const OscParams P;
  const PhaseGrid g = PhaseGrid::centered(10.0, 10.0, 0.05);
  const CMatrix P0 = projector(basis_vector(0, 6)), P1 = projector(basis_vector(1, 6));
  CHECK(std::abs(hs_inner_via_char(P0, P0, g, P) - 1.0) < 1e-8);
  CHECK(std::abs(hs_inner_via_char(P0, P1, g, P)) < 1e-8);
  Rng rng(8);
  for (int k = 0; k < 3; ++k) {
    const CMatrix A = random_hermitian(6, rng), B = random_hermitian(6, rng);
    CHECK(std::abs(hs_inner_via_char(A, B, g, P) - (A.adjoint() * B).trace()) < 1e-6);
  }
  // the L2 norm of the characteristic function is sqrt(2 pi) ||V||_HS
  const CMatrix V = random_hermitian(6, rng);
  const CharSamples s = char_function(V, g, P);
  double n2 = 0.0;
  for (const cplx& v : s.values) n2 += std::norm(v) * g.weight();
  CHECK(std::sqrt(n2) == doctest::Approx(std::sqrt(kTwoPi) * V.norm()).epsilon(1e-2));
}
