#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "fracgrad/quadrature.hpp"
#include "fracgrad/spectral.hpp"
#include "fracgrad/test_functions.hpp"

using namespace fracgrad;
namespace q = fracgrad::quadrature;

namespace {

template <int R>
double rel(const Field<R>& a, const Field<R>& b) {
  return lp_norm(a - b, 2.0) / lp_norm(b, 2.0);
}

template <int R>
Field<R> noise(const Grid& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d;
  Field<R> f(g);
  for (double& v : f.values()) v = d(rng);
  return f;
}

// Reflection x -> -x on a one-dimensional cell-centred grid.
template <int R>
Field<R> reflect(const Field<R>& f) {
  Field<R> out(f.grid());
  const int N = f.grid().N;
  for (int c = 0; c < f.components(); ++c) {
    for (int j = 0; j < N; ++j) out.component(c)[j] = f.component(c)[N - 1 - j];
  }
  return out;
}

}  // namespace

TEST_CASE("kernel table is antisymmetric") {
  const Grid g = make_grid(2, 8.0, 16);
  for (const auto& scheme : {q::QuadratureScheme{}, q::QuadratureScheme::plain()}) {
    const q::KernelTable T(g, 2.0 + 0.5 + 1.0, scheme);
    int idx[2], neg[2];
    for (std::size_t o = 0; o < g.points(); ++o) {
      g.unflatten(o, idx);
      for (int a = 0; a < 2; ++a) neg[a] = (g.N - idx[a]) % g.N;
      const std::size_t m = neg[0] * g.stride(0) + neg[1] * g.stride(1);
      for (int a = 0; a < 2; ++a) {
        const bool nyquist = idx[a] == g.N / 2;
        if (!nyquist) CHECK(T.at(o)[a] == -T.at(m)[a]);
      }
    }
    CHECK(T.at(0)[0] == 0.0);
    CHECK(T.at(0)[1] == 0.0);
  }
}

TEST_CASE("constants and zero inputs") {
  const Grid g = make_grid(2, 8.0, 16);
  ScalarField c(g);
  for (double& v : c.values()) v = 1.75;
  CHECK(lp_norm(q::fractional_gradient_direct(c, 0.4), kInfinity) == 0.0);
  VectorField phi(g);
  for (double& v : phi.values()) v = -0.5;
  CHECK(lp_norm(q::fractional_divergence_direct(phi, 0.4), kInfinity) == 0.0);
  const ScalarField bump = sample(BumpSpec{3.0, 1.0, {}}, g);
  CHECK(lp_norm(q::k_phi(bump, MatrixField(g), 0.6), kInfinity) == 0.0);
  CHECK(lp_norm(q::ftc_reconstruct_direct(VectorField(g), 0.6), kInfinity) == 0.0);
}

TEST_CASE("odd input gives an even gradient") {
  const Grid g = make_grid(1, 16.0, 128);
  ScalarField u(g);
  const ScalarField b = sample(BumpSpec{4.0, 1.0, {}}, g);
  for (int j = 0; j < g.N; ++j) u.component(0)[j] = g.coordinate(j) * b.component(0)[j];
  const VectorField D = q::fractional_gradient_direct(u, 0.5);
  CHECK(lp_norm(D - reflect(D), kInfinity) <= 1e-10 * lp_norm(D, kInfinity));
}

TEST_CASE("agreement with the spectral path") {
  const Grid g = make_grid(1, 16.0, 128);
  const ScalarField u = sample(BumpSpec{4.0, 1.0, {}}, g);
  const double corrected = rel(q::fractional_gradient_direct(u, 0.5), spectral::fractional_gradient(u, 0.5));
  CHECK(corrected < 0.05);
  // The punctured, truncated rule is far less accurate at this resolution.
  CHECK(rel(q::fractional_gradient_direct(u, 0.5, q::QuadratureScheme::plain()),
            spectral::fractional_gradient(u, 0.5)) > 10.0 * corrected);

  const VectorField V = spectral::fractional_gradient(u, 0.5);
  ScalarField centred = u;
  const double m = mean(u);
  for (double& v : centred.values()) v -= m;
  CHECK(rel(q::ftc_reconstruct_direct(V, 0.5), centred) < 0.05);

  const Grid g2 = make_grid(2, 16.0, 48);
  const VectorField phi = sample(AffineCutoffSpec{{1.0, 0.5, -0.3, 0.8}, {0.2, -0.1}, {5.0, 1.0, {}}}, g2);
  CHECK(rel(q::fractional_divergence_direct(phi, 0.7), spectral::fractional_divergence(phi, 0.7)) < 0.05);
}

TEST_CASE("refinement reduces the cross-path error") {
  for (const ScalarSpec& spec : {ScalarSpec{GaussianSpec{1.0, 1.0, {}}}, ScalarSpec{BumpSpec{4.0, 1.0, {}}}}) {
    double prev = 0.0;
    for (int N : {64, 128, 256}) {
      const Grid g = make_grid(1, 16.0, N);
      const ScalarField u = sample(spec, g);
      const double e = rel(q::fractional_gradient_direct(u, 0.5), spectral::fractional_gradient(u, 0.5));
      if (prev > 0.0) CHECK(prev / e >= 1.5);
      prev = e;
    }
  }
}

TEST_CASE("discrete duality, trace and K_phi identities") {
  const Grid g = make_grid(2, 8.0, 16);
  const ScalarField u = noise<0>(g, 1);
  const VectorField phi = noise<1>(g, 2);
  for (const auto& scheme : {q::QuadratureScheme{}, q::QuadratureScheme::plain()}) {
    for (double s : {0.3, 0.8}) {
      const double lhs = pairing(q::fractional_gradient_direct(u, s, scheme), phi);
      const double rhs = pairing(u, q::fractional_divergence_direct(phi, s, scheme));
      CHECK(std::abs(lhs + rhs) <= 1e-10 * lp_norm(u, 2.0) * lp_norm(phi, 2.0));

      const MatrixField D = q::fractional_gradient_direct(phi, s, scheme);
      ScalarField tr(g);
      for (int a = 0; a < 2; ++a) tr += ScalarField(g, {D.entry(a, a).begin(), D.entry(a, a).end()});
      const ScalarField div = q::fractional_divergence_direct(phi, s, scheme);
      CHECK(lp_norm(tr - div, kInfinity) <= 1e-10 * lp_norm(div, kInfinity));

      MatrixField I(g);
      for (int a = 0; a < 2; ++a) std::fill(I.entry(a, a).begin(), I.entry(a, a).end(), 1.0);
      const VectorField K = q::k_phi(u, I, s, scheme);
      const VectorField Du = q::fractional_gradient_direct(u, s, scheme);
      CHECK(lp_norm(K - Du, kInfinity) <= 1e-10 * lp_norm(Du, kInfinity));
    }
  }
}

TEST_CASE("exact scaling and linearity") {
  const Grid g = make_grid(1, 8.0, 64);
  const ScalarField u = noise<0>(g, 3);
  const VectorField D = q::fractional_gradient_direct(u, 0.45);
  const VectorField D2 = q::fractional_gradient_direct(2.0 * u, 0.45);
  CHECK(std::equal(D2.values().begin(), D2.values().end(), (2.0 * D).values().begin()));

  VectorField V1 = noise<1>(g, 4), V2 = noise<1>(g, 5);
  const double m1 = mean(V1), m2 = mean(V2);
  for (double& v : V1.values()) v -= m1;
  for (double& v : V2.values()) v -= m2;
  const ScalarField lhs = q::ftc_reconstruct_direct(0.3 * V1 + (-1.7) * V2, 0.6);
  const ScalarField rhs = 0.3 * q::ftc_reconstruct_direct(V1, 0.6) + (-1.7) * q::ftc_reconstruct_direct(V2, 0.6);
  CHECK(lp_norm(lhs - rhs, kInfinity) <= 1e-12 * lp_norm(rhs, kInfinity));
}

TEST_CASE("K_phi is bounded uniformly in s") {
  const Grid g = make_grid(2, 12.0, 24);
  const ScalarField phi = sample(BumpSpec{3.0, 1.0, {}}, g);
  const MatrixField U = noise<2>(g, 6);
  double lo = 1e300, hi = 0.0;
  for (double s : {0.6, 0.7, 0.8, 0.9, 0.99}) {
    const double r = lp_norm(q::k_phi(phi, U, s), 2.0) / lp_norm(U, 2.0);
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  CHECK(std::isfinite(hi));
  CHECK(hi / lo < 10.0);
}

TEST_CASE("K_phi of D^s u approaches Du Dphi") {
  const Grid g = make_grid(2, 16.0, 64);
  const ScalarField u = sample(GaussianSpec{1.0, 1.0, {}}, g);
  const ScalarField phi = sample(BumpSpec{4.0, 1.0, {}}, g);
  const ScalarField theta = sample(BumpSpec{3.0, 1.0, {0.5, 0.0}}, g);
  const VectorField Dphi = spectral::classical_gradient(phi);
  const VectorField Du = spectral::classical_gradient(u);
  ScalarField dot(g);
  for (std::size_t j = 0; j < g.points(); ++j) {
    dot.component(0)[j] = Du.component(0)[j] * Dphi.component(0)[j] + Du.component(1)[j] * Dphi.component(1)[j];
  }
  // Rows of U are D^s u, so K^s_phi(U) has the single component direction of the vector field.
  const VectorField Ds = spectral::fractional_gradient(u, 0.99);
  MatrixField U(g);
  for (int a = 0; a < 2; ++a) {
    std::copy(Ds.component(a).begin(), Ds.component(a).end(), U.entry(0, a).begin());
  }
  const VectorField K = q::k_phi(phi, U, 0.99);
  const ScalarField K0(g, {K.component(0).begin(), K.component(0).end()});
  const double limit = pairing(theta, dot);
  CHECK(std::abs(pairing(theta, K0) - limit) < 0.05 * std::abs(limit));
}

TEST_CASE("budget and range checks") {
  CHECK_THROWS_AS(q::check_budget(make_grid(2, 16.0, 256)), BudgetError);
  CHECK_NOTHROW(q::check_budget(make_grid(2, 16.0, 128)));
  const Grid big = make_grid(3, 16.0, 64);
  CHECK_THROWS_AS(q::fractional_gradient_direct(ScalarField(big), 0.5), BudgetError);
  const Grid g = make_grid(1, 8.0, 16);
  CHECK_THROWS_AS(q::fractional_gradient_direct(ScalarField(g), 1.0), RangeError);
  CHECK_THROWS_AS(q::fractional_gradient_direct(ScalarField(g), 0.0), RangeError);
}
