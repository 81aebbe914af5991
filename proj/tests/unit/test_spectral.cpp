#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "fracgrad/spectral.hpp"
#include "fracgrad/test_functions.hpp"

using namespace fracgrad;
using std::numbers::pi;

namespace {

template <int R>
double rel(const Field<R>& a, const Field<R>& b) {
  return lp_norm(a - b, 2.0) / lp_norm(b, 2.0);
}

template <int R>
Field<R> smooth_random(const Grid& g, std::uint64_t seed) {
  // Random low-frequency trigonometric sum, zero mean.
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  std::uniform_int_distribution<int> freq(-5, 5);
  Field<R> f(g);
  for (int c = 0; c < f.components(); ++c) {
    for (int term = 0; term < 6; ++term) {
      std::vector<int> k(g.n);
      do {
        for (int& x : k) x = freq(rng);
      } while (std::all_of(k.begin(), k.end(), [](int x) { return x == 0; }));
      const ScalarField m = sample(ModeSpec{k, amp(rng)}, g);
      for (std::size_t j = 0; j < g.points(); ++j) f.component(c)[j] += m.component(0)[j];
    }
  }
  return f;
}

ScalarField mode_sin(const Grid& g, int k) {
  ScalarField f(g);
  for (int j = 0; j < g.N; ++j) f.component(0)[j] = std::sin(2.0 * pi * k * g.coordinate(j) / g.L);
  return f;
}

}  // namespace

TEST_CASE("D^s on a single mode") {
  const Grid g = make_grid(1, 16.0, 64);
  for (int k : {1, 4, -9}) {
    const ScalarField u = sample(ModeSpec{{k}, 1.0}, g);
    for (double s : {0.3, 0.7, 1.0}) {
      const double w = 2.0 * pi * k / g.L;
      const VectorField D = spectral::fractional_gradient(u, s);
      const ScalarField expect = (-w * std::pow(std::abs(w), s - 1.0)) * mode_sin(g, k);
      CHECK(lp_norm(ScalarField(g, {D.values().begin(), D.values().end()}) - expect, kInfinity) < 1e-12);
      CHECK(lp_norm(D, 2.0) == doctest::Approx(std::pow(std::abs(w), s) * lp_norm(u, 2.0)).epsilon(1e-12));
    }
  }
}

TEST_CASE("constants are annihilated") {
  const Grid g = make_grid(2, 8.0, 16);
  ScalarField c(g);
  for (double& v : c.values()) v = 2.5;
  CHECK(lp_norm(spectral::fractional_gradient(c, 0.5), kInfinity) < 1e-14);
  CHECK(lp_norm(spectral::classical_gradient(c), kInfinity) < 1e-14);
  VectorField phi(g);
  for (double& v : phi.values()) v = -1.0;
  CHECK(lp_norm(spectral::fractional_divergence(phi, 0.5), kInfinity) < 1e-14);
}

TEST_CASE("Gaussian: analytic fractional norm and localization") {
  const Grid g = make_grid(2, 16.0, 256);
  const GaussianSpec spec{1.0, 1.0, {}};
  const ScalarField u = sample(spec, g);
  for (double s : {0.25, 0.5, 0.9}) {
    // On the torus, ||D^s u||^2 = L^{-2} sum_k |w_k|^{2s} (2 pi)^2 exp(-|w_k|^2) with
    // w_k = 2 pi k / L, summed from the analytic transform of the Gaussian.
    double torus = 0.0;
    for (int a = -60; a <= 60; ++a) {
      for (int b = -60; b <= 60; ++b) {
        const double w2 = std::pow(2.0 * pi / g.L, 2) * (a * a + b * b);
        if (w2 > 0.0) torus += std::pow(w2, s) * 4.0 * pi * pi * std::exp(-w2);
      }
    }
    torus /= g.L * g.L;
    const double norm2 = std::pow(lp_norm(spectral::fractional_gradient(u, s), 2.0), 2);
    CHECK(norm2 == doctest::Approx(torus).epsilon(1e-10));
    // The whole-space value pi Gamma(1 + s) is reached up to the periodization error.
    CHECK(norm2 == doctest::Approx(pi * std::tgamma(1.0 + s)).epsilon(0.02));
  }
  const VectorField Du = exact_gradient(spec, g);
  CHECK(rel(spectral::classical_gradient(u), Du) < 1e-10);
  CHECK(rel(spectral::fractional_gradient(u, 0.99), Du) < 0.02);
  CHECK(rel(spectral::fractional_gradient(u, 0.999), Du) < 0.01);
  double prev = 1.0;
  for (double s : {0.5, 0.7, 0.9, 0.99}) {
    const double e = rel(spectral::fractional_gradient(u, s), Du);
    CHECK(e < prev);
    prev = e;
  }
  // Adjacent s differ by less than 10% in norm.
  for (double s = 0.5; s < 0.95; s += 0.05) {
    const double a = lp_norm(spectral::fractional_gradient(u, s), 2.0);
    const double b = lp_norm(spectral::fractional_gradient(u, s + 0.05), 2.0);
    CHECK(std::abs(a - b) / a < 0.1);
  }
}

TEST_CASE("duality and trace identity") {
  const Grid g = make_grid(2, 6.0, 32);
  const ScalarField u = smooth_random<0>(g, 11);
  const VectorField phi = smooth_random<1>(g, 12);
  for (double s : {0.2, 0.6, 0.95}) {
    const double lhs = pairing(spectral::fractional_gradient(u, s), phi);
    const double rhs = -pairing(u, spectral::fractional_divergence(phi, s));
    CHECK(std::abs(lhs - rhs) <= 1e-11 * lp_norm(u, 2.0) * lp_norm(phi, 2.0));

    const MatrixField D = spectral::fractional_gradient(phi, s);
    ScalarField tr(g);
    for (int a = 0; a < 2; ++a) tr += ScalarField(g, {D.entry(a, a).begin(), D.entry(a, a).end()});
    CHECK(lp_norm(tr - spectral::fractional_divergence(phi, s), kInfinity) <
          1e-12 * lp_norm(tr, kInfinity));
  }
}

TEST_CASE("divergence localizes on a bump field") {
  const Grid g = make_grid(2, 16.0, 128);
  const ScalarField b = sample(BumpSpec{4.0, 1.0, {}}, g);
  VectorField phi(g);
  for (int a = 0; a < 2; ++a) {
    for (std::size_t j = 0; j < g.points(); ++j) phi.component(a)[j] = (a + 1.0) * b.component(0)[j];
  }
  CHECK(rel(spectral::fractional_divergence(phi, 0.99), spectral::classical_divergence(phi)) < 0.02);
}

TEST_CASE("Riesz potential") {
  const Grid g = make_grid(2, 10.0, 32);
  const ScalarField f = smooth_random<0>(g, 5);
  CHECK(rel(spectral::riesz_potential(spectral::riesz_potential(f, 0.4), 0.9), spectral::riesz_potential(f, 1.3)) < 1e-12);
  const ScalarField m = sample(ModeSpec{{2, 1}, 1.0}, g);
  const double w = 2.0 * pi * std::sqrt(5.0) / g.L;
  CHECK(rel(spectral::riesz_potential(m, 0.7), std::pow(w, -0.7) * m) < 1e-12);

  const ScalarField u = sample(GaussianSpec{0.6, 1.0, {}}, g);
  CHECK(rel(spectral::riesz_potential(spectral::classical_gradient(u), 0.4), spectral::fractional_gradient(u, 0.6)) < 1e-12);

  ScalarField biased = f;
  for (double& v : biased.values()) v += 1.0;
  CHECK_THROWS_AS(spectral::riesz_potential(biased, 0.5), RangeError);
  CHECK_THROWS_AS(spectral::riesz_potential(f, 2.0), RangeError);
}

TEST_CASE("fractional fundamental theorem of calculus") {
  const Grid g = make_grid(2, 16.0, 64);
  ScalarField u = sample(BumpSpec{4.0, 1.0, {}}, g);
  for (double s : {0.3, 0.8}) {
    const ScalarField back = spectral::ftc_reconstruct(spectral::fractional_gradient(u, s), s);
    ScalarField centred = u;
    const double m = mean(u);
    for (double& v : centred.values()) v -= m;
    CHECK(rel(back, centred) < 1e-10);
    CHECK(std::abs(mean(back)) < 1e-14);
  }
  CHECK(lp_norm(spectral::ftc_reconstruct(VectorField(g), 0.5), kInfinity) == 0.0);
  const ScalarField mode = sample(ModeSpec{{3, -2}, 1.0}, g);
  CHECK(rel(spectral::ftc_reconstruct(spectral::fractional_gradient(mode, 0.4), 0.4), mode) < 1e-12);

  // A rotational field is not a fractional gradient.
  VectorField curl(g);
  const ScalarField c = sample(ModeSpec{{1, 0}, 1.0}, g);
  std::copy(c.values().begin(), c.values().end(), curl.component(1).begin());
  CHECK_THROWS_AS(spectral::ftc_reconstruct(curl, 0.5), RangeError);
}

TEST_CASE("semigroup composition") {
  const Grid g = make_grid(2, 16.0, 64);
  const ScalarField u = sample(GaussianSpec{1.0, 1.0, {}}, g);
  CHECK(rel(spectral::semigroup_compose(u, 0.8, 0.5), spectral::fractional_gradient(u, 0.5)) < 1e-12);
  CHECK(rel(spectral::semigroup_compose(u, 0.7, 0.7), spectral::fractional_gradient(u, 0.7)) == 0.0);
  CHECK_THROWS_AS(spectral::semigroup_compose(u, 0.5, 0.8), RangeError);
}

TEST_CASE("range checks") {
  const Grid g = make_grid(1, 4.0, 8);
  const ScalarField u(g);
  CHECK_THROWS_AS(spectral::fractional_gradient(u, 0.0), RangeError);
  CHECK_THROWS_AS(spectral::fractional_gradient(u, 1.2), RangeError);
}
