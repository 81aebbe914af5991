#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fracgrad/constants.hpp"
#include "fracgrad/error.hpp"

using namespace fracgrad;
using namespace fracgrad::constants;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

// Reference values: 30-digit mpmath evaluations of the Gamma-function formulas.
TEST_CASE("c_ns matches high-precision references") {
  CHECK(rel(c_ns(1, 0.5), 0.199471140200716338969973029967) < 1e-13);
  CHECK(rel(c_ns(2, 0.3), 0.138539792105297127622628783174) < 1e-13);
  CHECK(rel(c_ns(3, -0.4), 0.0976559374191764960428520681978) < 1e-13);
  CHECK(rel(c_ns(2, -1.0), 0.159154943091895335768883763373) < 1e-13);
}

TEST_CASE("c_ns is exactly zero at s = 1 and rejects bad input") {
  for (int n = 1; n <= 4; ++n) CHECK(c_ns(n, 1.0) == 0.0);
  CHECK_THROWS_AS(c_ns(5, 0.5), RangeError);
  CHECK_THROWS_AS(c_ns(0, 0.5), RangeError);
  CHECK_THROWS_AS(c_ns(2, 1.5), RangeError);
  CHECK_THROWS_AS(c_ns_product_form(1, 0.0), RangeError);
}

TEST_CASE("the two closed forms agree across (-1, 1)") {
  for (int n = 1; n <= 3; ++n) {
    for (int i = 1; i < 200; ++i) {
      const double s = -1.0 + 2.0 * i / 200.0;
      if (n == 1 && std::abs(s) < 1e-12) continue;
      CHECK(rel(c_ns_product_form(n, s), c_ns(n, s)) < 1e-12);
    }
  }
}

TEST_CASE("c_ns = (n + s - 1) / gamma(1 - s)") {
  CHECK(rel(c_ns(2, 0.5), 1.5 / gamma_riesz(2, 0.5)) < 1e-12);
  for (int n = 1; n <= 3; ++n) {
    for (int i = 1; i < 50; ++i) {
      const double s = std::max(1.0 - n, -1.0) + (1.0 - std::max(1.0 - n, -1.0)) * i / 50.0;
      CHECK(rel((n + s - 1.0) / gamma_riesz(n, 1.0 - s), c_ns(n, s)) < 1e-12);
    }
  }
}

TEST_CASE("gamma_riesz") {
  CHECK(rel(gamma_riesz(2, 1.0), 2.0 * std::numbers::pi) < 1e-14);
  CHECK(rel(gamma_riesz(3, 0.25), 56.1235355015820317946623876119) < 1e-13);
  CHECK_THROWS_AS(gamma_riesz(2, 2.0), RangeError);
  CHECK_THROWS_AS(gamma_riesz(2, 0.0), RangeError);
}

TEST_CASE("ball volumes and sphere areas") {
  CHECK(unit_ball_volume(1) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(unit_ball_volume(2) == doctest::Approx(std::numbers::pi).epsilon(1e-15));
  CHECK(unit_ball_volume(3) == doctest::Approx(4.0 * std::numbers::pi / 3.0).epsilon(1e-15));
  CHECK(unit_sphere_area(3) == doctest::Approx(4.0 * std::numbers::pi).epsilon(1e-15));
}

TEST_CASE("c_ns / (1 - s) tends to 1 / omega_n") {
  for (int n = 1; n <= 3; ++n) {
    const double limit = 1.0 / unit_ball_volume(n);
    CHECK(c_ns_over_one_minus_s(n, 1.0) == doctest::Approx(limit).epsilon(1e-14));
    CHECK(rel(c_ns(n, 0.999) / 0.001, limit) < 5e-3);
    CHECK(rel(c_ns_over_one_minus_s(n, 0.999), c_ns(n, 0.999) / (1.0 - 0.999)) < 1e-9);
  }
  // c_{2,0.999} / 0.001 within 0.5% of 1/pi
  CHECK(rel(c_ns(2, 0.999) / 0.001, 1.0 / std::numbers::pi) < 5e-3);
}

TEST_CASE("c_ns decreases to zero as s approaches 1") {
  for (int n = 1; n <= 3; ++n) {
    double prev = c_ns(n, 0.9);
    for (double eps : {1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) {
      const double v = c_ns(n, 1.0 - eps);
      CHECK(v > 0.0);
      CHECK(v < prev);
      prev = v;
    }
  }
}

TEST_CASE("sup of c_ns / (1 - s) over a dense grid is finite") {
  for (int n = 1; n <= 3; ++n) {
    double sup = 0.0;
    for (int i = 0; i <= 2000; ++i) sup = std::max(sup, c_ns_over_one_minus_s(n, -1.0 + 2.0 * i / 2000.0));
    CHECK(std::isfinite(sup));
    CHECK(sup < 10.0);
  }
}

TEST_CASE("lattice zeta against closed forms") {
  // n = 1: 2 zeta(sigma); n = 2: 4 zeta(sigma/2) beta(sigma/2) (mpmath references).
  CHECK(rel(lattice_zeta(1, 3.0), 2.40411380631918857079947632302) < 1e-12);
  CHECK(rel(lattice_zeta(1, -0.5), -0.415772449954709132034613450794) < 1e-12);
  CHECK(rel(lattice_zeta(1, 0.5), -2.92070901761917362577899830503) < 1e-12);
  CHECK(rel(lattice_zeta(2, 3.0), 9.03362168310095030573051527932) < 1e-12);
  CHECK(rel(lattice_zeta(2, 2.7), 11.6802992012905049533395584636) < 1e-12);
  CHECK(rel(lattice_zeta(2, 1.5), -10.0775594787931521013633984049) < 1e-12);
  CHECK(rel(lattice_zeta(2, -0.3), -0.66986507696665768379280125805) < 1e-11);
  // Simple cubic lattice sums A6, A12.
  CHECK(rel(lattice_zeta(3, 6.0), 8.40192397482) < 1e-10);
  CHECK(rel(lattice_zeta(3, 12.0), 6.20214904504) < 1e-10);
  CHECK_THROWS_AS(lattice_zeta(2, 2.0), RangeError);
  for (int n = 1; n <= 4; ++n) {
    CHECK(lattice_zeta(n, 0.0) == -1.0);
    CHECK(std::abs(lattice_zeta(n, 1e-7) + 1.0) < 1e-5);
  }
}
