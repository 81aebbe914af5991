#include "fracgrad/constants.hpp"

#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <numbers>
#include <string>

#include "fracgrad/error.hpp"

namespace fracgrad::constants {

namespace {

constexpr double kPi = std::numbers::pi;

// Upper incomplete gamma Gamma(a, x) for x > 0 and any real a. Boost only
// accepts a > 0; a = 0 is E_1(x), and below that
// Gamma(a, x) = (Gamma(a+1, x) - x^a e^{-x}) / a.
double upper_incomplete_gamma(double a, double x) {
  if (a > 0.0) return boost::math::tgamma(a, x);
  if (a == 0.0) return boost::math::expint(1, x);
  return (upper_incomplete_gamma(a + 1.0, x) - std::pow(x, a) * std::exp(-x)) / a;
}

// sum over k != 0 with |k|_inf <= K of (pi |k|^2)^{-a} Gamma(a, pi |k|^2).
// Terms decay like exp(-pi |k|^2); K = 5 leaves a remainder below 1e-30.
double ewald_half_sum(int n, double a) {
  constexpr int K = 5;
  double total = 0.0;
  int idx[kMaxDimension] = {};
  for (int d = 0; d < n; ++d) idx[d] = -K;
  while (true) {
    long r2 = 0;
    for (int d = 0; d < n; ++d) r2 += static_cast<long>(idx[d]) * idx[d];
    if (r2 != 0) {
      const double x = kPi * static_cast<double>(r2);
      total += std::pow(x, -a) * upper_incomplete_gamma(a, x);
    }
    int d = 0;
    while (d < n && idx[d] == K) idx[d++] = -K;
    if (d == n) break;
    ++idx[d];
  }
  return total;
}

}  // namespace

void check_dimension(int n) {
  if (n < 1 || n > kMaxDimension) {
    throw RangeError("dimension n = " + std::to_string(n) + " outside supported range [1, " +
                     std::to_string(kMaxDimension) + "]");
  }
}

double c_ns(int n, double s) {
  check_dimension(n);
  if (!(s >= -1.0 && s <= 1.0)) throw RangeError("c_ns: s must lie in [-1, 1]");
  if (s == 1.0) return 0.0;
  const double nd = n;
  return std::tgamma(0.5 * (nd + s + 1.0)) /
         (std::pow(kPi, 0.5 * nd) * std::pow(2.0, -s) * std::tgamma(0.5 * (1.0 - s)));
}

double c_ns_product_form(int n, double s) {
  check_dimension(n);
  if (!(s >= -1.0 && s < 1.0)) throw RangeError("c_ns_product_form: s must lie in [-1, 1)");
  const double nd = n;
  const double z = 0.5 * (nd + s - 1.0);
  if (z == std::floor(z) && z <= 0.0) {
    throw RangeError("c_ns_product_form: Gamma pole at (n+s-1)/2");
  }
  return (nd + s - 1.0) * std::tgamma(z) /
         (std::pow(kPi, 0.5 * nd) * std::pow(2.0, 1.0 - s) * std::tgamma(0.5 * (1.0 - s)));
}

double c_ns_over_one_minus_s(int n, double s) {
  check_dimension(n);
  if (!(s >= -1.0 && s <= 1.0)) throw RangeError("c_ns_over_one_minus_s: s must lie in [-1, 1]");
  const double nd = n;
  // z Gamma(z) = Gamma(z + 1) with z = (1 - s)/2 removes the 0/0 at s = 1.
  return std::tgamma(0.5 * (nd + s + 1.0)) /
         (std::pow(kPi, 0.5 * nd) * std::pow(2.0, 1.0 - s) * std::tgamma(0.5 * (3.0 - s)));
}

double gamma_riesz(int n, double alpha) {
  check_dimension(n);
  const double nd = n;
  if (!(alpha > 0.0 && alpha < nd)) throw RangeError("gamma_riesz: alpha must lie in (0, n)");
  return std::pow(kPi, 0.5 * nd) * std::pow(2.0, alpha) * std::tgamma(0.5 * alpha) /
         std::tgamma(0.5 * (nd - alpha));
}

double unit_ball_volume(int n) {
  check_dimension(n);
  return std::pow(kPi, 0.5 * n) / std::tgamma(1.0 + 0.5 * n);
}

double unit_sphere_area(int n) { return n * unit_ball_volume(n); }

double lattice_zeta(int n, double sigma) {
  check_dimension(n);
  const double nd = n;
  if (sigma == nd) throw RangeError("lattice_zeta: pole at sigma = n");
  if (sigma == 0.0) return -1.0;
  const double lambda = ewald_half_sum(n, 0.5 * sigma) + ewald_half_sum(n, 0.5 * (nd - sigma)) +
                        2.0 / (sigma - nd) - 2.0 / sigma;
  return std::pow(kPi, 0.5 * sigma) * lambda / std::tgamma(0.5 * sigma);
}

}  // namespace fracgrad::constants
