#pragma once

// Normalization constants of the Riesz fractional calculus.

namespace fracgrad::constants {

inline constexpr int kMaxDimension = 4;

/// Throws RangeError unless 1 <= n <= kMaxDimension.
void check_dimension(int n);

/// c_{n,s} for s in [-1, 1]; exactly 0 at s = 1.
///
/// Evaluated in the form Gamma((n+s+1)/2) / (pi^{n/2} 2^{-s} Gamma((1-s)/2)),
/// which stays regular over the whole closed interval.
double c_ns(int n, double s);

/// The same constant written as
/// (n+s-1) Gamma((n+s-1)/2) / (pi^{n/2} 2^{1-s} Gamma((1-s)/2)).
///
/// Only defined where (n+s-1)/2 is not a pole of Gamma, i.e. it is
/// rejected for n = 1, s = 0. Used as the second route in consistency checks.
double c_ns_product_form(int n, double s);

/// c_{n,s} / (1 - s), continuously extended to s = 1 by 1/omega_n.
double c_ns_over_one_minus_s(int n, double s);

/// gamma(alpha) = pi^{n/2} 2^alpha Gamma(alpha/2) / Gamma((n-alpha)/2), 0 < alpha < n.
double gamma_riesz(int n, double alpha);

/// Volume of the unit ball, pi^{n/2} / Gamma(1 + n/2).
double unit_ball_volume(int n);

/// Surface area of the unit sphere S^{n-1}, n * omega_n.
double unit_sphere_area(int n);

/// Analytic continuation of the lattice sum sum_{k in Z^n, k != 0} |k|^{-sigma}
/// (Epstein zeta of the cubic lattice), evaluated with the Ewald/theta
/// splitting. The only pole is sigma = n; the value at 0 is -1.
double lattice_zeta(int n, double sigma);

}  // namespace fracgrad::constants
