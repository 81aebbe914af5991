#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fracgrad/grid.hpp"
#include "fracgrad/quadrature.hpp"
#include "fracgrad/sweep_table.hpp"
#include "fracgrad/test_functions.hpp"

namespace fracgrad::analysis {

/// Rasterized open set Omega; a cell belongs to it when its centre does.
class DomainMask {
public:
  /// Ball |x - c| < r; requires |c_a| + r <= L/2 - 2h on every axis.
  static DomainMask ball(const Grid& grid, double radius, std::vector<double> center = {});
  /// Rectangle lower < x < upper; requires the same 2h clearance from the faces.
  static DomainMask box(const Grid& grid, std::vector<double> lower, std::vector<double> upper);
  /// The whole periodic box (used for unconstrained problems; exempt from the clearance rule).
  static DomainMask full(const Grid& grid);

  const Grid& grid() const { return grid_; }
  bool contains(std::size_t j) const { return inside_[j] != 0; }
  std::size_t count() const;
  const std::string& description() const { return description_; }

private:
  DomainMask(const Grid& grid, std::vector<char> inside, std::string description);

  Grid grid_;
  std::vector<char> inside_;
  std::string description_;
};

/// Integrability exponent p in (1, infinity) with its conjugates.
struct Exponent {
  double p;

  explicit Exponent(double value);
  double dual() const { return p / (p - 1.0); }
  /// p*_s = pn / (n - sp); only when sp < n.
  double fractional_sobolev_conjugate(int n, double s) const;
  /// p* = pn / (n - p); only when p < n.
  double sobolev_conjugate(int n) const;
};

/// ||u||_p + ||D^s u||_p with the spectral fractional gradient.
double hsp_norm(const ScalarField& u, double s, double p);

/// (h^{2n} sum_{x != y} |u(x) - u(y)|^p / |x - y|^{n + sp})^{1/p}, nearest-image
/// distances, diagonal skipped. Subject to the N^{2n} <= 2^30 budget.
///
/// `lattice_corrected` (n = 1, or p = 2 in any n) subtracts
/// h^{p(1-s)} Z(n + sp - p) int |Du|^p (Z the lattice zeta, divided by n when
/// p = 2), the near-diagonal error of the punctured sum. Without it the sum
/// misses a fraction of about (h/R)^{p(1-s)} of the seminorm as s -> 1.
/// Other (n, p) use the plain sum.
double gagliardo_seminorm(const ScalarField& u, double s, double p,
                          quadrature::SingularTreatment singular = quadrature::SingularTreatment::lattice_corrected);

/// ||u||_{L^p(Omega)} / ||D^s u||_p. u must be supported in Omega: at most
/// 1e-12 of its L^p mass (p-th power) may sit outside.
double poincare_ratio(const ScalarField& u, double s, double p, const DomainMask& omega);

/// ||D^s u||_p / (||u||_p + ||Du||_p).
double embedding_ratio(const ScalarField& u, double s, double p);

/// Rows (spec, s, poincare_ratio, embedding_ratio, grad_ratio_sbar) with
/// grad_ratio_sbar = ||D^{s_bar} u||_p / ||D^s u||_p.
SweepTable inequality_sweep(const std::vector<ScalarSpec>& family, const Grid& grid,
                            const std::vector<double>& s_grid, double p, const DomainMask& omega,
                            double s_bar = 0.3);

}  // namespace fracgrad::analysis
