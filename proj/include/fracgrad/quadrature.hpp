#pragma once

#include <span>
#include <vector>

#include "fracgrad/grid.hpp"

/// Real-space evaluation of the fractional operators by direct kernel
/// summation over all grid pairs, independent of the FFT path.
///
/// Every operator is a sum over offsets z = x - y of a difference times the
/// odd vector kernel T(z) ~ z / |z|^q, e.g.
///
///   D^s u(x) = c_{n,s} h^n sum_{z != 0} (u(x) - u(x - z)) T(z),   q = n + s + 1.
///
/// The table T depends only on the offset, so it is built once per call.
namespace fracgrad::quadrature {

/// How the singular cell z = 0 is treated. `skip` omits it; `lattice_corrected`
/// additionally removes the leading lattice-sum error of the
/// punctured rule with the Epstein zeta constant of the cubic lattice, folded
/// into the nearest-neighbour weights. The correction only uses the kernel and
/// the grid, never the field, so the operators stay linear.
enum class SingularTreatment { skip, lattice_corrected };

/// `nearest` truncates the kernel at |z| <= r_cut on the nearest periodic image.
/// `periodic` sums the kernel over lattice images (image_shells per side plus an
/// analytic far-field correction), i.e. the torus operator.
enum class ImagePolicy { nearest, periodic };

struct QuadratureScheme {
  SingularTreatment singular = SingularTreatment::lattice_corrected;
  ImagePolicy images = ImagePolicy::periodic;
  double r_cut = 0.0;  ///< nearest-image cutoff; 0 means L/2
  int image_shells = 8;

  /// Singular-cell skip with nearest-image truncation at L/2, no corrections.
  static QuadratureScheme plain() { return {SingularTreatment::skip, ImagePolicy::nearest, 0.0, 0}; }
};

/// Hard cap on kernel evaluations: N^{2n} <= 2^30.
inline constexpr double kKernelBudget = 1073741824.0;
void check_budget(const Grid& grid);

/// Odd kernel table T(z) = z / |z|^q on all offsets, stored offset-major
/// (n consecutive components per offset, offsets in row-major index order
/// with index o_a <-> z_a = o_a h wrapped into [-L/2, L/2)).
/// Exactly antisymmetric: T(-z) = -T(z) entrywise, T(0) = 0.
class KernelTable {
public:
  KernelTable(const Grid& grid, double q, const QuadratureScheme& scheme);

  const Grid& grid() const { return grid_; }
  double exponent() const { return q_; }
  std::span<const double> values() const { return table_; }
  const double* at(std::size_t offset) const { return table_.data() + offset * grid_.n; }

private:
  Grid grid_;
  double q_;
  std::vector<double> table_;
};

VectorField fractional_gradient_direct(const ScalarField& u, double s, const QuadratureScheme& scheme = {});
MatrixField fractional_gradient_direct(const VectorField& u, double s, const QuadratureScheme& scheme = {});
ScalarField fractional_divergence_direct(const VectorField& phi, double s, const QuadratureScheme& scheme = {});

/// K^s_phi(U)(x) = c_{n,s} int (phi(x) - phi(y)) / |x-y|^{n+s} U(y) (x-y)/|x-y| dy.
VectorField k_phi(const ScalarField& phi, const MatrixField& U, double s, const QuadratureScheme& scheme = {});

/// u(x) = c_{n,-s} int V(y) . (x-y) / |x-y|^{n-s+1} dy, returned with its mean removed.
ScalarField ftc_reconstruct_direct(const VectorField& V, double s, const QuadratureScheme& scheme = {});

}  // namespace fracgrad::quadrature
