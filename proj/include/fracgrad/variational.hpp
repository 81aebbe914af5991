#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fracgrad/analysis.hpp"
#include "fracgrad/grid.hpp"
#include "fracgrad/minors.hpp"
#include "fracgrad/sweep_table.hpp"

namespace fracgrad::variational {

enum class DensityKind { quadratic, power, polyconvex };

/// Built-in energy densities W(x, y, F), with |F| the Frobenius norm:
///
///   quadratic   c |F|^2 + b |y - f(x)|^2 + a(x)
///   power       c |F|^p + b |y - f(x)|^2 + a(x)
///   polyconvex  c (|F|^4 + (det F)^2) + b |y - f(x)|^2 + a(x)     (p = 4)
///
/// f and a are optional fields (zero when absent).
class EnergyDensity {
public:
  static EnergyDensity quadratic(double c = 1.0, double b = 1.0);
  static EnergyDensity power(double p, double c = 1.0, double b = 0.0);
  static EnergyDensity polyconvex(double c = 1.0, double b = 0.0);

  EnergyDensity& with_target(VectorField f);
  EnergyDensity& with_lower_order(ScalarField a);

  DensityKind kind() const { return kind_; }
  double p() const { return p_; }
  double c() const { return c_; }
  double b() const { return b_; }
  const std::optional<VectorField>& target() const { return f_; }
  const std::optional<ScalarField>& lower_order() const { return a_; }
  std::string name() const;

  /// W at grid point j.
  double value(std::size_t j, std::span<const double> y, const minors::SmallMatrix& F) const;
  /// dW/dy into dy and dW/dF into dF.
  void gradient(std::size_t j, std::span<const double> y, const minors::SmallMatrix& F, std::span<double> dy,
                minors::SmallMatrix& dF) const;
  /// a(x_j) + c |F|^p, the declared lower growth bound.
  double growth_floor(std::size_t j, const minors::SmallMatrix& F) const;

private:
  EnergyDensity(DensityKind kind, double p, double c, double b);
  double a_at(std::size_t j) const { return a_ ? a_->component(0)[j] : 0.0; }

  DensityKind kind_;
  double p_;
  double c_;
  double b_;
  std::optional<VectorField> f_;
  std::optional<ScalarField> a_;
};

/// Smallest W - (a + c|F|^p) over `probes` random (x, y, F) samples; the
/// growth bound holds when the result is >= -1e-9.
double growth_margin(const EnergyDensity& W, const Grid& grid, int probes, std::uint64_t seed);

/// Minimize the energy over u = g on the complement of omega. s = nullopt is
/// the local functional with the classical gradient.
struct VariationalProblem {
  EnergyDensity W;
  analysis::DomainMask omega;
  VectorField g;
  std::optional<double> s;

  double exponent() const { return W.p(); }
};

/// Validates grids, finiteness of g, s in (0, 1), and p > n for polyconvex densities.
VariationalProblem make_problem(EnergyDensity W, analysis::DomainMask omega, VectorField g,
                                std::optional<double> s);

/// The same problem at another order (used by sweeps).
VariationalProblem at_order(const VariationalProblem& prob, std::optional<double> s);

/// Gradient used by the functional: spectral D^s, or the classical D when local.
MatrixField problem_gradient(const VariationalProblem& prob, const VectorField& u);

/// h^n sum_j W(x_j, u_j, G_j). u must equal g on the complement within 1e-12.
double energy(const VariationalProblem& prob, const VectorField& u);

/// dW/dy - div^s(dW/dF) row-wise (classical div when local), zeroed outside
/// omega. This is the exact gradient of energy() in the pairing inner product.
VectorField first_variation(const VariationalProblem& prob, const VectorField& u);

struct SolveReport {
  VectorField minimizer;
  double energy = 0.0;
  int iterations = 0;  ///< number of first-variation evaluations
  std::vector<double> energy_history;
  std::vector<double> gradient_norm_history;
  bool converged = false;
};

/// `spectral` measures steps in the metric with symbol 1 / (1 + |2 pi xi|^{2s})
/// (s = 1 when local), which removes the grid-size dependence of the
/// condition number for the built-in densities. `none` is plain L^2 descent.
enum class Preconditioner { none, spectral };

/// Projected gradient descent with Barzilai-Borwein steps and Armijo
/// backtracking (factor 0.5, slope 1e-4, at most 50 halvings). Stops when the
/// L^2 norm of the first variation is <= tol. Throws SolveError when no
/// backtracked step decreases the energy.
SolveReport minimize(const VariationalProblem& prob, const VectorField& init, double tol, int max_iter,
                     Preconditioner preconditioner = Preconditioner::spectral);

struct GammaOptions {
  double tol = 1e-6;
  int max_iter = 2000;
  bool continuation = true;
  Preconditioner preconditioner = Preconditioner::spectral;
};

struct GammaResult {
  /// Columns s, energy, dist_to_local, converged, iters; the local row first.
  SweepTable table;
  /// Columns s, recovery_energy, local_energy, rel_gap: I_s at the local minimizer.
  SweepTable recovery;
  VectorField local_minimizer;
  std::vector<VectorField> minimizers;  ///< one per fractional s, in s_grid order
};

/// Solves the local problem from g, then every fractional order in s_grid
/// (nullopt entries are skipped; the local row is always computed). With
/// continuation each solve starts from the previous minimizer.
GammaResult gamma_sweep(const VariationalProblem& prob, const std::vector<std::optional<double>>& s_grid,
                        const GammaOptions& options = {});

}  // namespace fracgrad::variational
