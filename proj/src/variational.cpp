#include "fracgrad/variational.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "fracgrad/constants.hpp"
#include "fracgrad/spectral.hpp"

namespace fracgrad::variational {

using minors::SmallMatrix;

namespace {

constexpr double kConstraintTolerance = 1e-12;
constexpr double kArmijoSlope = 1e-4;
constexpr double kBacktrackFactor = 0.5;
constexpr int kMaxBacktracks = 50;
// Below this predicted decrease (relative to |E|) the energy cannot resolve
// the Armijo margin; plain non-increase is accepted instead.
constexpr double kRoundoffDecrease = 1e-11;
constexpr int kMaxStalledSteps = 10;

double frobenius2(const SmallMatrix& F) {
  double sum = 0.0;
  for (int i = 0; i < F.rows(); ++i) {
    for (int j = 0; j < F.cols(); ++j) sum += F(i, j) * F(i, j);
  }
  return sum;
}

void write_matrix(MatrixField& out, std::size_t j, const SmallMatrix& M) {
  const int n = out.grid().n;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) out.entry(a, b)[j] = M(a, b);
  }
}

void project(const VariationalProblem& prob, VectorField& u) {
  const int n = u.grid().n;
  for (std::size_t j = 0; j < u.points(); ++j) {
    if (prob.omega.contains(j)) continue;
    for (int c = 0; c < n; ++c) u.component(c)[j] = prob.g.component(c)[j];
  }
}

void check_constraint(const VariationalProblem& prob, const VectorField& u) {
  require_same_grid(u.grid(), prob.g.grid());
  const double scale = std::max(1.0, lp_norm(prob.g, kInfinity));
  for (int c = 0; c < u.components(); ++c) {
    const auto uc = u.component(c);
    const auto gc = prob.g.component(c);
    for (std::size_t j = 0; j < uc.size(); ++j) {
      if (!prob.omega.contains(j) && std::abs(uc[j] - gc[j]) > kConstraintTolerance * scale) {
        throw RangeError("u differs from g outside the domain");
      }
    }
  }
}

// Energy without the constraint check; non-finite densities give +inf.
double raw_energy(const VariationalProblem& prob, const VectorField& u) {
  const Grid& grid = u.grid();
  const MatrixField G = problem_gradient(prob, u);
  std::vector<double> y(grid.n);
  double sum = 0.0;
  for (std::size_t j = 0; j < grid.points(); ++j) {
    for (int c = 0; c < grid.n; ++c) y[c] = u.component(c)[j];
    const double w = prob.W.value(j, y, minors::matrix_at(G, j));
    if (!std::isfinite(w)) return std::numeric_limits<double>::infinity();
    sum += w;
  }
  return sum * grid.cell_volume();
}

// Componentwise multiplier 1 / (1 + |2 pi xi|^{2 sigma}), then zeroed off omega.
VectorField precondition(const VariationalProblem& prob, const VectorField& v) {
  const Grid& grid = v.grid();
  const double sigma = prob.s.value_or(1.0);
  VectorField out(grid);
  int idx[constants::kMaxDimension];
  for (int c = 0; c < grid.n; ++c) {
    Spectrum F = forward_transform(ScalarField(grid, {v.component(c).begin(), v.component(c).end()}));
    auto coeffs = F.coefficients();
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
      grid.unflatten(j, idx);
      double w2 = 0.0;
      for (int a = 0; a < grid.n; ++a) {
        const double w = 2.0 * std::numbers::pi * Spectrum::frequency(idx[a], grid.N) / grid.L;
        w2 += w * w;
      }
      coeffs[j] /= 1.0 + std::pow(w2, sigma);
    }
    const ScalarField back = inverse_transform(F);
    std::copy(back.values().begin(), back.values().end(), out.component(c).begin());
  }
  for (std::size_t j = 0; j < grid.points(); ++j) {
    if (prob.omega.contains(j)) continue;
    for (int c = 0; c < grid.n; ++c) out.component(c)[j] = 0.0;
  }
  return out;
}

}  // namespace

EnergyDensity::EnergyDensity(DensityKind kind, double p, double c, double b) : kind_(kind), p_(p), c_(c), b_(b) {
  if (!(p > 1.0) || !std::isfinite(p)) throw RangeError("growth exponent must exceed 1");
  if (!(c > 0.0) || !std::isfinite(c)) throw RangeError("gradient coefficient must be positive");
  if (!(b >= 0.0) || !std::isfinite(b)) throw RangeError("fidelity weight must be nonnegative");
}

EnergyDensity EnergyDensity::quadratic(double c, double b) { return EnergyDensity(DensityKind::quadratic, 2.0, c, b); }

EnergyDensity EnergyDensity::power(double p, double c, double b) { return EnergyDensity(DensityKind::power, p, c, b); }

EnergyDensity EnergyDensity::polyconvex(double c, double b) {
  return EnergyDensity(DensityKind::polyconvex, 4.0, c, b);
}

EnergyDensity& EnergyDensity::with_target(VectorField f) {
  if (!f.all_finite()) throw RangeError("target field must be finite");
  f_ = std::move(f);
  return *this;
}

EnergyDensity& EnergyDensity::with_lower_order(ScalarField a) {
  if (!a.all_finite()) throw RangeError("lower-order term must be finite");
  a_ = std::move(a);
  return *this;
}

std::string EnergyDensity::name() const {
  switch (kind_) {
    case DensityKind::quadratic:
      return "quadratic";
    case DensityKind::power:
      return "power";
    case DensityKind::polyconvex:
      return "polyconvex";
  }
  return "unknown";
}

double EnergyDensity::value(std::size_t j, std::span<const double> y, const SmallMatrix& F) const {
  const double F2 = frobenius2(F);
  double w = 0.0;
  switch (kind_) {
    case DensityKind::quadratic:
      w = c_ * F2;
      break;
    case DensityKind::power:
      w = c_ * std::pow(F2, 0.5 * p_);
      break;
    case DensityKind::polyconvex: {
      const double det = minors::determinant(F);
      w = c_ * (F2 * F2 + det * det);
      break;
    }
  }
  if (b_ > 0.0) {
    double fid = 0.0;
    for (std::size_t c = 0; c < y.size(); ++c) {
      const double d = y[c] - (f_ ? f_->component(static_cast<int>(c))[j] : 0.0);
      fid += d * d;
    }
    w += b_ * fid;
  }
  return w + a_at(j);
}

void EnergyDensity::gradient(std::size_t j, std::span<const double> y, const SmallMatrix& F, std::span<double> dy,
                             SmallMatrix& dF) const {
  const int n = F.rows();
  const double F2 = frobenius2(F);
  dF = SmallMatrix(n, n);
  switch (kind_) {
    case DensityKind::quadratic:
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) dF(a, b) = 2.0 * c_ * F(a, b);
      break;
    case DensityKind::power: {
      const double scale = F2 > 0.0 ? c_ * p_ * std::pow(F2, 0.5 * p_ - 1.0) : 0.0;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) dF(a, b) = scale * F(a, b);
      break;
    }
    case DensityKind::polyconvex: {
      const double det = minors::determinant(F);
      const SmallMatrix C = minors::cofactor(F);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) dF(a, b) = c_ * (4.0 * F2 * F(a, b) + 2.0 * det * C(a, b));
      break;
    }
  }
  for (std::size_t c = 0; c < y.size(); ++c) {
    const double d = y[c] - (f_ ? f_->component(static_cast<int>(c))[j] : 0.0);
    dy[c] = 2.0 * b_ * d;
  }
}

double EnergyDensity::growth_floor(std::size_t j, const SmallMatrix& F) const {
  return a_at(j) + c_ * std::pow(frobenius2(F), 0.5 * p_);
}

double growth_margin(const EnergyDensity& W, const Grid& grid, int probes, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> entry(-1.0, 1.0);
  std::uniform_real_distribution<double> decade(-2.0, 1.0);
  std::uniform_int_distribution<std::size_t> point(0, grid.points() - 1);
  const int n = grid.n;
  double margin = std::numeric_limits<double>::infinity();
  std::vector<double> y(n);
  for (int k = 0; k < probes; ++k) {
    const double scale = std::pow(10.0, decade(rng));
    SmallMatrix F(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) F(a, b) = scale * entry(rng);
    for (double& v : y) v = scale * entry(rng);
    const std::size_t j = point(rng);
    margin = std::min(margin, W.value(j, y, F) - W.growth_floor(j, F));
  }
  return margin;
}

VariationalProblem make_problem(EnergyDensity W, analysis::DomainMask omega, VectorField g, std::optional<double> s) {
  const Grid& grid = g.grid();
  require_same_grid(grid, omega.grid());
  if (W.target()) require_same_grid(grid, W.target()->grid());
  if (W.lower_order()) require_same_grid(grid, W.lower_order()->grid());
  if (!g.all_finite()) throw RangeError("complementary datum g must be finite");
  if (s && !(*s > 0.0 && *s < 1.0)) throw RangeError("s must lie in (0, 1)");
  if (W.kind() == DensityKind::polyconvex && !(W.p() > grid.n)) {
    throw RangeError("polyconvex densities need p > n");
  }
  return VariationalProblem{std::move(W), std::move(omega), std::move(g), s};
}

VariationalProblem at_order(const VariationalProblem& prob, std::optional<double> s) {
  return make_problem(prob.W, prob.omega, prob.g, s);
}

MatrixField problem_gradient(const VariationalProblem& prob, const VectorField& u) {
  return prob.s ? spectral::fractional_gradient(u, *prob.s) : spectral::classical_gradient(u);
}

double energy(const VariationalProblem& prob, const VectorField& u) {
  check_constraint(prob, u);
  const double e = raw_energy(prob, u);
  if (!std::isfinite(e)) throw SolveError("energy density is not finite");
  return e;
}

VectorField first_variation(const VariationalProblem& prob, const VectorField& u) {
  const Grid& grid = u.grid();
  require_same_grid(grid, prob.g.grid());
  const int n = grid.n;
  const MatrixField G = problem_gradient(prob, u);
  VectorField dy(grid);
  MatrixField dF(grid);
  std::vector<double> y(n), gy(n);
  SmallMatrix gF;
  for (std::size_t j = 0; j < grid.points(); ++j) {
    for (int c = 0; c < n; ++c) y[c] = u.component(c)[j];
    prob.W.gradient(j, y, minors::matrix_at(G, j), gy, gF);
    for (int c = 0; c < n; ++c) dy.component(c)[j] = gy[c];
    write_matrix(dF, j, gF);
  }
  const VectorField div = prob.s ? spectral::fractional_divergence(dF, *prob.s) : spectral::classical_divergence(dF);
  dy -= div;
  for (std::size_t j = 0; j < grid.points(); ++j) {
    if (prob.omega.contains(j)) continue;
    for (int c = 0; c < n; ++c) dy.component(c)[j] = 0.0;
  }
  return dy;
}

SolveReport minimize(const VariationalProblem& prob, const VectorField& init, double tol, int max_iter,
                     Preconditioner preconditioner) {
  if (!(tol > 0.0)) throw RangeError("tolerance must be positive");
  if (max_iter < 1) throw RangeError("max_iter must be at least 1");
  check_constraint(prob, init);

  SolveReport report;
  VectorField u = init;
  project(prob, u);
  double E = energy(prob, u);
  VectorField grad = first_variation(prob, u);
  report.iterations = 1;
  double gnorm = lp_norm(grad, 2.0);
  report.energy_history.push_back(E);
  report.gradient_norm_history.push_back(gnorm);

  double step = 1.0;
  int stalled = 0;
  while (true) {
    if (gnorm <= tol) {
      report.converged = true;
      break;
    }
    if (report.iterations >= max_iter) break;

    const VectorField dir =
        preconditioner == Preconditioner::spectral ? precondition(prob, grad) : grad;
    const double slope = pairing(grad, dir);
    double t = step;
    bool accepted = false;
    bool roundoff = false;
    VectorField trial;
    double Et = 0.0;
    for (int k = 0; k <= kMaxBacktracks; ++k, t *= kBacktrackFactor) {
      trial = u;
      trial.axpy(-t, dir);
      project(prob, trial);
      Et = raw_energy(prob, trial);
      roundoff = t * slope <= kRoundoffDecrease * std::abs(E);
      if (Et <= E - kArmijoSlope * t * slope || (roundoff && Et <= E)) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      // The energy can no longer resolve a decrease: stop without convergence.
      if (roundoff) break;
      throw SolveError("line search failed to decrease the energy after 50 backtracks");
    }
    stalled = (roundoff && Et == E) ? stalled + 1 : 0;
    if (stalled >= kMaxStalledSteps) break;

    VectorField next = first_variation(prob, trial);
    ++report.iterations;
    // Barzilai-Borwein step in the metric of the direction map: the step
    // s_k = -t dir has metric norm t^2 <grad, dir>.
    const VectorField yk = next - grad;
    const double sy = -t * pairing(dir, yk);
    step = sy > 0.0 ? t * t * slope / sy : t;

    u = std::move(trial);
    grad = std::move(next);
    E = Et;
    gnorm = lp_norm(grad, 2.0);
    report.energy_history.push_back(E);
    report.gradient_norm_history.push_back(gnorm);
  }
  report.energy = E;
  report.minimizer = std::move(u);
  return report;
}

GammaResult gamma_sweep(const VariationalProblem& prob, const std::vector<std::optional<double>>& s_grid,
                        const GammaOptions& options) {
  GammaResult result;
  result.table = SweepTable({"s", "energy", "dist_to_local", "converged", "iters"});
  result.recovery = SweepTable({"s", "recovery_energy", "local_energy", "rel_gap"});

  const VariationalProblem local = at_order(prob, std::nullopt);
  const SolveReport local_report = minimize(local, prob.g, options.tol, options.max_iter, options.preconditioner);
  result.local_minimizer = local_report.minimizer;
  const double E_local = local_report.energy;
  result.table.add_row({std::string("local"), E_local, 0.0, std::int64_t{local_report.converged},
                        std::int64_t{local_report.iterations}});

  const double p = prob.exponent();
  result.minimizers.reserve(s_grid.size());
  const VectorField* previous = nullptr;
  for (const auto& s : s_grid) {
    if (!s) continue;
    const VariationalProblem ps = at_order(prob, s);
    const VectorField& start = (options.continuation && previous) ? *previous : prob.g;
    SolveReport rep = minimize(ps, start, options.tol, options.max_iter, options.preconditioner);
    const double dist = lp_norm(rep.minimizer - result.local_minimizer, p);
    result.table.add_row({*s, rep.energy, dist, std::int64_t{rep.converged}, std::int64_t{rep.iterations}});

    const double Is = energy(ps, result.local_minimizer);
    result.recovery.add_row({*s, Is, E_local, std::abs(Is - E_local) / (std::abs(E_local) + 1e-30)});

    result.minimizers.push_back(std::move(rep.minimizer));
    previous = &result.minimizers.back();
  }
  return result;
}

}  // namespace fracgrad::variational
