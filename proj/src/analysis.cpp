#include "fracgrad/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fracgrad/constants.hpp"
#include "fracgrad/quadrature.hpp"
#include "fracgrad/spectral.hpp"

namespace fracgrad::analysis {

namespace {

void check_s(double s) {
  if (!(s > 0.0 && s < 1.0)) throw RangeError("s must lie in (0, 1)");
}

void check_p(double p) {
  if (!(p > 1.0)) throw RangeError("exponent p must exceed 1");
}

std::vector<double> centre_or_origin(std::vector<double> c, int n) {
  if (c.empty()) c.assign(n, 0.0);
  if (static_cast<int>(c.size()) != n) throw RangeError("domain centre has wrong dimension");
  return c;
}

}  // namespace

DomainMask::DomainMask(const Grid& grid, std::vector<char> inside, std::string description)
    : grid_(grid), inside_(std::move(inside)), description_(std::move(description)) {
  if (count() == 0) throw RangeError("domain mask is empty");
}

DomainMask DomainMask::ball(const Grid& grid, double radius, std::vector<double> center) {
  center = centre_or_origin(std::move(center), grid.n);
  if (!(radius > 0.0)) throw RangeError("ball radius must be positive");
  for (double c : center) {
    if (std::abs(c) + radius > 0.5 * grid.L - 2.0 * grid.h()) {
      throw RangeError("ball must stay 2h away from the box faces");
    }
  }
  std::vector<char> inside(grid.points(), 0);
  int idx[constants::kMaxDimension];
  for (std::size_t j = 0; j < inside.size(); ++j) {
    grid.unflatten(j, idx);
    double r2 = 0.0;
    for (int a = 0; a < grid.n; ++a) {
      const double d = grid.coordinate(idx[a]) - center[a];
      r2 += d * d;
    }
    inside[j] = r2 < radius * radius ? 1 : 0;
  }
  std::ostringstream os;
  os << "ball(r=" << radius << ")";
  return DomainMask(grid, std::move(inside), os.str());
}

DomainMask DomainMask::box(const Grid& grid, std::vector<double> lower, std::vector<double> upper) {
  if (static_cast<int>(lower.size()) != grid.n || static_cast<int>(upper.size()) != grid.n) {
    throw RangeError("box bounds have wrong dimension");
  }
  const double limit = 0.5 * grid.L - 2.0 * grid.h();
  for (int a = 0; a < grid.n; ++a) {
    if (!(lower[a] < upper[a]) || lower[a] < -limit || upper[a] > limit) {
      throw RangeError("box must be nonempty and stay 2h away from the faces");
    }
  }
  std::vector<char> inside(grid.points(), 0);
  int idx[constants::kMaxDimension];
  for (std::size_t j = 0; j < inside.size(); ++j) {
    grid.unflatten(j, idx);
    bool in = true;
    for (int a = 0; a < grid.n; ++a) {
      const double x = grid.coordinate(idx[a]);
      in = in && x > lower[a] && x < upper[a];
    }
    inside[j] = in ? 1 : 0;
  }
  return DomainMask(grid, std::move(inside), "box");
}

DomainMask DomainMask::full(const Grid& grid) {
  return DomainMask(grid, std::vector<char>(grid.points(), 1), "full");
}

std::size_t DomainMask::count() const {
  return static_cast<std::size_t>(std::count(inside_.begin(), inside_.end(), char{1}));
}

Exponent::Exponent(double value) : p(value) {
  if (!(value > 1.0) || std::isinf(value)) throw RangeError("exponent must lie in (1, infinity)");
}

double Exponent::fractional_sobolev_conjugate(int n, double s) const {
  if (!(s * p < n)) throw RangeError("fractional Sobolev conjugate needs sp < n");
  return p * n / (n - s * p);
}

double Exponent::sobolev_conjugate(int n) const {
  if (!(p < n)) throw RangeError("Sobolev conjugate needs p < n");
  return p * n / (n - p);
}

double hsp_norm(const ScalarField& u, double s, double p) {
  check_s(s);
  check_p(p);
  return lp_norm(u, p) + lp_norm(spectral::fractional_gradient(u, s), p);
}

double gagliardo_seminorm(const ScalarField& u, double s, double p, quadrature::SingularTreatment singular) {
  check_s(s);
  check_p(p);
  const Grid& grid = u.grid();
  quadrature::check_budget(grid);
  const int n = grid.n;
  const int N = grid.N;
  const double h = grid.h();
  const std::size_t P = grid.points();

  // |z|^{-(n+sp)} on nearest-image offsets.
  std::vector<double> weight(P, 0.0);
  int o[constants::kMaxDimension];
  for (std::size_t off = 1; off < P; ++off) {
    grid.unflatten(off, o);
    double r2 = 0.0;
    for (int a = 0; a < n; ++a) {
      const double z = (o[a] < N / 2 ? o[a] : o[a] - N) * h;
      r2 += z * z;
    }
    weight[off] = std::pow(r2, -0.5 * (n + s * p));
  }

  const auto v = u.component(0);
  double total = 0.0;
  const auto PP = static_cast<long long>(P);
#pragma omp parallel for schedule(static) reduction(+ : total)
  for (long long j = 0; j < PP; ++j) {
    int x[constants::kMaxDimension];
    grid.unflatten(static_cast<std::size_t>(j), x);
    double acc = 0.0;
    for (std::size_t off = 1; off < P; ++off) {
      int rem = static_cast<int>(off);
      std::size_t y = 0;
      for (int a = n - 1; a >= 0; --a) {
        int ya = x[a] - rem % N;
        rem /= N;
        if (ya < 0) ya += N;
        y += static_cast<std::size_t>(ya) * grid.stride(a);
      }
      acc += std::pow(std::abs(v[j] - v[y]), p) * weight[off];
    }
    total += acc;
  }
  const double cell = grid.cell_volume();
  total *= cell * cell;

  // For smooth u the inner sum at x is h^{p(1-s)} |Du(x)|^p times a lattice sum
  // whose zeta-regularized value is what the punctured rule adds to the integral.
  const bool correctable = n == 1 || p == 2.0;
  if (singular == quadrature::SingularTreatment::lattice_corrected && correctable) {
    const double sigma = n + s * p - p;
    const double zeta = constants::lattice_zeta(n, sigma) / (p == 2.0 ? n : 1);
    const VectorField Du = spectral::classical_gradient(u);
    double grad = 0.0;
    for (std::size_t j = 0; j < P; ++j) {
      double g2 = 0.0;
      for (int a = 0; a < n; ++a) g2 += Du.component(a)[j] * Du.component(a)[j];
      grad += std::pow(g2, 0.5 * p);
    }
    total -= std::pow(h, p * (1.0 - s)) * zeta * cell * grad;
  }
  return std::pow(std::max(total, 0.0), 1.0 / p);
}

double poincare_ratio(const ScalarField& u, double s, double p, const DomainMask& omega) {
  check_s(s);
  check_p(p);
  require_same_grid(u.grid(), omega.grid());
  const auto v = u.component(0);
  double inside = 0.0, outside = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) {
    const double m = std::pow(std::abs(v[j]), p);
    (omega.contains(j) ? inside : outside) += m;
  }
  if (outside > 1e-12 * (inside + outside)) throw RangeError("poincare_ratio: u is not supported in Omega");
  const double grad = lp_norm(spectral::fractional_gradient(u, s), p);
  if (grad == 0.0) throw RangeError("poincare_ratio: zero fractional gradient norm");
  return std::pow(u.grid().cell_volume() * inside, 1.0 / p) / grad;
}

double embedding_ratio(const ScalarField& u, double s, double p) {
  check_s(s);
  check_p(p);
  const double denom = lp_norm(u, p) + lp_norm(spectral::classical_gradient(u), p);
  if (denom == 0.0) throw RangeError("embedding_ratio: zero W^{1,p} norm");
  return lp_norm(spectral::fractional_gradient(u, s), p) / denom;
}

SweepTable inequality_sweep(const std::vector<ScalarSpec>& family, const Grid& grid,
                            const std::vector<double>& s_grid, double p, const DomainMask& omega, double s_bar) {
  check_p(p);
  check_s(s_bar);
  SweepTable table({"spec", "s", "poincare_ratio", "embedding_ratio", "grad_ratio_sbar"});
  for (const auto& spec : family) {
    const ScalarField u = sample(spec, grid);
    const double sbar_norm = lp_norm(spectral::fractional_gradient(u, s_bar), p);
    for (double s : s_grid) {
      check_s(s);
      const double ds_norm = lp_norm(spectral::fractional_gradient(u, s), p);
      table.add_row({describe(spec), s, poincare_ratio(u, s, p, omega), embedding_ratio(u, s, p),
                     sbar_norm / ds_norm});
    }
  }
  return table;
}

}  // namespace fracgrad::analysis
