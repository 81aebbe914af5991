#include "fracgrad/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <functional>
#include <string>

#include "fracgrad/constants.hpp"

namespace fracgrad::quadrature {

namespace {

void check_order(double s, const char* what) {
  if (!(s > 0.0 && s < 1.0)) throw RangeError(std::string(what) + ": s must lie in (0, 1)");
}

int wrapped(int o, int N) { return o < N / 2 ? o : o - N; }

// int_{|x|_inf > 1} |x|^{-q} dx, q > n, as (2n / (q - n)) int_{[-1,1]^{n-1}} (1 + |y|^2)^{-q/2} dy.
double outside_cube_integral(int n, double q) {
  using boost::math::quadrature::gauss;
  std::function<double(int, double)> face = [&](int depth, double r2) -> double {
    if (depth == n - 1) return std::pow(1.0 + r2, -0.5 * q);
    return gauss<double, 30>::integrate([&](double y) { return face(depth + 1, r2 + y * y); }, -1.0, 1.0);
  };
  return 2.0 * n * face(0, 0.0) / (q - n);
}

// Calls fn(offset_flat, y_flat) for every offset in lexicographic order, with
// y = x - offset taken modulo N on each axis.
template <class Fn>
inline void for_each_offset(const Grid& grid, const int* x, Fn&& fn) {
  const int n = grid.n;
  const int N = grid.N;
  int o[constants::kMaxDimension] = {};
  std::size_t offset_base = 0;
  while (true) {
    std::size_t y_base = 0;
    for (int a = 0; a < n - 1; ++a) {
      int ya = x[a] - o[a];
      if (ya < 0) ya += N;
      y_base = y_base * N + static_cast<std::size_t>(ya);
    }
    y_base *= N;
    const int xl = x[n - 1];
    for (int ol = 0; ol < N; ++ol) {
      int yl = xl - ol;
      if (yl < 0) yl += N;
      fn(offset_base + ol, y_base + yl);
    }
    offset_base += N;
    int a = n - 2;
    while (a >= 0 && o[a] == N - 1) o[a--] = 0;
    if (a < 0) break;
    ++o[a];
  }
}

template <class Body>
void parallel_targets(const Grid& grid, Body&& body) {
  const auto P = static_cast<long long>(grid.points());
#pragma omp parallel for schedule(static)
  for (long long j = 0; j < P; ++j) {
    int x[constants::kMaxDimension];
    grid.unflatten(static_cast<std::size_t>(j), x);
    body(static_cast<std::size_t>(j), x);
  }
}

}  // namespace

void check_budget(const Grid& grid) {
  const double pairs = std::pow(static_cast<double>(grid.points()), 2.0);
  if (pairs > kKernelBudget) {
    throw BudgetError("direct quadrature needs N^{2n} = " + std::to_string(pairs) +
                      " kernel evaluations, above the 2^30 budget");
  }
}

KernelTable::KernelTable(const Grid& grid, double q, const QuadratureScheme& scheme) : grid_(grid), q_(q) {
  const int n = grid.n;
  const int N = grid.N;
  const double h = grid.h();
  const double L = grid.L;
  const std::size_t P = grid.points();
  if (!(q > n)) throw RangeError("KernelTable: exponent must exceed the dimension");
  table_.assign(P * n, 0.0);

  const double r_cut = scheme.r_cut > 0.0 ? scheme.r_cut : 0.5 * L;
  if (scheme.images == ImagePolicy::nearest && r_cut > 0.5 * L) {
    throw RangeError("QuadratureScheme: r_cut must not exceed L/2");
  }
  const int M = scheme.images == ImagePolicy::periodic ? scheme.image_shells : 0;
  if (M < 0) throw RangeError("QuadratureScheme: image_shells must be non-negative");

  // Far-field tail of the image sum: linear in z, (1 - q/n) L^{-q} S(M) z.
  double tail = 0.0;
  if (scheme.images == ImagePolicy::periodic) {
    const double S = outside_cube_integral(n, q) * std::pow(M + 0.5, n - q);
    tail = (1.0 - q / n) * std::pow(L, -q) * S;
  }

  int o[constants::kMaxDimension];
  int m[constants::kMaxDimension];
  double z[constants::kMaxDimension];
  double w[constants::kMaxDimension];
  for (std::size_t off = 0; off < P; ++off) {
    grid.unflatten(off, o);
    bool origin = true;
    for (int a = 0; a < n; ++a) {
      z[a] = wrapped(o[a], N) * h;
      origin = origin && o[a] == 0;
    }
    double* T = table_.data() + off * n;
    if (scheme.images == ImagePolicy::nearest) {
      if (origin) continue;
      double r2 = 0.0;
      for (int a = 0; a < n; ++a) r2 += z[a] * z[a];
      const double r = std::sqrt(r2);
      if (r > r_cut * (1.0 + 1e-12)) continue;
      const double f = std::pow(r, -q);
      for (int a = 0; a < n; ++a) T[a] = z[a] * f;
      continue;
    }
    for (int a = 0; a < n; ++a) m[a] = -M;
    while (true) {
      double r2 = 0.0;
      for (int a = 0; a < n; ++a) {
        w[a] = z[a] + m[a] * L;
        r2 += w[a] * w[a];
      }
      if (r2 > 0.0) {
        const double f = std::pow(r2, -0.5 * q);
        for (int a = 0; a < n; ++a) T[a] += w[a] * f;
      }
      int a = 0;
      while (a < n && m[a] == M) m[a++] = -M;
      if (a == n) break;
      ++m[a];
    }
    for (int a = 0; a < n; ++a) T[a] += tail * z[a];
  }

  if (scheme.singular == SingularTreatment::lattice_corrected) {
    // Punctured lattice sum minus integral of (Dv . z) z / |z|^q equals
    // h^{n+1-q} Z_n(q-2)/n Dv; cancel it through the +-h e_a weights.
    const double weight = -constants::lattice_zeta(n, q - 2.0) / (2.0 * n) * std::pow(h, 1.0 - q);
    for (int a = 0; a < n; ++a) {
      table_[grid.stride(a) * n + a] += weight;
      table_[(N - 1) * grid.stride(a) * n + a] -= weight;
    }
  }

  // Exact oddness, and zero components on the box faces where z_a = -L/2 is its own mirror.
  int mirror_idx[constants::kMaxDimension];
  for (std::size_t off = 0; off < P; ++off) {
    grid.unflatten(off, o);
    std::size_t mirror = 0;
    for (int a = 0; a < n; ++a) {
      mirror_idx[a] = (N - o[a]) % N;
      mirror += static_cast<std::size_t>(mirror_idx[a]) * grid.stride(a);
    }
    if (mirror < off) continue;
    double* T = table_.data() + off * n;
    double* R = table_.data() + mirror * n;
    for (int a = 0; a < n; ++a) {
      const double odd = o[a] == N / 2 ? 0.0 : 0.5 * (T[a] - R[a]);
      T[a] = odd;
      R[a] = -odd;
    }
  }
}

VectorField fractional_gradient_direct(const ScalarField& u, double s, const QuadratureScheme& scheme) {
  check_order(s, "fractional_gradient_direct");
  const Grid& grid = u.grid();
  check_budget(grid);
  const int n = grid.n;
  const KernelTable table(grid, n + s + 1.0, scheme);
  const double scale = constants::c_ns(n, s) * grid.cell_volume();
  const auto uv = u.component(0);
  VectorField out(grid);
  auto ov = out.values();
  const std::size_t P = grid.points();
  parallel_targets(grid, [&](std::size_t j, const int* x) {
    double acc[constants::kMaxDimension] = {};
    const double ux = uv[j];
    for_each_offset(grid, x, [&](std::size_t off, std::size_t y) {
      const double d = ux - uv[y];
      const double* T = table.at(off);
      for (int a = 0; a < n; ++a) acc[a] += d * T[a];
    });
    for (int a = 0; a < n; ++a) ov[a * P + j] = scale * acc[a];
  });
  return out;
}

MatrixField fractional_gradient_direct(const VectorField& u, double s, const QuadratureScheme& scheme) {
  const Grid& grid = u.grid();
  MatrixField out(grid);
  for (int i = 0; i < grid.n; ++i) {
    ScalarField ui(grid, std::vector<double>(u.component(i).begin(), u.component(i).end()));
    const VectorField row = fractional_gradient_direct(ui, s, scheme);
    for (int a = 0; a < grid.n; ++a) {
      std::copy(row.component(a).begin(), row.component(a).end(), out.entry(i, a).begin());
    }
  }
  return out;
}

ScalarField fractional_divergence_direct(const VectorField& phi, double s, const QuadratureScheme& scheme) {
  check_order(s, "fractional_divergence_direct");
  const Grid& grid = phi.grid();
  check_budget(grid);
  const int n = grid.n;
  const KernelTable table(grid, n + s + 1.0, scheme);
  const double scale = constants::c_ns(n, s) * grid.cell_volume();
  const auto pv = phi.values();
  const std::size_t P = grid.points();
  ScalarField out(grid);
  auto ov = out.component(0);
  parallel_targets(grid, [&](std::size_t j, const int* x) {
    double acc = 0.0;
    for_each_offset(grid, x, [&](std::size_t off, std::size_t y) {
      const double* T = table.at(off);
      for (int a = 0; a < n; ++a) acc += (pv[a * P + j] - pv[a * P + y]) * T[a];
    });
    ov[j] = scale * acc;
  });
  return out;
}

VectorField k_phi(const ScalarField& phi, const MatrixField& U, double s, const QuadratureScheme& scheme) {
  check_order(s, "k_phi");
  const Grid& grid = phi.grid();
  require_same_grid(grid, U.grid());
  check_budget(grid);
  const int n = grid.n;
  const KernelTable table(grid, n + s + 1.0, scheme);
  const double scale = constants::c_ns(n, s) * grid.cell_volume();
  const auto fv = phi.component(0);
  const auto Uv = U.values();
  const std::size_t P = grid.points();
  VectorField out(grid);
  auto ov = out.values();
  parallel_targets(grid, [&](std::size_t j, const int* x) {
    double acc[constants::kMaxDimension] = {};
    const double fx = fv[j];
    for_each_offset(grid, x, [&](std::size_t off, std::size_t y) {
      const double d = fx - fv[y];
      const double* T = table.at(off);
      for (int i = 0; i < n; ++i) {
        double row = 0.0;
        for (int a = 0; a < n; ++a) row += Uv[(i * n + a) * P + y] * T[a];
        acc[i] += d * row;
      }
    });
    for (int i = 0; i < n; ++i) ov[i * P + j] = scale * acc[i];
  });
  return out;
}

ScalarField ftc_reconstruct_direct(const VectorField& V, double s, const QuadratureScheme& scheme) {
  check_order(s, "ftc_reconstruct_direct");
  const Grid& grid = V.grid();
  check_budget(grid);
  const int n = grid.n;
  const KernelTable table(grid, n - s + 1.0, scheme);
  const double scale = constants::c_ns(n, -s) * grid.cell_volume();
  const auto vv = V.values();
  const std::size_t P = grid.points();
  ScalarField out(grid);
  auto ov = out.component(0);
  parallel_targets(grid, [&](std::size_t j, const int* x) {
    double acc = 0.0;
    for_each_offset(grid, x, [&](std::size_t off, std::size_t y) {
      const double* T = table.at(off);
      for (int a = 0; a < n; ++a) acc += vv[a * P + y] * T[a];
    });
    ov[j] = scale * acc;
  });
  const double m = mean(out);
  for (double& v : ov) v -= m;
  return out;
}

}  // namespace fracgrad::quadrature
