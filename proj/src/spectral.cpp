#include "fracgrad/spectral.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "fracgrad/constants.hpp"

namespace fracgrad::spectral {

namespace {

using cplx = std::complex<double>;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_order(double s, const char* what) {
  if (!(s > 0.0 && s <= 1.0)) throw RangeError(std::string(what) + ": s must lie in (0, 1]");
}

// Per-mode angular frequencies 2 pi xi_a, their modulus, and the Nyquist flag.
struct Modes {
  int n = 0;
  std::vector<double> omega;  // omega[a * points + j]
  std::vector<double> modulus;
  std::vector<char> nyquist;

  explicit Modes(const Grid& grid) : n(grid.n) {
    const std::size_t P = grid.points();
    omega.resize(static_cast<std::size_t>(n) * P);
    modulus.resize(P);
    nyquist.resize(P);
    int idx[constants::kMaxDimension];
    for (std::size_t j = 0; j < P; ++j) {
      grid.unflatten(j, idx);
      double r2 = 0.0;
      bool nyq = false;
      for (int a = 0; a < n; ++a) {
        const int k = Spectrum::frequency(idx[a], grid.N);
        nyq = nyq || (k == -grid.N / 2);
        const double w = kTwoPi * k / grid.L;
        omega[a * P + j] = w;
        r2 += w * w;
      }
      modulus[j] = std::sqrt(r2);
      nyquist[j] = nyq ? 1 : 0;
    }
  }

  double w(int axis, std::size_t j) const { return omega[axis * modulus.size() + j]; }
};

std::vector<cplx> to_complex(std::span<const double> v) { return {v.begin(), v.end()}; }

void to_real(std::span<const cplx> c, std::span<double> out) {
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = c[j].real();
}

// |2 pi xi|^{s-1} with the zero and Nyquist modes mapped to 0.
std::vector<double> odd_scale(const Modes& modes, double s) {
  std::vector<double> scale(modes.modulus.size());
  for (std::size_t j = 0; j < scale.size(); ++j) {
    const double m = modes.modulus[j];
    if (m == 0.0 || modes.nyquist[j]) {
      scale[j] = 0.0;
    } else {
      scale[j] = s == 1.0 ? 1.0 : std::pow(m, s - 1.0);
    }
  }
  return scale;
}

// out_a = D^s_a f for every axis a, written to consecutive components of dst.
void gradient_into(const Grid& grid, const Modes& modes, const std::vector<double>& scale,
                   std::span<const double> f, std::span<double> dst) {
  const std::size_t P = grid.points();
  std::vector<cplx> fhat = to_complex(f);
  detail::fft(grid, fhat, -1);
  const double norm = 1.0 / static_cast<double>(P);
  std::vector<cplx> work(P);
  for (int a = 0; a < grid.n; ++a) {
    for (std::size_t j = 0; j < P; ++j) {
      work[j] = fhat[j] * cplx(0.0, modes.w(a, j) * scale[j] * norm);
    }
    detail::fft(grid, work, +1);
    to_real(work, dst.subspan(a * P, P));
  }
}

// dst = sum_a D^s_a f_a where f_a are n consecutive components of src.
void divergence_into(const Grid& grid, const Modes& modes, const std::vector<double>& scale,
                     std::span<const double> src, std::span<double> dst) {
  const std::size_t P = grid.points();
  std::vector<cplx> acc(P, cplx(0.0, 0.0));
  const double norm = 1.0 / static_cast<double>(P);
  for (int a = 0; a < grid.n; ++a) {
    std::vector<cplx> fhat = to_complex(src.subspan(a * P, P));
    detail::fft(grid, fhat, -1);
    for (std::size_t j = 0; j < P; ++j) {
      acc[j] += fhat[j] * cplx(0.0, modes.w(a, j) * scale[j] * norm);
    }
  }
  detail::fft(grid, acc, +1);
  to_real(acc, dst);
}

template <int Rank>
double relative_l2(const Field<Rank>& a, const Field<Rank>& b) {
  const double denom = lp_norm(b, 2.0);
  Field<Rank> d = a;
  d -= b;
  const double num = lp_norm(d, 2.0);
  return denom == 0.0 ? num : num / denom;
}

}  // namespace

VectorField fractional_gradient(const ScalarField& u, double s) {
  check_order(s, "fractional_gradient");
  const Grid& grid = u.grid();
  const Modes modes(grid);
  const auto scale = odd_scale(modes, s);
  VectorField out(grid);
  gradient_into(grid, modes, scale, u.component(0), out.values());
  return out;
}

MatrixField fractional_gradient(const VectorField& u, double s) {
  check_order(s, "fractional_gradient");
  const Grid& grid = u.grid();
  const Modes modes(grid);
  const auto scale = odd_scale(modes, s);
  MatrixField out(grid);
  const std::size_t P = grid.points();
  for (int i = 0; i < grid.n; ++i) {
    gradient_into(grid, modes, scale, u.component(i), out.values().subspan(i * grid.n * P, grid.n * P));
  }
  return out;
}

ScalarField fractional_divergence(const VectorField& phi, double s) {
  check_order(s, "fractional_divergence");
  const Grid& grid = phi.grid();
  const Modes modes(grid);
  const auto scale = odd_scale(modes, s);
  ScalarField out(grid);
  divergence_into(grid, modes, scale, phi.values(), out.values());
  return out;
}

VectorField fractional_divergence(const MatrixField& P, double s) {
  check_order(s, "fractional_divergence");
  const Grid& grid = P.grid();
  const Modes modes(grid);
  const auto scale = odd_scale(modes, s);
  VectorField out(grid);
  const std::size_t np = grid.points();
  for (int i = 0; i < grid.n; ++i) {
    divergence_into(grid, modes, scale, P.values().subspan(i * grid.n * np, grid.n * np), out.component(i));
  }
  return out;
}

VectorField classical_gradient(const ScalarField& u) { return fractional_gradient(u, 1.0); }
MatrixField classical_gradient(const VectorField& u) { return fractional_gradient(u, 1.0); }
ScalarField classical_divergence(const VectorField& phi) { return fractional_divergence(phi, 1.0); }
VectorField classical_divergence(const MatrixField& P) { return fractional_divergence(P, 1.0); }

template <int Rank>
Field<Rank> riesz_potential(const Field<Rank>& f, double alpha) {
  const Grid& grid = f.grid();
  if (!(alpha > 0.0 && alpha < grid.n)) throw RangeError("riesz_potential: alpha must lie in (0, n)");
  const Modes modes(grid);
  const std::size_t P = grid.points();
  std::vector<double> scale(P);
  for (std::size_t j = 0; j < P; ++j) {
    scale[j] = modes.modulus[j] == 0.0 ? 0.0 : std::pow(modes.modulus[j], -alpha) / static_cast<double>(P);
  }
  Field<Rank> out(grid);
  for (int c = 0; c < f.components(); ++c) {
    const auto v = f.component(c);
    double peak = 0.0;
    for (double x : v) peak = std::max(peak, std::abs(x));
    if (std::abs(mean(f, c)) > 1e-10 * peak) {
      throw RangeError("riesz_potential: input component has nonzero mean");
    }
    std::vector<cplx> work = to_complex(v);
    detail::fft(grid, work, -1);
    for (std::size_t j = 0; j < P; ++j) work[j] *= scale[j];
    detail::fft(grid, work, +1);
    to_real(work, out.component(c));
  }
  return out;
}

template ScalarField riesz_potential(const ScalarField&, double);
template VectorField riesz_potential(const VectorField&, double);
template MatrixField riesz_potential(const MatrixField&, double);

ScalarField ftc_reconstruct(const VectorField& V, double s) {
  check_order(s, "ftc_reconstruct");
  const Grid& grid = V.grid();
  const int n = grid.n;
  const std::size_t P = grid.points();
  const Modes modes(grid);

  std::vector<std::vector<cplx>> vhat(n);
  double peak = 0.0;
  for (int a = 0; a < n; ++a) {
    vhat[a] = to_complex(V.component(a));
    detail::fft(grid, vhat[a], -1);
    for (const auto& c : vhat[a]) peak = std::max(peak, std::abs(c));
  }

  std::vector<cplx> uhat(P, cplx(0.0, 0.0));
  const double tol = 1e-8 * peak;
  for (std::size_t j = 0; j < P; ++j) {
    const double m = modes.modulus[j];
    if (m == 0.0) {
      for (int a = 0; a < n; ++a) {
        if (std::abs(vhat[a][j]) > tol) throw RangeError("ftc_reconstruct: field has a nonzero mean");
      }
      continue;
    }
    // Component of V_k orthogonal to xi.
    cplx along(0.0, 0.0);
    for (int a = 0; a < n; ++a) along += vhat[a][j] * (modes.w(a, j) / m);
    double residual2 = 0.0;
    for (int a = 0; a < n; ++a) residual2 += std::norm(vhat[a][j] - along * (modes.w(a, j) / m));
    if (std::sqrt(residual2) > tol) {
      throw RangeError("ftc_reconstruct: field is not in the range of the fractional gradient");
    }
    if (modes.nyquist[j]) continue;
    // -2 pi i xi . V / |2 pi xi|^{1+s}
    uhat[j] = cplx(0.0, -1.0) * along * std::pow(m, -s) / static_cast<double>(P);
  }
  detail::fft(grid, uhat, +1);
  ScalarField u(grid);
  to_real(uhat, u.component(0));
  return u;
}

VectorField semigroup_compose(const ScalarField& u, double s, double s_bar, double tolerance) {
  if (!(s_bar > 0.0 && s_bar <= s && s < 1.0)) throw RangeError("semigroup_compose: need 0 < s_bar <= s < 1");
  VectorField ds = fractional_gradient(u, s);
  if (s_bar == s) return ds;
  VectorField composed = riesz_potential(ds, s - s_bar);
  const double mismatch = relative_l2(composed, fractional_gradient(u, s_bar));
  if (mismatch > tolerance) {
    throw SolveError("semigroup_compose: I_{s-s_bar} D^s u differs from D^{s_bar} u by " + std::to_string(mismatch));
  }
  return composed;
}

MatrixField semigroup_compose(const VectorField& u, double s, double s_bar, double tolerance) {
  if (!(s_bar > 0.0 && s_bar <= s && s < 1.0)) throw RangeError("semigroup_compose: need 0 < s_bar <= s < 1");
  MatrixField ds = fractional_gradient(u, s);
  if (s_bar == s) return ds;
  MatrixField composed = riesz_potential(ds, s - s_bar);
  const double mismatch = relative_l2(composed, fractional_gradient(u, s_bar));
  if (mismatch > tolerance) {
    throw SolveError("semigroup_compose: I_{s-s_bar} D^s u differs from D^{s_bar} u by " + std::to_string(mismatch));
  }
  return composed;
}

}  // namespace fracgrad::spectral
