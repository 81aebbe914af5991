#pragma once

#include <complex>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <span>
#include <vector>

#include "fracgrad/error.hpp"

namespace fracgrad {

/// Uniform periodic box [-L/2, L/2)^n with N cell-centred samples per axis.
struct Grid {
  int n = 1;
  double L = 1.0;
  int N = 8;

  double h() const { return L / N; }
  std::size_t points() const;
  /// Cell volume h^n.
  double cell_volume() const;
  /// Cell-centre coordinate -L/2 + (j + 1/2) h along any axis.
  double coordinate(int j) const { return -0.5 * L + (j + 0.5) * h(); }
  /// Stride of axis a in the row-major flattening (last axis fastest).
  std::size_t stride(int axis) const;
  /// Row-major multi-index of a flat index.
  void unflatten(std::size_t flat, std::span<int> index) const;

  friend bool operator==(const Grid&, const Grid&) = default;
};

inline constexpr std::size_t kMaxGridPoints = std::size_t{1} << 26;

/// Validated constructor: 1 <= n <= 4, L > 0, even N >= 8 (RangeError);
/// N^n <= 2^26 (BudgetError).
Grid make_grid(int n, double L, int N);

void require_same_grid(const Grid& a, const Grid& b);

/// Sampled field with value semantics. Rank 0 is a scalar (one component),
/// rank 1 a vector (n components), rank 2 an n x n matrix (n*n components,
/// row-major, entry (i, j) at component i*n + j). Storage is component-major.
template <int Rank>
class Field {
  static_assert(Rank >= 0 && Rank <= 2);

public:
  Field() = default;
  explicit Field(const Grid& grid)
      : grid_(grid), data_(static_cast<std::size_t>(component_count(grid.n)) * grid.points(), 0.0) {}
  Field(const Grid& grid, std::vector<double> data);

  static int component_count(int n) { return Rank == 0 ? 1 : (Rank == 1 ? n : n * n); }

  const Grid& grid() const { return grid_; }
  int components() const { return component_count(grid_.n); }
  std::size_t points() const { return grid_.points(); }

  std::span<double> component(int c) { return {data_.data() + c * points(), points()}; }
  std::span<const double> component(int c) const { return {data_.data() + c * points(), points()}; }

  std::span<double> entry(int i, int j)
    requires(Rank == 2)
  {
    return component(i * grid_.n + j);
  }
  std::span<const double> entry(int i, int j) const
    requires(Rank == 2)
  {
    return component(i * grid_.n + j);
  }

  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(double factor);
  /// this += factor * other
  Field& axpy(double factor, const Field& other);

  friend Field operator+(Field a, const Field& b) { return a += b; }
  friend Field operator-(Field a, const Field& b) { return a -= b; }
  friend Field operator*(double f, Field a) { return a *= f; }

  bool all_finite() const;

private:
  Grid grid_;
  std::vector<double> data_;
};

using ScalarField = Field<0>;
using VectorField = Field<1>;
using MatrixField = Field<2>;

extern template class Field<0>;
extern template class Field<1>;
extern template class Field<2>;

/// Fourier coefficients F_k of f(x) = sum_k F_k exp(2 pi i k.x / L), stored in
/// FFT order (index j <-> integer frequency j for j < N/2, j - N otherwise).
/// Physical frequency is xi = k / L. For real fields F_{-k} = conj(F_k) for
/// every |k_a| < N/2; the Nyquist bin k_a = -N/2 stands for the aliased pair.
class Spectrum {
public:
  explicit Spectrum(const Grid& grid);

  const Grid& grid() const { return grid_; }
  std::span<std::complex<double>> coefficients() { return coeffs_; }
  std::span<const std::complex<double>> coefficients() const { return coeffs_; }

  /// Integer frequency of FFT index j along an axis.
  static int frequency(int j, int N) { return j < N / 2 ? j : j - N; }
  /// Coefficient of the integer frequency vector k (each |k_a| <= N/2).
  std::complex<double> at(std::span<const int> k) const;

private:
  Grid grid_;
  std::vector<std::complex<double>> coeffs_;
};

Spectrum forward_transform(const ScalarField& f);
/// Real part of the synthesis; exact inverse of forward_transform.
ScalarField inverse_transform(const Spectrum& F);

/// Midpoint-rule L^p norm (h^n sum |f_j|^p)^{1/p}, summed over components;
/// p = infinity gives the maximum modulus.
template <int Rank>
double lp_norm(const Field<Rank>& f, double p);

/// h^n sum_j f_j g_j summed over components.
template <int Rank>
double pairing(const Field<Rank>& f, const Field<Rank>& g);

template <int Rank>
double mean(const Field<Rank>& f, int component = 0);

/// Flat little-endian snapshot: int64 n, float64 L, int64 N, int64 component
/// count, then the doubles component by component, each in row-major order.
template <int Rank>
void write_field(std::ostream& out, const Field<Rank>& f);
template <int Rank>
Field<Rank> read_field(std::istream& in);
template <int Rank>
void save_field(const std::filesystem::path& path, const Field<Rank>& f);
template <int Rank>
Field<Rank> load_field(const std::filesystem::path& path);

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

namespace detail {

/// In-place unnormalized complex FFT over the grid (sign -1 forward, +1 backward).
void fft(const Grid& grid, std::span<std::complex<double>> data, int sign);

}  // namespace detail

}  // namespace fracgrad
