#include "fracgrad/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <mutex>
#include <numbers>
#include <string>
#include <tuple>

#include "fracgrad/constants.hpp"

namespace fracgrad {

std::size_t Grid::points() const {
  std::size_t total = 1;
  for (int a = 0; a < n; ++a) total *= static_cast<std::size_t>(N);
  return total;
}

double Grid::cell_volume() const { return std::pow(h(), n); }

std::size_t Grid::stride(int axis) const {
  std::size_t s = 1;
  for (int a = n - 1; a > axis; --a) s *= static_cast<std::size_t>(N);
  return s;
}

void Grid::unflatten(std::size_t flat, std::span<int> index) const {
  for (int a = n - 1; a >= 0; --a) {
    index[a] = static_cast<int>(flat % N);
    flat /= N;
  }
}

Grid make_grid(int n, double L, int N) {
  constants::check_dimension(n);
  if (!(L > 0.0) || !std::isfinite(L)) throw RangeError("make_grid: box length must be positive");
  if (N < 8) throw RangeError("make_grid: N must be at least 8");
  if (N % 2 != 0) throw RangeError("make_grid: N must be even");
  double total = 1.0;
  for (int a = 0; a < n; ++a) total *= N;
  if (total > static_cast<double>(kMaxGridPoints)) {
    throw BudgetError("make_grid: N^n = " + std::to_string(static_cast<long long>(total)) +
                      " exceeds the memory cap 2^26");
  }
  return Grid{n, L, N};
}

void require_same_grid(const Grid& a, const Grid& b) {
  if (!(a == b)) throw RangeError("fields live on different grids");
}

// ---------------------------------------------------------------------------
// Field

template <int Rank>
Field<Rank>::Field(const Grid& grid, std::vector<double> data) : grid_(grid), data_(std::move(data)) {
  if (data_.size() != static_cast<std::size_t>(component_count(grid.n)) * grid.points()) {
    throw RangeError("Field: data length does not match grid and rank");
  }
}

template <int Rank>
Field<Rank>& Field<Rank>::operator+=(const Field& other) {
  require_same_grid(grid_, other.grid_);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

template <int Rank>
Field<Rank>& Field<Rank>::operator-=(const Field& other) {
  require_same_grid(grid_, other.grid_);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

template <int Rank>
Field<Rank>& Field<Rank>::operator*=(double factor) {
  for (double& v : data_) v *= factor;
  return *this;
}

template <int Rank>
Field<Rank>& Field<Rank>::axpy(double factor, const Field& other) {
  require_same_grid(grid_, other.grid_);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += factor * other.data_[i];
  return *this;
}

template <int Rank>
bool Field<Rank>::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

template class Field<0>;
template class Field<1>;
template class Field<2>;

// ---------------------------------------------------------------------------
// FFT

namespace detail {

namespace {

struct PlanCache {
  std::mutex mutex;
  std::map<std::tuple<int, int, int>, fftw_plan> plans;

  ~PlanCache() {
    for (auto& [key, plan] : plans) fftw_destroy_plan(plan);
  }

  fftw_plan get(const Grid& grid, int sign) {
    std::lock_guard lock(mutex);
    const auto key = std::make_tuple(grid.n, grid.N, sign);
    if (auto it = plans.find(key); it != plans.end()) return it->second;
    int dims[constants::kMaxDimension];
    std::fill(dims, dims + grid.n, grid.N);
    std::vector<std::complex<double>> scratch(grid.points());
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    // ESTIMATE keeps the algorithm choice, and therefore the rounding, reproducible.
    fftw_plan plan = fftw_plan_dft(grid.n, dims, buf, buf, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans.emplace(key, plan);
    return plan;
  }
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

}  // namespace

void fft(const Grid& grid, std::span<std::complex<double>> data, int sign) {
  fftw_plan plan = plan_cache().get(grid, sign);
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, buf, buf);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Spectrum

Spectrum::Spectrum(const Grid& grid) : grid_(grid), coeffs_(grid.points()) {}

std::complex<double> Spectrum::at(std::span<const int> k) const {
  if (static_cast<int>(k.size()) != grid_.n) throw RangeError("Spectrum::at: wrong frequency rank");
  std::size_t flat = 0;
  for (int a = 0; a < grid_.n; ++a) {
    if (std::abs(k[a]) > grid_.N / 2) throw RangeError("Spectrum::at: frequency outside the grid");
    const int j = (k[a] + grid_.N) % grid_.N;
    flat += static_cast<std::size_t>(j) * grid_.stride(a);
  }
  return coeffs_[flat];
}

namespace {

// exp(-2 pi i k x0 / L) per axis, with x0 the first cell centre.
std::vector<std::complex<double>> axis_phases(const Grid& grid) {
  std::vector<std::complex<double>> phase(grid.N);
  const double x0 = grid.coordinate(0);
  for (int j = 0; j < grid.N; ++j) {
    const double k = Spectrum::frequency(j, grid.N);
    phase[j] = std::polar(1.0, -2.0 * std::numbers::pi * k * x0 / grid.L);
  }
  return phase;
}

}  // namespace

Spectrum forward_transform(const ScalarField& f) {
  const Grid& grid = f.grid();
  Spectrum F(grid);
  auto coeffs = F.coefficients();
  auto values = f.component(0);
  for (std::size_t j = 0; j < values.size(); ++j) coeffs[j] = values[j];
  detail::fft(grid, coeffs, -1);
  const auto phase = axis_phases(grid);
  const double scale = 1.0 / static_cast<double>(grid.points());
  int idx[constants::kMaxDimension];
  for (std::size_t j = 0; j < coeffs.size(); ++j) {
    grid.unflatten(j, idx);
    std::complex<double> p = scale;
    for (int a = 0; a < grid.n; ++a) p *= phase[idx[a]];
    coeffs[j] *= p;
  }
  return F;
}

ScalarField inverse_transform(const Spectrum& F) {
  const Grid& grid = F.grid();
  std::vector<std::complex<double>> work(F.coefficients().begin(), F.coefficients().end());
  const auto phase = axis_phases(grid);
  int idx[constants::kMaxDimension];
  for (std::size_t j = 0; j < work.size(); ++j) {
    grid.unflatten(j, idx);
    std::complex<double> p = 1.0;
    for (int a = 0; a < grid.n; ++a) p *= phase[idx[a]];
    work[j] /= p;
  }
  detail::fft(grid, work, +1);
  ScalarField f(grid);
  auto out = f.component(0);
  for (std::size_t j = 0; j < work.size(); ++j) out[j] = work[j].real();
  return f;
}

// ---------------------------------------------------------------------------
// Norms and pairings

template <int Rank>
double lp_norm(const Field<Rank>& f, double p) {
  if (!(p >= 1.0)) throw RangeError("lp_norm: p must be >= 1");
  const auto v = f.values();
  if (std::isinf(p)) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
  }
  double sum = 0.0;
  if (p == 2.0) {
    for (double x : v) sum += x * x;
    return std::sqrt(f.grid().cell_volume() * sum);
  }
  for (double x : v) sum += std::pow(std::abs(x), p);
  return std::pow(f.grid().cell_volume() * sum, 1.0 / p);
}

template <int Rank>
double pairing(const Field<Rank>& f, const Field<Rank>& g) {
  require_same_grid(f.grid(), g.grid());
  const auto a = f.values();
  const auto b = g.values();
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return f.grid().cell_volume() * sum;
}

template <int Rank>
double mean(const Field<Rank>& f, int component) {
  const auto v = f.component(component);
  double sum = 0.0;
  for (double x : v) sum += x;
  return sum / static_cast<double>(v.size());
}

template double lp_norm(const Field<0>&, double);
template double lp_norm(const Field<1>&, double);
template double lp_norm(const Field<2>&, double);
template double pairing(const Field<0>&, const Field<0>&);
template double pairing(const Field<1>&, const Field<1>&);
template double pairing(const Field<2>&, const Field<2>&);
template double mean(const Field<0>&, int);
template double mean(const Field<1>&, int);
template double mean(const Field<2>&, int);

// ---------------------------------------------------------------------------
// Binary snapshots

namespace {

template <class T>
void put_le(std::ostream& out, T value) {
  static_assert(sizeof(T) == 8);
  auto bits = std::bit_cast<std::uint64_t>(value);
  char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((bits >> (8 * i)) & 0xFF);
  out.write(bytes, 8);
}

template <class T>
T get_le(std::istream& in) {
  unsigned char bytes[8];
  in.read(reinterpret_cast<char*>(bytes), 8);
  if (!in) throw RangeError("read_field: truncated snapshot");
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  return std::bit_cast<T>(bits);
}

}  // namespace

template <int Rank>
void write_field(std::ostream& out, const Field<Rank>& f) {
  const Grid& g = f.grid();
  put_le<std::int64_t>(out, g.n);
  put_le<double>(out, g.L);
  put_le<std::int64_t>(out, g.N);
  put_le<std::int64_t>(out, f.components());
  for (double v : f.values()) put_le<double>(out, v);
}

template <int Rank>
Field<Rank> read_field(std::istream& in) {
  const auto n = get_le<std::int64_t>(in);
  const auto L = get_le<double>(in);
  const auto N = get_le<std::int64_t>(in);
  const auto comps = get_le<std::int64_t>(in);
  const Grid grid = make_grid(static_cast<int>(n), L, static_cast<int>(N));
  if (comps != Field<Rank>::component_count(grid.n)) {
    throw RangeError("read_field: component count does not match the requested field rank");
  }
  std::vector<double> data(static_cast<std::size_t>(comps) * grid.points());
  for (double& v : data) v = get_le<double>(in);
  return Field<Rank>(grid, std::move(data));
}

template <int Rank>
void save_field(const std::filesystem::path& path, const Field<Rank>& f) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  write_field(out, f);
}

template <int Rank>
Field<Rank> load_field(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return read_field<Rank>(in);
}

template void write_field(std::ostream&, const Field<0>&);
template void write_field(std::ostream&, const Field<1>&);
template void write_field(std::ostream&, const Field<2>&);
template Field<0> read_field(std::istream&);
template Field<1> read_field(std::istream&);
template Field<2> read_field(std::istream&);
template void save_field(const std::filesystem::path&, const Field<0>&);
template void save_field(const std::filesystem::path&, const Field<1>&);
template void save_field(const std::filesystem::path&, const Field<2>&);
template Field<0> load_field(const std::filesystem::path&);
template Field<1> load_field(const std::filesystem::path&);
template Field<2> load_field(const std::filesystem::path&);

}  // namespace fracgrad
