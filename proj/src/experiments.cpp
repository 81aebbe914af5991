#include "fracgrad/experiments.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <limits>

#include "fracgrad/analysis.hpp"
#include "fracgrad/constants.hpp"
#include "fracgrad/minors.hpp"
#include "fracgrad/quadrature.hpp"
#include "fracgrad/spectral.hpp"

namespace fracgrad::experiments {

namespace {

double to_double(std::string_view token) {
  double value = 0.0;
  const auto* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (token.empty() || ec != std::errc() || ptr != end) {
    throw RangeError("not a number: '" + std::string(token) + "'");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

template <int R>
double relative_distance(const Field<R>& a, const Field<R>& b, double p) {
  return lp_norm(a - b, p) / lp_norm(b, p);
}

}  // namespace

std::vector<double> parse_range(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) throw RangeError("range must look like start:stop:count");
  const double start = to_double(parts[0]);
  const double stop = to_double(parts[1]);
  const double count = to_double(parts[2]);
  if (!(count >= 1.0) || count != std::floor(count)) throw RangeError("range count must be a positive integer");
  const int m = static_cast<int>(count);
  std::vector<double> out(m);
  for (int i = 0; i < m; ++i) out[i] = m == 1 ? start : start + (stop - start) * i / (m - 1);
  if (m > 1) out.back() = stop;
  return out;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  for (auto part : split(text, ',')) out.push_back(to_double(part));
  return out;
}

SweepTable constants_table(int n, const std::vector<double>& s_grid) {
  constants::check_dimension(n);
  SweepTable table({"n", "s", "c_ns", "c_ns_over_1ms", "gamma_1ms"});
  for (double s : s_grid) {
    const double alpha = 1.0 - s;
    const double g = (alpha > 0.0 && alpha < n) ? constants::gamma_riesz(n, alpha)
                                                : std::numeric_limits<double>::quiet_NaN();
    table.add_row({std::int64_t{n}, s, constants::c_ns(n, s), constants::c_ns_over_one_minus_s(n, s), g});
  }
  return table;
}

SweepTable localize(const ScalarSpec& spec, const Grid& grid, double p, const std::vector<double>& s_grid) {
  const analysis::Exponent exponent(p);
  const ScalarField u = sample(spec, grid);
  const VectorField Du = exact_gradient(spec, grid);
  SweepTable table({"s", "err_rel", "norm_Dsu"});
  for (double s : s_grid) {
    const VectorField Ds = spectral::fractional_gradient(u, s);
    table.add_row({s, relative_distance(Ds, Du, exponent.p), lp_norm(Ds, exponent.p)});
  }
  return table;
}

SweepTable crosscheck(const ScalarSpec& spec, const Grid& grid, double s) {
  using clock = std::chrono::steady_clock;
  const ScalarField u = sample(spec, grid);
  SweepTable table({"path", "err_rel", "seconds"});

  auto t0 = clock::now();
  const VectorField reference = spectral::fractional_gradient(u, s);
  table.add_row({std::string("spectral"), 0.0, std::chrono::duration<double>(clock::now() - t0).count()});

  t0 = clock::now();
  const VectorField direct = quadrature::fractional_gradient_direct(u, s);
  table.add_row({std::string("direct"), relative_distance(direct, reference, 2.0),
                 std::chrono::duration<double>(clock::now() - t0).count()});

  t0 = clock::now();
  const VectorField plain = quadrature::fractional_gradient_direct(u, s, quadrature::QuadratureScheme::plain());
  table.add_row({std::string("direct_plain"), relative_distance(plain, reference, 2.0),
                 std::chrono::duration<double>(clock::now() - t0).count()});
  return table;
}

SweepTable inequalities(const config::InequalityConfig& cfg) {
  const analysis::DomainMask omega = config::parse_domain(cfg.omega, cfg.grid);
  return analysis::inequality_sweep(cfg.specs, cfg.grid, cfg.s_grid, cfg.p, omega, cfg.s_bar);
}

MinorsSetup default_minors_setup(int n) {
  constants::check_dimension(n);
  MinorsSetup setup;
  // Diagonal near 1 plus off-diagonal coupling, so every minor is nontrivial.
  setup.u.A.assign(n * n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) setup.u.A[i * n + j] = i == j ? 1.0 - 0.2 * i : (i < j ? 0.5 : -0.3);
  }
  setup.u.b.assign(n, 0.0);
  for (int i = 0; i < n; ++i) setup.u.b[i] = 0.2 - 0.3 * i;
  setup.u.cutoff = BumpSpec{5.0, 1.0, {}};

  auto centre = [n](double a, double b) {
    std::vector<double> c(n, 0.0);
    c[0] = a;
    if (n > 1) c[1] = b;
    return c;
  };
  setup.tests = {BumpSpec{2.0, 1.0, centre(0.0, 0.0)}, BumpSpec{3.0, 1.0, centre(1.0, -0.5)},
                 BumpSpec{1.5, 1.0, centre(-1.5, 1.0)}};
  setup.phi = BumpSpec{3.0, 1.0, centre(0.5, -0.5)};
  return setup;
}

SweepTable minors(const Grid& grid, const std::vector<double>& s_grid, bool with_ibp) {
  const MinorsSetup setup = default_minors_setup(grid.n);
  const VectorField u = sample(setup.u, grid);
  std::vector<ScalarField> tests;
  for (const auto& b : setup.tests) tests.push_back(sample(b, grid));
  SweepTable table = minors::weak_pairing_sweep(u, s_grid, tests);
  if (with_ibp && grid.n >= 2) {
    const ScalarField phi = sample(setup.phi, grid);
    std::vector<int> all(grid.n);
    for (int i = 0; i < grid.n; ++i) all[i] = i;
    const minors::MinorIndex idx = minors::make_minor_index(grid.n, all, all);
    for (double s : s_grid) {
      const minors::IbpResult r = minors::det_ibp_residual(u, s, idx, phi);
      table.add_row({s, std::string("ibp"), r.lhs, r.rhs, r.residual});
    }
  }
  return table;
}

variational::GammaResult gamma(const config::GammaConfig& cfg) {
  return variational::gamma_sweep(config::build_problem(cfg), cfg.s_grid, cfg.options);
}

}  // namespace fracgrad::experiments
