#include "fracgrad/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "fracgrad/analysis.hpp"
#include "fracgrad/constants.hpp"
#include "fracgrad/experiments.hpp"
#include "fracgrad/minors.hpp"
#include "fracgrad/quadrature.hpp"
#include "fracgrad/spectral.hpp"
#include "fracgrad/test_functions.hpp"
#include "fracgrad/variational.hpp"

namespace fracgrad::acceptance {

namespace {

using std::numbers::pi;

struct Check {
  std::string label;
  double value;
  double bound;
  bool at_least;  // value >= bound instead of value <= bound
  bool boolean = false;
  bool ok() const { return std::isfinite(value) && (at_least ? value >= bound : value <= bound); }
  // How close the check is to failing; 1 means on the bound.
  double load() const {
    if (!std::isfinite(value)) return kInfinity;
    if (at_least) return value > 0.0 ? bound / value : kInfinity;
    return bound > 0.0 ? value / bound : (value <= 0.0 ? 0.0 : kInfinity);
  }
};

Check le(std::string label, double value, double bound) { return {std::move(label), value, bound, false}; }
Check ge(std::string label, double value, double bound) { return {std::move(label), value, bound, true}; }
Check holds(std::string label, bool condition) {
  return {std::move(label), condition ? 0.0 : 1.0, 0.0, false, true};
}

struct Outcome {
  std::vector<Check> checks;
  std::vector<SweepTable> artifacts;
};

struct Criterion {
  int id;
  const char* name;
  double time_limit;
  Outcome (*body)(std::uint64_t seed);
};

template <int R>
double rel_l2(const Field<R>& a, const Field<R>& b) {
  return lp_norm(a - b, 2.0) / lp_norm(b, 2.0);
}

template <int R>
double rel_max(const Field<R>& a, const Field<R>& b) {
  return lp_norm(a - b, kInfinity) / lp_norm(b, kInfinity);
}

template <int R>
Field<R> white_noise(const Grid& grid, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Field<R> f(grid);
  for (double& v : f.values()) v = dist(rng);
  return f;
}

std::string label(const char* what, double x) {
  std::ostringstream os;
  os << what << x;
  return os.str();
}

// 1. c_{n,s} / (1 - s) -> 1 / omega_n.
Outcome constants_limit(std::uint64_t) {
  Outcome out;
  for (int n = 1; n <= 3; ++n) {
    const double inv_omega = 1.0 / constants::unit_ball_volume(n);
    const double ratio = constants::c_ns(n, 0.999) / 0.001;
    out.checks.push_back(le(label("n=", n), std::abs(ratio - inv_omega) / inv_omega, 5e-3));
  }
  return out;
}

// 2. Two closed forms of c_{n,s} and c_{n,s} = (n+s-1) / gamma(1-s).
Outcome constants_identities(std::uint64_t) {
  double product_gap = 0.0;
  double riesz_gap = 0.0;
  for (int n = 1; n <= 3; ++n) {
    for (int i = 0; i < 50; ++i) {
      const double s = 0.01 + 0.98 * i / 49.0;
      const double c = constants::c_ns(n, s);
      product_gap = std::max(product_gap, std::abs(constants::c_ns_product_form(n, s) - c) / std::abs(c));
      const double via_riesz = (n + s - 1.0) / constants::gamma_riesz(n, 1.0 - s);
      riesz_gap = std::max(riesz_gap, std::abs(via_riesz - c) / std::abs(c));
    }
  }
  return {{le("product_form", product_gap, 1e-12), le("riesz_form", riesz_gap, 1e-12)}, {}};
}

// 3. D^s cos(2 pi k.x/L) = -w |w|^{s-1} sin(2 pi k.x/L), w = 2 pi k / L.
Outcome multiplier_exactness(std::uint64_t) {
  Outcome out;
  const std::vector<std::vector<int>> modes1 = {{1}, {3}, {7}};
  const std::vector<std::vector<int>> modes2 = {{1, 0}, {2, 3}, {-4, 1}};
  double worst = 0.0;
  for (int n = 1; n <= 2; ++n) {
    const Grid grid = make_grid(n, 16.0, n == 1 ? 64 : 32);
    for (const auto& k : n == 1 ? modes1 : modes2) {
      const ScalarField u = sample(ModeSpec{k, 1.0}, grid);
      for (double s : {0.3, 0.7, 0.95}) {
        double wnorm = 0.0;
        for (int a = 0; a < n; ++a) wnorm += std::pow(2.0 * pi * k[a] / grid.L, 2);
        wnorm = std::sqrt(wnorm);
        VectorField exact(grid);
        int idx[constants::kMaxDimension];
        for (std::size_t j = 0; j < grid.points(); ++j) {
          grid.unflatten(j, idx);
          double phase = 0.0;
          for (int a = 0; a < n; ++a) phase += 2.0 * pi * k[a] * grid.coordinate(idx[a]) / grid.L;
          for (int a = 0; a < n; ++a) {
            exact.component(a)[j] = -(2.0 * pi * k[a] / grid.L) * std::pow(wnorm, s - 1.0) * std::sin(phase);
          }
        }
        worst = std::max(worst, rel_max(spectral::fractional_gradient(u, s), exact));
      }
    }
  }
  out.checks.push_back(le("max_rel_err", worst, 1e-12));
  return out;
}

// 4. ||D^s u - Du||_2 / ||Du||_2 decreasing in s, small at s = 0.99.
Outcome localization(std::uint64_t) {
  Outcome out;
  const SweepTable t = experiments::localize(GaussianSpec{1.0, 1.0, {}}, make_grid(2, 16.0, 256), 2.0,
                                             {0.5, 0.7, 0.9, 0.99});
  bool decreasing = true;
  for (std::size_t i = 1; i < t.size(); ++i) decreasing = decreasing && t.number(i, "err_rel") < t.number(i - 1, "err_rel");
  out.checks.push_back(holds("strictly_decreasing", decreasing));
  out.checks.push_back(le("err_rel(0.99)", t.number(t.size() - 1, "err_rel"), 0.05));
  out.artifacts.push_back(t);
  return out;
}

// 5. <D^s u, phi> + <u, div^s phi> = 0 on both paths.
Outcome duality(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Grid grid = make_grid(1, 16.0, 128);
  double spectral_res = 0.0;
  double direct_res = 0.0;
  for (double s : {0.3, 0.7}) {
    const ScalarField u = white_noise<0>(grid, rng);
    const VectorField phi = white_noise<1>(grid, rng);
    const double scale = lp_norm(u, 2.0) * lp_norm(phi, 2.0);
    spectral_res = std::max(spectral_res, std::abs(pairing(spectral::fractional_gradient(u, s), phi) +
                                                   pairing(u, spectral::fractional_divergence(phi, s))) /
                                              scale);
    direct_res = std::max(direct_res, std::abs(pairing(quadrature::fractional_gradient_direct(u, s), phi) +
                                               pairing(u, quadrature::fractional_divergence_direct(phi, s))) /
                                          scale);
  }
  return {{le("spectral", spectral_res, 1e-11), le("direct", direct_res, 1e-10)}, {}};
}

ScalarField trace(const MatrixField& F) {
  ScalarField t(F.grid());
  for (int a = 0; a < F.grid().n; ++a) {
    const auto d = F.entry(a, a);
    auto v = t.component(0);
    for (std::size_t j = 0; j < v.size(); ++j) v[j] += d[j];
  }
  return t;
}

// 6. tr D^s phi = div^s phi.
Outcome trace_identity(std::uint64_t seed) {
  std::mt19937_64 rng(seed + 1);
  const double s = 0.6;
  const Grid gs = make_grid(2, 16.0, 64);
  const VectorField phi_s = white_noise<1>(gs, rng);
  const double spec = rel_max(trace(spectral::fractional_gradient(phi_s, s)), spectral::fractional_divergence(phi_s, s));
  const Grid gd = make_grid(2, 16.0, 32);
  const VectorField phi_d = white_noise<1>(gd, rng);
  const double dir = rel_max(trace(quadrature::fractional_gradient_direct(phi_d, s)),
                             quadrature::fractional_divergence_direct(phi_d, s));
  return {{le("spectral", spec, 1e-12), le("direct", dir, 1e-10)}, {}};
}

// 7. Reconstruction of u - mean(u) from D^s u.
Outcome ftc(std::uint64_t) {
  const Grid grid = make_grid(1, 16.0, 128);
  const double s = 0.5;
  ScalarField u = sample(BumpSpec{4.0, 1.0, {}}, grid);
  const VectorField V = spectral::fractional_gradient(u, s);
  const double m = mean(u);
  for (double& x : u.values()) x -= m;
  return {{le("spectral", rel_l2(spectral::ftc_reconstruct(V, s), u), 1e-10),
           le("direct", rel_l2(quadrature::ftc_reconstruct_direct(V, s), u), 0.05)},
          {}};
}

// 8. I_{s - sbar} D^s u = D^sbar u.
Outcome semigroup(std::uint64_t) {
  Outcome out;
  const Grid grid = make_grid(2, 16.0, 128);
  const ScalarField u = sample(GaussianSpec{1.0, 1.0, {}}, grid);
  for (auto [s, sb] : {std::pair{0.8, 0.5}, std::pair{0.9, 0.3}}) {
    const VectorField composed = spectral::riesz_potential(spectral::fractional_gradient(u, s), s - sb);
    std::ostringstream name;
    name << "(" << s << "," << sb << ")";
    out.checks.push_back(le(name.str(), rel_l2(composed, spectral::fractional_gradient(u, sb)), 1e-12));
  }
  spectral::semigroup_compose(u, 0.8, 0.5);
  return out;
}

// 9. Direct versus spectral D^s under refinement.
Outcome cross_path(std::uint64_t) {
  std::vector<double> err;
  SweepTable t({"N", "err_rel"});
  for (int N : {64, 128, 256}) {
    const Grid grid = make_grid(1, 16.0, N);
    const ScalarField u = sample(BumpSpec{4.0, 1.0, {}}, grid);
    err.push_back(rel_l2(quadrature::fractional_gradient_direct(u, 0.5), spectral::fractional_gradient(u, 0.5)));
    t.add_row({std::int64_t{N}, err.back()});
  }
  return {{le("err(N=128)", err[1], 0.05), ge("ratio(64/128)", err[0] / err[1], 1.5),
           ge("ratio(128/256)", err[1] / err[2], 1.5)},
          {t}};
}

// 10. K_phi(I) = D^s phi on the direct path.
Outcome k_phi_identity(std::uint64_t) {
  const Grid grid = make_grid(2, 16.0, 64);
  const ScalarField phi = sample(BumpSpec{4.0, 1.0, {}}, grid);
  MatrixField I(grid);
  for (int a = 0; a < grid.n; ++a) std::fill(I.entry(a, a).begin(), I.entry(a, a).end(), 1.0);
  const double s = 0.7;
  return {{le("rel_max", rel_max(quadrature::k_phi(phi, I, s), quadrature::fractional_gradient_direct(phi, s)), 1e-10)},
          {}};
}

// 11. Determinant integration by parts.
Outcome det_ibp(std::uint64_t) {
  const Grid grid = make_grid(2, 16.0, 96);
  const auto setup = experiments::default_minors_setup(2);
  const auto idx = minors::make_minor_index(2, {0, 1}, {0, 1});
  const auto r = minors::det_ibp_residual(sample(setup.u, grid), 0.7, idx, sample(setup.phi, grid));
  SweepTable t({"lhs", "rhs", "residual"});
  t.add_row({r.lhs, r.rhs, r.residual});
  return {{le("residual", r.residual, 0.05)}, {t}};
}

// 12. det and cof pairings against three bumps near their Du limits.
Outcome weak_continuity(std::uint64_t) {
  const SweepTable t = experiments::minors(make_grid(2, 16.0, 128), {0.99}, false);
  double worst = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t.text(i, "s") == "local") continue;
    worst = std::max(worst, t.number(i, "rel_err"));
  }
  return {{le("max_rel_err", worst, 0.03)}, {t}};
}

// 13. First variation against central differences.
Outcome first_variation_fd(std::uint64_t seed) {
  Outcome out;
  std::mt19937_64 rng(seed + 2);
  const Grid grid = make_grid(2, 16.0, 32);
  const auto setup = experiments::default_minors_setup(2);
  const VectorField g = sample(setup.u, grid);
  VectorField u = g;
  const ScalarField bump = sample(BumpSpec{3.0, 1.0, {}}, grid);
  for (int c = 0; c < 2; ++c) {
    for (std::size_t j = 0; j < grid.points(); ++j) u.component(c)[j] += 0.3 * (1 - c) * bump.component(0)[j];
  }
  const auto omega = analysis::DomainMask::ball(grid, 4.0);

  std::vector<variational::EnergyDensity> densities = {variational::EnergyDensity::quadratic(1.0, 1.0),
                                                       variational::EnergyDensity::power(3.0, 1.0, 0.5),
                                                       variational::EnergyDensity::polyconvex(1.0, 0.2)};
  densities[0].with_target(0.5 * g);
  densities[2].with_lower_order(bump);

  const double t = 1e-5;
  for (const auto& W : densities) {
    for (std::optional<double> s : {std::optional<double>(0.7), std::optional<double>()}) {
      const auto prob = variational::make_problem(W, omega, g, s);
      const VectorField var = variational::first_variation(prob, u);
      double worst = 0.0;
      for (int k = 0; k < 20; ++k) {
        VectorField v = white_noise<1>(grid, rng);
        for (std::size_t j = 0; j < grid.points(); ++j) {
          if (omega.contains(j)) continue;
          for (int c = 0; c < 2; ++c) v.component(c)[j] = 0.0;
        }
        VectorField up = u, um = u;
        up.axpy(t, v);
        um.axpy(-t, v);
        const double fd = (variational::energy(prob, up) - variational::energy(prob, um)) / (2.0 * t);
        const double an = pairing(var, v);
        worst = std::max(worst, std::abs(fd - an) / std::abs(an));
      }
      out.checks.push_back(le(W.name() + (s ? "@0.7" : "@local"), worst, 1e-5));
    }
  }
  return out;
}

// 14. Convex gamma sweep and the closed-form unconstrained solve.
Outcome gamma_convex(std::uint64_t) {
  Outcome out;
  const Grid grid = make_grid(1, 16.0, 256);
  const ScalarField fs = sample(BumpSpec{2.0, 1.0, {}}, grid);
  const VectorField f(grid, {fs.values().begin(), fs.values().end()});
  auto W = variational::EnergyDensity::quadratic(1.0, 1.0);
  W.with_target(f);

  const auto prob = variational::make_problem(W, analysis::DomainMask::ball(grid, 4.0), VectorField(grid), std::nullopt);
  variational::GammaOptions opts;
  opts.tol = 1e-7;
  const auto res = variational::gamma_sweep(prob, {0.7, 0.9, 0.99}, opts);
  const SweepTable& t = res.table;
  const double E_local = t.number(0, "energy");
  bool all_converged = true;
  for (std::size_t i = 0; i < t.size(); ++i) all_converged = all_converged && t.number(i, "converged") == 1.0;
  std::vector<double> gap;
  for (std::size_t i = 1; i < t.size(); ++i) gap.push_back(std::abs(t.number(i, "energy") - E_local));
  out.checks.push_back(holds("converged", all_converged));
  out.checks.push_back(le("rel_gap(0.99)", gap.back() / E_local, 0.02));
  out.checks.push_back(holds("monotone_trend", gap[0] > gap[1] && gap[1] > gap[2]));

  // Unconstrained: u = f / (1 + |2 pi xi|^{2s}) mode by mode.
  const double s = 0.7;
  const auto free_prob = variational::make_problem(W, analysis::DomainMask::full(grid), VectorField(grid), s);
  const auto rep = variational::minimize(free_prob, VectorField(grid), 1e-10, 2000);
  Spectrum F = forward_transform(fs);
  auto coeffs = F.coefficients();
  for (int j = 0; j < grid.N; ++j) {
    const double w = std::abs(2.0 * pi * Spectrum::frequency(j, grid.N) / grid.L);
    coeffs[j] /= 1.0 + std::pow(w, 2.0 * s);
  }
  const ScalarField exact = inverse_transform(F);
  out.checks.push_back(
      le("oracle", rel_l2(rep.minimizer, VectorField(grid, {exact.values().begin(), exact.values().end()})), 1e-6));
  out.artifacts.push_back(t);
  return out;
}

// 15. I_s at the local polyconvex minimizer.
Outcome gamma_recovery(std::uint64_t) {
  const Grid grid = make_grid(2, 24.0, 64);
  const AffineCutoffSpec g{{1.0, 0.5, -0.3, 0.8}, {0.2, -0.1}, BumpSpec{9.0, 1.0, {}}};
  const auto prob = variational::make_problem(variational::EnergyDensity::polyconvex(), analysis::DomainMask::ball(grid, 6.0),
                                              sample(g, grid), std::nullopt);
  const auto res = variational::gamma_sweep(prob, {0.99});
  return {{holds("local_converged", res.table.number(0, "converged") == 1.0),
           le("rel_gap(0.99)", res.recovery.number(0, "rel_gap"), 0.02)},
          {res.table, res.recovery}};
}

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> list = {
      {1, "constants_limit", 1.0, constants_limit},
      {2, "constants_identities", 1.0, constants_identities},
      {3, "multiplier_exactness", 5.0, multiplier_exactness},
      {4, "localization", 30.0, localization},
      {5, "duality", 30.0, duality},
      {6, "trace_identity", 30.0, trace_identity},
      {7, "ftc", 60.0, ftc},
      {8, "semigroup", 5.0, semigroup},
      {9, "cross_path", 120.0, cross_path},
      {10, "k_phi_identity", 120.0, k_phi_identity},
      {11, "det_ibp", 300.0, det_ibp},
      {12, "weak_continuity", 120.0, weak_continuity},
      {13, "first_variation_fd", 60.0, first_variation_fd},
      {14, "gamma_convex", 120.0, gamma_convex},
      {15, "gamma_recovery", 300.0, gamma_recovery},
  };
  return list;
}

std::string artifacts_csv(const std::vector<CriterionResult>& results, const std::vector<Outcome>& outcomes) {
  std::string all = results_table(results).to_csv();
  for (const auto& o : outcomes) {
    for (const auto& t : o.artifacts) all += t.to_csv();
  }
  return all;
}

CriterionResult evaluate(const Criterion& c, std::uint64_t seed, Outcome* keep) {
  using clock = std::chrono::steady_clock;
  CriterionResult r;
  r.id = c.id;
  r.name = c.name;
  r.time_limit = c.time_limit;
  const auto t0 = clock::now();
  Outcome o;
  try {
    o = c.body(seed);
  } catch (const std::exception& e) {
    r.seconds = std::chrono::duration<double>(clock::now() - t0).count();
    r.value = kInfinity;
    r.detail = std::string("error: ") + e.what();
    return r;
  }
  r.seconds = std::chrono::duration<double>(clock::now() - t0).count();

  bool ok = true;
  const Check* binding = nullptr;
  std::ostringstream detail;
  for (const auto& chk : o.checks) {
    ok = ok && chk.ok();
    if (!binding || (!chk.ok() && binding->ok()) || (chk.ok() == binding->ok() && chk.load() > binding->load())) {
      binding = &chk;
    }
    if (detail.tellp() > 0) detail << "; ";
    if (chk.boolean) {
      detail << chk.label << "=" << (chk.ok() ? "yes" : "no");
    } else {
      detail << chk.label << "=" << format_number(chk.value) << (chk.at_least ? " >= " : " <= ")
             << format_number(chk.bound);
    }
  }
  if (binding) {
    r.value = binding->value;
    r.threshold = binding->bound;
  }
  r.passed = ok && !o.checks.empty() && r.seconds < r.time_limit;
  if (r.seconds >= r.time_limit) detail << "; over time limit";
  r.detail = detail.str();
  if (keep) *keep = std::move(o);
  return r;
}

// 16. Two runs of 1-15 with the same seed give byte-identical CSV.
CriterionResult determinism(std::uint64_t seed) {
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  std::string csv[2];
  bool inner_ok = true;
  for (auto& text : csv) {
    std::vector<CriterionResult> results;
    std::vector<Outcome> outcomes;
    for (const auto& c : criteria()) {
      Outcome o;
      results.push_back(evaluate(c, seed, &o));
      outcomes.push_back(std::move(o));
    }
    text = artifacts_csv(results, outcomes);
    for (const auto& r : results) inner_ok = inner_ok && r.detail.rfind("error:", 0) != 0;
  }
  CriterionResult r;
  r.id = 16;
  r.name = "determinism";
  r.time_limit = 1200.0;
  r.seconds = std::chrono::duration<double>(clock::now() - t0).count();
  const bool identical = csv[0] == csv[1];
  r.value = identical ? 0.0 : 1.0;
  r.threshold = 0.0;
  r.passed = identical && inner_ok && r.seconds < r.time_limit;
  std::ostringstream detail;
  detail << "csv_bytes=" << csv[0].size() << (identical ? " identical" : " differ");
  if (!inner_ok) detail << "; a criterion raised an error";
  r.detail = detail.str();
  return r;
}

}  // namespace

std::vector<CriterionResult> run(const Options& options) {
  auto wanted = [&](int id) {
    return options.only.empty() || std::find(options.only.begin(), options.only.end(), id) != options.only.end();
  };
  for (int id : options.only) {
    if (id < 1 || id > kCriterionCount) throw RangeError("acceptance criteria are numbered 1 to 16");
  }
  std::vector<CriterionResult> results;
  for (const auto& c : criteria()) {
    if (!wanted(c.id)) continue;
    results.push_back(evaluate(c, options.seed, nullptr));
    if (options.on_result) options.on_result(results.back());
  }
  if (wanted(16)) {
    results.push_back(determinism(options.seed));
    if (options.on_result) options.on_result(results.back());
  }
  return results;
}

SweepTable results_table(const std::vector<CriterionResult>& results) {
  SweepTable t({"criterion", "name", "value", "threshold", "pass"});
  for (const auto& r : results) {
    t.add_row({std::int64_t{r.id}, r.name, r.value, r.threshold, std::int64_t{r.passed}});
  }
  return t;
}

std::string format_line(const CriterionResult& r) {
  std::ostringstream os;
  os << (r.passed ? "PASS " : "FAIL ") << (r.id < 10 ? " " : "") << r.id << " " << r.name << "  value="
     << format_number(r.value) << " threshold=" << format_number(r.threshold) << "  [" << r.detail << "]  ("
     << std::fixed;
  os.precision(2);
  os << r.seconds << " s, limit " << r.time_limit << " s)";
  return os.str();
}

}  // namespace fracgrad::acceptance
