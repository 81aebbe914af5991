#pragma once

#include <string>
#include <vector>

#include "fracgrad/config.hpp"
#include "fracgrad/grid.hpp"
#include "fracgrad/sweep_table.hpp"
#include "fracgrad/test_functions.hpp"
#include "fracgrad/variational.hpp"

// Table-producing drivers behind the CLI subcommands.
namespace fracgrad::experiments {

/// count evenly spaced values from start to stop inclusive ("start:stop:count").
std::vector<double> parse_range(const std::string& text);
/// Comma-separated numbers.
std::vector<double> parse_list(const std::string& text);

/// Columns n, s, c_ns, c_ns_over_1ms, gamma_1ms. gamma_1ms is gamma(1 - s),
/// written as nan where 1 - s falls outside (0, n).
SweepTable constants_table(int n, const std::vector<double>& s_grid);

/// Columns s, err_rel, norm_Dsu: relative L^p distance of the spectral D^s u
/// to the analytic gradient, and ||D^s u||_p.
SweepTable localize(const ScalarSpec& spec, const Grid& grid, double p, const std::vector<double>& s_grid);

/// Columns path, err_rel, seconds, rows spectral / direct / direct_plain.
/// err_rel is the relative L^2 distance to the spectral result. The timing
/// column is the only nondeterministic output of the tool.
SweepTable crosscheck(const ScalarSpec& spec, const Grid& grid, double s);

SweepTable inequalities(const config::InequalityConfig& cfg);

/// Built-in data of the minors battery: u = bump * (A x + b), three test bumps
/// of different centres and widths, and the cutoff used in the determinant
/// integration by parts.
struct MinorsSetup {
  AffineCutoffSpec u;
  std::vector<BumpSpec> tests;
  BumpSpec phi;
};
MinorsSetup default_minors_setup(int n);

/// Weak pairing rows followed, when with_ibp is set, by one row per s with
/// quantity "ibp" (value = lhs, limit = rhs, rel_err = residual) for the full
/// n x n determinant.
SweepTable minors(const Grid& grid, const std::vector<double>& s_grid, bool with_ibp);

variational::GammaResult gamma(const config::GammaConfig& cfg);

}  // namespace fracgrad::experiments
