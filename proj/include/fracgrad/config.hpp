#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fracgrad/analysis.hpp"
#include "fracgrad/grid.hpp"
#include "fracgrad/test_functions.hpp"
#include "fracgrad/variational.hpp"

// JSON configuration documents for the sweep subcommands. Structural
// problems (missing file, bad JSON, wrong types, unknown kinds) raise
// ConfigError; values outside a documented range raise RangeError from the
// library when the objects are built.
namespace fracgrad::config {

using Json = nlohmann::json;

Json load_json(const std::filesystem::path& path);
Json parse_json(const std::string& text);

/// {"n": 2, "L": 16.0, "N": 128}; absent keys fall back to `defaults`.
Grid parse_grid(const Json& j, const Grid& defaults);

/// {"type": "gaussian", "sigma": 1.0, "amplitude": 1.0, "center": [..]},
/// {"type": "bump", "radius": 4.0, ...} or {"type": "mode", "k": [1, 0]}.
ScalarSpec parse_scalar_spec(const Json& j);

/// {"type": "affine_bump", "A": [row-major], "b": [...], "radius": r, "center": [...]}.
AffineCutoffSpec parse_affine_spec(const Json& j);

/// Vector field from {"type": "zero"}, an affine_bump spec, or (n = 1 only)
/// any scalar spec taken as the single component.
VectorField parse_vector_field(const Json& j, const Grid& grid);

/// {"type": "ball", "r": 4.0, "center": [...]}, {"type": "box", "lower": [...],
/// "upper": [...]} or {"type": "full"}.
analysis::DomainMask parse_domain(const Json& j, const Grid& grid);

/// {"kind": "quadratic" | "power" | "polyconvex", "p": .., "c": .., "b": ..}.
variational::EnergyDensity parse_density(const Json& j);

/// Numbers in (0, 1) and the token "local" (returned as nullopt).
std::vector<std::optional<double>> parse_s_grid(const Json& j);

struct InequalityConfig {
  Grid grid;
  std::vector<ScalarSpec> specs;
  std::vector<double> s_grid;
  double p = 2.0;
  Json omega;
  double s_bar = 0.3;
};

/// {"grid": {...}, "specs": [...], "s_grid": [...], "p": 2.0,
///  "omega": {"type": "ball", "r": 4.0}, "s_bar": 0.3}
InequalityConfig parse_inequality_config(const Json& j);

struct GammaConfig {
  Grid grid;
  Json W;
  Json omega;
  Json g;
  Json f;  ///< null when absent
  std::vector<std::optional<double>> s_grid;
  variational::GammaOptions options;
};

/// {"grid": {...}, "W": {...}, "omega": {...}, "g": {...}, "f": {...},
///  "s_grid": [...], "tol": 1e-6, "max_iter": 2000, "continuation": true,
///  "preconditioner": "spectral"}
GammaConfig parse_gamma_config(const Json& j);

/// The problem template of a gamma config (order set to local).
variational::VariationalProblem build_problem(const GammaConfig& cfg);

/// Digest of the compact serialization (keys sorted by the JSON library).
std::string config_hash(const Json& j);

}  // namespace fracgrad::config
