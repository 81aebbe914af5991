#include "fracgrad/config.hpp"

#include <fstream>
#include <sstream>

#include "fracgrad/sweep_table.hpp"

namespace fracgrad::config {

namespace {

const Json& require(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ConfigError(std::string("missing key '") + key + "'");
  return j.at(key);
}

double number(const Json& j, const char* key) {
  const Json& v = require(j, key);
  if (!v.is_number()) throw ConfigError(std::string("'") + key + "' must be a number");
  return v.get<double>();
}

double number_or(const Json& j, const char* key, double fallback) {
  return j.is_object() && j.contains(key) ? number(j, key) : fallback;
}

int integer_or(const Json& j, const char* key, int fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  const Json& v = j.at(key);
  if (!v.is_number_integer()) throw ConfigError(std::string("'") + key + "' must be an integer");
  return v.get<int>();
}

bool boolean_or(const Json& j, const char* key, bool fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  const Json& v = j.at(key);
  if (!v.is_boolean()) throw ConfigError(std::string("'") + key + "' must be true or false");
  return v.get<bool>();
}

std::string text(const Json& j, const char* key) {
  const Json& v = require(j, key);
  if (!v.is_string()) throw ConfigError(std::string("'") + key + "' must be a string");
  return v.get<std::string>();
}

std::vector<double> numbers(const Json& v, const char* what) {
  if (!v.is_array()) throw ConfigError(std::string(what) + " must be an array of numbers");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) throw ConfigError(std::string(what) + " must be an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

std::vector<double> numbers_or_empty(const Json& j, const char* key) {
  return j.is_object() && j.contains(key) ? numbers(j.at(key), key) : std::vector<double>{};
}

BumpSpec parse_bump(const Json& j) {
  return BumpSpec{number(j, "radius"), number_or(j, "amplitude", 1.0), numbers_or_empty(j, "center")};
}

}  // namespace

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
}

Json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return parse_json(os.str());
}

Grid parse_grid(const Json& j, const Grid& defaults) {
  if (!j.is_null() && !j.is_object()) throw ConfigError("'grid' must be an object");
  return make_grid(integer_or(j, "n", defaults.n), number_or(j, "L", defaults.L), integer_or(j, "N", defaults.N));
}

ScalarSpec parse_scalar_spec(const Json& j) {
  const std::string type = text(j, "type");
  if (type == "gaussian") {
    return GaussianSpec{number(j, "sigma"), number_or(j, "amplitude", 1.0), numbers_or_empty(j, "center")};
  }
  if (type == "bump") return parse_bump(j);
  if (type == "mode") {
    const Json& k = require(j, "k");
    if (!k.is_array()) throw ConfigError("'k' must be an array of integers");
    ModeSpec spec;
    for (const auto& x : k) {
      if (!x.is_number_integer()) throw ConfigError("'k' must be an array of integers");
      spec.k.push_back(x.get<int>());
    }
    spec.amplitude = number_or(j, "amplitude", 1.0);
    return spec;
  }
  throw ConfigError("unknown scalar spec type '" + type + "'");
}

AffineCutoffSpec parse_affine_spec(const Json& j) {
  if (text(j, "type") != "affine_bump") throw ConfigError("expected an affine_bump spec");
  AffineCutoffSpec spec;
  spec.A = numbers(require(j, "A"), "A");
  spec.b = numbers_or_empty(j, "b");
  spec.cutoff = parse_bump(j);
  return spec;
}

VectorField parse_vector_field(const Json& j, const Grid& grid) {
  const std::string type = text(j, "type");
  if (type == "zero") return VectorField(grid);
  if (type == "affine_bump") return sample(parse_affine_spec(j), grid);
  if (grid.n != 1) throw ConfigError("scalar spec '" + type + "' can only define a field when n = 1");
  const ScalarField f = sample(parse_scalar_spec(j), grid);
  return VectorField(grid, {f.values().begin(), f.values().end()});
}

analysis::DomainMask parse_domain(const Json& j, const Grid& grid) {
  const std::string type = text(j, "type");
  if (type == "ball") return analysis::DomainMask::ball(grid, number(j, "r"), numbers_or_empty(j, "center"));
  if (type == "box") {
    return analysis::DomainMask::box(grid, numbers(require(j, "lower"), "lower"), numbers(require(j, "upper"), "upper"));
  }
  if (type == "full") return analysis::DomainMask::full(grid);
  throw ConfigError("unknown domain type '" + type + "'");
}

variational::EnergyDensity parse_density(const Json& j) {
  const std::string kind = text(j, "kind");
  const double c = number_or(j, "c", 1.0);
  if (kind == "quadratic") return variational::EnergyDensity::quadratic(c, number_or(j, "b", 1.0));
  if (kind == "power") return variational::EnergyDensity::power(number(j, "p"), c, number_or(j, "b", 0.0));
  if (kind == "polyconvex") return variational::EnergyDensity::polyconvex(c, number_or(j, "b", 0.0));
  throw ConfigError("unknown energy density kind '" + kind + "'");
}

std::vector<std::optional<double>> parse_s_grid(const Json& j) {
  if (!j.is_array()) throw ConfigError("'s_grid' must be an array");
  std::vector<std::optional<double>> out;
  for (const auto& x : j) {
    if (x.is_string() && x.get<std::string>() == "local") {
      out.push_back(std::nullopt);
    } else if (x.is_number()) {
      const double s = x.get<double>();
      if (!(s > 0.0 && s < 1.0)) throw RangeError("s values must lie in (0, 1)");
      out.push_back(s);
    } else {
      throw ConfigError("'s_grid' entries must be numbers or \"local\"");
    }
  }
  return out;
}

InequalityConfig parse_inequality_config(const Json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  InequalityConfig cfg;
  cfg.grid = parse_grid(j.value("grid", Json()), make_grid(2, 16.0, 128));
  const Json& specs = require(j, "specs");
  if (!specs.is_array()) throw ConfigError("'specs' must be an array");
  for (const auto& s : specs) cfg.specs.push_back(parse_scalar_spec(s));
  for (const auto& s : parse_s_grid(require(j, "s_grid"))) {
    if (!s) throw ConfigError("inequality sweeps take numeric s values only");
    cfg.s_grid.push_back(*s);
  }
  cfg.p = number_or(j, "p", 2.0);
  cfg.omega = require(j, "omega");
  cfg.s_bar = number_or(j, "s_bar", 0.3);
  return cfg;
}

GammaConfig parse_gamma_config(const Json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  GammaConfig cfg;
  cfg.grid = parse_grid(j.value("grid", Json()), make_grid(1, 16.0, 256));
  cfg.W = require(j, "W");
  cfg.omega = require(j, "omega");
  cfg.g = j.value("g", Json{{"type", "zero"}});
  cfg.f = j.value("f", Json());
  cfg.s_grid = parse_s_grid(require(j, "s_grid"));
  cfg.options.tol = number_or(j, "tol", 1e-6);
  cfg.options.max_iter = integer_or(j, "max_iter", 2000);
  cfg.options.continuation = boolean_or(j, "continuation", true);
  const std::string pc = j.value("preconditioner", std::string("spectral"));
  if (pc == "spectral") {
    cfg.options.preconditioner = variational::Preconditioner::spectral;
  } else if (pc == "none") {
    cfg.options.preconditioner = variational::Preconditioner::none;
  } else {
    throw ConfigError("unknown preconditioner '" + pc + "'");
  }
  return cfg;
}

variational::VariationalProblem build_problem(const GammaConfig& cfg) {
  variational::EnergyDensity W = parse_density(cfg.W);
  if (!cfg.f.is_null()) W.with_target(parse_vector_field(cfg.f, cfg.grid));
  return variational::make_problem(std::move(W), parse_domain(cfg.omega, cfg.grid),
                                   parse_vector_field(cfg.g, cfg.grid), std::nullopt);
}

std::string config_hash(const Json& j) { return fnv1a_hex(j.dump()); }

}  // namespace fracgrad::config
