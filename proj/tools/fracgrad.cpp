// fracgrad: command line front end for the sweeps and the acceptance suite.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fracgrad/acceptance.hpp"
#include "fracgrad/config.hpp"
#include "fracgrad/experiments.hpp"
#include "fracgrad/parallel.hpp"
#include "fracgrad/sweep_table.hpp"

namespace fs = std::filesystem;
using fracgrad::SweepTable;
using Json = nlohmann::json;

namespace {

enum ExitCode { kOk = 0, kFailed = 1, kInvalidArgs = 2, kConfigError = 3, kExperimentError = 4 };

struct Globals {
  int threads = 0;
  std::uint64_t seed = 20240611;
  std::string out;
};

struct Output {
  std::string subcommand;
  Json config;
  std::vector<std::pair<std::string, const SweepTable*>> extra_tables;  // suffix, table
  std::vector<std::string> extra_files;
};

fs::path sibling(const fs::path& out, const std::string& suffix) {
  fs::path p = out;
  p.replace_extension();
  return p.string() + suffix;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw fracgrad::RangeError("cannot write " + path.string());
  f << text;
}

void stamp(SweepTable& table, const Globals& g, const Output& o) {
  Json echo = {{"subcommand", o.subcommand}, {"config", o.config}, {"seed", g.seed}};
  table.add_provenance("tool", "fracgrad " FRACGRAD_VERSION);
  table.add_provenance("subcommand", o.subcommand);
  table.add_provenance("config_hash", fracgrad::config::config_hash(echo));
  table.add_provenance("seed", std::to_string(g.seed));
}

// Writes the CSV (and any extra tables) plus the JSON sidecar when --out is set,
// otherwise only the main table to stdout.
void emit(SweepTable table, const Globals& g, Output o) {
  stamp(table, g, o);
  if (g.out.empty()) {
    std::cout << table.to_csv();
    return;
  }
  const fs::path out = g.out;
  write_file(out, table.to_csv());
  Json outputs = Json::array({out.string()});
  for (auto& [suffix, extra] : o.extra_tables) {
    SweepTable t = *extra;
    stamp(t, g, o);
    const fs::path p = sibling(out, suffix);
    write_file(p, t.to_csv());
    outputs.push_back(p.string());
  }
  for (const auto& f : o.extra_files) outputs.push_back(f);
  const Json sidecar = {{"tool", "fracgrad"},
                        {"version", FRACGRAD_VERSION},
                        {"subcommand", o.subcommand},
                        {"config", o.config},
                        {"config_hash", fracgrad::config::config_hash(
                                            Json{{"subcommand", o.subcommand}, {"config", o.config}, {"seed", g.seed}})},
                        {"seed", g.seed},
                        {"threads", fracgrad::thread_count()},
                        {"outputs", outputs}};
  write_file(sibling(out, ".json"), sidecar.dump(2) + "\n");
}

fracgrad::ScalarSpec named_spec(const std::string& name, double sigma, double radius, std::vector<int> k, int n) {
  if (name == "gaussian") return fracgrad::GaussianSpec{sigma, 1.0, {}};
  if (name == "bump") return fracgrad::BumpSpec{radius, 1.0, {}};
  if (name == "mode") {
    if (k.empty()) {
      k.assign(n, 0);
      k[0] = 1;
    }
    return fracgrad::ModeSpec{k, 1.0};
  }
  throw fracgrad::RangeError("unknown spec '" + name + "' (gaussian, bump, mode)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Riesz fractional gradient toolkit: sweeps, cross-checks and acceptance suite"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--threads", g.threads, "worker threads (0 = hardware parallelism)")->check(CLI::NonNegativeNumber);
  app.add_option("--seed", g.seed, "seed for randomized probes");
  app.add_option("--out", g.out, "CSV output path; also writes <stem>.json");

  int n = 2, N = 128;
  double L = 16.0, p = 2.0, sigma = 1.0, radius = 4.0;
  std::string s_text, range_text, spec_name = "gaussian", config_path, only_text;
  std::vector<int> k;
  bool no_ibp = false;

  auto* constants = app.add_subcommand("constants", "c_{n,s}, c_{n,s}/(1-s) and gamma(1-s) over an s grid");
  constants->add_option("--n", n, "dimension")->required();
  constants->add_option("--s-grid", range_text, "start:stop:count")->required();

  auto add_spec = [&](CLI::App* sub, const std::string& default_spec) {
    spec_name = default_spec;
    sub->add_option("--spec", spec_name, "gaussian, bump or mode")->capture_default_str();
    sub->add_option("--sigma", sigma, "Gaussian width")->capture_default_str();
    sub->add_option("--radius", radius, "bump radius")->capture_default_str();
    sub->add_option("--k", k, "mode frequency vector");
    sub->add_option("--n", n, "dimension")->capture_default_str();
    sub->add_option("--N", N, "samples per axis")->capture_default_str();
    sub->add_option("--L", L, "box side")->capture_default_str();
  };

  auto* localize = app.add_subcommand("localize", "distance of D^s u to Du as s grows");
  add_spec(localize, "gaussian");
  localize->add_option("--p", p, "exponent")->capture_default_str();
  localize->add_option("--s", s_text, "comma-separated s values")->required();

  auto* crosscheck = app.add_subcommand("crosscheck", "direct quadrature against the spectral path");
  add_spec(crosscheck, "bump");
  crosscheck->add_option("--s", s_text, "fractional order")->required();

  auto* inequalities = app.add_subcommand("inequalities", "Poincare / embedding / s-bar ratios from a JSON config");
  inequalities->add_option("--config", config_path, "JSON config")->required();

  auto* minors = app.add_subcommand("minors", "weak continuity of det and cof, determinant integration by parts");
  minors->add_option("--n", n, "dimension")->capture_default_str();
  minors->add_option("--N", N, "samples per axis")->capture_default_str();
  minors->add_option("--L", L, "box side")->capture_default_str();
  minors->add_option("--s", s_text, "comma-separated s values")->required();
  minors->add_flag("--no-ibp", no_ibp, "skip the quadrature-based integration by parts rows");

  auto* gamma = app.add_subcommand("gamma", "minimized energies I_s against the local functional");
  gamma->add_option("--config", config_path, "JSON config")->required();

  auto* selftest = app.add_subcommand("selftest", "run the acceptance suite");
  selftest->add_option("--only", only_text, "comma-separated criterion numbers");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e, std::cerr, std::cerr);
    std::cerr << app.help();
    return kInvalidArgs;
  }

  try {
    fracgrad::set_thread_count(g.threads);
    Output o;
    if (constants->parsed()) {
      o.subcommand = "constants";
      o.config = {{"n", n}, {"s_grid", range_text}};
      emit(fracgrad::experiments::constants_table(n, fracgrad::experiments::parse_range(range_text)), g, o);
    } else if (localize->parsed()) {
      o.subcommand = "localize";
      o.config = {{"spec", spec_name}, {"sigma", sigma}, {"radius", radius}, {"k", k}, {"n", n},
                  {"N", N},           {"L", L},         {"p", p},           {"s", s_text}};
      emit(fracgrad::experiments::localize(named_spec(spec_name, sigma, radius, k, n), fracgrad::make_grid(n, L, N), p,
                                           fracgrad::experiments::parse_list(s_text)),
           g, o);
    } else if (crosscheck->parsed()) {
      o.subcommand = "crosscheck";
      o.config = {{"spec", spec_name}, {"sigma", sigma}, {"radius", radius}, {"k", k},
                  {"n", n},           {"N", N},         {"L", L},           {"s", s_text}};
      const auto s = fracgrad::experiments::parse_list(s_text);
      if (s.size() != 1) throw fracgrad::RangeError("crosscheck takes a single s");
      emit(fracgrad::experiments::crosscheck(named_spec(spec_name, sigma, radius, k, n), fracgrad::make_grid(n, L, N),
                                             s[0]),
           g, o);
    } else if (inequalities->parsed()) {
      o.subcommand = "inequalities";
      o.config = fracgrad::config::load_json(config_path);
      emit(fracgrad::experiments::inequalities(fracgrad::config::parse_inequality_config(o.config)), g, o);
    } else if (minors->parsed()) {
      o.subcommand = "minors";
      o.config = {{"n", n}, {"N", N}, {"L", L}, {"s", s_text}, {"ibp", !no_ibp}};
      emit(fracgrad::experiments::minors(fracgrad::make_grid(n, L, N), fracgrad::experiments::parse_list(s_text),
                                         !no_ibp),
           g, o);
    } else if (gamma->parsed()) {
      o.subcommand = "gamma";
      o.config = fracgrad::config::load_json(config_path);
      const auto cfg = fracgrad::config::parse_gamma_config(o.config);
      const auto result = fracgrad::experiments::gamma(cfg);
      if (!g.out.empty()) {
        const fs::path local = sibling(g.out, ".u_local.bin");
        fracgrad::save_field(local, result.local_minimizer);
        o.extra_files.push_back(local.string());
        std::size_t i = 0;
        for (const auto& s : cfg.s_grid) {
          if (!s) continue;
          const fs::path path = sibling(g.out, ".u_s" + fracgrad::format_number(*s) + ".bin");
          fracgrad::save_field(path, result.minimizers[i++]);
          o.extra_files.push_back(path.string());
        }
      }
      o.extra_tables.push_back({".recovery.csv", &result.recovery});
      emit(result.table, g, o);
    } else if (selftest->parsed()) {
      o.subcommand = "selftest";
      fracgrad::acceptance::Options opts;
      opts.seed = g.seed;
      if (!only_text.empty()) {
        for (double id : fracgrad::experiments::parse_list(only_text)) opts.only.push_back(static_cast<int>(id));
      }
      opts.on_result = [](const fracgrad::acceptance::CriterionResult& r) {
        std::cerr << fracgrad::acceptance::format_line(r) << std::endl;
      };
      o.config = {{"only", opts.only}};
      const auto results = fracgrad::acceptance::run(opts);
      emit(fracgrad::acceptance::results_table(results), g, o);
      for (const auto& r : results) {
        if (!r.passed) return kFailed;
      }
    }
  } catch (const fracgrad::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const fracgrad::RangeError& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return kInvalidArgs;
  } catch (const std::exception& e) {
    std::cerr << "experiment failed: " << e.what() << "\n";
    return kExperimentError;
  }
  return kOk;
}
