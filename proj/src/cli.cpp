#include "ptscat/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "ptscat/catalog.hpp"
#include "ptscat/errors.hpp"
#include "ptscat/potential_spec.hpp"
#include "ptscat/report_io.hpp"
#include "ptscat/scan.hpp"
#include "ptscat/sweep.hpp"

namespace ptscat {
namespace {

using nlohmann::json;

class UsageError : public Error {
 public:
  using Error::Error;
};

enum class Assumption { automatic, real, pt, general };
enum class ScanWhat { all, singularities, reflectionless };

struct RawOptions {
  std::string potential, builtin, k_range, backend = "auto", format = "csv", out, config, assume = "auto",
                                           what = "all";
  std::vector<std::string> params;
  double k = 0.0, tol = 1e-8, ode_tol = 1e-11, grid_step = 0.0;
};

struct OptionHandles {
  std::map<std::string, CLI::Option*> by_name;
  bool given(const std::string& name) const {
    auto it = by_name.find(name);
    return it != by_name.end() && it->second->count() > 0;
  }
};

void add_common(CLI::App* sub, RawOptions& raw, OptionHandles& h) {
  h.by_name["potential"] = sub->add_option("--potential", raw.potential, "potential description file (JSON)");
  h.by_name["builtin"] = sub->add_option("--builtin", raw.builtin, "named built-in potential");
  h.by_name["param"] = sub->add_option("--param", raw.params, "built-in parameter KEY=VALUE (repeatable)");
  h.by_name["k"] = sub->add_option("--k", raw.k, "single wavenumber");
  h.by_name["k_range"] = sub->add_option("--k-range", raw.k_range, "MIN:MAX:COUNT");
  h.by_name["backend"] = sub->add_option("--backend", raw.backend, "stack, ode or both (default: auto)")
                             ->check(CLI::IsMember({"auto", "stack", "ode", "both"}));
  h.by_name["tol"] = sub->add_option("--tol", raw.tol, "identity tolerance");
  h.by_name["ode_tol"] = sub->add_option("--ode-tol", raw.ode_tol, "local error tolerance of the ode backend");
  h.by_name["format"] = sub->add_option("--format", raw.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  h.by_name["out"] = sub->add_option("--out", raw.out, "output path (default: standard output)");
  h.by_name["config"] = sub->add_option("--config", raw.config, "JSON run configuration");
}

// Values from the config file fill in anything not given on the command line.
bool apply_config(RawOptions& raw, const OptionHandles& h) {
  if (raw.config.empty()) return false;
  std::ifstream in(raw.config);
  if (!in) throw UsageError(fmt::format("cannot open config file '{}'", raw.config));
  json cfg;
  try {
    cfg = json::parse(in);
  } catch (const json::exception& e) {
    throw UsageError(fmt::format("config file '{}': {}", raw.config, e.what()));
  }
  if (!cfg.is_object()) throw UsageError("config file must hold a JSON object");
  auto take_str = [&](const char* key, const char* opt, std::string& dst) {
    if (cfg.contains(key) && !h.given(opt)) dst = cfg.at(key).get<std::string>();
  };
  auto take_num = [&](const char* key, const char* opt, double& dst) {
    if (cfg.contains(key) && !h.given(opt)) dst = cfg.at(key).get<double>();
  };
  try {
    for (const auto& [key, value] : cfg.items()) {
      static const std::vector<std::string> known = {"potential", "builtin", "params", "k", "k_range", "backend",
                                                     "tol", "ode_tol", "format", "out", "grid_step", "assume", "what"};
      if (std::find(known.begin(), known.end(), key) == known.end())
        throw UsageError(fmt::format("config file: unknown key '{}'", key));
    }
    take_str("potential", "potential", raw.potential);
    take_str("builtin", "builtin", raw.builtin);
    if (!h.given("k")) take_str("k_range", "k_range", raw.k_range);
    take_str("backend", "backend", raw.backend);
    take_str("format", "format", raw.format);
    take_str("out", "out", raw.out);
    take_str("assume", "assume", raw.assume);
    take_str("what", "what", raw.what);
    if (!h.given("k_range")) take_num("k", "k", raw.k);
    take_num("tol", "tol", raw.tol);
    take_num("ode_tol", "ode_tol", raw.ode_tol);
    take_num("grid_step", "grid_step", raw.grid_step);
    if (cfg.contains("params") && !h.given("param"))
      for (const auto& [key, value] : cfg.at("params").items())
        raw.params.push_back(fmt::format("{}={}", key, format_double(value.get<double>())));
  } catch (const json::exception& e) {
    throw UsageError(fmt::format("config file: {}", e.what()));
  }
  if (cfg.contains("k") && cfg.contains("k_range")) throw UsageError("config file: give either k or k_range");
  return cfg.contains("k") && !h.given("k") && !h.given("k_range");
}

double parse_number(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw UsageError(fmt::format("{}: '{}' is not a number", what, s));
}

RunConfig resolve(Command cmd, RawOptions& raw, const OptionHandles& h, bool k_from_config) {
  RunConfig cfg;
  cfg.command = cmd;
  cfg.potential_path = raw.potential;
  cfg.builtin = raw.builtin;
  if (cfg.potential_path.empty() == cfg.builtin.empty())
    throw UsageError("give exactly one of --potential FILE or --builtin NAME");
  for (const auto& p : raw.params) {
    const auto eq = p.find('=');
    if (eq == std::string::npos) throw UsageError(fmt::format("--param expects KEY=VALUE, got '{}'", p));
    cfg.builtin_params.emplace_back(p.substr(0, eq), parse_number(p.substr(eq + 1), "--param"));
  }
  if (!cfg.builtin_params.empty() && cfg.builtin.empty()) throw UsageError("--param requires --builtin");

  const bool has_k = h.given("k") || k_from_config;
  const bool has_range = !raw.k_range.empty();
  if (has_k == has_range) throw UsageError("give exactly one of --k V or --k-range MIN:MAX:COUNT");
  if (has_k) {
    cfg.k_min = cfg.k_max = raw.k;
    cfg.k_count = 1;
    if (!(raw.k > 0.0)) throw UsageError("--k must be positive");
  } else {
    std::vector<std::string> parts;
    std::stringstream ss(raw.k_range);
    for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
    if (parts.size() != 3) throw UsageError("--k-range expects MIN:MAX:COUNT");
    cfg.k_min = parse_number(parts[0], "--k-range");
    cfg.k_max = parse_number(parts[1], "--k-range");
    const double count = parse_number(parts[2], "--k-range");
    if (count < 2 || count != std::floor(count)) throw UsageError("--k-range COUNT must be an integer >= 2");
    cfg.k_count = static_cast<std::size_t>(count);
    if (!(cfg.k_min > 0.0) || !(cfg.k_max > cfg.k_min)) throw UsageError("--k-range needs 0 < MIN < MAX");
  }

  if (raw.backend == "auto") cfg.backend = BackendChoice::automatic;
  else if (raw.backend == "stack") cfg.backend = BackendChoice::stack;
  else if (raw.backend == "ode") cfg.backend = BackendChoice::ode;
  else if (raw.backend == "both") cfg.backend = BackendChoice::both;
  else throw UsageError(fmt::format("unknown backend '{}'", raw.backend));

  cfg.tol = raw.tol;
  cfg.ode_tol = raw.ode_tol;
  if (!(cfg.tol > 0.0) || !(cfg.ode_tol > 0.0)) throw UsageError("tolerances must be positive");
  if (raw.grid_step != 0.0) {
    if (!(raw.grid_step > 0.0)) throw UsageError("--grid-step must be positive");
    cfg.grid_step = raw.grid_step;
  }
  if (raw.format == "csv") cfg.format = OutputFormat::csv;
  else if (raw.format == "json") cfg.format = OutputFormat::json;
  else throw UsageError(fmt::format("unknown format '{}'", raw.format));
  cfg.out_path = raw.out;
  return cfg;
}

Potential load(const RunConfig& cfg) {
  if (!cfg.potential_path.empty()) return load_potential_file(cfg.potential_path);
  ParamMap params(cfg.builtin_params.begin(), cfg.builtin_params.end());
  return make_builtin(cfg.builtin, params);
}

Backend single_backend(const RunConfig& cfg, const Potential& p) {
  switch (cfg.backend) {
    case BackendChoice::stack: return Backend::stack;
    case BackendChoice::ode: return Backend::ode;
    default: return preferred_backend(p);
  }
}

void check_backend(Backend b, const Potential& p) {
  if (b == Backend::stack && !p.is_layered())
    throw UnsupportedBackend("the stack backend needs a layer potential; use --backend ode");
}

std::vector<double> k_grid(const RunConfig& cfg) {
  return cfg.k_count == 1 ? std::vector<double>{cfg.k_min} : linspace(cfg.k_min, cfg.k_max, cfg.k_count);
}

void emit(const RunConfig& cfg, const std::string& csv, const json& doc, std::ostream& out) {
  const std::string text = cfg.format == OutputFormat::csv ? csv : doc.dump(2) + "\n";
  if (cfg.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(cfg.out_path);
  if (!f) throw Error(fmt::format("cannot write '{}'", cfg.out_path));
  f << text;
  if (!f) throw Error(fmt::format("write failed for '{}'", cfg.out_path));
}

SymmetryClass assumed_class(const Potential& p, Assumption a) {
  SymmetryClass cls = classify_symmetry(p);
  switch (a) {
    case Assumption::automatic: break;
    case Assumption::real:
      cls.is_real = true;
      cls.is_pt_symmetric = false;
      break;
    case Assumption::pt:
      cls.is_real = false;
      cls.is_pt_symmetric = true;
      break;
    case Assumption::general:
      cls.is_real = cls.is_even = cls.is_pt_symmetric = false;
      break;
  }
  return cls;
}

int run_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const Potential p = load(cfg);
  const auto ks = k_grid(cfg);
  SweepOptions opts;
  opts.ode.tol = cfg.ode_tol;
  opts.backend = cfg.backend == BackendChoice::both ? Backend::stack : single_backend(cfg, p);
  check_backend(opts.backend, p);
  const auto rows = sweep(p, ks, opts);
  if (cfg.backend == BackendChoice::both) {
    SweepOptions ode = opts;
    ode.backend = Backend::ode;
    const auto a = transfer_grid(p, ks, Backend::stack);
    const auto b = transfer_grid(p, ks, Backend::ode, ode.ode);
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i].ok() && b[i].ok())
        worst = std::max(worst, max_abs_diff(a[i].matrix.m, b[i].matrix.m) / std::max(1.0, max_abs(a[i].matrix.m)));
    err << fmt::format("sweep: stack/ode max relative entry difference {:.3e}\n", worst);
  }
  std::size_t failed = 0;
  for (const auto& r : rows)
    if (!r.ok()) {
      ++failed;
      err << fmt::format("sweep: k = {}: {}\n", r.k, r.error);
    }
  emit(cfg, sweep_to_csv(rows), sweep_to_json(rows), out);
  return failed ? kExitRuntime : kExitOk;
}

int run_verify(const RunConfig& cfg, Assumption assume, std::ostream& out, std::ostream& err) {
  const Potential p = load(cfg);
  IdentityOptions opts;
  opts.tol = cfg.tol;
  opts.ode.tol = cfg.ode_tol;
  if (cfg.backend == BackendChoice::both) {
    opts.k_backend = Backend::stack;
    opts.negk_backend = Backend::ode;
  } else {
    opts.k_backend = opts.negk_backend = single_backend(cfg, p);
  }
  check_backend(opts.k_backend, p);
  const SymmetryClass cls = assumed_class(p, assume);
  const auto ks = k_grid(cfg);
  const auto rows = identity_reports(p, ks, opts, cls);

  std::vector<IdentityReport> reports;
  std::size_t backend_failures = 0;
  for (const auto& r : rows) {
    if (r.report) reports.push_back(*r.report);
    else {
      ++backend_failures;
      err << "verify: " << r.error << '\n';
    }
  }
  emit(cfg, reports_to_csv(reports), reports_to_json(reports), out);

  bool any_failure = false;
  for (IdentityId id : kAllIdentities) {
    std::size_t applicable = 0, failing = 0;
    double worst = 0.0;
    for (const auto& r : reports) {
      const auto& e = r.entry(id);
      if (!e.applicable) continue;
      ++applicable;
      worst = std::max(worst, e.residual);
      if (!e.passed(cfg.tol)) ++failing;
    }
    const char* status = applicable == 0 ? "n/a" : (failing ? "FAIL" : "pass");
    any_failure = any_failure || failing > 0;
    err << fmt::format("{:<20} {:<4} applicable {}/{} max residual {:.3e}\n", to_string(id), status, applicable,
                       reports.size(), worst);
  }
  err << fmt::format("verify: {} k-points, tol {:.1e}: {}\n", ks.size(), cfg.tol,
                     any_failure ? "identity failures" : "all applicable identities hold");
  if (backend_failures) return kExitRuntime;
  return any_failure ? kExitIdentityFailure : kExitOk;
}

int run_scan(const RunConfig& cfg, ScanWhat what, std::ostream& out, std::ostream& err) {
  if (cfg.k_count < 2) throw UsageError("scan needs --k-range");
  if (cfg.backend == BackendChoice::both) throw UsageError("scan runs on a single backend");
  const Potential p = load(cfg);
  ScanOptions opts;
  opts.backend = single_backend(cfg, p);
  check_backend(opts.backend, p);
  opts.ode.tol = cfg.ode_tol;
  opts.grid_step = cfg.grid_step.value_or((cfg.k_max - cfg.k_min) / static_cast<double>(cfg.k_count - 1));
  ScanResult result;
  switch (what) {
    case ScanWhat::all: result = scan_all(p, cfg.k_min, cfg.k_max, opts); break;
    case ScanWhat::singularities: result = find_spectral_singularities(p, cfg.k_min, cfg.k_max, opts); break;
    case ScanWhat::reflectionless: result = find_unidirectional_points(p, cfg.k_min, cfg.k_max, opts); break;
  }
  for (const auto& f : result.features)
    if (f.near_boundary)
      err << fmt::format("scan: warning: {} at k = {} lies within one grid step of the range edge\n",
                         to_string(f.kind), f.k_star);
  err << fmt::format("scan: {} features, {} rejected candidates\n", result.features.size(), result.rejected.size());
  emit(cfg, scan_to_csv(result), scan_to_json(result), out);
  return kExitOk;
}

}  // namespace

int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"One-dimensional scattering off real and PT-symmetric potentials", "ptscat"};
  app.require_subcommand(1);
  RawOptions raw;
  if (const char* env = std::getenv(kTolEnvVar)) {
    try {
      raw.tol = std::stod(env);
    } catch (const std::exception&) {
      err << fmt::format("error: {}='{}' is not a number\n", kTolEnvVar, env);
      return kExitUsage;
    }
  }

  OptionHandles sweep_h, verify_h, scan_h;
  auto* sweep_cmd = app.add_subcommand("sweep", "tabulate scattering data on a k-grid");
  add_common(sweep_cmd, raw, sweep_h);
  auto* verify_cmd = app.add_subcommand("verify", "evaluate every identity residual; exit 1 on failure");
  add_common(verify_cmd, raw, verify_h);
  verify_h.by_name["assume"] =
      verify_cmd->add_option("--assume", raw.assume, "symmetry class for applicability: auto, real, pt, general")
          ->check(CLI::IsMember({"auto", "real", "pt", "general"}));
  auto* scan_cmd = app.add_subcommand("scan", "locate spectral singularities and reflectionless points");
  add_common(scan_cmd, raw, scan_h);
  scan_h.by_name["grid_step"] = scan_cmd->add_option("--grid-step", raw.grid_step, "scan grid spacing");
  scan_h.by_name["what"] = scan_cmd->add_option("--what", raw.what, "all, singularities or reflectionless")
                               ->check(CLI::IsMember({"all", "singularities", "reflectionless"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    Command cmd = Command::verify;
    const OptionHandles* h = &verify_h;
    if (sweep_cmd->parsed()) {
      cmd = Command::sweep;
      h = &sweep_h;
    } else if (scan_cmd->parsed()) {
      cmd = Command::scan;
      h = &scan_h;
    }
    const bool k_from_config = apply_config(raw, *h);
    RunConfig cfg = resolve(cmd, raw, *h, k_from_config);
    switch (cmd) {
      case Command::sweep: return run_sweep(cfg, out, err);
      case Command::verify: {
        const Assumption a = raw.assume == "real"      ? Assumption::real
                             : raw.assume == "pt"      ? Assumption::pt
                             : raw.assume == "general" ? Assumption::general
                                                       : Assumption::automatic;
        return run_verify(cfg, a, out, err);
      }
      case Command::scan: {
        const ScanWhat w = raw.what == "singularities"    ? ScanWhat::singularities
                           : raw.what == "reflectionless" ? ScanWhat::reflectionless
                                                          : ScanWhat::all;
        return run_scan(cfg, w, out, err);
      }
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const SpecError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UnsupportedBackend& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace ptscat
