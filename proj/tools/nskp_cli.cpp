// nskp: command-line front end.
//
//   nskp <simulate|sweep|decay|ns-ref|check> [--config FILE] [--<key> VALUE ...]
//
// Every config key is also a flag. Precedence: flags, then NSKP_OUTPUT_DIR
// (output_dir only), then the config file, then the mode defaults.
// Exit codes: 0 ok, 2 config error, 3 numerical failure, 4 IO error.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <fstream>
#include <map>
#include <optional>
#include <string>

#include "nskp/io.hpp"

namespace {

using namespace nskp;
using namespace nskp::io;

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kNumericalFailure = 3;
constexpr int kIoError = 4;

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path + ": cannot open config file");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void print_summary(const std::string& line) { std::cout << line << '\n'; }

// Console only; files carry full precision.
std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

int run_simulate(const RunConfig& c, OutputBundle& out) {
  const Grid g = c.make_grid();
  FluidState s0;
  if (c.initial == "taylor-green") {
    s0 = taylor_green_state(g, c.params);
  } else {
    InitialDataOptions o;
    o.band = c.band;
    s0 = c.initial == "well-prepared" ? well_prepared(g, c.params, c.seed, o).state
                                      : ill_prepared(g, c.params, c.seed, o).state;
  }
  RunOptions ro;
  ro.dt = c.step_for(c.params.lambda);
  ro.t_final = c.t_final;
  ro.record_interval = c.record_interval;
  const RunResult r = simulate(s0, ro);
  out.merge(bundle_simulation(r, c.checkpoint));
  print_summary("steps " + std::to_string(r.steps) + ", dt " + fmt(ro.dt));
  print_summary("worst (E + D - E0)/E0 " + fmt(r.worst_energy_excess));
  print_summary("max mass error " + fmt(r.max_mass_error) + ", max momentum drift " + fmt(r.max_momentum_drift));
  return kOk;
}

int run_sweep_mode(const RunConfig& c, OutputBundle& out) {
  const SweepReport r = run_sweep(c.sweep_config());
  out.merge(bundle_sweep(r));
  for (const auto& e : r.entries) {
    if (e.ok) {
      print_summary("lambda " + fmt(e.lambda) + ": fluct " + fmt(e.fluct_l2) + ", grad_mom " + fmt(e.grad_mom) +
                    ", sol_err " + fmt(e.sol_mom_err) + ", witness " + fmt(e.efield_witness));
    } else {
      print_summary("lambda " + fmt(e.lambda) + ": FAILED " + e.diagnostic);
    }
  }
  print_summary("slope of log ||rho - 1|| vs log lambda: " + fmt(r.fluct_slope));
  return r.all_ok() ? kOk : kNumericalFailure;
}

int run_decay_mode(const RunConfig& c, OutputBundle& out) {
  const Grid g = c.make_grid();
  const WavePair init{gaussian_packet(g, c.packet_width), SpectralField::scalar(g), 0.0};
  DecayOptions o;
  o.window = std::pair{c.t_start, c.t_end};
  const DecayFit f = measure_decay(c.equation, init, c.sample_times(), o);
  out.merge(bundle_decay(f));
  print_summary(std::string(to_string(c.equation)) + " fitted exponent " + fmt(f.fitted_exponent) + ", r^2 " +
                fmt(f.r_squared) + ", wrap-around time " + fmt(f.wrap_around_time));
  return kOk;
}

int run_ns_mode(const RunConfig& c, OutputBundle& out) {
  const Grid g = c.make_grid();
  NsOptions o;
  o.dt = c.dt;
  o.t_final = c.t_final;
  o.record_interval = c.record_interval;
  if (c.initial == "taylor-green") {
    const SpectralField u0 = taylor_green_velocity(g);
    const double k = 2.0 * std::numbers::pi / g.length();
    const double rate = 2.0 * c.ns_viscosity * k * k;
    const NsTrajectory t = run_ns_reference(u0, c.ns_viscosity, o);
    out.merge(bundle_ns(t, c.ns_viscosity, [&](double time) { return std::exp(-rate * time) * u0; }));
  } else {
    InitialDataOptions d;
    d.band = c.band;
    const NsTrajectory t = run_ns_reference(solenoidal_draw(g, c.seed, d), c.ns_viscosity, o);
    out.merge(bundle_ns(t, c.ns_viscosity));
  }
  const auto j = Json::parse(out.find("ns_ref.json")->content);
  print_summary("max divergence " + fmt(j.at("max_divergence").get<double>()));
  if (j.contains("max_rel_error")) print_summary("max relative error " + fmt(j.at("max_rel_error").get<double>()));
  return kOk;
}

int run_check_mode(OutputBundle& out) {
  const CheckReport r = run_check_suite();
  out.merge(bundle_check(r));
  for (const auto& c : r.results) {
    print_summary(std::string(c.passed ? "ok   " : "FAIL ") + c.name + "  " + fmt(c.value) + " <= " + fmt(c.tolerance) +
                  (c.detail.empty() ? "" : "  (" + c.detail + ")"));
  }
  return r.all_passed() ? kOk : kNumericalFailure;
}

int execute(const RunConfig& c) {
  std::error_code ec;
  std::filesystem::create_directories(c.output_dir, ec);
  if (ec || !std::filesystem::is_directory(c.output_dir)) {
    throw IoError(c.output_dir + ": cannot create output directory" + (ec ? ": " + ec.message() : ""));
  }
  std::cout << emit_config(c) << std::flush;
  OutputBundle out = bundle_config(c);
  int code = kOk;
  switch (c.mode) {
    case RunMode::simulate: code = run_simulate(c, out); break;
    case RunMode::sweep: code = run_sweep_mode(c, out); break;
    case RunMode::decay: code = run_decay_mode(c, out); break;
    case RunMode::ns_ref: code = run_ns_mode(c, out); break;
    case RunMode::check: code = run_check_mode(out); break;
  }
  const Manifest m = emit_outputs(out, c.output_dir);
  print_summary("wrote " + std::to_string(m.files.size()) + " files to " + c.output_dir);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Navier-Stokes-Korteweg-Poisson quasineutral limit toolkit"};
  app.require_subcommand(1);
  std::map<std::string, std::map<std::string, std::string>> flags;
  std::map<std::string, std::string> config_file;
  const std::pair<const char*, const char*> modes[] = {
      {"simulate", "time-step one NSKP run and record its energy budget"},
      {"sweep", "quasineutral-limit sweep over lambda against a Navier-Stokes reference"},
      {"decay", "sup-norm decay of a free Klein-Gordon or beam packet"},
      {"ns-ref", "incompressible Navier-Stokes reference run"},
      {"check", "invariant suite on small grids"},
  };
  for (const auto& [mode, about] : modes) {
    CLI::App* sub = app.add_subcommand(mode, about);
    sub->add_option("--config", config_file[mode], "flat key = value configuration file");
    sub->allow_extras();  // reported below with the nearest valid key
    for (const auto& key : config_keys()) {
      if (std::string(key.name) == "mode") continue;
      std::string names = std::string("--") + key.name;
      std::string dashed = key.name;
      std::replace(dashed.begin(), dashed.end(), '_', '-');
      if (dashed != key.name) names += ",--" + dashed;
      sub->add_option_function<std::string>(
          names, [&flags, mode, name = std::string(key.name)](const std::string& v) { flags[mode][name] = v; },
          key.help);
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string mode = sub->get_name();
  try {
    for (const std::string& extra : sub->remaining()) {
      if (extra.rfind("--", 0) != 0) throw ConfigError("unexpected argument '" + extra + "'");
      std::string name = extra.substr(0, extra.find('='));
      name.erase(0, name.find_first_not_of('-'));
      std::replace(name.begin(), name.end(), '-', '_');
      find_key(name);
      throw ConfigError("unexpected argument '" + extra + "'");
    }
    std::map<std::string, std::string> overrides = flags[mode];
    overrides["mode"] = mode;
    const std::string doc = config_file[mode].empty() ? std::string() : read_text(config_file[mode]);
    std::optional<std::string> env;
    if (const char* v = std::getenv("NSKP_OUTPUT_DIR")) env = v;
    const RunConfig c = parse_config(doc, overrides, env);
    return execute(c);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const ContractViolation& e) {
    std::cerr << "invalid request: " << e.what() << '\n';
    return kConfigError;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return kIoError;
  } catch (const VacuumError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const StepFailure& e) {
    std::cerr << "numerical failure at t = " << e.time() << ": " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  }
}
