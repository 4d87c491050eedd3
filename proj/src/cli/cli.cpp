#include "fockskin/cli.hpp"

#include <fstream>
#include <ostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "fockskin/errors.hpp"

#ifndef FOCKSKIN_VERSION
#define FOCKSKIN_VERSION "unknown"
#endif

namespace fockskin::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Flat key=value lines; '#' and ';' start comments. Keys are long flag names
// without the leading dashes.
std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read config file '" + path + "'");
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw InvalidArgument(path + ":" + std::to_string(lineno) + ": expected key=value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    if (key.rfind("--", 0) == 0) key = key.substr(2);
    entries.emplace_back(std::move(key), std::move(value));
  }
  return entries;
}

void apply_config(CLI::App& sub, const std::string& path) {
  for (const auto& [key, value] : read_config(path)) {
    CLI::Option* opt = sub.get_option_no_throw("--" + key);
    if (opt == nullptr || key == "config" || key == "help")
      throw InvalidArgument("config key '" + key + "' is not an option of " + sub.get_name());
    if (opt->count() > 0) continue;  // the command line wins
    opt->add_result(value);
    try {
      opt->run_callback();
    } catch (const CLI::Error& e) {
      throw InvalidArgument("config key '" + key + "': " + e.what());
    }
  }
}

Json parameter_record(const CLI::App& sub) {
  Json params = Json::object();
  for (const CLI::Option* opt : sub.get_options()) {
    const std::string name = opt->get_single_name();
    if (name == "help") continue;
    if (opt->count() > 0) {
      std::string joined;
      for (const auto& v : opt->results()) joined += (joined.empty() ? "" : ",") + v;
      params[name] = joined;
    } else if (!opt->get_default_str().empty()) {
      params[name] = opt->get_default_str();
    } else {
      params[name] = nullptr;
    }
  }
  return params;
}

struct Common {
  OscillatorParams params;
  std::string out_path;
  std::string format = "csv";
  std::string config;
};

void add_common(CLI::App& sub, Common& c, bool oscillator) {
  if (oscillator) {
    sub.add_option("--omega", c.params.omega, "oscillator frequency");
    sub.add_option("--kappa", c.params.kappa, "damping rate");
  }
  sub.add_option("--out", c.out_path, "output file (stdout when omitted)");
  sub.add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sub.add_option("--config", c.config, "flat key=value file; command-line flags take precedence");
}

int emit(const CLI::App& sub, const Common& c, const std::string& frames_path, const CommandResult& r,
         std::ostream& out) {
  Json manifest = Json::object();
  manifest["command"] = sub.get_name();
  manifest["version"] = FOCKSKIN_VERSION;
  manifest["timestamp"] = utc_timestamp();
  manifest["parameters"] = parameter_record(sub);
  manifest["diagnostics"] = r.diagnostics;

  // Checksums cover the data payload only: the CSV text, or the compact
  // serialization of the JSON "data" array.
  std::string payload;
  Json data_rows;
  if (c.format == "json") {
    data_rows = to_json_rows(r.data);
    payload = data_rows.dump();
  } else {
    payload = to_csv(r.data);
  }
  Json checksums = Json::object();
  checksums[c.out_path.empty() ? "-" : c.out_path] = sha256_hex(payload);
  std::string frames_bytes;
  if (r.frames) {
    frames_bytes = to_csv(*r.frames);
    checksums[frames_path] = sha256_hex(frames_bytes);
  }
  manifest["checksums"] = checksums;

  std::string body = payload;
  if (c.format == "json") {
    Json doc = Json::object();
    doc["manifest"] = manifest;
    doc["data"] = std::move(data_rows);
    body = doc.dump() + "\n";
  }
  if (r.frames) write_file(frames_path, frames_bytes);
  if (c.out_path.empty()) {
    out << body;
  } else {
    write_file(c.out_path, body);
    write_file(c.out_path + ".manifest.json", manifest.dump(2) + "\n");
  }
  return r.status;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fock-space skin-effect experiments", "fockskin"};
  app.set_version_flag("--version", std::string(FOCKSKIN_VERSION));
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();

  Common common;
  std::string frames_path;
  bool no_cross_check = false;

  SpectraArgs sp;
  auto* spectra = app.add_subcommand("spectra", "eigenvalues of one Liouvillian chain");
  spectra->option_defaults()->always_capture_default();
  spectra->add_option("--nu", sp.nu, "chain index");
  spectra->add_option("--dim", sp.dim, "truncation D (sites 0..D)");
  spectra->add_option("--bc", sp.bc, "obc, pbc or tbc=<theta>");
  spectra->add_option("--method", sp.method, "numeric or analytic (obc only)");
  add_common(*spectra, common, true);

  WindingMapArgs wm;
  auto* winding = app.add_subcommand("winding-map", "spectral winding number on a grid of reference energies");
  winding->option_defaults()->always_capture_default();
  winding->add_option("--nu", wm.nu, "chain index");
  winding->add_option("--dim", wm.dim, "truncation D");
  winding->add_option("--re-min", wm.re_min, "grid window (default: loop bounding box + 10%)");
  winding->add_option("--re-max", wm.re_max);
  winding->add_option("--im-min", wm.im_min);
  winding->add_option("--im-max", wm.im_max);
  winding->add_option("--nx", wm.nx, "grid columns");
  winding->add_option("--ny", wm.ny, "grid rows");
  winding->add_option("--n-theta", wm.n_theta, "twist samples per winding evaluation");
  winding->add_option("--band", wm.band, "cells with |ln|R|| below this are not checked");
  add_common(*winding, common, true);

  EvolveArgs ev;
  auto* evolve_cmd = app.add_subcommand("evolve", "time evolution of one chain from a chosen initial state");
  evolve_cmd->option_defaults()->always_capture_default();
  evolve_cmd->add_option("--nu", ev.nu, "chain index");
  evolve_cmd->add_option("--trunc", ev.trunc, "truncation D");
  evolve_cmd->add_option("--initial", ev.initial,
                         "sibc=<re>,<im> | obc=<l> | delta=<j> | random=<seed>[,<support>]");
  evolve_cmd->add_option("--t-max", ev.t_max, "final time");
  evolve_cmd->add_option("--dt-out", ev.dt_out, "output spacing");
  evolve_cmd->add_option("--frames", frames_path, "also write every frame as t,j,re,im CSV");
  evolve_cmd->add_flag("--no-cross-check", no_cross_check, "skip the matrix-exponential comparison");
  add_common(*evolve_cmd, common, true);

  ScalingArgs sc;
  auto* scaling = app.add_subcommand("scaling", "PBC spectrum and loop size against truncation");
  scaling->option_defaults()->always_capture_default();
  scaling->add_option("--nu", sc.nu, "chain index");
  scaling->add_option("--dims", sc.dims, "comma-separated list of D");
  scaling->add_option("--n-angles", sc.n_angles, "rays used to trace the loop");
  add_common(*scaling, common, true);

  AnnihilateArgs an;
  auto* annihilate = app.add_subcommand("annihilate", "the annihilation operator as a Fock-space lattice");
  annihilate->option_defaults()->always_capture_default();
  annihilate->add_option("--mode", an.mode, "spectrum, winding or coherent");
  annihilate->add_option("--dim", an.dim, "truncation D");
  annihilate->add_option("--bc", an.bc, "obc, pbc or tbc=<theta> (spectrum mode)");
  annihilate->add_option("--power", an.power, "matrix power p (spectrum mode)");
  annihilate->add_option("--method", an.method, "numeric or analytic (spectrum mode)");
  annihilate->add_option("--powers", an.powers, "comma-separated powers (winding mode)");
  annihilate->add_option("--at", an.at, "reference energy <re>,<im> (winding mode)");
  annihilate->add_option("--n-theta", an.n_theta, "twist samples (winding mode)");
  annihilate->add_option("--alpha", an.alpha, "coherent amplitude <re>,<im> (coherent mode)");
  annihilate->add_option("--sites", an.sites, "number of sites (coherent mode)");
  add_common(*annihilate, common, false);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  try {
    if (!common.config.empty()) apply_config(*sub, common.config);
    CommandResult result;
    if (sub == spectra) {
      sp.params = common.params;
      result = cmd_spectra(sp);
    } else if (sub == winding) {
      wm.params = common.params;
      result = cmd_winding_map(wm);
    } else if (sub == evolve_cmd) {
      ev.params = common.params;
      ev.cross_check = !no_cross_check;
      ev.want_frames = !frames_path.empty();
      result = cmd_evolve(ev);
    } else if (sub == scaling) {
      sc.params = common.params;
      result = cmd_scaling(sc);
    } else {
      result = cmd_annihilate(an);
    }
    const int status = emit(*sub, common, frames_path, result, out);
    if (status != kExitOk) err << sub->get_name() << ": built-in consistency check failed (see manifest)\n";
    return status;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace fockskin::cli
