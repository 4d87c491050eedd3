#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fockskin/fock_lattice.hpp"
#include "output.hpp"

namespace fockskin::cli {

struct CommandResult {
  Table data;
  /// Optional second table written to a user-chosen path (evolve --frames).
  std::optional<Table> frames;
  /// Command-specific numbers recorded in the manifest.
  Json diagnostics = Json::object();
  /// 0, or kExitNumerical when the data were produced but failed a built-in check.
  int status = 0;
};

/// "obc", "pbc" or "tbc=<theta>".
BoundaryCondition parse_bc(const std::string& text);
/// "<re>,<im>".
Complex parse_complex(const std::string& text);
/// Comma-separated integers.
std::vector<int> parse_int_list(const std::string& text);

struct SpectraArgs {
  OscillatorParams params;
  int nu = 0;
  int dim = 50;
  std::string bc = "pbc";
  std::string method = "numeric";
};
CommandResult cmd_spectra(const SpectraArgs& a);

struct WindingMapArgs {
  OscillatorParams params;
  int nu = 0;
  int dim = 50;
  std::optional<double> re_min, re_max, im_min, im_max;
  int nx = 41;
  int ny = 41;
  int n_theta = 256;
  double band = 1e-3;
};
CommandResult cmd_winding_map(const WindingMapArgs& a);

struct EvolveArgs {
  OscillatorParams params;
  int nu = 0;
  int trunc = 50;
  std::string initial = "delta=0";
  double t_max = 40.0;
  double dt_out = 0.5;
  bool cross_check = true;
  bool want_frames = false;
};
CommandResult cmd_evolve(const EvolveArgs& a);

struct ScalingArgs {
  OscillatorParams params;
  int nu = 0;
  std::string dims = "50,100,200,400";
  int n_angles = 128;
};
CommandResult cmd_scaling(const ScalingArgs& a);

struct AnnihilateArgs {
  std::string mode = "spectrum";
  int dim = 40;
  std::string bc = "pbc";
  int power = 1;
  std::string method = "numeric";
  std::string powers = "1,2,3";
  std::string at = "0,0";
  int n_theta = 256;
  std::string alpha = "2,0";
  int sites = 60;
};
CommandResult cmd_annihilate(const AnnihilateArgs& a);

}  // namespace fockskin::cli
