#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "kinlim/chain_sim.hpp"
#include "kinlim/dispersion.hpp"
#include "kinlim/kernel1d.hpp"

namespace kinlim {

// Parses JSON and rejects duplicate keys at any depth (InputError names the key).
nlohmann::json parse_json_strict(const std::string& text, const std::string& origin = "config");

struct CouplingSpec {
  bool use_taps = false;
  double omega0 = 1.0;
  double A = 1.0;
  std::vector<double> taps;
  Coupling build() const;
};

// amplitude * exp(-((|k| - center) / width)^2 / 2)
struct ProfileSpec {
  double center = 0.25;
  double width = 0.08;
  double amplitude = 1.0;
  Profile function() const;
};

struct TransportSpec {
  int X = 0;  // 0 selects the space-homogeneous solver
  double length = 1.0;
  std::string interp = "cubic";
  double modulation = 0.5;  // mu0(x,k) = nu0(k) (1 + modulation cos(2 pi x / length))
};

struct Config {
  int N = 0;
  std::vector<double> m;
  int L = 0;            // resolved to max(512, 8N+1) when absent
  int oracle_ring = 0;  // 0 selects 8N+1
  CouplingSpec coupling;
  double epsilon = 0.1;
  double T = 1.0;
  std::vector<double> snapshot_times;
  int ensemble = 100;
  double dt = 0.0;
  std::uint64_t seed = 1;
  ProfileSpec profile;
  int grid = 64;
  double kinetic_dt = 1e-3;
  TransportSpec transport;
  std::vector<double> C;
  int dim = 1;
  std::vector<int> D;
  bool list = false;
  std::string mc_file;
  std::string kinetic_file;
  nlohmann::json nd;  // d-dimensional controls, null when unused
  std::string simd = "auto";
  int threads = 0;

  // Files read while resolving (controls_file), for the manifest digests.
  std::vector<std::string> consumed_files;

  bool has_controls() const { return N > 0 && !m.empty(); }
  ControlParams1D controls() const;
  nlohmann::json to_json() const;
};

// Applies "a.b=value" overrides (value parsed as JSON, else taken as a string),
// fills defaults, validates, and loads controls_file relative to base_dir.
Config resolve_config(nlohmann::json raw, const std::vector<std::string>& overrides,
                      const std::string& base_dir = ".");
Config parse_config_text(const std::string& text, const std::vector<std::string>& overrides = {},
                         const std::string& base_dir = ".");
// Accepts a plain config or a run manifest (whose "config" member is used).
Config parse_config_file(const std::string& path, const std::vector<std::string>& overrides = {});

}  // namespace kinlim
