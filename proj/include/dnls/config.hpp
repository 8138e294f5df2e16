#pragma once

// Run configuration in a line-oriented `key = value` format with dotted
// sections. `#` starts a comment. Example:
//
//   grid.n = 8192
//   grid.length = 2048
//   time.t_final = 400
//   data.u1.profile = gaussian
//   data.u1.amplitude = 1
//   data.u2.profile = zero
//   epsilon = 0.05, 0.1, 0.2
//
// Every key is optional; unknown keys are rejected with their line number.

#include <string>
#include <string_view>
#include <vector>

#include "dnls/dynamics.hpp"
#include "dnls/spectral.hpp"

namespace dnls {

struct ProfileSpec {
  enum class Kind { gaussian, zero };
  Kind kind = Kind::gaussian;
  double amplitude_re = 1.0;
  double amplitude_im = 0.0;
  double width = 1.0;
  double center = 0.0;
  double wavenumber = 0.0;

  friend bool operator==(const ProfileSpec&, const ProfileSpec&) = default;
};

struct RunConfig {
  std::size_t n = 4096;
  double length = 256.0;

  double dt = 0.01;
  double t_final = 400.0;
  double snapshot_ratio = 1.189207115002721;  // 2^{1/4}
  double dt_growth_start = 10.0;              // 0 keeps dt fixed
  std::vector<double> extra_snapshots;
  int observer_stride = 1;

  ProfileSpec u1{ProfileSpec::Kind::gaussian, 1.0, 0.0, 1.0, 0.0, 0.0};
  ProfileSpec u2{ProfileSpec::Kind::gaussian, 0.8, 0.0, 1.5, 0.5, 0.5};

  std::vector<double> epsilons{0.1};

  double threshold = 0.0;  // 0 selects max(10 C_quad, 1e-6 eps^2)
  double band_cut = 1e-8;  // resolved band: |psi1^| + |psi2^| > band_cut

  std::string output_dir = ".";
  std::vector<std::string> tables{"trajectory", "observers", "fields",   "mprofile",
                                  "classification", "sweep", "orderfit", "scenario"};

  Grid grid() const { return make_grid(n, length); }
  ScheduleSpec schedule_spec() const;
  bool wants(std::string_view table) const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Throws ConfigError (with line number) on unknown keys, malformed numbers, or out-of-range values.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

/// Emits every key; parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& config);

/// Initial profile psi_j sampled on the grid (before the epsilon factor).
ComplexField make_profile(const Grid& grid, const ProfileSpec& spec);

enum class Scenario { decoupled, symmetric, generic, A, B };

/// Built-in configurations on the L = 2048, n = 8192 lab grid.
RunConfig scenario_config(Scenario scenario);
Scenario parse_scenario(std::string_view name);
const char* to_string(Scenario scenario) noexcept;

}  // namespace dnls
