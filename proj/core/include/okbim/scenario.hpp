#pragma once

// Run configuration: initial domains, physical and numerical parameters, and
// output cadence. Scenarios come from named presets or from flat text files:
//
//   # comment
//   r_inf = 4
//   sigma = 0.47          # or "auto"
//   n = 128
//   dt = 1e-3
//   t_end = 12
//   smoothing_strength = 10   # 0 disables the high-mode filter
//
//   [domain]
//   type = ellipse        # or perturbed_circle
//   center = 2, 0
//   a = 1.5
//   b = 1
//   rotation = 0          # radians, direction of the a-axis
//
//   [domain]
//   type = perturbed_circle
//   center = 0, 0
//   R = 2
//   delta = 0.01
//   mode = 4
//
// Unknown keys and malformed values raise ConfigError.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "okbim/geometry.hpp"

namespace okbim {

struct Scenario {
  std::string name;
  std::string description;
  std::vector<Shape> domains;
  double r_inf = 1.0;
  /// Empty means "auto": use linear::compute_sigma().
  std::optional<double> sigma;
  std::size_t n = 128;
  double dt = 1e-3;
  double t_end = 1.0;
  double gmres_tol = 1e-10;
  int gmres_max_iter = 500;
  double filter_tol = 1e-10;
  /// High-mode filter exp(-strength (2|k|/N)^order); strength 0 disables it.
  double smoothing_strength = 10.0;
  int smoothing_order = 25;
  double flux_tol = 1e-3;
  /// Steps between series.csv rows.
  long output_every = 1;
  /// Steps between snapshot files; must be a multiple of output_every.
  long snapshot_every = 1;
  std::string out_dir;

  double sigma_value() const;
  long step_count() const;
};

std::vector<std::string> preset_names();

/// Throws ConfigError for an unknown name.
Scenario preset(std::string_view name);

/// Parses the text format above; `source` is used in error messages.
Scenario parse_scenario(std::istream& in, std::string_view source = "<input>");

/// Writes a scenario in the format parse_scenario reads.
void write_scenario(std::ostream& out, const Scenario& scenario);

/// Preset name or path to a scenario file. The result is validated.
Scenario load_scenario(std::string_view preset_or_path);

/// Switches a preset to the resolution used for publication-grade runs.
void apply_full_scale(Scenario& scenario);

/// Checks numerical parameters (ConfigError) and the initial geometry (GeometryError).
void validate(const Scenario& scenario);

/// Places the markers of every domain. The result is validated.
InterfaceSystem build_system(const Scenario& scenario);

}  // namespace okbim
