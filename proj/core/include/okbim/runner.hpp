#pragma once

// Simulation driver. Each step solves for the velocities at the current
// geometry, records output at the configured cadence, checks the stop
// criteria and then advances the curves and the flux phase.

#include <functional>
#include <optional>
#include <vector>

#include "okbim/dynamics.hpp"
#include "okbim/output.hpp"
#include "okbim/scenario.hpp"

namespace okbim {

struct RunHooks {
  /// Called after every solve, before the stop check.
  std::function<void(const EvolutionState&, const FieldSolution&)> on_solve;
  /// Keep series rows in memory (RunResult::series).
  bool keep_series = false;
};

struct RunResult {
  RunReport report;
  std::optional<StopReason> stop;
  EvolutionState final_state;
  std::vector<SeriesRecord> series;
};

/// Runs a scenario. Files are written only when scenario.out_dir is set.
/// Solver and geometry failures are rethrown after the last consistent
/// state has been written (snapshot "final.txt" and report.txt).
RunResult run(const Scenario& scenario, const RunHooks& hooks = {});

struct ConvergenceRow {
  double parameter = 0.0;  ///< N or dt
  double error = 0.0;      ///< max marker distance to the reference run
};

/// Max marker deviation of each N against the largest N, matched at common
/// alpha nodes, at t_end.
std::vector<ConvergenceRow> convergence_space(Scenario scenario, const std::vector<std::size_t>& sizes,
                                              double dt, double t_end);

/// Max marker deviation of each dt against the smallest dt at fixed N.
std::vector<ConvergenceRow> convergence_time(Scenario scenario, const std::vector<double>& steps,
                                             std::size_t n, double t_end);

struct LinearCompareRow {
  double t = 0.0;
  double R_num = 0.0;
  double R_lin = 0.0;
  double delta_num = 0.0;
  double delta_lin = 0.0;
};

/// Mean radius and mode-k cosine amplitude of a curve about `center`, from
///   R = (1/2pi) int r dphi,   delta = (1/pi) int r cos(k phi) dphi.
struct ModeAmplitudes {
  double R = 0.0;
  double delta = 0.0;
};
ModeAmplitudes mode_amplitudes(const InterfaceCurve& curve, Vec2 center, int k);

/// Nonlinear run of a single perturbed circle against the linear ODE,
/// one row per output step.
std::vector<LinearCompareRow> linear_compare(Scenario scenario, double t_end);

/// Largest distance between the marker set and its mirror image in the line
/// through the origin with direction `axis`. Each mirrored curve is paired
/// with the curve of nearest centroid, and nodes are matched up to cyclic
/// shift and orientation.
double reflection_defect(const std::vector<std::vector<Vec2>>& curves, Vec2 axis);

std::vector<std::vector<Vec2>> all_markers(const InterfaceSystem& system);

}  // namespace okbim
