#include "okbim/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>

#include "okbim/errors.hpp"
#include "okbim/linear_analysis.hpp"
#include "okbim/spectral.hpp"

namespace okbim {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void write_final(const RunWriter& writer, const EvolutionState& state) {
  std::ofstream out(writer.dir() / "final.txt", std::ios::trunc);
  write_snapshot(out, state);
}

RunResult run_to_time(Scenario s, std::size_t n, double dt, double t_end) {
  s.n = n;
  s.dt = dt;
  s.t_end = t_end;
  s.out_dir.clear();
  s.output_every = 1;
  s.snapshot_every = 1;
  validate(s);
  RunResult r = run(s);
  if (r.stop != StopReason::Time) {
    throw Error("convergence run stopped early (" + r.report.stop_reason + ") at t=" +
                std::to_string(r.report.t_final));
  }
  return r;
}

Vec2 centroid(const std::vector<Vec2>& pts) {
  Vec2 c;
  for (const Vec2& p : pts) c = c + p;
  return (1.0 / static_cast<double>(pts.size())) * c;
}

double matched_distance(const std::vector<Vec2>& a, const std::vector<Vec2>& b) {
  const std::size_t n = a.size();
  if (b.size() != n) return std::numeric_limits<double>::infinity();
  double best = std::numeric_limits<double>::infinity();
  for (int dir : {1, -1}) {
    for (std::size_t shift = 0; shift < n; ++shift) {
      double worst = 0.0;
      for (std::size_t j = 0; j < n && worst < best; ++j) {
        const std::size_t k = dir > 0 ? (shift + j) % n : (shift + n - j) % n;
        worst = std::max(worst, norm(a[j] - b[k]));
      }
      best = std::min(best, worst);
    }
  }
  return best;
}

}  // namespace

RunResult run(const Scenario& s, const RunHooks& hooks) {
  const auto start = std::chrono::steady_clock::now();
  EvolutionState state = initial_state(build_system(s), s.flux_tol);

  const SolverOptions solver{s.gmres_tol, s.gmres_max_iter};
  StepOptions stepping;
  stepping.dt = s.dt;
  stepping.filter_tol = s.filter_tol;
  stepping.smoothing = s.smoothing_strength > 0.0;
  stepping.smoothing_strength = s.smoothing_strength;
  stepping.smoothing_order = s.smoothing_order;
  StopCriteria criteria;
  criteria.t_end = s.t_end;
  double shortest = std::numeric_limits<double>::infinity();
  for (const auto& c : state.system.curves) shortest = std::min(shortest, c.length());
  criteria.reference_length = shortest;

  std::optional<RunWriter> writer;
  if (!s.out_dir.empty()) {
    writer.emplace(s.out_dir, state.system.curves.size());
    std::ofstream cfg(writer->dir() / "scenario.cfg", std::ios::trunc);
    write_scenario(cfg, s);
  }

  RunResult result;
  RunReport& report = result.report;
  report.scenario = s.name;

  auto finish = [&] {
    report.t_c = state.t_forced;
    report.t_final = state.t;
    report.steps = state.steps;
    report.wall_seconds = seconds_since(start);
  };

  try {
    for (;;) {
      const FieldSolution* warm = state.prev_solution ? &*state.prev_solution : nullptr;
      FieldSolution sol = solve(state.system, state.phase, solver, warm);
      report.gmres.add(sol);
      report.near_singular = report.near_singular || sol.near_singular;
      if (hooks.on_solve) hooks.on_solve(state, sol);

      if (state.steps % s.output_every == 0) {
        SeriesRecord row = make_record(state, sol);
        if (writer) {
          writer->record(row);
          if (state.steps % s.snapshot_every == 0) {
            writer->snapshot(state, state.steps / s.snapshot_every);
          }
        }
        if (hooks.keep_series) result.series.push_back(std::move(row));
      }

      if (auto stop = stop_check(state, criteria)) {
        result.stop = stop;
        report.stop_reason = to_string(*stop);
        break;
      }
      state = advance(state, sol, stepping, s.flux_tol);
    }
  } catch (const Error& e) {
    report.stop_reason = "error";
    report.error = e.what();
    finish();
    if (writer) {
      write_final(*writer, state);
      writer->report(report);
    }
    throw;
  }

  finish();
  if (writer) {
    write_final(*writer, state);
    writer->report(report);
  }
  result.final_state = std::move(state);
  return result;
}

std::vector<ConvergenceRow> convergence_space(Scenario scenario,
                                              const std::vector<std::size_t>& sizes, double dt,
                                              double t_end) {
  if (sizes.size() < 2) throw ConfigError("convergence_space needs at least two grid sizes");
  const std::size_t finest = *std::max_element(sizes.begin(), sizes.end());
  const auto reference = all_markers(run_to_time(scenario, finest, dt, t_end).final_state.system);

  std::vector<ConvergenceRow> rows;
  for (std::size_t n : sizes) {
    if (n == finest) continue;
    if (finest % n != 0) throw ConfigError("grid sizes must divide the finest grid");
    const auto pts = all_markers(run_to_time(scenario, n, dt, t_end).final_state.system);
    const std::size_t stride = finest / n;
    double err = 0.0;
    for (std::size_t c = 0; c < pts.size(); ++c) {
      for (std::size_t j = 0; j < n; ++j) err = std::max(err, norm(pts[c][j] - reference[c][j * stride]));
    }
    rows.push_back({static_cast<double>(n), err});
  }
  return rows;
}

std::vector<ConvergenceRow> convergence_time(Scenario scenario, const std::vector<double>& steps,
                                             std::size_t n, double t_end) {
  if (steps.size() < 2) throw ConfigError("convergence_time needs at least two time steps");
  const double finest = *std::min_element(steps.begin(), steps.end());
  const auto reference = all_markers(run_to_time(scenario, n, finest, t_end).final_state.system);

  std::vector<ConvergenceRow> rows;
  for (double dt : steps) {
    if (dt == finest) continue;
    const auto pts = all_markers(run_to_time(scenario, n, dt, t_end).final_state.system);
    double err = 0.0;
    for (std::size_t c = 0; c < pts.size(); ++c) {
      for (std::size_t j = 0; j < n; ++j) err = std::max(err, norm(pts[c][j] - reference[c][j]));
    }
    rows.push_back({dt, err});
  }
  return rows;
}

ModeAmplitudes mode_amplitudes(const InterfaceCurve& curve, Vec2 center, int k) {
  const std::vector<Vec2> pts = markers(curve);
  const std::size_t n = pts.size();
  std::vector<double> r(n), phi(n), periodic(n);
  for (std::size_t j = 0; j < n; ++j) {
    const Vec2 d = pts[j] - center;
    r[j] = norm(d);
    phi[j] = std::atan2(d.y, d.x);
    if (j > 0) {
      while (phi[j] - phi[j - 1] > std::numbers::pi) phi[j] -= kTwoPi;
      while (phi[j] - phi[j - 1] < -std::numbers::pi) phi[j] += kTwoPi;
    }
    periodic[j] = phi[j] - curve.alpha(j);
  }
  const std::vector<double> periodic_a = spectral::derivative(periodic);

  ModeAmplitudes m;
  for (std::size_t j = 0; j < n; ++j) {
    const double dphi = 1.0 + periodic_a[j];
    m.R += r[j] * dphi;
    m.delta += r[j] * std::cos(k * phi[j]) * dphi;
  }
  m.R /= static_cast<double>(n);
  m.delta *= 2.0 / static_cast<double>(n);
  return m;
}

std::vector<LinearCompareRow> linear_compare(Scenario scenario, double t_end) {
  if (scenario.domains.size() != 1 || !std::holds_alternative<PerturbedCircle>(scenario.domains[0])) {
    throw ConfigError("linear_compare needs a scenario with one perturbed_circle domain");
  }
  const auto shape = std::get<PerturbedCircle>(scenario.domains[0]);
  scenario.t_end = t_end;
  scenario.out_dir.clear();
  validate(scenario);

  std::vector<LinearCompareRow> rows;
  RunHooks hooks;
  hooks.on_solve = [&](const EvolutionState& state, const FieldSolution&) {
    if (state.steps % scenario.output_every != 0) return;
    const ModeAmplitudes m = mode_amplitudes(state.system.curves[0], shape.center, shape.mode);
    rows.push_back({state.t, m.R, 0.0, m.delta, 0.0});
  };
  run(scenario, hooks);

  linear::LinearState initial{shape.radius, shape.delta, shape.mode, scenario.r_inf,
                              scenario.sigma_value()};
  constexpr double oracle_dt = 1e-4;
  const auto oracle = linear::integrate(initial, oracle_dt, t_end);
  for (auto& row : rows) {
    const double pos = row.t / oracle_dt;
    const auto i = std::min(static_cast<std::size_t>(pos), oracle.size() - 2);
    const double w = pos - static_cast<double>(i);
    row.R_lin = (1.0 - w) * oracle[i].R + w * oracle[i + 1].R;
    row.delta_lin = (1.0 - w) * oracle[i].delta + w * oracle[i + 1].delta;
  }
  return rows;
}

double reflection_defect(const std::vector<std::vector<Vec2>>& curves, Vec2 axis) {
  const Vec2 a = (1.0 / norm(axis)) * axis;
  std::vector<Vec2> centroids;
  for (const auto& c : curves) centroids.push_back(centroid(c));

  double defect = 0.0;
  for (const auto& c : curves) {
    std::vector<Vec2> mirrored;
    mirrored.reserve(c.size());
    for (const Vec2& p : c) mirrored.push_back(2.0 * dot(p, a) * a - p);
    const Vec2 mc = centroid(mirrored);
    std::size_t partner = 0;
    for (std::size_t j = 1; j < curves.size(); ++j) {
      if (norm2(centroids[j] - mc) < norm2(centroids[partner] - mc)) partner = j;
    }
    defect = std::max(defect, matched_distance(mirrored, curves[partner]));
  }
  return defect;
}

std::vector<std::vector<Vec2>> all_markers(const InterfaceSystem& system) {
  std::vector<std::vector<Vec2>> out;
  for (const auto& c : system.curves) out.push_back(markers(c));
  return out;
}

}  // namespace okbim
