// oksim: command-line front end for the interface simulator.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "okbim/errors.hpp"
#include "okbim/linear_analysis.hpp"
#include "okbim/runner.hpp"
#include "okbim/scenario.hpp"

namespace {

struct Overrides {
  std::string scenario;
  std::optional<std::size_t> n;
  std::optional<double> dt;
  std::optional<double> t_end;
  std::optional<double> gmres_tol;
  std::optional<long> output_every;
  bool full_scale = false;
};

void add_overrides(CLI::App* cmd, Overrides& o, bool need_scenario = true) {
  auto* opt = cmd->add_option("--scenario", o.scenario, "preset name or scenario file");
  if (need_scenario) opt->required();
  cmd->add_option("--n", o.n, "markers per curve (power of two)");
  cmd->add_option("--dt", o.dt, "time step");
  cmd->add_option("--t-end", o.t_end, "final time");
  cmd->add_option("--gmres-tol", o.gmres_tol, "relative GMRES tolerance");
  cmd->add_option("--output-every", o.output_every, "steps between series rows");
  cmd->add_flag("--full-scale", o.full_scale, "publication resolution (long-running)");
}

okbim::Scenario resolve(const Overrides& o) {
  okbim::Scenario s = okbim::load_scenario(o.scenario);
  if (o.full_scale) okbim::apply_full_scale(s);
  if (o.n) s.n = *o.n;
  if (o.dt) s.dt = *o.dt;
  if (o.t_end) s.t_end = *o.t_end;
  if (o.gmres_tol) s.gmres_tol = *o.gmres_tol;
  if (o.output_every) {
    s.output_every = *o.output_every;
    if (s.snapshot_every % s.output_every != 0) s.snapshot_every = s.output_every;
  }
  okbim::validate(s);
  return s;
}

// Writes to `path`, or stdout when it is empty.
template <class Fn>
void emit(const std::string& path, Fn&& body) {
  if (path.empty()) {
    body(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw okbim::Error("cannot write " + path);
  body(out);
}

void print_convergence(std::ostream& out, const char* label,
                       const std::vector<okbim::ConvergenceRow>& rows) {
  out << label << ",error\n";
  for (const auto& r : rows) {
    char line[80];
    std::snprintf(line, sizeof line, "%.17g,%.17g\n", r.parameter, r.error);
    out << line;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sharp-interface boundary integral simulator"};
  app.require_subcommand(1);

  Overrides run_opts;
  std::string run_out;
  auto* run_cmd = app.add_subcommand("run", "run a scenario and write series.csv, snapshots and report.txt");
  add_overrides(run_cmd, run_opts);
  run_cmd->add_option("--out", run_out, "output directory (default runs/<scenario>)");

  Overrides space_opts;
  std::vector<std::size_t> space_sizes{64, 128, 256, 512};
  std::string space_out;
  auto* space_cmd = app.add_subcommand("convergence-space", "marker error against the finest grid");
  add_overrides(space_cmd, space_opts);
  space_cmd->add_option("--n-list", space_sizes, "grid sizes")->delimiter(',');
  space_cmd->add_option("--out", space_out, "CSV file (default stdout)");

  Overrides time_opts;
  std::vector<double> time_steps{5e-3, 2.5e-3, 1.25e-3, 6.25e-4};
  std::string time_out;
  auto* time_cmd = app.add_subcommand("convergence-time", "marker error against the smallest time step");
  add_overrides(time_cmd, time_opts);
  time_cmd->add_option("--dt-list", time_steps, "time steps")->delimiter(',');
  time_cmd->add_option("--out", time_out, "CSV file (default stdout)");

  Overrides lin_opts;
  lin_opts.scenario = "linear_validation";
  std::string lin_out;
  auto* lin_cmd = app.add_subcommand("linear-compare", "nonlinear R, delta against the linear ODE");
  add_overrides(lin_cmd, lin_opts, false);
  lin_cmd->add_option("--out", lin_out, "CSV file (default stdout)");

  okbim::linear::LinearState ode{2.0, 0.01, 4, 10.0, 0.47};
  double ode_dt = 1e-4, ode_t_end = 1.0;
  std::string ode_out;
  auto* ode_cmd = app.add_subcommand("linear-ode", "integrate the (R, delta) system alone");
  ode_cmd->add_option("--R", ode.R, "initial radius");
  ode_cmd->add_option("--delta", ode.delta, "initial amplitude");
  ode_cmd->add_option("--k", ode.k, "mode");
  ode_cmd->add_option("--r-inf", ode.r_inf, "outer radius");
  ode_cmd->add_option("--sigma", ode.sigma, "surface tension");
  ode_cmd->add_option("--dt", ode_dt, "RK4 step");
  ode_cmd->add_option("--t-end", ode_t_end, "final time");
  ode_cmd->add_option("--out", ode_out, "CSV file (default stdout)");

  auto* sigma_cmd = app.add_subcommand("sigma", "print the double-well surface tension");
  auto* presets_cmd = app.add_subcommand("presets", "list preset scenarios");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      okbim::Scenario s = resolve(run_opts);
      s.out_dir = run_out.empty() ? (s.out_dir.empty() ? "runs/" + s.name : s.out_dir) : run_out;
      okbim::RunResult r;
      try {
        r = okbim::run(s);
      } catch (const okbim::Error& e) {
        std::cerr << "run failed: " << e.what() << "\npartial output in " << s.out_dir << '\n';
        return 2;
      }
      okbim::write_report(std::cout, r.report);
      std::cout << "output: " << s.out_dir << '\n';
    } else if (*space_cmd) {
      const okbim::Scenario s = resolve(space_opts);
      const auto rows = okbim::convergence_space(s, space_sizes, s.dt, s.t_end);
      emit(space_out, [&](std::ostream& o) { print_convergence(o, "n", rows); });
    } else if (*time_cmd) {
      const okbim::Scenario s = resolve(time_opts);
      const auto rows = okbim::convergence_time(s, time_steps, s.n, s.t_end);
      emit(time_out, [&](std::ostream& o) { print_convergence(o, "dt", rows); });
    } else if (*lin_cmd) {
      const okbim::Scenario s = resolve(lin_opts);
      const auto rows = okbim::linear_compare(s, s.t_end);
      emit(lin_out, [&](std::ostream& o) {
        o << "t,R_num,R_lin,delta_num,delta_lin\n";
        for (const auto& r : rows) {
          char line[128];
          std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g,%.17g\n", r.t, r.R_num,
                        r.R_lin, r.delta_num, r.delta_lin);
          o << line;
        }
      });
    } else if (*ode_cmd) {
      const auto traj = okbim::linear::integrate(ode, ode_dt, ode_t_end);
      emit(ode_out, [&](std::ostream& o) { okbim::linear::write_trajectory_csv(o, traj); });
    } else if (*sigma_cmd) {
      std::printf("%.17g\n", okbim::linear::compute_sigma());
    } else if (*presets_cmd) {
      for (const auto& name : okbim::preset_names()) std::cout << name << '\n';
    }
  } catch (const okbim::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
