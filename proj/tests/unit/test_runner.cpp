#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "okbim/errors.hpp"
#include "okbim/runner.hpp"

using namespace okbim;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("okbim_test_" + name);
  fs::remove_all(p);
  return p;
}

Scenario short_four_ellipse() {
  Scenario s = preset("four_ellipse");
  s.n = 64;
  s.dt = 1e-2;
  s.t_end = 0.07;
  s.output_every = 2;
  s.snapshot_every = 4;
  return s;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Output, SeriesHeaderContract) {
  EXPECT_EQ(series_header(2), "t,J,w_inf,max_abs_V,s_alpha_1,s_alpha_2,area_1,area_2");
}

TEST(Output, SeriesRoundTrip) {
  SeriesRecord r{0.25, 1.5, -2.0, 0.125, {1.0, 2.0}, {3.0, 4.0}};
  std::stringstream ss;
  ss << series_header(2) << '\n';
  write_series_row(ss, r);
  const auto rows = read_series(ss);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].t, 0.25);
  EXPECT_EQ(rows[0].area[1], 4.0);
}

TEST(Output, SeriesParserRejectsPermutedColumns) {
  std::stringstream ss("t,w_inf,J,max_abs_V,s_alpha_1,area_1\n0,0,0,0,1,1\n");
  EXPECT_THROW(read_series(ss), ConfigError);
}

TEST(Output, SnapshotRoundTrip) {
  EvolutionState s = initial_state(build_system(preset("two_ellipse")));
  std::stringstream ss;
  write_snapshot(ss, s);
  EXPECT_EQ(ss.str().rfind("t=0 M=2\n", 0), 0u);
  const Snapshot back = read_snapshot(ss);
  ASSERT_EQ(back.curves.size(), 2u);
  ASSERT_EQ(back.curves[0].size(), 128u);
  const auto pts = markers(s.system.curves[1]);
  EXPECT_EQ(back.curves[1][5], pts[5]);
}

TEST(Runner, WritesArtifacts) {
  Scenario s = short_four_ellipse();
  s.out_dir = scratch("artifacts").string();
  const RunResult r = run(s);
  EXPECT_EQ(r.stop, StopReason::Time);
  EXPECT_EQ(r.report.steps, 7);

  std::ifstream series(fs::path(s.out_dir) / "series.csv");
  const auto rows = read_series(series);
  EXPECT_EQ(rows.size(), 7u / 2 + 1);
  EXPECT_EQ(rows.front().t, 0.0);
  EXPECT_TRUE(fs::exists(snapshot_path(s.out_dir, 0)));
  EXPECT_TRUE(fs::exists(snapshot_path(s.out_dir, 1)));
  EXPECT_FALSE(fs::exists(snapshot_path(s.out_dir, 2)));
  EXPECT_TRUE(fs::exists(fs::path(s.out_dir) / "final.txt"));

  const std::string report = slurp(fs::path(s.out_dir) / "report.txt");
  EXPECT_NE(report.find("stop_reason: t_end"), std::string::npos);
  EXPECT_NE(report.find("t_c: none"), std::string::npos);
  EXPECT_NE(report.find("gmres_mean_iterations"), std::string::npos);
}

TEST(Runner, RecordedFluxMatchesAreas) {
  Scenario s = short_four_ellipse();
  RunHooks hooks;
  hooks.keep_series = true;
  const RunResult r = run(s, hooks);
  for (const auto& row : r.series) {
    double area = 0.0;
    for (double a : row.area) area += a;
    EXPECT_EQ(row.J, 0.5 * kPi * 16.0 - area);
  }
}

TEST(Runner, RerunsAreBitIdentical) {
  RunHooks hooks;
  hooks.keep_series = true;
  const RunResult a = run(short_four_ellipse(), hooks);
  const RunResult b = run(short_four_ellipse(), hooks);
  ASSERT_EQ(a.series.size(), b.series.size());
  for (std::size_t i = 0; i < a.series.size(); ++i) {
    EXPECT_EQ(a.series[i].w_inf, b.series[i].w_inf);
    EXPECT_EQ(a.series[i].area, b.series[i].area);
  }
  EXPECT_EQ(all_markers(a.final_state.system), all_markers(b.final_state.system));
}

TEST(Runner, SteadyCircleStaysAtRest) {
  Scenario s = preset("steady_circle");
  s.t_end = 0.05;
  RunHooks hooks;
  hooks.keep_series = true;
  const RunResult r = run(s, hooks);
  EXPECT_EQ(r.report.t_c, 0.0);
  for (const auto& row : r.series) EXPECT_LE(row.max_abs_V, 1e-8);
}

TEST(Runner, SolverFailureFlushesState) {
  Scenario s = short_four_ellipse();
  s.gmres_max_iter = 1;
  s.gmres_tol = 1e-14;
  s.out_dir = scratch("failure").string();
  EXPECT_THROW(run(s), SolverError);
  const std::string report = slurp(fs::path(s.out_dir) / "report.txt");
  EXPECT_NE(report.find("stop_reason: error"), std::string::npos);
  EXPECT_TRUE(fs::exists(fs::path(s.out_dir) / "final.txt"));
}

TEST(Runner, ModeAmplitudesOfInitialShape) {
  const InterfaceCurve c = resample_equal_arclength(PerturbedCircle{{0, 0}, 2.0, 0.01, 4}, 256);
  const ModeAmplitudes m = mode_amplitudes(c, {0, 0}, 4);
  EXPECT_NEAR(m.R, 2.0, 1e-12);
  EXPECT_NEAR(m.delta, 0.01, 1e-12);
}

TEST(Runner, ReflectionDefect) {
  const auto sym = all_markers(build_system(preset("four_ellipse")));
  EXPECT_LT(reflection_defect(sym, {1, 0}), 1e-12);
  EXPECT_LT(reflection_defect(sym, {0, 1}), 1e-12);
  EXPECT_LT(reflection_defect(sym, {1, 1}), 1e-12);

  InterfaceSystem skew;
  skew.r_inf = 4;
  skew.sigma = 0.47;
  skew.curves.push_back(resample_equal_arclength(Ellipse{{1, 0.5}, 1.5, 1.0, 0.3}, 64));
  EXPECT_GT(reflection_defect(all_markers(skew), {1, 0}), 0.1);
}

TEST(Runner, LinearCompareNeedsOnePerturbedCircle) {
  EXPECT_THROW(linear_compare(preset("four_ellipse"), 0.01), ConfigError);
}
