#pragma once

// Run artifacts:
//   series.csv            t,J,w_inf,max_abs_V,s_alpha_1..M,area_1..M
//   snapshots/t_<i>.txt   "t=<value> M=<count>", then one blank-line-separated
//                         block of "x y" rows per curve, in node order
//   report.txt            key: value lines describing how the run ended

#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "okbim/bie_solver.hpp"
#include "okbim/dynamics.hpp"

namespace okbim {

struct SeriesRecord {
  double t = 0.0;
  double J = 0.0;
  double w_inf = 0.0;
  double max_abs_V = 0.0;
  std::vector<double> s_alpha;
  std::vector<double> area;
};

SeriesRecord make_record(const EvolutionState& state, const FieldSolution& solution);

std::string series_header(std::size_t curves);
void write_series_row(std::ostream& out, const SeriesRecord& record);

/// Parses series.csv; throws ConfigError when the header does not match the contract.
std::vector<SeriesRecord> read_series(std::istream& in);

struct Snapshot {
  double t = 0.0;
  std::vector<std::vector<Vec2>> curves;
};

void write_snapshot(std::ostream& out, const EvolutionState& state);
Snapshot read_snapshot(std::istream& in);

/// snapshots/t_<index>.txt, index zero-padded to six digits.
std::filesystem::path snapshot_path(const std::filesystem::path& run_dir, long index);

struct GmresStats {
  long solves = 0;
  long total_iterations = 0;
  int max_iterations = 0;
  double max_residual = 0.0;

  void add(const FieldSolution& solution);
  double mean_iterations() const;
};

struct RunReport {
  std::string scenario;
  std::string stop_reason;  ///< to_string(StopReason) or "error"
  std::string error;        ///< what() of the exception that ended the run, if any
  std::optional<double> t_c;
  double t_final = 0.0;
  long steps = 0;
  double wall_seconds = 0.0;
  GmresStats gmres;
  bool near_singular = false;
};

void write_report(std::ostream& out, const RunReport& report);

/// Appends series rows to <run_dir>/series.csv and writes snapshots next to it.
class RunWriter {
public:
  RunWriter(std::filesystem::path run_dir, std::size_t curves);

  void record(const SeriesRecord& row);
  void snapshot(const EvolutionState& state, long index);
  void report(const RunReport& report);
  const std::filesystem::path& dir() const noexcept { return dir_; }

private:
  std::filesystem::path dir_;
  std::ofstream series_;
};

}  // namespace okbim
