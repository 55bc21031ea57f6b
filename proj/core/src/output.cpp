#include "okbim/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "okbim/errors.hpp"

namespace okbim {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

double parse_cell(const std::string& cell) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(cell, &used);
  } catch (const std::exception&) {
    throw ConfigError("series.csv: malformed number '" + cell + "'");
  }
  if (used != cell.size()) throw ConfigError("series.csv: malformed number '" + cell + "'");
  return v;
}

}  // namespace

SeriesRecord make_record(const EvolutionState& state, const FieldSolution& solution) {
  SeriesRecord r;
  r.t = state.t;
  r.J = state.phase.forced_zero ? 0.0 : state.phase.J;
  r.w_inf = solution.w_inf;
  for (double v : solution.V) r.max_abs_V = std::max(r.max_abs_V, std::abs(v));
  for (const auto& c : state.system.curves) {
    r.s_alpha.push_back(c.s_alpha());
    r.area.push_back(enclosed_area(c));
  }
  return r;
}

std::string series_header(std::size_t curves) {
  std::string h = "t,J,w_inf,max_abs_V";
  for (std::size_t i = 1; i <= curves; ++i) h += ",s_alpha_" + std::to_string(i);
  for (std::size_t i = 1; i <= curves; ++i) h += ",area_" + std::to_string(i);
  return h;
}

void write_series_row(std::ostream& out, const SeriesRecord& r) {
  out << fmt(r.t) << ',' << fmt(r.J) << ',' << fmt(r.w_inf) << ',' << fmt(r.max_abs_V);
  for (double s : r.s_alpha) out << ',' << fmt(s);
  for (double a : r.area) out << ',' << fmt(a);
  out << '\n';
}

std::vector<SeriesRecord> read_series(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("series.csv: empty file");
  const std::vector<std::string> header = split_csv(line);
  if (header.size() < 6 || (header.size() - 4) % 2 != 0) {
    throw ConfigError("series.csv: unexpected column count");
  }
  const std::size_t m = (header.size() - 4) / 2;
  if (line != series_header(m)) throw ConfigError("series.csv: header does not match the column contract");

  std::vector<SeriesRecord> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != header.size()) throw ConfigError("series.csv: ragged row");
    SeriesRecord r;
    r.t = parse_cell(cells[0]);
    r.J = parse_cell(cells[1]);
    r.w_inf = parse_cell(cells[2]);
    r.max_abs_V = parse_cell(cells[3]);
    for (std::size_t i = 0; i < m; ++i) r.s_alpha.push_back(parse_cell(cells[4 + i]));
    for (std::size_t i = 0; i < m; ++i) r.area.push_back(parse_cell(cells[4 + m + i]));
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_snapshot(std::ostream& out, const EvolutionState& state) {
  out << "t=" << fmt(state.t) << " M=" << state.system.curves.size() << '\n';
  for (const auto& c : state.system.curves) {
    out << '\n';
    for (const Vec2& p : markers(c)) out << fmt(p.x) << ' ' << fmt(p.y) << '\n';
  }
}

Snapshot read_snapshot(std::istream& in) {
  Snapshot snap;
  std::string line;
  std::size_t m = 0;
  if (!std::getline(in, line) || std::sscanf(line.c_str(), "t=%lf M=%zu", &snap.t, &m) != 2) {
    throw ConfigError("snapshot: malformed header '" + line + "'");
  }
  while (std::getline(in, line)) {
    if (line.empty()) {
      snap.curves.emplace_back();
      continue;
    }
    if (snap.curves.empty()) throw ConfigError("snapshot: points before the first curve block");
    std::istringstream ss(line);
    Vec2 p;
    if (!(ss >> p.x >> p.y)) throw ConfigError("snapshot: malformed point '" + line + "'");
    snap.curves.back().push_back(p);
  }
  if (snap.curves.size() != m) throw ConfigError("snapshot: curve count does not match header");
  return snap;
}

std::filesystem::path snapshot_path(const std::filesystem::path& run_dir, long index) {
  char name[32];
  std::snprintf(name, sizeof name, "t_%06ld.txt", index);
  return run_dir / "snapshots" / name;
}

void GmresStats::add(const FieldSolution& s) {
  ++solves;
  total_iterations += s.iterations;
  max_iterations = std::max(max_iterations, s.iterations);
  max_residual = std::max(max_residual, s.residual);
}

double GmresStats::mean_iterations() const {
  return solves == 0 ? 0.0 : static_cast<double>(total_iterations) / static_cast<double>(solves);
}

void write_report(std::ostream& out, const RunReport& r) {
  out << "scenario: " << r.scenario << '\n'
      << "stop_reason: " << r.stop_reason << '\n';
  if (!r.error.empty()) out << "error: " << r.error << '\n';
  out << "t_c: " << (r.t_c ? fmt(*r.t_c) : std::string("none")) << '\n'
      << "t_final: " << fmt(r.t_final) << '\n'
      << "steps: " << r.steps << '\n'
      << "wall_seconds: " << fmt(r.wall_seconds) << '\n'
      << "gmres_solves: " << r.gmres.solves << '\n'
      << "gmres_mean_iterations: " << fmt(r.gmres.mean_iterations()) << '\n'
      << "gmres_max_iterations: " << r.gmres.max_iterations << '\n'
      << "gmres_max_residual: " << fmt(r.gmres.max_residual) << '\n'
      << "near_singular_quadrature: " << (r.near_singular ? "yes" : "no") << '\n';
}

RunWriter::RunWriter(std::filesystem::path run_dir, std::size_t curves) : dir_(std::move(run_dir)) {
  std::filesystem::create_directories(dir_ / "snapshots");
  series_.open(dir_ / "series.csv", std::ios::trunc);
  if (!series_) throw Error("cannot write " + (dir_ / "series.csv").string());
  series_ << series_header(curves) << '\n';
}

void RunWriter::record(const SeriesRecord& row) {
  write_series_row(series_, row);
  series_.flush();
}

void RunWriter::snapshot(const EvolutionState& state, long index) {
  std::ofstream out(snapshot_path(dir_, index), std::ios::trunc);
  if (!out) throw Error("cannot write snapshot " + snapshot_path(dir_, index).string());
  write_snapshot(out, state);
}

void RunWriter::report(const RunReport& r) {
  std::ofstream out(dir_ / "report.txt", std::ios::trunc);
  if (!out) throw Error("cannot write " + (dir_ / "report.txt").string());
  write_report(out, r);
}

}  // namespace okbim
