#include "okbim/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "okbim/errors.hpp"
#include "okbim/linear_analysis.hpp"
#include "okbim/spectral.hpp"

namespace okbim {

namespace {

constexpr double kPi = std::numbers::pi;

Ellipse ellipse(double x, double y, double a, double b, double rotation) {
  return Ellipse{{x, y}, a, b, rotation};
}

// Major axis along the ray from the origin through the centroid.
Ellipse radial(double x, double y, double a, double b) {
  return ellipse(x, y, a, b, std::atan2(y, x));
}

// Major axis perpendicular to that ray.
Ellipse tangential(double x, double y, double a, double b) {
  return ellipse(x, y, a, b, std::atan2(y, x) + 0.5 * kPi);
}

Scenario ellipse_defaults(std::string name) {
  Scenario s;
  s.name = std::move(name);
  s.sigma = 0.47;
  s.n = 128;
  s.dt = 1e-3;
  s.t_end = 12.0;
  s.output_every = 10;
  s.snapshot_every = 500;
  return s;
}

Scenario make_linear_validation() {
  Scenario s;
  s.name = "linear_validation";
  s.description = "single circle R=2 with a mode-4 perturbation of amplitude 0.01";
  s.domains = {PerturbedCircle{{0.0, 0.0}, 2.0, 0.01, 4}};
  s.r_inf = 10.0;
  s.sigma = 0.47;
  s.n = 512;
  s.dt = 2e-3;
  s.t_end = 1.0;
  s.output_every = 5;
  s.snapshot_every = 50;
  return s;
}

Scenario make_steady_circle() {
  Scenario s;
  s.name = "steady_circle";
  s.description = "circle of radius 2 holding half the area of the R_inf disk (equilibrium)";
  s.domains = {PerturbedCircle{{0.0, 0.0}, 2.0, 0.0, 0}};
  s.r_inf = 2.0 * std::sqrt(2.0);
  s.sigma = 0.47;
  s.n = 256;
  s.dt = 1e-3;
  s.t_end = 1.0;
  s.output_every = 10;
  s.snapshot_every = 100;
  return s;
}

Scenario make_two_ellipse() {
  Scenario s = ellipse_defaults("two_ellipse");
  s.description = "two ellipses a=1.5 b=1 at (2,0) and (0,2), symmetric about y=x";
  s.domains = {radial(2, 0, 1.5, 1.0), radial(0, 2, 1.5, 1.0)};
  s.r_inf = 4.0;
  return s;
}

Scenario make_three_ellipse() {
  Scenario s = ellipse_defaults("three_ellipse");
  s.description = "three ellipses a=1.5 b=1 at (2,0), (0,2), (-2,0)";
  s.domains = {radial(2, 0, 1.5, 1.0), radial(0, 2, 1.5, 1.0), radial(-2, 0, 1.5, 1.0)};
  s.r_inf = 4.0;
  return s;
}

Scenario make_four_ellipse() {
  Scenario s = ellipse_defaults("four_ellipse");
  s.description = "four ellipses a=1.5 b=1 on the axes at distance 2";
  s.domains = {radial(2, 0, 1.5, 1.0), radial(0, 2, 1.5, 1.0), radial(-2, 0, 1.5, 1.0),
               radial(0, -2, 1.5, 1.0)};
  s.r_inf = 4.0;
  return s;
}

Scenario make_seven_ellipse_a() {
  Scenario s = ellipse_defaults("seven_ellipse_a");
  s.description = "seven equal ellipses a=1.5 b=0.9; the central one shrinks and vanishes";
  const double up = 0.5 * kPi;
  s.domains = {ellipse(0, 0, 1.5, 0.9, up),     ellipse(2.5, 0, 1.5, 0.9, up),
               ellipse(5, 0, 1.5, 0.9, up),     ellipse(-2.5, 0, 1.5, 0.9, up),
               ellipse(-5, 0, 1.5, 0.9, up),    ellipse(0, 4, 1.5, 0.9, 0.0),
               ellipse(0, -4, 1.5, 0.9, kPi)};
  s.r_inf = 6.0;
  s.t_end = 6.0;
  return s;
}

Scenario make_seven_ellipse_b() {
  Scenario s = ellipse_defaults("seven_ellipse_b");
  s.description =
      "seven ellipses of three sizes; outer pair at (0,+-4.2) as in the text "
      "(the figure caption lists (0,+-4))";
  const double up = 0.5 * kPi;
  s.domains = {ellipse(0, 0, 2.0, 1.4, up),      ellipse(2.7, 0, 1.6, 0.9, up),
               ellipse(5, 0, 1.6, 0.9, up),      ellipse(-2.7, 0, 1.6, 0.9, up),
               ellipse(-5, 0, 1.6, 0.9, up),     ellipse(0, 4.2, 2.7, 1.6, 0.0),
               ellipse(0, -4.2, 2.7, 1.6, kPi)};
  s.r_inf = 6.0;
  return s;
}

Scenario make_twelve_ellipse() {
  Scenario s = ellipse_defaults("twelve_ellipse");
  s.description = "inner ring of four and outer ring of eight ellipses";
  s.domains = {radial(3.75, 0, 1.5, 0.9),     radial(0, 4, 1.5, 0.9),
               radial(-3.75, 0, 1.5, 0.9),    radial(0, -4, 1.5, 0.9),
               tangential(7.5, 0, 1.5, 0.9),  tangential(5, 5, 1.2, 0.9),
               tangential(0, 7, 1.5, 0.9),    tangential(-5, 5, 1.2, 0.9),
               tangential(-7.5, 0, 1.5, 0.9), tangential(-5, -5, 1.2, 0.9),
               tangential(0, -7, 1.5, 0.9),   tangential(5, -5, 1.2, 0.9)};
  s.r_inf = 9.0;
  s.t_end = 14.0;
  return s;
}

struct PresetEntry {
  const char* name;
  Scenario (*make)();
};

constexpr PresetEntry kPresets[] = {
    {"linear_validation", make_linear_validation}, {"steady_circle", make_steady_circle},
    {"two_ellipse", make_two_ellipse},             {"three_ellipse", make_three_ellipse},
    {"four_ellipse", make_four_ellipse},           {"seven_ellipse_a", make_seven_ellipse_a},
    {"seven_ellipse_b", make_seven_ellipse_b},     {"twelve_ellipse", make_twelve_ellipse},
};

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

class Parser {
public:
  explicit Parser(std::string_view source) : source_(source) {}

  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError(std::string(source_) + ":" + std::to_string(line_) + ": " + what);
  }

  void set_line(int line) { line_ = line; }

  double number(const std::string& key, const std::string& text) const {
    const char* begin = text.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || trim(end) != "" || !std::isfinite(v)) {
      fail("'" + key + "' expects a number, got '" + text + "'");
    }
    return v;
  }

  long integer(const std::string& key, const std::string& text) const {
    const char* begin = text.c_str();
    char* end = nullptr;
    const long v = std::strtol(begin, &end, 10);
    if (end == begin || trim(end) != "") {
      fail("'" + key + "' expects an integer, got '" + text + "'");
    }
    return v;
  }

  Vec2 point(const std::string& key, const std::string& text) const {
    const auto comma = text.find(',');
    if (comma == std::string::npos) fail("'" + key + "' expects 'x, y'");
    return {number(key, trim(text.substr(0, comma))), number(key, trim(text.substr(comma + 1)))};
  }

private:
  std::string_view source_;
  int line_ = 0;
};

struct DomainDraft {
  std::string type;
  int line = 0;
  std::optional<Vec2> center;
  std::optional<double> a, b, rotation, R, delta;
  std::optional<long> mode;
};

Shape finish_domain(const DomainDraft& d, Parser& p) {
  p.set_line(d.line);
  const Vec2 center = d.center.value_or(Vec2{0.0, 0.0});
  if (d.type == "ellipse") {
    if (!d.a || !d.b) p.fail("ellipse domain needs 'a' and 'b'");
    if (d.R || d.delta || d.mode) p.fail("ellipse domain does not take R, delta or mode");
    return Ellipse{center, *d.a, *d.b, d.rotation.value_or(0.0)};
  }
  if (d.type == "perturbed_circle") {
    if (!d.R) p.fail("perturbed_circle domain needs 'R'");
    if (d.a || d.b || d.rotation) p.fail("perturbed_circle domain does not take a, b or rotation");
    return PerturbedCircle{center, *d.R, d.delta.value_or(0.0), static_cast<int>(d.mode.value_or(0))};
  }
  if (d.type.empty()) p.fail("domain block without 'type'");
  p.fail("unknown domain type '" + d.type + "'");
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

double Scenario::sigma_value() const { return sigma ? *sigma : linear::compute_sigma(); }

long Scenario::step_count() const { return std::lround(t_end / dt); }

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& p : kPresets) names.emplace_back(p.name);
  return names;
}

Scenario preset(std::string_view name) {
  for (const auto& p : kPresets) {
    if (name == p.name) return p.make();
  }
  throw ConfigError("unknown preset '" + std::string(name) + "'");
}

Scenario parse_scenario(std::istream& in, std::string_view source) {
  Parser p(source);
  Scenario s;
  s.name = std::string(source);
  std::vector<DomainDraft> drafts;
  bool in_domain = false;

  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    p.set_line(line_no);
    const auto hash = raw.find('#');
    const std::string line = trim(std::string_view(raw).substr(0, hash));
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line != "[domain]") p.fail("unknown section " + line);
      drafts.push_back({});
      drafts.back().line = line_no;
      in_domain = true;
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) p.fail("expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (value.empty()) p.fail("'" + key + "' has no value");

    if (in_domain) {
      DomainDraft& d = drafts.back();
      if (key == "type") d.type = value;
      else if (key == "center") d.center = p.point(key, value);
      else if (key == "a") d.a = p.number(key, value);
      else if (key == "b") d.b = p.number(key, value);
      else if (key == "rotation") d.rotation = p.number(key, value);
      else if (key == "R") d.R = p.number(key, value);
      else if (key == "delta") d.delta = p.number(key, value);
      else if (key == "mode") d.mode = p.integer(key, value);
      else p.fail("unknown domain key '" + key + "'");
      continue;
    }

    if (key == "name") s.name = value;
    else if (key == "description") s.description = value;
    else if (key == "r_inf") s.r_inf = p.number(key, value);
    else if (key == "sigma") s.sigma = value == "auto" ? std::nullopt : std::optional(p.number(key, value));
    else if (key == "n") {
      const long n = p.integer(key, value);
      if (n <= 0) p.fail("'n' must be positive");
      s.n = static_cast<std::size_t>(n);
    }
    else if (key == "dt") s.dt = p.number(key, value);
    else if (key == "t_end") s.t_end = p.number(key, value);
    else if (key == "gmres_tol") s.gmres_tol = p.number(key, value);
    else if (key == "gmres_max_iter") s.gmres_max_iter = static_cast<int>(p.integer(key, value));
    else if (key == "filter_tol") s.filter_tol = p.number(key, value);
    else if (key == "flux_tol") s.flux_tol = p.number(key, value);
    else if (key == "smoothing_strength") s.smoothing_strength = p.number(key, value);
    else if (key == "smoothing_order") s.smoothing_order = static_cast<int>(p.integer(key, value));
    else if (key == "output_every") s.output_every = p.integer(key, value);
    else if (key == "snapshot_every") s.snapshot_every = p.integer(key, value);
    else if (key == "out_dir") s.out_dir = value;
    else p.fail("unknown key '" + key + "'");
  }

  for (const auto& d : drafts) s.domains.push_back(finish_domain(d, p));
  return s;
}

void write_scenario(std::ostream& out, const Scenario& s) {
  if (!s.name.empty()) out << "name = " << s.name << '\n';
  if (!s.description.empty()) out << "description = " << s.description << '\n';
  out << "r_inf = " << format_double(s.r_inf) << '\n'
      << "sigma = " << (s.sigma ? format_double(*s.sigma) : std::string("auto")) << '\n'
      << "n = " << s.n << '\n'
      << "dt = " << format_double(s.dt) << '\n'
      << "t_end = " << format_double(s.t_end) << '\n'
      << "gmres_tol = " << format_double(s.gmres_tol) << '\n'
      << "gmres_max_iter = " << s.gmres_max_iter << '\n'
      << "filter_tol = " << format_double(s.filter_tol) << '\n'
      << "flux_tol = " << format_double(s.flux_tol) << '\n'
      << "smoothing_strength = " << format_double(s.smoothing_strength) << '\n'
      << "smoothing_order = " << s.smoothing_order << '\n'
      << "output_every = " << s.output_every << '\n'
      << "snapshot_every = " << s.snapshot_every << '\n';
  if (!s.out_dir.empty()) out << "out_dir = " << s.out_dir << '\n';

  for (const Shape& shape : s.domains) {
    out << "\n[domain]\n";
    if (const auto* e = std::get_if<Ellipse>(&shape)) {
      out << "type = ellipse\n"
          << "center = " << format_double(e->center.x) << ", " << format_double(e->center.y) << '\n'
          << "a = " << format_double(e->a) << '\n'
          << "b = " << format_double(e->b) << '\n'
          << "rotation = " << format_double(e->rotation) << '\n';
    } else {
      const auto& c = std::get<PerturbedCircle>(shape);
      out << "type = perturbed_circle\n"
          << "center = " << format_double(c.center.x) << ", " << format_double(c.center.y) << '\n'
          << "R = " << format_double(c.radius) << '\n'
          << "delta = " << format_double(c.delta) << '\n'
          << "mode = " << c.mode << '\n';
    }
  }
}

Scenario load_scenario(std::string_view preset_or_path) {
  Scenario s;
  bool is_preset = false;
  for (const auto& p : kPresets) is_preset = is_preset || preset_or_path == p.name;
  if (is_preset) {
    s = preset(preset_or_path);
  } else {
    std::ifstream in{std::string(preset_or_path)};
    if (!in) {
      throw ConfigError("'" + std::string(preset_or_path) +
                        "' is neither a preset nor a readable scenario file");
    }
    s = parse_scenario(in, preset_or_path);
  }
  validate(s);
  return s;
}

void apply_full_scale(Scenario& s) {
  if (s.name == "linear_validation") {
    s.n = 1024;
    return;
  }
  s.n = 512;
  s.dt = s.name == "seven_ellipse_b" ? 2.5e-4 : 5e-4;
  s.t_end = 25.0;
  const long per_unit = std::lround(1.0 / s.dt);
  s.output_every = per_unit / 100;
  s.snapshot_every = per_unit / 2;
}

void validate(const Scenario& s) {
  auto fail = [&](const std::string& what) {
    throw ConfigError("scenario '" + s.name + "': " + what);
  };
  if (s.domains.empty()) fail("no domains");
  if (!spectral::is_power_of_two(s.n) || s.n < spectral::kMinGridSize) {
    fail("n must be a power of two >= 8, got " + std::to_string(s.n));
  }
  if (!(s.dt > 0.0)) fail("dt must be positive");
  if (!(s.t_end >= 0.0)) fail("t_end must be non-negative");
  if (!(s.r_inf > 0.0)) fail("r_inf must be positive");
  if (s.sigma && !(*s.sigma > 0.0)) fail("sigma must be positive");
  if (!(s.gmres_tol > 0.0) || s.gmres_max_iter <= 0) fail("GMRES tolerance and iteration cap must be positive");
  if (!(s.flux_tol >= 0.0)) fail("flux_tol must be non-negative");
  if (!(s.smoothing_strength >= 0.0) || s.smoothing_order <= 0) {
    fail("smoothing_strength must be non-negative and smoothing_order positive");
  }
  if (s.output_every <= 0) fail("output_every must be positive");
  if (s.snapshot_every <= 0 || s.snapshot_every % s.output_every != 0) {
    fail("snapshot_every must be a positive multiple of output_every");
  }
  const double steps = s.t_end / s.dt;
  if (std::abs(steps - std::round(steps)) > 1e-6 * std::max(1.0, steps)) {
    fail("t_end must be a whole number of steps dt");
  }
  for (const Shape& shape : s.domains) {
    if (const auto* c = std::get_if<PerturbedCircle>(&shape); c && c->delta != 0.0 && c->mode < 1) {
      fail("perturbed_circle with nonzero delta needs mode >= 1");
    }
  }
  build_system(s);
}

InterfaceSystem build_system(const Scenario& s) {
  InterfaceSystem sys;
  sys.r_inf = s.r_inf;
  sys.sigma = s.sigma_value();
  for (const Shape& shape : s.domains) sys.curves.push_back(resample_equal_arclength(shape, s.n));
  okbim::validate(sys);
  return sys;
}

}  // namespace okbim
