#include "okbim/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "okbim/errors.hpp"
#include "okbim/spectral.hpp"

namespace okbim {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct ShapeEval {
  Vec2 position;
  Vec2 velocity;  // d/dt of position
};

ShapeEval evaluate(const Ellipse& e, double t) {
  const Vec2 p{e.a * std::cos(t), e.b * std::sin(t)};
  const Vec2 v{-e.a * std::sin(t), e.b * std::cos(t)};
  return {e.center + rotate(p, e.rotation), rotate(v, e.rotation)};
}

ShapeEval evaluate(const PerturbedCircle& c, double t) {
  const double r = c.radius + c.delta * std::cos(c.mode * t);
  const double dr = -c.delta * c.mode * std::sin(c.mode * t);
  const Vec2 radial{std::cos(t), std::sin(t)};
  const Vec2 angular{-std::sin(t), std::cos(t)};
  return {c.center + r * radial, dr * radial + r * angular};
}

void check_shape(const Ellipse& e) {
  if (!(e.a > 0.0) || !(e.b > 0.0) || !std::isfinite(e.a) || !std::isfinite(e.b)) {
    throw GeometryError("degenerate ellipse: semi-axes must be positive");
  }
}

void check_shape(const PerturbedCircle& c) {
  if (!(c.radius > 0.0) || !(std::abs(c.delta) < c.radius) || c.mode < 0) {
    throw GeometryError("degenerate perturbed circle: need radius > |delta| and mode >= 0");
  }
}

// Arclength s(t) of a smooth periodic parametrization, represented by the
// Fourier series of the speed |p'(t)| sampled on a fine grid.
class ArclengthSeries {
public:
  explicit ArclengthSeries(const std::vector<double>& speed) : n_(speed.size()) {
    spectral::Spectrum c = spectral::forward(speed);
    mean_speed_ = c[0].real();
    const double cutoff = 1e-18 * mean_speed_;
    std::size_t last = 0;
    for (std::size_t k = 1; k < n_ / 2; ++k) {
      if (std::abs(c[k]) > cutoff) last = k;
    }
    coeffs_.assign(c.begin() + 1, c.begin() + 1 + static_cast<std::ptrdiff_t>(last));
    offset_ = periodic(0.0);
  }

  double total() const { return kTwoPi * mean_speed_; }

  double operator()(double t) const { return mean_speed_ * t + periodic(t) - offset_; }

private:
  // sum_k 2 Re(c_k e^{ikt} / (ik))
  double periodic(double t) const {
    const spectral::Complex step{std::cos(t), std::sin(t)};
    spectral::Complex rot = step;
    double sum = 0.0;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
      const double k = static_cast<double>(i + 1);
      const spectral::Complex term = coeffs_[i] * rot / spectral::Complex{0.0, k};
      sum += 2.0 * term.real();
      rot *= step;
    }
    return sum;
  }

  std::size_t n_;
  double mean_speed_ = 0.0;
  double offset_ = 0.0;
  std::vector<spectral::Complex> coeffs_;
};

template <class S>
InterfaceCurve resample(const S& shape, std::size_t n) {
  check_shape(shape);
  spectral::check_grid(n);

  const std::size_t fine = std::max<std::size_t>(32 * n, 4096);
  std::vector<double> speed(fine);
  for (std::size_t m = 0; m < fine; ++m) {
    const double t = kTwoPi * static_cast<double>(m) / static_cast<double>(fine);
    speed[m] = norm(evaluate(shape, t).velocity);
  }
  const ArclengthSeries arclength(speed);
  const double length = arclength.total();

  std::vector<double> angle(n);
  double t = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double alpha = kTwoPi * static_cast<double>(j) / static_cast<double>(n);
    const double target = length * static_cast<double>(j) / static_cast<double>(n);
    t = alpha;
    bool converged = false;
    // s(t) carries round-off of a few ulps of L, so the update stalls near
    // 1e-15 rather than reaching zero; stop at a relative floor, then polish once.
    const double floor = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(alpha));
    for (int it = 0; it < 100; ++it) {
      const double dt = (arclength(t) - target) / norm(evaluate(shape, t).velocity);
      t -= dt;
      if (std::abs(dt) < floor) {
        t -= (arclength(t) - target) / norm(evaluate(shape, t).velocity);
        converged = true;
        break;
      }
    }
    if (!converged) throw GeometryError("arclength inversion did not converge");

    const Vec2 v = evaluate(shape, t).velocity;
    double q = std::atan2(v.y, v.x) - alpha;
    if (j > 0) q -= kTwoPi * std::round((q - angle[j - 1]) / kTwoPi);
    angle[j] = q;
  }

  InterfaceCurve curve(length, std::move(angle), evaluate(shape, 0.0).position);
  if (!is_simple_polygon(markers(curve))) throw GeometryError("shape is not a simple closed curve");
  return curve;
}

double orient(Vec2 a, Vec2 b, Vec2 c) { return cross(b - a, c - a); }

bool segments_cross(Vec2 p1, Vec2 p2, Vec2 q1, Vec2 q2) {
  const double d1 = orient(q1, q2, p1);
  const double d2 = orient(q1, q2, p2);
  const double d3 = orient(p1, p2, q1);
  const double d4 = orient(p1, p2, q2);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 != 0 && d2 != 0 && d3 != 0 &&
         d4 != 0;
}

bool point_in_polygon(Vec2 p, std::span<const Vec2> poly) {
  bool inside = false;
  const std::size_t n = poly.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2 a = poly[i], b = poly[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x) inside = !inside;
    }
  }
  return inside;
}

}  // namespace

InterfaceCurve::InterfaceCurve(double length, std::vector<double> angle_periodic, Vec2 anchor)
    : length_(length), angle_(std::move(angle_periodic)), anchor_(anchor) {
  spectral::check_grid(angle_.size());
  if (!(length_ > 0.0) || !std::isfinite(length_)) {
    throw GeometryError("curve length must be positive and finite");
  }
  if (!std::isfinite(anchor_.x) || !std::isfinite(anchor_.y) ||
      !std::all_of(angle_.begin(), angle_.end(), [](double v) { return std::isfinite(v); })) {
    throw GeometryError("curve data must be finite");
  }
}

double InterfaceCurve::s_alpha() const noexcept { return length_ / kTwoPi; }

double InterfaceCurve::alpha(std::size_t j) const noexcept {
  return kTwoPi * static_cast<double>(j) / static_cast<double>(angle_.size());
}

std::vector<double> InterfaceCurve::tangent_angle() const {
  std::vector<double> theta(angle_.size());
  for (std::size_t j = 0; j < theta.size(); ++j) theta[j] = alpha(j) + angle_[j];
  return theta;
}

std::vector<double> InterfaceCurve::angle_derivative() const {
  std::vector<double> d = spectral::derivative(angle_);
  for (auto& v : d) v += 1.0;
  return d;
}

InterfaceCurve resample_equal_arclength(const Shape& shape, std::size_t n) {
  return std::visit([n](const auto& s) { return resample(s, n); }, shape);
}

namespace {

// x_alpha with its mean removed, i.e. the derivative of the closed curve that
// markers() reconstructs.
void closed_tangent(const InterfaceCurve& curve, std::vector<double>& xa, std::vector<double>& ya) {
  const std::vector<double> theta = curve.tangent_angle();
  const double sa = curve.s_alpha();
  xa.resize(theta.size());
  ya.resize(theta.size());
  for (std::size_t j = 0; j < theta.size(); ++j) {
    xa[j] = sa * std::cos(theta[j]);
    ya[j] = sa * std::sin(theta[j]);
  }
  const double mx = spectral::mean(xa), my = spectral::mean(ya);
  for (std::size_t j = 0; j < theta.size(); ++j) {
    xa[j] -= mx;
    ya[j] -= my;
  }
}

}  // namespace

std::vector<Vec2> markers(const InterfaceCurve& curve) {
  std::vector<double> xa, ya;
  closed_tangent(curve, xa, ya);
  const std::vector<double> px = spectral::periodic_antiderivative(xa);
  const std::vector<double> py = spectral::periodic_antiderivative(ya);
  std::vector<Vec2> out(curve.size());
  const Vec2 base = curve.anchor() - Vec2{px[0], py[0]};
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = base + Vec2{px[j], py[j]};
  return out;
}

std::vector<double> curvature(const InterfaceCurve& curve) {
  std::vector<double> kappa = curve.angle_derivative();
  const double inv = 1.0 / curve.s_alpha();
  for (auto& v : kappa) v *= inv;
  return kappa;
}

Frame normal_tangent(const InterfaceCurve& curve) {
  const std::vector<double> theta = curve.tangent_angle();
  Frame f;
  f.normal.resize(theta.size());
  f.tangent.resize(theta.size());
  for (std::size_t j = 0; j < theta.size(); ++j) {
    const double c = std::cos(theta[j]), s = std::sin(theta[j]);
    f.normal[j] = {s, -c};
    f.tangent[j] = {c, s};
  }
  return f;
}

double enclosed_area(const InterfaceCurve& curve) {
  std::vector<double> xa, ya;
  closed_tangent(curve, xa, ya);
  const std::vector<Vec2> x = markers(curve);
  double sum = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) sum += x[j].x * ya[j] - x[j].y * xa[j];
  const double h = kTwoPi / static_cast<double>(x.size());
  return 0.5 * h * sum;
}

double polygon_perimeter(std::span<const Vec2> points) {
  double total = 0.0;
  for (std::size_t j = 0; j < points.size(); ++j) {
    total += norm(points[(j + 1) % points.size()] - points[j]);
  }
  return total;
}

double CurveNodes::h() const noexcept { return kTwoPi / static_cast<double>(position.size()); }

CurveNodes sample_nodes(const InterfaceCurve& curve) {
  CurveNodes nodes;
  nodes.position = markers(curve);
  nodes.normal = normal_tangent(curve).normal;
  nodes.curvature = curvature(curve);
  nodes.s_alpha = curve.s_alpha();
  nodes.length = curve.length();
  return nodes;
}

std::size_t InterfaceSystem::total_nodes() const noexcept {
  std::size_t total = 0;
  for (const auto& c : curves) total += c.size();
  return total;
}

double total_interior_area(const InterfaceSystem& system) {
  double total = 0.0;
  for (const auto& c : system.curves) total += enclosed_area(c);
  return total;
}

std::vector<CurveNodes> sample_nodes(const InterfaceSystem& system) {
  std::vector<CurveNodes> out;
  out.reserve(system.curves.size());
  for (const auto& c : system.curves) out.push_back(sample_nodes(c));
  return out;
}

bool is_simple_polygon(std::span<const Vec2> points) {
  const std::size_t n = points.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = points[i], b = points[(i + 1) % n];
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;  // adjacent through the wrap
      if (segments_cross(a, b, points[j], points[(j + 1) % n])) return false;
    }
  }
  return true;
}

bool polygons_disjoint(std::span<const Vec2> a, std::span<const Vec2> b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Vec2 a0 = a[i], a1 = a[(i + 1) % a.size()];
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (segments_cross(a0, a1, b[j], b[(j + 1) % b.size()])) return false;
    }
  }
  return !point_in_polygon(a[0], b) && !point_in_polygon(b[0], a);
}

void validate(const InterfaceSystem& system) {
  if (system.curves.empty()) throw GeometryError("system has no interface curves");
  if (!(system.sigma > 0.0)) throw GeometryError("surface tension sigma must be positive");
  if (!(system.r_inf > 0.0)) throw GeometryError("outer radius R_inf must be positive");

  std::vector<std::vector<Vec2>> pts;
  pts.reserve(system.curves.size());
  for (std::size_t i = 0; i < system.curves.size(); ++i) {
    pts.push_back(markers(system.curves[i]));
    const std::string name = "D" + std::to_string(i + 1);
    for (const Vec2& p : pts.back()) {
      if (!(norm(p) < system.r_inf)) {
        throw GeometryError(name + " extends outside the R_inf disk");
      }
    }
    if (!is_simple_polygon(pts.back())) throw GeometryError(name + " is self-intersecting");
  }
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      if (!polygons_disjoint(pts[i], pts[j])) {
        throw GeometryError("D" + std::to_string(i + 1) + " and D" + std::to_string(j + 1) +
                            " overlap");
      }
    }
  }
}

}  // namespace okbim
