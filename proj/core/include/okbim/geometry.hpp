#pragma once

// Closed interface curves in the equal-arclength theta-L representation.
//
// A curve with N markers is stored as its total length L, the periodic part
// q_j = theta(alpha_j) - alpha_j of the tangent angle, and the absolute
// position of the alpha = 0 marker. Orientation is counterclockwise, so the
// normal n = (sin theta, -cos theta) points out of the enclosed region.

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "okbim/vec2.hpp"

namespace okbim {

/// Ellipse with semi-axis a along the direction `rotation` (radians from +x).
struct Ellipse {
  Vec2 center;
  double a = 1.0;
  double b = 1.0;
  double rotation = 0.0;
};

/// r(phi) = radius + delta * cos(mode * phi) about `center`.
struct PerturbedCircle {
  Vec2 center;
  double radius = 1.0;
  double delta = 0.0;
  int mode = 0;
};

using Shape = std::variant<Ellipse, PerturbedCircle>;

class InterfaceCurve {
public:
  /// Throws GeometryError for L <= 0 or non-finite data and GridError for a bad N.
  InterfaceCurve(double length, std::vector<double> angle_periodic, Vec2 anchor);

  std::size_t size() const noexcept { return angle_.size(); }
  double length() const noexcept { return length_; }
  /// ds/dalpha = L / 2pi, uniform along the curve.
  double s_alpha() const noexcept;
  /// q_j = theta_j - alpha_j.
  std::span<const double> angle_periodic() const noexcept { return angle_; }
  /// Absolute position of the alpha = 0 marker.
  Vec2 anchor() const noexcept { return anchor_; }

  double alpha(std::size_t j) const noexcept;
  std::vector<double> tangent_angle() const;
  /// theta_alpha = 1 + q_alpha.
  std::vector<double> angle_derivative() const;

private:
  double length_;
  std::vector<double> angle_;
  Vec2 anchor_;
};

/// Places n markers equidistant in arclength on an analytic shape. The marker
/// alpha = 0 sits at shape parameter 0 (end of the a-axis for an ellipse,
/// polar angle 0 for a perturbed circle).
InterfaceCurve resample_equal_arclength(const Shape& shape, std::size_t n);

/// Marker positions recovered from x_alpha = (L/2pi)(cos theta, sin theta).
/// The mean of x_alpha is dropped so the recovered polygon always closes.
std::vector<Vec2> markers(const InterfaceCurve& curve);

/// kappa = theta_alpha / s_alpha.
std::vector<double> curvature(const InterfaceCurve& curve);

struct Frame {
  std::vector<Vec2> normal;
  std::vector<Vec2> tangent;
};

Frame normal_tangent(const InterfaceCurve& curve);

/// (1/2) closed integral of (x y_alpha - y x_alpha) by the trapezoid rule.
double enclosed_area(const InterfaceCurve& curve);

/// Length of the polygon through the markers.
double polygon_perimeter(std::span<const Vec2> points);

/// Everything the quadratures need at the nodes of one curve.
struct CurveNodes {
  std::vector<Vec2> position;
  std::vector<Vec2> normal;
  std::vector<double> curvature;
  double s_alpha = 0.0;
  double length = 0.0;

  std::size_t size() const noexcept { return position.size(); }
  double h() const noexcept;
};

CurveNodes sample_nodes(const InterfaceCurve& curve);

struct InterfaceSystem {
  std::vector<InterfaceCurve> curves;
  double r_inf = 1.0;
  double sigma = 1.0;

  std::size_t total_nodes() const noexcept;
};

double total_interior_area(const InterfaceSystem& system);

std::vector<CurveNodes> sample_nodes(const InterfaceSystem& system);

/// Throws GeometryError (naming the offending curves) unless the system has at
/// least one curve, sigma > 0, every curve lies inside the R_inf disk, and the
/// curves are simple and pairwise disjoint.
void validate(const InterfaceSystem& system);

/// True when the closed polygon has no self-intersections.
bool is_simple_polygon(std::span<const Vec2> points);

/// True when the two closed polygons neither cross nor contain one another.
bool polygons_disjoint(std::span<const Vec2> a, std::span<const Vec2> b);

}  // namespace okbim
