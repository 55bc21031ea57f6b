#pragma once

// Reference values computed independently of the library: adaptive
// Gauss-Kronrod quadrature over the analytic ellipse parametrization
// x(t) = c + R(rot) (a cos t, b sin t), t in [0, 2pi].

#include <functional>

#include "okbim/geometry.hpp"

namespace oracle {

using okbim::Vec2;

double ellipse_perimeter(double a, double b);

/// Polar area (1/2) int r(phi)^2 dphi of r = R + delta cos(k phi).
double perturbed_circle_area(double R, double delta, int k);

using Density = std::function<double(Vec2)>;

/// (1/2pi) int f(x) ln|target - x| ds over the ellipse; target off the curve.
double single_layer(const okbim::Ellipse& e, const Density& f, Vec2 target);

/// (1/2pi) int f(x) (x - target).n(x) / |x - target|^2 ds; target off the curve.
double double_layer(const okbim::Ellipse& e, const Density& f, Vec2 target);

}  // namespace oracle
