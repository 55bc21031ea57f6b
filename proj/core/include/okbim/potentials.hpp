#pragma once

// Layer potentials with the free-space kernel G(x, x') = (1/2pi) ln|x - x'|.
//
//   single layer  S[f](x) = int f(x') G(x, x') ds'
//   double layer  D[f](x) = int f(x') dG/dn(x') ds'
//
// Self-evaluation of S splits ln|x - x'| into ln 2|sin((a - a')/2)| (done
// exactly in Fourier space) plus a smooth remainder whose diagonal value is
// ln(s_alpha). Off-curve integrands are smooth and use the trapezoid rule.

#include <cstddef>
#include <span>
#include <vector>

#include "okbim/geometry.hpp"

namespace okbim {

enum class SmoothRule {
  AlternatingPoint,  ///< nodes of opposite parity to the target, weight 2h
  Trapezoid,         ///< all nodes, diagonal from the analytic limit
};

struct CrossEvaluation {
  std::vector<double> values;
  /// Some target lies closer than 0.1 * (L/N) to the source curve.
  bool near_singular = false;
};

/// S[density] at the nodes of the curve carrying the density.
std::vector<double> single_layer_self(std::span<const double> density, const CurveNodes& curve,
                                      SmoothRule rule = SmoothRule::AlternatingPoint);

/// S[density] at targets off the source curve.
CrossEvaluation single_layer_cross(std::span<const double> density, const CurveNodes& source,
                                   std::span<const Vec2> targets);

/// D[density] at the source nodes; diagonal kernel value kappa/(4 pi).
std::vector<double> double_layer_self(std::span<const double> density, const CurveNodes& curve);

/// D[density] at targets off the source curve. Throws GeometryError if a
/// target coincides with a source node.
CrossEvaluation double_layer(std::span<const double> density, const CurveNodes& source,
                             std::span<const Vec2> targets);

/// Sum over all curves of S[density] evaluated at every node of every curve,
/// with densities and results concatenated curve by curve. Self blocks use
/// the split rule above, off-diagonal blocks the trapezoid rule.
///
/// When the full (MN)^2 table fits in `max_cached_bytes` the kernel is
/// tabulated once at construction and apply() is a dense mat-vec; otherwise
/// every apply() re-evaluates the kernel.
class SingleLayerOperator {
public:
  explicit SingleLayerOperator(std::span<const CurveNodes> curves,
                               SmoothRule rule = SmoothRule::AlternatingPoint,
                               std::size_t max_cached_bytes = std::size_t{256} << 20);

  std::size_t size() const noexcept { return total_; }
  bool cached() const noexcept { return !table_.empty(); }
  bool near_singular() const noexcept { return near_singular_; }

  void apply(std::span<const double> density, std::span<double> out) const;

private:
  std::span<const CurveNodes> curves_;
  SmoothRule rule_;
  std::vector<std::size_t> offsets_;
  std::size_t total_ = 0;
  bool near_singular_ = false;
  std::vector<double> table_;  // row-major, total_ x total_
};

}  // namespace okbim
