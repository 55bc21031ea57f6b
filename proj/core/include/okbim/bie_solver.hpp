#pragma once

// Collocated boundary integral system for the normal velocity V and the
// far-field constant w_inf:
//
//   w_inf + 2 S[V](x_i) = sigma kappa(x_i) - S[x'.n'](x_i) + D[|x'|^2/2](x_i)
//   sum_curves int V ds  = J
//
// S and D sum over all curves. Unknowns are ordered
// [V(curve 1), ..., V(curve M), w_inf], with the flux constraint as the last row.

#include <optional>
#include <span>
#include <vector>

#include "okbim/geometry.hpp"
#include "okbim/potentials.hpp"

namespace okbim {

struct FluxPhase {
  double J = 0.0;
  bool forced_zero = false;
};

struct FieldSolution {
  std::vector<double> V;  ///< all nodes, curve by curve
  double w_inf = 0.0;
  double residual = 0.0;
  int iterations = 0;
  bool near_singular = false;
};

struct SolverOptions {
  double tol = 1e-10;
  int max_iter = 500;
  SmoothRule rule = SmoothRule::AlternatingPoint;
};

struct RightHandSide {
  std::vector<double> values;
  bool near_singular = false;
};

/// b_i = sigma kappa_i - S[x'.n'](x_i) + D[|x'|^2/2](x_i).
RightHandSide assemble_rhs(std::span<const CurveNodes> curves, double sigma,
                           SmoothRule rule = SmoothRule::AlternatingPoint);

/// J = R_inf^2 pi/2 - total interior area, or 0 once the phase is forced.
double flux_target(const InterfaceSystem& system, const FluxPhase& phase);

struct OperatorValue {
  std::vector<double> nodes;
  double constraint = 0.0;
};

/// Per-node w_inf + 2 S[V](x_i); constraint sum_curves sum_j V_j s_alpha h.
OperatorValue apply_operator(std::span<const double> V, double w_inf,
                             std::span<const CurveNodes> curves,
                             SmoothRule rule = SmoothRule::AlternatingPoint);

/// Solves the system for the current geometry. `warm_start`, when given,
/// seeds GMRES. Throws SolverError when GMRES misses the tolerance.
FieldSolution solve(const InterfaceSystem& system, const FluxPhase& phase,
                    const SolverOptions& options = {},
                    const FieldSolution* warm_start = nullptr);

/// Same, with node data already sampled.
FieldSolution solve(std::span<const CurveNodes> curves, double sigma, double flux,
                    const SolverOptions& options = {}, const FieldSolution* warm_start = nullptr);

}  // namespace okbim
