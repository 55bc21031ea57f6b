#include "okbim/bie_solver.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "okbim/errors.hpp"
#include "okbim/gmres.hpp"

namespace okbim {

namespace {

double constraint_row(std::span<const double> V, std::span<const CurveNodes> curves) {
  double total = 0.0;
  std::size_t offset = 0;
  for (const auto& c : curves) {
    double sum = 0.0;
    for (std::size_t j = 0; j < c.size(); ++j) sum += V[offset + j];
    total += sum * c.s_alpha * c.h();
    offset += c.size();
  }
  return total;
}

std::size_t node_count(std::span<const CurveNodes> curves) {
  std::size_t n = 0;
  for (const auto& c : curves) n += c.size();
  return n;
}

}  // namespace

RightHandSide assemble_rhs(std::span<const CurveNodes> curves, double sigma, SmoothRule rule) {
  RightHandSide rhs;
  rhs.values.reserve(node_count(curves));
  for (const auto& c : curves) {
    for (double k : c.curvature) rhs.values.push_back(sigma * k);
  }

  std::size_t target_offset = 0;
  for (std::size_t a = 0; a < curves.size(); ++a) {
    const CurveNodes& target = curves[a];
    for (std::size_t b = 0; b < curves.size(); ++b) {
      const CurveNodes& src = curves[b];
      std::vector<double> xn(src.size()), half_r2(src.size());
      for (std::size_t j = 0; j < src.size(); ++j) {
        xn[j] = dot(src.position[j], src.normal[j]);
        half_r2[j] = 0.5 * norm2(src.position[j]);
      }
      std::vector<double> single, dbl;
      if (a == b) {
        single = single_layer_self(xn, src, rule);
        dbl = double_layer_self(half_r2, src);
      } else {
        CrossEvaluation s = single_layer_cross(xn, src, target.position);
        CrossEvaluation d = double_layer(half_r2, src, target.position);
        rhs.near_singular = rhs.near_singular || s.near_singular || d.near_singular;
        single = std::move(s.values);
        dbl = std::move(d.values);
      }
      for (std::size_t i = 0; i < target.size(); ++i) {
        rhs.values[target_offset + i] += dbl[i] - single[i];
      }
    }
    target_offset += target.size();
  }
  return rhs;
}

double flux_target(const InterfaceSystem& system, const FluxPhase& phase) {
  if (phase.forced_zero) return 0.0;
  return 0.5 * std::numbers::pi * system.r_inf * system.r_inf - total_interior_area(system);
}

OperatorValue apply_operator(std::span<const double> V, double w_inf,
                             std::span<const CurveNodes> curves, SmoothRule rule) {
  const SingleLayerOperator single(curves, rule);
  if (V.size() != single.size()) throw GridError("velocity vector has the wrong length");
  OperatorValue out;
  out.nodes.resize(V.size());
  single.apply(V, out.nodes);
  for (double& v : out.nodes) v = w_inf + 2.0 * v;
  out.constraint = constraint_row(V, curves);
  return out;
}

FieldSolution solve(std::span<const CurveNodes> curves, double sigma, double flux,
                    const SolverOptions& options, const FieldSolution* warm_start) {
  const SingleLayerOperator single(curves, options.rule);
  const std::size_t n = single.size();

  RightHandSide rhs = assemble_rhs(curves, sigma, options.rule);
  std::vector<double> b = std::move(rhs.values);
  b.push_back(flux);

  const LinearOperator op = [&](std::span<const double> x, std::span<double> y) {
    const auto V = x.first(n);
    single.apply(V, y.first(n));
    const double w_inf = x[n];
    for (std::size_t i = 0; i < n; ++i) y[i] = w_inf + 2.0 * y[i];
    y[n] = constraint_row(V, curves);
  };

  std::vector<double> x0;
  if (warm_start != nullptr && warm_start->V.size() == n) {
    x0 = warm_start->V;
    x0.push_back(warm_start->w_inf);
  }

  GmresResult result = gmres(op, b, x0, options.tol, options.max_iter);
  if (!result.converged) {
    throw SolverError("GMRES did not converge: relative residual " +
                          std::to_string(result.residual) + " after " +
                          std::to_string(result.iterations) + " iterations",
                      std::move(result.x), result.residual);
  }

  FieldSolution sol;
  sol.w_inf = result.x[n];
  result.x.pop_back();
  sol.V = std::move(result.x);
  sol.residual = result.residual;
  sol.iterations = result.iterations;
  sol.near_singular = rhs.near_singular || single.near_singular();
  return sol;
}

FieldSolution solve(const InterfaceSystem& system, const FluxPhase& phase,
                    const SolverOptions& options, const FieldSolution* warm_start) {
  const std::vector<CurveNodes> curves = sample_nodes(system);
  return solve(curves, system.sigma, flux_target(system, phase), options, warm_start);
}

}  // namespace okbim
