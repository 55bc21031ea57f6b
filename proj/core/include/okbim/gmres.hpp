#pragma once

#include <functional>
#include <span>
#include <vector>

namespace okbim {

/// y = A x; x and y have the same length.
using LinearOperator = std::function<void(std::span<const double> x, std::span<double> y)>;

struct GmresResult {
  std::vector<double> x;
  /// ||b - A x|| / ||b|| (true residual, recomputed at exit).
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Unpreconditioned, non-restarted GMRES (Arnoldi with modified Gram-Schmidt,
/// Givens rotations). Stops when the relative residual reaches tol, on happy
/// breakdown, or after max_iter Krylov vectors. An empty x0 means a zero
/// initial guess. Never throws on non-convergence; check `converged`.
GmresResult gmres(const LinearOperator& op, std::span<const double> rhs, std::span<const double> x0,
                  double tol, int max_iter);

}  // namespace okbim
