#include "okbim/gmres.hpp"

#include <cmath>
#include <numeric>

#include "okbim/errors.hpp"

namespace okbim {

namespace {

double norm(std::span<const double> v) {
  return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
}

std::vector<double> residual(const LinearOperator& op, std::span<const double> rhs,
                             std::span<const double> x) {
  std::vector<double> r(rhs.size());
  op(x, r);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = rhs[i] - r[i];
  return r;
}

// One Arnoldi cycle from out.x; returns the number of Krylov vectors used.
int cycle(const LinearOperator& op, std::span<const double> rhs, double bnorm, double tol, int m,
          std::vector<double>& x, bool& breakdown) {
  const std::size_t n = rhs.size();
  std::vector<double> r = residual(op, rhs, x);
  const double beta = norm(r);

  std::vector<std::vector<double>> basis;
  basis.reserve(static_cast<std::size_t>(m) + 1);
  std::vector<std::vector<double>> hess;  // column j holds H(0..j+1, j)
  std::vector<double> cs, sn, g{beta};

  basis.emplace_back(n);
  for (std::size_t i = 0; i < n; ++i) basis[0][i] = r[i] / beta;

  int k = 0;
  breakdown = false;
  while (k < m) {
    std::vector<double> w(n);
    op(basis[static_cast<std::size_t>(k)], w);
    std::vector<double> h(static_cast<std::size_t>(k) + 2, 0.0);
    for (int i = 0; i <= k; ++i) {
      const auto& v = basis[static_cast<std::size_t>(i)];
      const double hij = std::inner_product(w.begin(), w.end(), v.begin(), 0.0);
      h[static_cast<std::size_t>(i)] = hij;
      for (std::size_t p = 0; p < n; ++p) w[p] -= hij * v[p];
    }
    const double wnorm = norm(w);
    h[static_cast<std::size_t>(k) + 1] = wnorm;

    for (int i = 0; i < k; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      const double t = cs[ui] * h[ui] + sn[ui] * h[ui + 1];
      h[ui + 1] = -sn[ui] * h[ui] + cs[ui] * h[ui + 1];
      h[ui] = t;
    }
    const auto uk = static_cast<std::size_t>(k);
    const double denom = std::hypot(h[uk], h[uk + 1]);
    cs.push_back(denom == 0.0 ? 1.0 : h[uk] / denom);
    sn.push_back(denom == 0.0 ? 0.0 : h[uk + 1] / denom);
    h[uk] = denom;
    h[uk + 1] = 0.0;
    g.push_back(-sn[uk] * g[uk]);
    g[uk] *= cs[uk];
    hess.push_back(std::move(h));
    ++k;

    if (std::abs(g[uk + 1]) / bnorm <= tol) break;
    if (wnorm <= 1e-14 * beta) {
      breakdown = true;
      break;
    }
    basis.emplace_back(n);
    for (std::size_t p = 0; p < n; ++p) basis.back()[p] = w[p] / wnorm;
  }

  // Back substitution on the k x k upper-triangular system.
  std::vector<double> y(static_cast<std::size_t>(k), 0.0);
  for (int i = k - 1; i >= 0; --i) {
    const auto ui = static_cast<std::size_t>(i);
    double s = g[ui];
    for (int j = i + 1; j < k; ++j) {
      s -= hess[static_cast<std::size_t>(j)][ui] * y[static_cast<std::size_t>(j)];
    }
    y[ui] = hess[ui][ui] == 0.0 ? 0.0 : s / hess[ui][ui];
  }
  for (int j = 0; j < k; ++j) {
    const auto& v = basis[static_cast<std::size_t>(j)];
    for (std::size_t p = 0; p < n; ++p) x[p] += y[static_cast<std::size_t>(j)] * v[p];
  }
  return k;
}

}  // namespace

GmresResult gmres(const LinearOperator& op, std::span<const double> rhs, std::span<const double> x0,
                  double tol, int max_iter) {
  const std::size_t n = rhs.size();
  if (!x0.empty() && x0.size() != n) throw GridError("gmres initial guess has the wrong length");

  GmresResult out;
  out.x = x0.empty() ? std::vector<double>(n, 0.0) : std::vector<double>(x0.begin(), x0.end());

  const double bnorm = norm(rhs);
  if (bnorm == 0.0) {
    out.x.assign(n, 0.0);
    out.converged = true;
    return out;
  }

  out.residual = norm(residual(op, rhs, out.x)) / bnorm;
  // The Givens estimate can undershoot the true residual by rounding; a
  // short extra cycle from the updated iterate closes that gap.
  while (out.residual > tol && out.iterations < max_iter) {
    bool breakdown = false;
    const int used = cycle(op, rhs, bnorm, tol, max_iter - out.iterations, out.x, breakdown);
    out.iterations += used;
    const double previous = out.residual;
    out.residual = norm(residual(op, rhs, out.x)) / bnorm;
    if (breakdown || out.residual >= previous) break;
  }
  out.converged = out.residual <= tol;
  return out;
}

}  // namespace okbim
