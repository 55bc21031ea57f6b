#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "okbim/gmres.hpp"

using okbim::gmres;

TEST(Gmres, IdentityConvergesInOneIteration) {
  const std::vector<double> b{1.0, -2.0, 3.0, 0.5};
  auto identity = [](std::span<const double> x, std::span<double> y) {
    std::copy(x.begin(), x.end(), y.begin());
  };
  const auto r = gmres(identity, b, {}, 1e-12, 10);
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.iterations, 1);
  for (std::size_t i = 0; i < b.size(); ++i) EXPECT_NEAR(r.x[i], b[i], 1e-15);
}

TEST(Gmres, DiagonalSystemWithinDimensionIterations) {
  const std::vector<double> diag{1.0, 2.0, 3.0, 4.0, 5.0};
  const std::vector<double> b{1.0, 1.0, 1.0, 1.0, 1.0};
  auto op = [&](std::span<const double> x, std::span<double> y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = diag[i] * x[i];
  };
  const auto r = gmres(op, b, {}, 1e-12, 50);
  EXPECT_TRUE(r.converged);
  EXPECT_LE(r.iterations, 5);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_NEAR(r.x[i], 1.0 / diag[i], 1e-12);
}

TEST(Gmres, NonsymmetricSystem) {
  // Tridiagonal, nonsymmetric, diagonally dominant.
  const std::size_t n = 40;
  auto op = [n](std::span<const double> x, std::span<double> y) {
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = 4.0 * x[i];
      if (i > 0) y[i] -= 1.0 * x[i - 1];
      if (i + 1 < n) y[i] += 2.0 * x[i + 1];
    }
  };
  std::vector<double> truth(n), b(n);
  for (std::size_t i = 0; i < n; ++i) truth[i] = std::sin(0.3 * i);
  op(truth, b);
  const auto r = gmres(op, b, {}, 1e-12, 100);
  EXPECT_TRUE(r.converged);
  EXPECT_LE(r.residual, 1e-12);
  for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(r.x[i], truth[i], 1e-10);

  // The exact answer as initial guess needs no iterations.
  const auto warm = gmres(op, b, truth, 1e-12, 100);
  EXPECT_TRUE(warm.converged);
  EXPECT_EQ(warm.iterations, 0);
}

TEST(Gmres, ReportsNonConvergence) {
  const std::size_t n = 30;
  auto op = [n](std::span<const double> x, std::span<double> y) {
    for (std::size_t i = 0; i < n; ++i) y[i] = (1.0 + i) * x[i];
  };
  const std::vector<double> b(n, 1.0);
  const auto r = gmres(op, b, {}, 1e-14, 3);
  EXPECT_FALSE(r.converged);
  EXPECT_GT(r.residual, 1e-14);
  EXPECT_EQ(r.iterations, 3);
}

TEST(Gmres, ZeroRightHandSide) {
  const std::vector<double> b(4, 0.0);
  auto op = [](std::span<const double> x, std::span<double> y) {
    std::copy(x.begin(), x.end(), y.begin());
  };
  const auto r = gmres(op, b, {}, 1e-12, 10);
  EXPECT_TRUE(r.converged);
  for (double v : r.x) EXPECT_EQ(v, 0.0);
}
