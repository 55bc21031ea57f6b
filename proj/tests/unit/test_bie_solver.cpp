#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "../support/oracles.hpp"
#include "okbim/bie_solver.hpp"
#include "okbim/errors.hpp"
#include "okbim/spectral.hpp"

using namespace okbim;

namespace {

constexpr double kPi = std::numbers::pi;

InterfaceSystem single(const Shape& s, double r_inf, double sigma, std::size_t n) {
  InterfaceSystem sys;
  sys.curves.push_back(resample_equal_arclength(s, n));
  sys.r_inf = r_inf;
  sys.sigma = sigma;
  return sys;
}

FluxPhase phase_of(const InterfaceSystem& sys) {
  return {0.5 * kPi * sys.r_inf * sys.r_inf - total_interior_area(sys), false};
}

// Mean and cos(k phi) amplitude of nodal data as functions of the polar angle.
std::pair<double, double> polar_modes(const InterfaceCurve& c, std::span<const double> v, int k) {
  const auto p = markers(c);
  const std::size_t n = p.size();
  std::vector<double> phi(n), periodic(n);
  for (std::size_t j = 0; j < n; ++j) {
    phi[j] = std::atan2(p[j].y, p[j].x);
    if (j > 0) {
      while (phi[j] < phi[j - 1] - kPi) phi[j] += 2 * kPi;
      while (phi[j] > phi[j - 1] + kPi) phi[j] -= 2 * kPi;
    }
    periodic[j] = phi[j] - c.alpha(j);
  }
  const auto dp = spectral::derivative(periodic);
  double m0 = 0.0, mk = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    m0 += v[j] * (1.0 + dp[j]);
    mk += v[j] * std::cos(k * phi[j]) * (1.0 + dp[j]);
  }
  return {m0 / n, 2.0 * mk / n};
}

}  // namespace

TEST(BieSolver, FluxTargets) {
  EXPECT_NEAR(flux_target(single(PerturbedCircle{{0, 0}, 2, 0, 0}, 10, 0.47, 64), {}), 46 * kPi, 1e-11);
  EXPECT_NEAR(flux_target(single(PerturbedCircle{{0, 0}, 2, 0, 0}, 2 * std::sqrt(2.0), 0.47, 64), {}),
              0.0, 1e-12);
  InterfaceSystem four;
  four.r_inf = 4;
  four.sigma = 0.47;
  for (Vec2 c : {Vec2{2, 0}, Vec2{0, 2}, Vec2{-2, 0}, Vec2{0, -2}}) {
    four.curves.push_back(resample_equal_arclength(Ellipse{c, 1.5, 1.0, std::atan2(c.y, c.x)}, 128));
  }
  EXPECT_NEAR(flux_target(four, {}), 2 * kPi, 1e-9);
  EXPECT_EQ(flux_target(four, {1.0, true}), 0.0);
}

TEST(BieSolver, RhsOnCircle) {
  // sigma/R - R^2 ln R + R^2/4 with the free-space kernel (1/2pi) ln r.
  const double R = 2.0, sigma = 0.47;
  const auto nodes = sample_nodes(single(PerturbedCircle{{0, 0}, R, 0, 0}, 10, sigma, 128));
  const auto rhs = assemble_rhs(nodes, sigma);
  for (double b : rhs.values) EXPECT_NEAR(b, sigma / R - R * R * std::log(R) + R * R / 4, 1e-12);
  const auto doubled = assemble_rhs(nodes, 2 * sigma);
  for (std::size_t i = 0; i < rhs.values.size(); ++i) {
    EXPECT_NEAR(doubled.values[i] - rhs.values[i], sigma * nodes[0].curvature[i], 1e-13);
  }
}

TEST(BieSolver, RhsCrossTermsMatchBruteForce) {
  const Ellipse left{{-2.5, 0.0}, 1.0, 1.0, 0.0}, right{{2.5, 0.5}, 1.0, 1.0, 0.0};
  std::vector<CurveNodes> both{sample_nodes(resample_equal_arclength(left, 128)),
                               sample_nodes(resample_equal_arclength(right, 128))};
  const auto joint = assemble_rhs(both, 0.47);
  const auto alone = assemble_rhs(std::span(both).subspan(0, 1), 0.47);
  auto xn = [&](Vec2 x) { return dot(x - right.center, x) / 1.0; };  // x.n on a unit circle
  auto half_r2 = [](Vec2 x) { return 0.5 * norm2(x); };
  for (std::size_t i : {0u, 40u, 64u, 100u}) {
    const Vec2 target = both[0].position[i];
    const double cross = oracle::double_layer(right, half_r2, target) - oracle::single_layer(right, xn, target);
    EXPECT_NEAR(joint.values[i] - alone.values[i], cross, 1e-11);
  }
}

TEST(BieSolver, OperatorOnCircle) {
  const double R = 2.0;
  const auto nodes = sample_nodes(single(PerturbedCircle{{0, 0}, R, 0, 0}, 10, 0.47, 64));
  const std::vector<double> zero(64, 0.0), v(64, 0.75);
  const auto a = apply_operator(zero, 1.25, nodes);
  for (double x : a.nodes) EXPECT_EQ(x, 1.25);
  EXPECT_EQ(a.constraint, 0.0);
  const auto b = apply_operator(v, 0.0, nodes);
  for (double x : b.nodes) EXPECT_NEAR(x, 2 * 0.75 * R * std::log(R), 1e-12);
  EXPECT_NEAR(b.constraint, 2 * kPi * R * 0.75, 1e-12);
}

TEST(BieSolver, OperatorIsLinear) {
  const auto nodes = sample_nodes(single(Ellipse{{0, 0}, 1.5, 1.0, 0.0}, 4, 0.47, 64));
  std::vector<double> f(64), g(64), h(64);
  for (std::size_t j = 0; j < 64; ++j) {
    f[j] = std::sin(0.2 * j);
    g[j] = std::cos(0.5 * j);
    h[j] = 2 * f[j] - g[j];
  }
  const auto af = apply_operator(f, 0.3, nodes), ag = apply_operator(g, -1.0, nodes);
  const auto ah = apply_operator(h, 2 * 0.3 + 1.0, nodes);
  for (std::size_t j = 0; j < 64; ++j) EXPECT_NEAR(ah.nodes[j], 2 * af.nodes[j] - ag.nodes[j], 1e-13);
  EXPECT_NEAR(ah.constraint, 2 * af.constraint - ag.constraint, 1e-13);
}

TEST(BieSolver, SteadyCircleIsAtRest) {
  const double R = 2.0, sigma = 0.47;
  for (std::size_t n : {128u, 256u}) {
    const auto sys = single(PerturbedCircle{{0, 0}, R, 0, 0}, 2 * std::sqrt(2.0), sigma, n);
    const auto sol = solve(sys, phase_of(sys));
    for (double v : sol.V) EXPECT_LE(std::abs(v), 1e-8);
    EXPECT_NEAR(sol.w_inf, sigma / R - R * R * std::log(R) + R * R / 4, 1e-8);
    EXPECT_LE(sol.residual, 1e-10);
  }
}

TEST(BieSolver, GrowingCircleHasUniformVelocity) {
  const auto sys = single(PerturbedCircle{{0, 0}, 2.0, 0, 0}, 10, 0.47, 128);
  const auto sol = solve(sys, phase_of(sys));
  for (double v : sol.V) EXPECT_NEAR(v, 11.5, 1e-9);
  const auto nodes = sample_nodes(sys);
  const auto op = apply_operator(sol.V, sol.w_inf, nodes);
  EXPECT_NEAR(op.constraint, 46 * kPi, 1e-10 * 46 * kPi);
}

TEST(BieSolver, PerturbedCircleMatchesLinearRates) {
  // dR/dt = 11.5; d(delta)/dt = 14.7248861442915 * delta at sigma = 0.47.
  const double delta = 0.01;
  const auto sys = single(PerturbedCircle{{0, 0}, 2.0, delta, 4}, 10, 0.47, 256);
  const auto sol = solve(sys, phase_of(sys));
  const auto [mean, amp] = polar_modes(sys.curves[0], sol.V, 4);
  EXPECT_NEAR(mean, 11.5, 0.01 * 11.5);
  EXPECT_NEAR(amp, 14.7248861442915 * delta, 0.01 * 14.7248861442915 * delta);
}

TEST(BieSolver, WarmStartReusesSolution) {
  const auto sys = single(Ellipse{{0, 0}, 1.5, 1.0, 0.0}, 4, 0.47, 128);
  const auto cold = solve(sys, phase_of(sys));
  const auto warm = solve(sys, phase_of(sys), {}, &cold);
  EXPECT_LE(warm.iterations, 1);
  for (std::size_t j = 0; j < cold.V.size(); ++j) EXPECT_NEAR(warm.V[j], cold.V[j], 1e-9);
}

TEST(BieSolver, ReportsNonConvergence) {
  const auto sys = single(Ellipse{{0, 0}, 1.5, 1.0, 0.0}, 4, 0.47, 128);
  SolverOptions opts;
  opts.max_iter = 2;
  opts.tol = 1e-14;
  EXPECT_THROW(solve(sys, phase_of(sys), opts), SolverError);
}
