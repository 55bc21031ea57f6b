#pragma once

// Closed-form states of a single circular domain r = R + delta cos(k phi)
// in an annulus of outer radius R_inf, and the small-amplitude ODE for
// (R, delta) used as a reference for the nonlinear solver.

#include <iosfwd>
#include <span>
#include <vector>

namespace okbim::linear {

struct LinearState {
  double R = 1.0;
  double delta = 0.0;
  int k = 2;
  double r_inf = 2.0;
  double sigma = 1.0;
};

struct LinearFields {
  double A_minus = 0.0;
  double A_plus = 0.0;
  double B_plus = 0.0;
};

/// Both branches of the zeroth-order field and their radial derivatives at r.
struct RadialProfile {
  double inner = 0.0;
  double outer = 0.0;
  double inner_dr = 0.0;
  double outer_dr = 0.0;
};

struct Rates {
  double dR = 0.0;
  double ddelta = 0.0;
};

struct TrajectoryPoint {
  double t = 0.0;
  double R = 0.0;
  double delta = 0.0;
};

/// Radius whose disk holds half the area of the R_inf disk.
double steady_radius(double r_inf);

/// u- = (r^2 - R^2)/4 + sigma/R, u+ = -r^2/4 + (R_inf^2/2) ln r + sigma/R + R^2/4 - (R_inf^2/2) ln R.
RadialProfile u_fields(double R, double r_inf, double sigma, double r);

/// First-order amplitudes of w-(r) = A- r^k cos k phi and w+(r) = (A+ r^k + B+ r^-k) cos k phi.
LinearFields perturbation_coefficients(const LinearState& state);

/// Right-hand side of the (R, delta) system.
Rates ode_rhs(const LinearState& state);

/// delta_t / delta, independent of delta.
double growth_rate(const LinearState& state);

/// Classical RK4 with fixed step dt; the trajectory includes t = 0 and every step.
std::vector<TrajectoryPoint> integrate(const LinearState& initial, double dt, double t_end);

/// Interfacial tension of the quartic double well F = phi^4/4 - phi^2/2,
/// by adaptive quadrature.
double compute_sigma();

/// Writes "t,R,delta" followed by one row per point.
void write_trajectory_csv(std::ostream& out, std::span<const TrajectoryPoint> trajectory);

}  // namespace okbim::linear
