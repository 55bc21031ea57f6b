#include "okbim/linear_analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <ostream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/numeric/odeint/integrate/integrate_const.hpp>
#include <boost/numeric/odeint/stepper/runge_kutta4.hpp>

#include "okbim/errors.hpp"

namespace okbim::linear {

namespace {

void check_state(const LinearState& s) {
  if (!(s.R > 0.0) || !(s.R < s.r_inf)) throw Error("linear state needs 0 < R < R_inf");
  if (s.k < 1) throw Error("linear state needs a mode k >= 1");
  if (!(s.sigma >= 0.0)) throw Error("linear state needs sigma >= 0");
}

// sigma (k^2 - 1)/R^2 + R/2 - R_inf^2/(2R): the bracket shared by A+, B+ and the growth rate.
double outer_bracket(const LinearState& s) {
  const double k2m1 = static_cast<double>(s.k) * s.k - 1.0;
  return s.sigma * k2m1 / (s.R * s.R) + 0.5 * s.R - s.r_inf * s.r_inf / (2.0 * s.R);
}

}  // namespace

double steady_radius(double r_inf) {
  if (!(r_inf > 0.0)) throw Error("R_inf must be positive");
  return r_inf / std::sqrt(2.0);
}

RadialProfile u_fields(double R, double r_inf, double sigma, double r) {
  if (!(R > 0.0) || !(r >= 0.0) || r > r_inf) throw Error("u_fields needs R > 0 and 0 <= r <= R_inf");
  const double half_inf2 = 0.5 * r_inf * r_inf;
  RadialProfile p;
  p.inner = 0.25 * (r * r - R * R) + sigma / R;
  p.inner_dr = 0.5 * r;
  if (r > 0.0) {
    p.outer = -0.25 * r * r + half_inf2 * std::log(r) + sigma / R + 0.25 * R * R -
              half_inf2 * std::log(R);
    p.outer_dr = -0.5 * r + half_inf2 / r;
  }
  return p;
}

LinearFields perturbation_coefficients(const LinearState& s) {
  check_state(s);
  const double k = s.k;
  const double Rk = std::pow(s.R, k);
  const double Rinf2k = std::pow(s.r_inf, 2.0 * k);
  const double denom = Rk * Rk + Rinf2k;
  const double bracket = outer_bracket(s);
  LinearFields f;
  f.A_minus = s.sigma * (k * k - 1.0) / std::pow(s.R, k + 2.0) - 0.5 / std::pow(s.R, k - 1.0);
  f.A_plus = Rk / denom * bracket;
  f.B_plus = Rk * Rinf2k / denom * bracket;
  return f;
}

double growth_rate(const LinearState& s) {
  check_state(s);
  const double k = s.k;
  const double R2k = std::pow(s.R, 2.0 * k);
  const double Rinf2k = std::pow(s.r_inf, 2.0 * k);
  const double p1 = outer_bracket(s);
  const double t1 = s.sigma * (k * k - 1.0) / std::pow(s.R, 3) - 0.5;
  const double t2 = p1 * std::pow(s.R, 2.0 * k - 1.0) / (R2k + Rinf2k);
  const double t3 = p1 * Rinf2k / (s.R * (R2k + Rinf2k));
  return -s.r_inf * s.r_inf / (4.0 * s.R * s.R) + k * (t2 - t3) / 2.0 - k * t1 / 2.0 - 0.5;
}

Rates ode_rhs(const LinearState& s) {
  check_state(s);
  return {s.r_inf * s.r_inf / (4.0 * s.R) - 0.5 * s.R, growth_rate(s) * s.delta};
}

std::vector<TrajectoryPoint> integrate(const LinearState& initial, double dt, double t_end) {
  if (!(dt > 0.0)) throw Error("integration step must be positive");
  check_state(initial);
  namespace odeint = boost::numeric::odeint;
  using Vector = std::array<double, 2>;

  auto rhs = [&initial](const Vector& y, Vector& dydt, double) {
    LinearState s = initial;
    s.R = y[0];
    s.delta = y[1];
    const Rates r = ode_rhs(s);
    dydt = {r.dR, r.ddelta};
  };

  std::vector<TrajectoryPoint> out;
  Vector y{initial.R, initial.delta};
  const auto steps = static_cast<long>(std::llround(t_end / dt));
  out.reserve(static_cast<std::size_t>(steps) + 1);
  odeint::integrate_const(odeint::runge_kutta4<Vector>{}, rhs, y, 0.0, steps * dt, dt,
                          [&out](const Vector& v, double t) { out.push_back({t, v[0], v[1]}); });
  return out;
}

double compute_sigma() {
  constexpr double phi_minus = -1.0;
  constexpr double phi_plus = 1.0;
  auto F = [](double phi) { return 0.25 * phi * phi * phi * phi - 0.5 * phi * phi; };
  const double F_min = F(phi_minus);
  auto integrand = [&](double phi) { return std::sqrt(std::max(0.0, 2.0 * (F(phi) - F_min))); };
  const double integral = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      integrand, phi_minus, phi_plus, 10, 1e-14);
  return integral / (phi_plus - phi_minus);
}

void write_trajectory_csv(std::ostream& out, std::span<const TrajectoryPoint> trajectory) {
  out << "t,R,delta\n";
  char line[96];
  for (const auto& p : trajectory) {
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g\n", p.t, p.R, p.delta);
    out << line;
  }
}

}  // namespace okbim::linear
