#include "okbim/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "okbim/errors.hpp"

namespace okbim {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct CurveRates {
  double length_rate = 0.0;
  spectral::Spectrum nonstiff;
  Vec2 anchor_velocity;
};

void filter(spectral::Spectrum& c, std::size_t n, const StepOptions& options) {
  if (options.filter_tol > 0.0) spectral::krasny_filter(c, options.filter_tol);
  if (options.smoothing) {
    spectral::smoothing_filter(c, n, options.smoothing_strength, options.smoothing_order);
  }
}

std::vector<std::span<const double>> split_by_curve(const InterfaceSystem& system,
                                                    std::span<const double> V) {
  if (V.size() != system.total_nodes()) {
    throw GridError("velocity length does not match the node count of the system");
  }
  std::vector<std::span<const double>> parts;
  std::size_t offset = 0;
  for (const auto& c : system.curves) {
    parts.push_back(V.subspan(offset, c.size()));
    offset += c.size();
  }
  return parts;
}

CurveRates curve_rates(const InterfaceCurve& curve, std::span<const double> V, double sigma,
                       const StepOptions& options) {
  const std::vector<double> T = tangential_velocity(curve, V);
  CurveRates r;
  r.length_rate = length_rate(curve, V);
  r.nonstiff = theta_nonstiff(curve, V, T, sigma);
  filter(r.nonstiff, curve.size(), options);
  const double theta0 = curve.tangent_angle()[0];
  r.anchor_velocity = V[0] * Vec2{std::sin(theta0), -std::cos(theta0)};
  return r;
}

double stiff_rate(std::size_t k, double sigma) {
  const double kk = static_cast<double>(k);
  return sigma * kk * kk * kk;
}

InterfaceCurve rebuild(const InterfaceCurve& curve, double length,
                       const spectral::Spectrum& angle_hat, Vec2 anchor,
                       const StepOptions& options) {
  spectral::Spectrum c = angle_hat;
  filter(c, curve.size(), options);
  return InterfaceCurve(length, spectral::inverse(c, curve.size()), anchor);
}

double pair_min_distance2(std::span<const Vec2> a, std::span<const Vec2> b) {
  double best = std::numeric_limits<double>::infinity();
  for (const Vec2& x : a) {
    for (const Vec2& y : b) best = std::min(best, norm2(x - y));
  }
  return best;
}

double self_min_distance2(std::span<const Vec2> p, std::size_t gap) {
  const std::size_t n = p.size();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + gap; j < n; ++j) {
      if (n - (j - i) < gap) break;
      best = std::min(best, norm2(p[i] - p[j]));
    }
  }
  return best;
}

}  // namespace

std::vector<double> tangential_velocity(const InterfaceCurve& curve, std::span<const double> V) {
  if (V.size() != curve.size()) throw GridError("velocity length does not match the curve");
  const std::vector<double> theta_a = curve.angle_derivative();
  std::vector<double> g(V.size());
  for (std::size_t j = 0; j < g.size(); ++j) g[j] = theta_a[j] * V[j];
  // With P the zero-mean antiderivative of g - mean(g), the linear part of the
  // running integral cancels against (alpha/2pi) int g, leaving P(0) - P(alpha).
  std::vector<double> T = spectral::periodic_antiderivative(g);
  const double p0 = T[0];
  for (double& t : T) t = p0 - t;
  return T;
}

double length_rate(const InterfaceCurve& curve, std::span<const double> V) {
  if (V.size() != curve.size()) throw GridError("velocity length does not match the curve");
  const std::vector<double> theta_a = curve.angle_derivative();
  double sum = 0.0;
  for (std::size_t j = 0; j < V.size(); ++j) sum += theta_a[j] * V[j];
  return sum * kTwoPi / static_cast<double>(V.size());
}

spectral::Spectrum theta_nonstiff(const InterfaceCurve& curve, std::span<const double> V,
                                  std::span<const double> T, double sigma) {
  const std::size_t n = curve.size();
  if (V.size() != n || T.size() != n) throw GridError("field length does not match the curve");
  const std::vector<double> V_a = spectral::derivative(V);
  const std::vector<double> theta_a = curve.angle_derivative();
  const double scale = kTwoPi / curve.length();
  std::vector<double> theta_t(n);
  for (std::size_t j = 0; j < n; ++j) theta_t[j] = scale * (-V_a[j] + T[j] * theta_a[j]);

  spectral::Spectrum out = spectral::forward(theta_t);
  const spectral::Spectrum q_hat = spectral::forward(curve.angle_periodic());
  const double s3 = std::pow(curve.s_alpha(), 3);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] += stiff_rate(k, sigma) / s3 * q_hat[k];
  return out;
}

double integrating_factor(std::size_t k, double sigma, double dt, double s_from, double s_to) {
  const double integral = 0.5 * dt * (1.0 / std::pow(s_from, 3) + 1.0 / std::pow(s_to, 3));
  return std::exp(-stiff_rate(k, sigma) * integral);
}

double integrating_factor_two_step(std::size_t k, double sigma, double dt, double s_prev,
                                   double s_now, double s_next) {
  const double integral = dt * (0.5 / std::pow(s_prev, 3) + 1.0 / std::pow(s_now, 3) +
                                0.5 / std::pow(s_next, 3));
  return std::exp(-stiff_rate(k, sigma) * integral);
}

EvolutionState bootstrap(const EvolutionState& state, const FieldSolution& solution,
                         const StepOptions& options) {
  const InterfaceSystem& sys = state.system;
  const auto parts = split_by_curve(sys, solution.V);
  const double dt = options.dt;

  EvolutionState next;
  next.system.r_inf = sys.r_inf;
  next.system.sigma = sys.sigma;
  next.t = static_cast<double>(state.steps + 1) * dt;
  next.steps = state.steps + 1;
  next.phase = state.phase;
  next.t_forced = state.t_forced;

  for (std::size_t i = 0; i < sys.curves.size(); ++i) {
    const InterfaceCurve& c = sys.curves[i];
    CurveRates r = curve_rates(c, parts[i], sys.sigma, options);
    const double L1 = c.length() + dt * r.length_rate;
    const double s0 = c.s_alpha();
    const double s1 = L1 / kTwoPi;

    spectral::Spectrum q_hat = spectral::forward(c.angle_periodic());
    for (std::size_t k = 0; k < q_hat.size(); ++k) {
      q_hat[k] = integrating_factor(k, sys.sigma, dt, s0, s1) * (q_hat[k] + dt * r.nonstiff[k]);
    }
    const Vec2 anchor = c.anchor() + dt * r.anchor_velocity;
    next.system.curves.push_back(rebuild(c, L1, q_hat, anchor, options));
    next.history.push_back({r.length_rate, std::move(r.nonstiff), s0, r.anchor_velocity});
  }
  return next;
}

EvolutionState step(const EvolutionState& state, const FieldSolution& solution,
                    const StepOptions& options) {
  if (!state.has_history()) throw Error("AB2 step requested without a previous level");
  const InterfaceSystem& sys = state.system;
  const auto parts = split_by_curve(sys, solution.V);
  const double dt = options.dt;

  EvolutionState next;
  next.system.r_inf = sys.r_inf;
  next.system.sigma = sys.sigma;
  next.t = static_cast<double>(state.steps + 1) * dt;
  next.steps = state.steps + 1;
  next.phase = state.phase;
  next.t_forced = state.t_forced;

  for (std::size_t i = 0; i < sys.curves.size(); ++i) {
    const InterfaceCurve& c = sys.curves[i];
    const CurveHistory& prev = state.history[i];
    CurveRates r = curve_rates(c, parts[i], sys.sigma, options);

    const double L1 = c.length() + 0.5 * dt * (3.0 * r.length_rate - prev.length_rate);
    const double s0 = c.s_alpha();
    const double s1 = L1 / kTwoPi;

    spectral::Spectrum q_hat = spectral::forward(c.angle_periodic());
    for (std::size_t k = 0; k < q_hat.size(); ++k) {
      const double e1 = integrating_factor(k, sys.sigma, dt, s0, s1);
      const double e2 = integrating_factor_two_step(k, sys.sigma, dt, prev.s_alpha, s0, s1);
      q_hat[k] = e1 * q_hat[k] + 0.5 * dt * (3.0 * e1 * r.nonstiff[k] - e2 * prev.nonstiff[k]);
    }
    const Vec2 anchor =
        c.anchor() + 0.5 * dt * (3.0 * r.anchor_velocity - prev.anchor_velocity);
    next.system.curves.push_back(rebuild(c, L1, q_hat, anchor, options));
    next.history.push_back({r.length_rate, std::move(r.nonstiff), s0, r.anchor_velocity});
  }
  return next;
}

EvolutionState advance(const EvolutionState& state, const FieldSolution& solution,
                       const StepOptions& options, double flux_tol) {
  EvolutionState next = state.has_history() ? step(state, solution, options)
                                            : bootstrap(state, solution, options);
  next.prev_solution = solution;
  next.phase = update_flux_phase(state.phase, next.system, flux_tol);
  if (next.phase.forced_zero && !state.phase.forced_zero) next.t_forced = next.t;
  return next;
}

FluxPhase update_flux_phase(FluxPhase phase, const InterfaceSystem& system, double tol) {
  if (phase.forced_zero) return {0.0, true};
  const double J = 0.5 * std::numbers::pi * system.r_inf * system.r_inf -
                   total_interior_area(system);
  if (std::abs(J) < tol) return {0.0, true};
  return {J, false};
}

std::string to_string(StopReason reason) {
  switch (reason) {
    case StopReason::Time: return "t_end";
    case StopReason::NearContact: return "near_contact";
    case StopReason::CurvatureBlowup: return "curvature_blowup";
  }
  return "unknown";
}

std::optional<StopReason> stop_check(const EvolutionState& state, const StopCriteria& criteria) {
  const auto& curves = state.system.curves;

  double min_length = std::numeric_limits<double>::infinity();
  double max_kappa = 0.0;
  for (const auto& c : curves) {
    min_length = std::min(min_length, c.length());
    for (double k : curvature(c)) {
      if (!std::isfinite(k)) return StopReason::CurvatureBlowup;
      max_kappa = std::max(max_kappa, std::abs(k));
    }
  }
  if (max_kappa > criteria.curvature_factor / min_length) return StopReason::CurvatureBlowup;
  if (criteria.reference_length &&
      max_kappa > criteria.curvature_factor / *criteria.reference_length) {
    return StopReason::CurvatureBlowup;
  }

  std::vector<std::vector<Vec2>> points;
  std::vector<double> spacing;
  points.reserve(curves.size());
  for (const auto& c : curves) {
    points.push_back(markers(c));
    spacing.push_back(c.length() / static_cast<double>(c.size()));
  }
  for (std::size_t a = 0; a < curves.size(); ++a) {
    const double own = std::pow(criteria.contact_factor * spacing[a], 2);
    if (self_min_distance2(points[a], criteria.self_contact_gap) < own) {
      return StopReason::NearContact;
    }
    for (std::size_t b = a + 1; b < curves.size(); ++b) {
      const double limit = criteria.contact_factor * std::max(spacing[a], spacing[b]);
      if (pair_min_distance2(points[a], points[b]) < limit * limit) {
        return StopReason::NearContact;
      }
    }
  }

  // Time is checked last so a contact at the final step is still reported.
  if (state.t >= criteria.t_end - 1e-9 * std::max(1.0, std::abs(criteria.t_end))) {
    return StopReason::Time;
  }
  return std::nullopt;
}

EvolutionState initial_state(InterfaceSystem system, double flux_tol) {
  EvolutionState state;
  state.system = std::move(system);
  state.phase = update_flux_phase({}, state.system, flux_tol);
  if (state.phase.forced_zero) state.t_forced = 0.0;
  return state;
}

}  // namespace okbim
