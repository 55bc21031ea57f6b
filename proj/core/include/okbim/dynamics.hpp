#pragma once

// Time stepping of the interface system in the theta-L frame.
//
// Each curve evolves by
//   L_t     = int theta_alpha V dalpha
//   theta_t = (2pi/L)(-V_alpha + T theta_alpha)
// with the tangential velocity T chosen so the markers stay equidistant in
// arclength. In Fourier space theta_t = -sigma |k|^3 / s_alpha^3 theta^ + N^,
// and the stiff term is absorbed by an integrating factor
//   e_k(t_a, t_b) = exp(-sigma |k|^3 int_{t_a}^{t_b} s_alpha^-3 dt)
// while N^ and L_t are advanced with Adams-Bashforth 2 (Euler for the first step).

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "okbim/bie_solver.hpp"
#include "okbim/geometry.hpp"
#include "okbim/spectral.hpp"

namespace okbim {

/// Quantities from the previous time level needed by AB2.
struct CurveHistory {
  double length_rate = 0.0;
  spectral::Spectrum nonstiff;
  double s_alpha = 0.0;
  Vec2 anchor_velocity;
};

struct EvolutionState {
  InterfaceSystem system;
  double t = 0.0;
  long steps = 0;
  FluxPhase phase;
  /// Time at which the flux was forced to zero, once that has happened.
  std::optional<double> t_forced;
  /// Empty until the first step has been taken.
  std::vector<CurveHistory> history;
  std::optional<FieldSolution> prev_solution;

  bool has_history() const noexcept { return !history.empty(); }
};

struct StepOptions {
  double dt = 1e-3;
  /// Krasny cutoff on normalized Fourier coefficients; <= 0 disables it.
  double filter_tol = 1e-10;
  bool smoothing = true;
  double smoothing_strength = 10.0;
  int smoothing_order = 25;
};

/// T(alpha) = (alpha/2pi) int_0^{2pi} theta_alpha V - int_0^alpha theta_alpha V, T(0) = 0.
std::vector<double> tangential_velocity(const InterfaceCurve& curve, std::span<const double> V);

/// int_0^{2pi} theta_alpha V dalpha (trapezoid).
double length_rate(const InterfaceCurve& curve, std::span<const double> V);

/// Spectrum of theta_t minus its stiff part -sigma |k|^3 / s_alpha^3 theta^.
spectral::Spectrum theta_nonstiff(const InterfaceCurve& curve, std::span<const double> V,
                                  std::span<const double> T, double sigma);

/// e_k over one step, trapezoid rule in time.
double integrating_factor(std::size_t k, double sigma, double dt, double s_from, double s_to);

/// e_k over two steps, composite trapezoid with weights (1/2, 1, 1/2) dt.
double integrating_factor_two_step(std::size_t k, double sigma, double dt, double s_prev,
                                   double s_now, double s_next);

/// First (Euler, integrating-factor) step; produces the AB2 history.
/// `solution` must be the field solution at `state`.
EvolutionState bootstrap(const EvolutionState& state, const FieldSolution& solution,
                         const StepOptions& options);

/// AB2 step; requires history. `solution` must be the field solution at `state`.
EvolutionState step(const EvolutionState& state, const FieldSolution& solution,
                    const StepOptions& options);

/// bootstrap() or step() as appropriate, followed by the flux-phase update.
EvolutionState advance(const EvolutionState& state, const FieldSolution& solution,
                       const StepOptions& options, double flux_tol);

/// Forces J to zero (permanently) once |R_inf^2 pi/2 - A| drops below tol.
FluxPhase update_flux_phase(FluxPhase phase, const InterfaceSystem& system, double tol = 1e-3);

enum class StopReason { Time, NearContact, CurvatureBlowup };

std::string to_string(StopReason reason);

struct StopCriteria {
  double t_end = 1.0;
  /// Near contact when two nodes are closer than contact_factor * (L/N).
  double contact_factor = 2.0;
  /// Blow-up when max |kappa| > curvature_factor / min L.
  double curvature_factor = 100.0;
  /// When set, also blow-up when max |kappa| > curvature_factor / reference_length.
  /// The relative test above is scale invariant and never fires for a domain
  /// that shrinks self-similarly to a point; runs set this to the shortest
  /// initial perimeter.
  std::optional<double> reference_length;
  /// Nodes of one curve closer than this many indices apart are not tested for contact.
  std::size_t self_contact_gap = 4;
};

std::optional<StopReason> stop_check(const EvolutionState& state, const StopCriteria& criteria);

/// Fresh state at t = 0 with the flux phase already updated for the initial areas.
EvolutionState initial_state(InterfaceSystem system, double flux_tol = 1e-3);

}  // namespace okbim
