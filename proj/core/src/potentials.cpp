#include "okbim/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "okbim/errors.hpp"
#include "okbim/spectral.hpp"

namespace okbim {

namespace {

constexpr double kInvTwoPi = 0.5 / std::numbers::pi;

void check_density(std::span<const double> density, const CurveNodes& curve) {
  if (density.size() != curve.size()) {
    throw GridError("density length " + std::to_string(density.size()) +
                    " does not match curve node count " + std::to_string(curve.size()));
  }
}

// ln(|x_i - x_j| / (2 |sin((a_i - a_j)/2)|)), with the limit ln(s_alpha) on the diagonal.
double smooth_log_remainder(const CurveNodes& c, std::size_t i, std::size_t j) {
  if (i == j) return std::log(c.s_alpha);
  const double da = c.h() * (static_cast<double>(i) - static_cast<double>(j));
  return 0.5 * std::log(norm2(c.position[i] - c.position[j])) -
         std::log(2.0 * std::abs(std::sin(0.5 * da)));
}

// Quadrature weight of node j for target i in the smooth-remainder sum.
double smooth_weight(SmoothRule rule, std::size_t i, std::size_t j, double h) {
  if (rule == SmoothRule::Trapezoid) return h;
  return ((i + j) % 2 == 1) ? 2.0 * h : 0.0;
}

// Circulant weights w_m of the log-kernel convolution on the grid:
// int f(a') ln 2|sin((a_i - a')/2)| da' = sum_j w_{(i-j) mod N} f_j.
std::vector<double> log_kernel_weights(std::size_t n) {
  std::vector<double> delta(n, 0.0);
  delta[0] = 1.0;
  return spectral::log_kernel_convolution(delta);
}

double near_threshold(const CurveNodes& source) {
  return 0.1 * source.length / static_cast<double>(source.size());
}

}  // namespace

std::vector<double> single_layer_self(std::span<const double> density, const CurveNodes& curve,
                                      SmoothRule rule) {
  check_density(density, curve);
  const std::size_t n = curve.size();
  const double h = curve.h();
  std::vector<double> out = spectral::log_kernel_convolution(density);
  for (std::size_t i = 0; i < n; ++i) {
    double smooth = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double w = smooth_weight(rule, i, j, h);
      if (w != 0.0) smooth += w * density[j] * smooth_log_remainder(curve, i, j);
    }
    out[i] = curve.s_alpha * kInvTwoPi * (out[i] + smooth);
  }
  return out;
}

CrossEvaluation single_layer_cross(std::span<const double> density, const CurveNodes& source,
                                   std::span<const Vec2> targets) {
  check_density(density, source);
  const double w = source.s_alpha * source.h() * kInvTwoPi;
  const double near2 = std::pow(near_threshold(source), 2);
  CrossEvaluation result;
  result.values.resize(targets.size());
  for (std::size_t i = 0; i < targets.size(); ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < source.size(); ++j) {
      const double r2 = norm2(targets[i] - source.position[j]);
      if (r2 < near2) result.near_singular = true;
      sum += density[j] * 0.5 * std::log(r2);
    }
    result.values[i] = w * sum;
  }
  return result;
}

std::vector<double> double_layer_self(std::span<const double> density, const CurveNodes& curve) {
  check_density(density, curve);
  const std::size_t n = curve.size();
  const double w = curve.s_alpha * curve.h() * kInvTwoPi;
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      double kernel;
      if (i == j) {
        kernel = 0.5 * curve.curvature[i];
      } else {
        const Vec2 d = curve.position[j] - curve.position[i];
        kernel = dot(d, curve.normal[j]) / norm2(d);
      }
      sum += density[j] * kernel;
    }
    out[i] = w * sum;
  }
  return out;
}

CrossEvaluation double_layer(std::span<const double> density, const CurveNodes& source,
                             std::span<const Vec2> targets) {
  check_density(density, source);
  const double w = source.s_alpha * source.h() * kInvTwoPi;
  const double near2 = std::pow(near_threshold(source), 2);
  CrossEvaluation result;
  result.values.resize(targets.size());
  for (std::size_t i = 0; i < targets.size(); ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < source.size(); ++j) {
      const Vec2 d = source.position[j] - targets[i];
      const double r2 = norm2(d);
      if (r2 == 0.0) throw GeometryError("double-layer target coincides with a source node");
      if (r2 < near2) result.near_singular = true;
      sum += density[j] * dot(d, source.normal[j]) / r2;
    }
    result.values[i] = w * sum;
  }
  return result;
}

SingleLayerOperator::SingleLayerOperator(std::span<const CurveNodes> curves, SmoothRule rule,
                                         std::size_t max_cached_bytes)
    : curves_(curves), rule_(rule) {
  offsets_.reserve(curves.size() + 1);
  offsets_.push_back(0);
  for (const auto& c : curves) offsets_.push_back(offsets_.back() + c.size());
  total_ = offsets_.back();

  for (std::size_t a = 0; a < curves.size(); ++a) {
    for (std::size_t b = 0; b < curves.size(); ++b) {
      if (a == b) continue;
      const double near2 = std::pow(near_threshold(curves[b]), 2);
      for (const Vec2& x : curves[a].position) {
        for (const Vec2& y : curves[b].position) {
          if (norm2(x - y) < near2) near_singular_ = true;
        }
      }
    }
  }

  if (total_ * total_ * sizeof(double) > max_cached_bytes) return;

  table_.assign(total_ * total_, 0.0);
  for (std::size_t b = 0; b < curves.size(); ++b) {
    const CurveNodes& src = curves[b];
    const std::size_t n = src.size();
    const double h = src.h();
    const double scale = src.s_alpha * kInvTwoPi;
    const std::vector<double> circulant = log_kernel_weights(n);
    for (std::size_t a = 0; a < curves.size(); ++a) {
      const CurveNodes& tgt = curves[a];
      for (std::size_t i = 0; i < tgt.size(); ++i) {
        double* row = &table_[(offsets_[a] + i) * total_ + offsets_[b]];
        if (a == b) {
          for (std::size_t j = 0; j < n; ++j) {
            double v = circulant[(i + n - j) % n];
            const double w = smooth_weight(rule_, i, j, h);
            if (w != 0.0) v += w * smooth_log_remainder(src, i, j);
            row[j] = scale * v;
          }
        } else {
          for (std::size_t j = 0; j < n; ++j) {
            row[j] = scale * h * 0.5 * std::log(norm2(tgt.position[i] - src.position[j]));
          }
        }
      }
    }
  }
}

void SingleLayerOperator::apply(std::span<const double> density, std::span<double> out) const {
  if (density.size() != total_ || out.size() != total_) {
    throw GridError("single-layer operator applied to a vector of the wrong length");
  }
  if (cached()) {
    for (std::size_t i = 0; i < total_; ++i) {
      const double* row = &table_[i * total_];
      double sum = 0.0;
      for (std::size_t j = 0; j < total_; ++j) sum += row[j] * density[j];
      out[i] = sum;
    }
    return;
  }

  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t b = 0; b < curves_.size(); ++b) {
    const auto f = density.subspan(offsets_[b], curves_[b].size());
    for (std::size_t a = 0; a < curves_.size(); ++a) {
      std::vector<double> part =
          a == b ? single_layer_self(f, curves_[b], rule_)
                 : single_layer_cross(f, curves_[b], curves_[a].position).values;
      for (std::size_t i = 0; i < part.size(); ++i) out[offsets_[a] + i] += part[i];
    }
  }
}

}  // namespace okbim
