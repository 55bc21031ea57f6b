#include "okbim/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <numeric>
#include <string>

#include "okbim/errors.hpp"

namespace okbim::spectral {

namespace {

// FFTW plans for one grid size. The planner is not thread-safe, so plan
// creation is serialized; executing a plan on caller-owned arrays is.
struct PlanPair {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
};

const PlanPair& plans_for(std::size_t n) {
  static std::mutex mutex;
  static std::map<std::size_t, PlanPair> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  const int len = static_cast<int>(n);
  std::vector<double> real(n);
  std::vector<Complex> cplx(n / 2 + 1);
  auto* c = reinterpret_cast<fftw_complex*>(cplx.data());
  constexpr unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  PlanPair p;
  p.r2c = fftw_plan_dft_r2c_1d(len, real.data(), c, flags);
  p.c2r = fftw_plan_dft_c2r_1d(len, c, real.data(), flags);
  return cache.emplace(n, p).first->second;
}

// Signed wavenumber carried by half-spectrum index k (k = N/2 is the Nyquist mode).
inline double wavenumber(std::size_t k) { return static_cast<double>(k); }

}  // namespace

void check_grid(std::size_t n) {
  if (n < kMinGridSize || !is_power_of_two(n)) {
    throw GridError("grid size " + std::to_string(n) + " is not a power of two >= 8");
  }
}

Spectrum forward(std::span<const double> f) {
  const std::size_t n = f.size();
  check_grid(n);
  std::vector<double> in(f.begin(), f.end());
  Spectrum out(n / 2 + 1);
  fftw_execute_dft_r2c(plans_for(n).r2c, in.data(), reinterpret_cast<fftw_complex*>(out.data()));
  const double scale = 1.0 / static_cast<double>(n);
  for (auto& c : out) c *= scale;
  return out;
}

std::vector<double> inverse(std::span<const Complex> c, std::size_t n) {
  check_grid(n);
  if (c.size() != n / 2 + 1) {
    throw GridError("spectrum length " + std::to_string(c.size()) + " does not match grid size " +
                    std::to_string(n));
  }
  // c2r overwrites its input.
  Spectrum in(c.begin(), c.end());
  std::vector<double> out(n);
  fftw_execute_dft_c2r(plans_for(n).c2r, reinterpret_cast<fftw_complex*>(in.data()), out.data());
  return out;
}

double mean(std::span<const double> f) {
  if (f.empty()) return 0.0;
  return std::accumulate(f.begin(), f.end(), 0.0) / static_cast<double>(f.size());
}

std::vector<double> derivative(std::span<const double> f, int order) {
  if (order < 1) throw GridError("derivative order must be >= 1");
  const std::size_t n = f.size();
  Spectrum c = forward(f);
  const Complex i{0.0, 1.0};
  for (std::size_t k = 0; k < c.size(); ++k) c[k] *= std::pow(i * wavenumber(k), order);
  c[0] = 0.0;
  if (order % 2 == 1) c[n / 2] = 0.0;
  return inverse(c, n);
}

std::vector<double> hilbert_transform(std::span<const double> f) {
  const std::size_t n = f.size();
  Spectrum c = forward(f);
  const Complex minus_i{0.0, -1.0};
  for (std::size_t k = 1; k < c.size(); ++k) c[k] *= minus_i;
  c[0] = 0.0;
  c[n / 2] = 0.0;
  return inverse(c, n);
}

std::vector<double> periodic_antiderivative(std::span<const double> f) {
  const std::size_t n = f.size();
  Spectrum c = forward(f);
  const Complex i{0.0, 1.0};
  c[0] = 0.0;
  for (std::size_t k = 1; k < c.size(); ++k) c[k] /= i * wavenumber(k);
  // The Nyquist mode has no real antiderivative on the grid.
  c[n / 2] = 0.0;
  return inverse(c, n);
}

std::vector<double> log_kernel_convolution(std::span<const double> f) {
  const std::size_t n = f.size();
  Spectrum c = forward(f);
  c[0] = 0.0;
  for (std::size_t k = 1; k < c.size(); ++k) c[k] *= -std::numbers::pi / wavenumber(k);
  return inverse(c, n);
}

void krasny_filter(std::span<Complex> c, double tol) {
  for (auto& v : c) {
    if (std::abs(v) < tol) v = 0.0;
  }
}

double smoothing_multiplier(std::size_t k, std::size_t n, double strength, int order) {
  const double ratio = 2.0 * static_cast<double>(k) / static_cast<double>(n);
  return std::exp(-strength * std::pow(ratio, order));
}

void smoothing_filter(std::span<Complex> c, std::size_t n, double strength, int order) {
  for (std::size_t k = 0; k < c.size(); ++k) c[k] *= smoothing_multiplier(k, n, strength, order);
}

}  // namespace okbim::spectral
