#pragma once

// Periodic spectral primitives on uniform grids alpha_j = 2*pi*j/N, N = 2^n.
//
// Spectra are stored as the non-redundant half k = 0..N/2 of the discrete
// Fourier transform of real data, normalized so that c_k is the amplitude of
// exp(i k alpha):  f(alpha_j) = sum_k c_k exp(i k alpha_j)  (conjugate-symmetric
// completion implied).

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace okbim::spectral {

using Complex = std::complex<double>;
using Spectrum = std::vector<Complex>;

inline constexpr std::size_t kMinGridSize = 8;

constexpr bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

/// Throws GridError unless n >= 8 and n is a power of two.
void check_grid(std::size_t n);

/// Normalized half spectrum (length N/2+1) of real samples.
Spectrum forward(std::span<const double> f);

/// Real samples from a half spectrum; n is the grid size (spectrum length n/2+1).
std::vector<double> inverse(std::span<const Complex> c, std::size_t n);

double mean(std::span<const double> f);

/// m-th derivative with respect to alpha via the symbol (ik)^m.
/// The Nyquist mode is dropped for odd m so the result stays real.
std::vector<double> derivative(std::span<const double> f, int order = 1);

/// Applies -i sgn(k); the zero mode (and the Nyquist mode) map to zero.
std::vector<double> hilbert_transform(std::span<const double> f);

/// Periodic antiderivative of f - mean(f), normalized to zero mean.
std::vector<double> periodic_antiderivative(std::span<const double> f);

/// int_0^{2pi} f(a') ln(2|sin((a - a')/2)|) da' at every node: multiplier -pi/|k|.
std::vector<double> log_kernel_convolution(std::span<const double> f);

/// Zeroes every coefficient whose modulus is below tol.
void krasny_filter(std::span<Complex> c, double tol);

/// rho(k) = exp(-strength * (2|k|/N)^order).
double smoothing_multiplier(std::size_t k, std::size_t n, double strength = 10.0, int order = 25);

/// Multiplies coefficient k by smoothing_multiplier(k, n, ...).
void smoothing_filter(std::span<Complex> c, std::size_t n, double strength = 10.0, int order = 25);

}  // namespace okbim::spectral
