#include "core/fft.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pinkam {

namespace {

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

// Bluestein chirp transform: re-expresses a length-n DFT as a circular
// convolution of length >= 2n-1, evaluated with power-of-two FFTs.
std::vector<std::complex<double>> dft_bluestein(const std::vector<std::complex<double>>& x) {
  const std::size_t n = x.size();
  const std::size_t m = next_pow2(2 * n - 1);
  const double pi = std::numbers::pi;

  // chirp[j] = exp(-i*pi*j^2/n); j^2 is reduced mod 2n to keep the angle small.
  std::vector<std::complex<double>> chirp(n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::uint64_t j2 = (static_cast<std::uint64_t>(j) * j) % (2 * n);
    const double angle = -pi * static_cast<double>(j2) / static_cast<double>(n);
    chirp[j] = std::polar(1.0, angle);
  }

  std::vector<std::complex<double>> a(m), b(m);
  for (std::size_t j = 0; j < n; ++j) a[j] = x[j] * chirp[j];
  b[0] = std::conj(chirp[0]);
  for (std::size_t j = 1; j < n; ++j) b[j] = b[m - j] = std::conj(chirp[j]);

  fft_pow2(a, false);
  fft_pow2(b, false);
  for (std::size_t j = 0; j < m; ++j) a[j] *= b[j];
  fft_pow2(a, true);

  std::vector<std::complex<double>> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = a[k] * chirp[k];
  return out;
}

}  // namespace

void fft_pow2(std::vector<std::complex<double>>& a, bool inverse) {
  const std::size_t n = a.size();
  if (!is_pow2(n)) throw std::invalid_argument("fft: size must be a power of two");
  if (n == 1) return;

  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }

  const double pi = std::numbers::pi;
  std::vector<std::complex<double>> w(n / 2);
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double angle = (inverse ? 2.0 : -2.0) * pi / static_cast<double>(len);
    for (std::size_t k = 0; k < len / 2; ++k) w[k] = std::polar(1.0, angle * static_cast<double>(k));
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> u = a[i + k];
        const std::complex<double> v = a[i + k + len / 2] * w[k];
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
      }
    }
  }

  if (inverse) {
    const double inv = 1.0 / static_cast<double>(n);
    for (auto& z : a) z *= inv;
  }
}

std::vector<std::complex<double>> dft(std::vector<std::complex<double>> a) {
  if (a.empty()) throw std::invalid_argument("fft: empty input");
  if (is_pow2(a.size())) {
    fft_pow2(a, false);
    return a;
  }
  return dft_bluestein(a);
}

std::vector<std::complex<double>> idft(std::vector<std::complex<double>> a) {
  if (a.empty()) throw std::invalid_argument("fft: empty input");
  if (is_pow2(a.size())) {
    fft_pow2(a, true);
    return a;
  }
  const std::size_t n = a.size();
  for (auto& z : a) z = std::conj(z);
  a = dft_bluestein(a);
  const double inv = 1.0 / static_cast<double>(n);
  for (auto& z : a) z = std::conj(z) * inv;
  return a;
}

std::vector<std::complex<double>> dft_real(std::span<const double> x) {
  std::vector<std::complex<double>> a(x.begin(), x.end());
  return dft(std::move(a));
}

}  // namespace pinkam
