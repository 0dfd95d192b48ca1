#pragma once

#include <complex>
#include <span>
#include <vector>

namespace pinkam {

// In-place iterative Cooley-Tukey transform; size must be a power of two.
void fft_pow2(std::vector<std::complex<double>>& a, bool inverse);

// Forward DFT of arbitrary length (radix-2 when possible, Bluestein otherwise).
std::vector<std::complex<double>> dft(std::vector<std::complex<double>> a);

// Inverse DFT including the 1/n factor.
std::vector<std::complex<double>> idft(std::vector<std::complex<double>> a);

std::vector<std::complex<double>> dft_real(std::span<const double> x);

}  // namespace pinkam
