#pragma once

#include <complex>
#include <vector>

namespace orowan::detail {

// In-place complex transforms (FFTW, cached plans, any length).
// fft_inverse is unnormalized: fft_inverse(fft_forward(x)) == n * x.
void fft_forward(std::vector<std::complex<double>>& buf);
void fft_inverse(std::vector<std::complex<double>>& buf);

int next_pow2(int n);

}  // namespace orowan::detail
