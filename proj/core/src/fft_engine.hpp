#pragma once

// Internal FFT layer. Forward convention: spec[f] = (1/M) sum_j g_j w^{-fj},
// w = exp(2 pi i / M), so spec[f] is the coefficient of tau^f.

#include <complex>
#include <vector>

namespace droplet::detail {

std::vector<std::complex<double>> forward_fft(
    const std::vector<std::complex<double>>& samples);

std::vector<std::complex<double>> inverse_fft(
    const std::vector<std::complex<double>>& spectrum);

/// Signed frequency of bin j on an M-point grid; the Nyquist bin counts
/// negative (it only ever holds oversampling residue here).
inline int signed_frequency(int bin, int grid_size) {
  return bin <= (grid_size - 1) / 2 ? bin : bin - grid_size;
}

}  // namespace droplet::detail
