#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace qdm {

std::size_t next_pow2(std::size_t n);

/// In-place radix-2 decimation-in-time FFT. Size must be a power of two.
void fft_in_place(std::vector<std::complex<double>>& data);

}  // namespace qdm
