#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace tmc::detail {

// Real-to-complex DFT of x zero-padded to length n. Returns the n/2 + 1
// non-negative-frequency bins.
std::vector<std::complex<double>> rfft(std::span<const double> x, std::size_t n);

// Inverse of rfft for a real signal of length n; returns the first `keep`
// samples, already scaled by 1/n.
std::vector<double> irfft(std::span<const std::complex<double>> bins, std::size_t n,
                          std::size_t keep);

std::size_t next_pow2(std::size_t n);

}  // namespace tmc::detail
