#include "fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <mutex>
#include <stdexcept>

namespace tmc::detail {

namespace {
// FFTW plan creation/destruction is not thread-safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

std::vector<std::complex<double>> rfft(std::span<const double> x, std::size_t n) {
  if (n < x.size()) throw std::invalid_argument("rfft: n smaller than input");
  std::vector<double> in(n, 0.0);
  std::memcpy(in.data(), x.data(), x.size() * sizeof(double));
  std::vector<std::complex<double>> out(n / 2 + 1);

  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data(),
                                reinterpret_cast<fftw_complex*>(out.data()), FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  return out;
}

std::vector<double> irfft(std::span<const std::complex<double>> bins, std::size_t n,
                          std::size_t keep) {
  if (bins.size() != n / 2 + 1) throw std::invalid_argument("irfft: bin count mismatch");
  if (keep > n) throw std::invalid_argument("irfft: keep exceeds n");
  // c2r destroys its input, so work on a copy.
  std::vector<std::complex<double>> in(bins.begin(), bins.end());
  std::vector<double> out(n);

  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_dft_c2r_1d(static_cast<int>(n),
                                reinterpret_cast<fftw_complex*>(in.data()), out.data(),
                                FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
  }

  const double scale = 1.0 / static_cast<double>(n);
  out.resize(keep);
  for (double& v : out) v *= scale;
  return out;
}

}  // namespace tmc::detail
