#include "fft_engine.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace droplet::detail {
namespace {

// The FFTW planner is not thread-safe; plan creation is serialized and the
// plans themselves are cached per thread so execution never shares buffers.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct PlanPair {
  fftw_complex* in = nullptr;
  fftw_complex* out = nullptr;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  explicit PlanPair(int n) {
    in = fftw_alloc_complex(static_cast<size_t>(n));
    out = fftw_alloc_complex(static_cast<size_t>(n));
    std::lock_guard<std::mutex> lock(planner_mutex());
    forward = fftw_plan_dft_1d(n, in, out, FFTW_FORWARD, FFTW_ESTIMATE);
    backward = fftw_plan_dft_1d(n, in, out, FFTW_BACKWARD, FFTW_ESTIMATE);
  }

  PlanPair(const PlanPair&) = delete;
  PlanPair& operator=(const PlanPair&) = delete;

  ~PlanPair() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(forward);
    fftw_destroy_plan(backward);
    fftw_free(in);
    fftw_free(out);
  }
};

PlanPair& plans_for(int n) {
  thread_local std::map<int, std::unique_ptr<PlanPair>> cache;
  auto it = cache.find(n);
  if (it == cache.end()) {
    it = cache.emplace(n, std::make_unique<PlanPair>(n)).first;
  }
  return *it->second;
}

}  // namespace

std::vector<std::complex<double>> forward_fft(
    const std::vector<std::complex<double>>& samples) {
  const int n = static_cast<int>(samples.size());
  if (n == 0) throw std::invalid_argument("forward_fft: empty input");
  PlanPair& p = plans_for(n);
  static_assert(sizeof(fftw_complex) == sizeof(std::complex<double>));
  std::memcpy(p.in, samples.data(), sizeof(fftw_complex) * samples.size());
  fftw_execute(p.forward);
  std::vector<std::complex<double>> spec(samples.size());
  const double scale = 1.0 / n;
  for (size_t j = 0; j < spec.size(); ++j) {
    spec[j] = std::complex<double>(p.out[j][0], p.out[j][1]) * scale;
  }
  return spec;
}

std::vector<std::complex<double>> inverse_fft(
    const std::vector<std::complex<double>>& spectrum) {
  const int n = static_cast<int>(spectrum.size());
  if (n == 0) throw std::invalid_argument("inverse_fft: empty input");
  PlanPair& p = plans_for(n);
  std::memcpy(p.in, spectrum.data(), sizeof(fftw_complex) * spectrum.size());
  fftw_execute(p.backward);
  std::vector<std::complex<double>> samples(spectrum.size());
  for (size_t j = 0; j < samples.size(); ++j) {
    samples[j] = std::complex<double>(p.out[j][0], p.out[j][1]);
  }
  return samples;
}

}  // namespace droplet::detail
