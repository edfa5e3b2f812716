#include "netrecon/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "netrecon/error.hpp"

namespace netrecon {

namespace {

// FFTW's planner is not thread-safe, executing an existing plan on fresh
// arrays is. Plans are built once per length with FFTW_ESTIMATE, which picks
// the same algorithm on every run, so results are reproducible bit for bit.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct Buffers {
  double* in = nullptr;
  fftw_complex* out = nullptr;

  explicit Buffers(std::size_t n)
      : in(fftw_alloc_real(n)), out(fftw_alloc_complex(n / 2 + 1)) {
    if (!in || !out) throw std::bad_alloc();
  }
  ~Buffers() {
    fftw_free(in);
    fftw_free(out);
  }
  Buffers(const Buffers&) = delete;
  Buffers& operator=(const Buffers&) = delete;
};

fftw_plan plan_for(std::size_t n) {
  static std::map<std::size_t, fftw_plan> cache;
  std::lock_guard lock(planner_mutex());
  auto& slot = cache[n];
  if (!slot) {
    Buffers scratch(n);
    slot = fftw_plan_dft_r2c_1d(static_cast<int>(n), scratch.in, scratch.out, FFTW_ESTIMATE);
    if (!slot) throw Error("could not create a transform plan of length " + std::to_string(n));
  }
  return slot;
}

// Real-input transform of one row into buf.out (bins 0..n/2).
void transform(fftw_plan plan, std::span<const double> x, Buffers& buf) {
  std::copy(x.begin(), x.end(), buf.in);
  fftw_execute_dft_r2c(plan, buf.in, buf.out);
}

double bin_magnitude(const fftw_complex& c) { return std::hypot(c[0], c[1]); }

double strength_of(fftw_plan plan, std::span<const double> x, Buffers& buf) {
  transform(plan, x, buf);
  const std::size_t T = x.size();
  double sum = 0.0;
  for (std::size_t f = 1; f <= T / 2; ++f) sum += bin_magnitude(buf.out[f]);
  return sum / static_cast<double>(T);
}

}  // namespace

Spectrum dft_magnitudes(std::span<const double> x) {
  const std::size_t T = x.size();
  if (T < 2) throw ParameterError("DFT needs at least 2 samples");
  Buffers buf(T);
  transform(plan_for(T), x, buf);
  Spectrum mag(T);
  for (std::size_t f = 0; f <= T / 2; ++f) mag[f] = bin_magnitude(buf.out[f]);
  // The upper half mirrors the lower half for real input.
  for (std::size_t f = T / 2 + 1; f < T; ++f) mag[f] = mag[T - f];
  return mag;
}

double spectral_strength(std::span<const double> x) {
  if (x.size() < 2) throw ParameterError("spectral strength needs at least 2 samples");
  Buffers buf(x.size());
  return strength_of(plan_for(x.size()), x, buf);
}

StrengthVector strength(const PayoffSeries& series, const StrengthOptions& options) {
  StrengthVector out;
  out.nodes = series.usable_nodes();
  if (out.nodes.empty()) throw InputError("no observable, active payoff rows to analyse");
  if (series.rounds() < options.burn_in + 2) {
    throw ParameterError("burn-in leaves fewer than 2 samples");
  }
  const std::size_t T = series.rounds() - options.burn_in;
  out.max_frequency = T / 2;
  const fftw_plan plan = plan_for(T);
  Buffers buf(T);
  out.strength.reserve(out.nodes.size());
  for (NodeId node : out.nodes) {
    out.strength.push_back(strength_of(plan, series.row(node).subspan(options.burn_in), buf));
  }
  return out;
}

}  // namespace netrecon
