#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "netrecon/game.hpp"
#include "netrecon/graph.hpp"

namespace netrecon {

/// |X[f]| for f = 0..T-1 of a real sequence of length T.
using Spectrum = std::vector<double>;

/// Exact-length DFT magnitudes. Throws ParameterError when T < 2.
Spectrum dft_magnitudes(std::span<const double> x);

struct StrengthOptions {
  /// Leading samples dropped before the transform.
  std::size_t burn_in = 0;
};

/// Spectral strength of one row: (1/T) * sum of |X[f]| over f = 1..floor(T/2),
/// where T is the length after burn-in. DC is excluded; for even T the
/// Nyquist bin is counted once.
double spectral_strength(std::span<const double> x);

/// Strengths for the usable (observable, non-suppressed) nodes of a series.
struct StrengthVector {
  std::vector<NodeId> nodes;     // ascending node ids
  std::vector<double> strength;  // parallel to `nodes`
  std::size_t max_frequency = 0;  // F = {1, ..., max_frequency}

  std::size_t size() const noexcept { return nodes.size(); }
};

/// Throws InputError if no row is usable; ParameterError if fewer than two
/// samples remain after burn-in.
StrengthVector strength(const PayoffSeries& series, const StrengthOptions& options = {});

}  // namespace netrecon
