// Harmonic analysis with a bank of simulated resonators, no transforms.
#pragma once

#include <optional>
#include <vector>

#include "tdres/convolve.hpp"
#include "tdres/oscillator.hpp"
#include "tdres/waveform.hpp"

namespace tdres {

struct ProbeResult {
  int k;
  double omega;      // self-frequency k * 2 pi / T
  double saturated;  // saturation level of the Normalized-kernel response
  std::optional<double> calibration;  // same oscillator, unit sine at omega
  std::optional<double> estimate;     // saturated / calibration
};

/// Below this Q adjacent harmonics bleed into each other.
inline constexpr double kMinProbeQ = 10.0;

/// One oscillator per k with omega0 = k 2 pi / T and the given Q; records the
/// saturation level and, when `calibrate` is set, the unit-sine calibration.
std::vector<ProbeResult> harmonic_probe(const Waveform& input, const std::vector<int>& harmonics,
                                        double q_factor, const QuadratureConfig& q = {},
                                        bool calibrate = true);

/// saturated / calibration. Throws when the calibration run is missing.
double coefficient_estimate(const ProbeResult& probe);
double coefficient_estimate(const ProbeResult& probe, std::optional<double> calibration);

/// (2/T) integral_0^T f(t) sin(2 pi k t / T) dt.
double direct_fourier_coefficient(const Waveform& input, int k, double period,
                                  const QuadratureConfig& q = {});
/// (2/T) integral_0^T f(t) cos(2 pi k t / T) dt.
double direct_fourier_cosine(const Waveform& input, int k, double period,
                             const QuadratureConfig& q = {});
/// sqrt(a_k^2 + b_k^2): what an amplitude-only probe can see.
double direct_fourier_amplitude(const Waveform& input, int k, double period,
                                const QuadratureConfig& q = {});

/// Saturation level of `osc` driven by a unit square wave of period
/// stretch * T_o, divided by the level for period T_o.
double stretched_square_ratio(const SecondOrderOscillator& osc, double stretch,
                              const QuadratureConfig& q = {});

}  // namespace tdres
