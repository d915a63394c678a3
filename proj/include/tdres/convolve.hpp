// Zero-state response by direct evaluation of the convolution integral
//   f_out(t) = integral_0^t h(lambda) f_inp(t - lambda) d lambda
// and the envelope, saturation, periodicity and beat analyses built on it.
#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include <json.hpp>

#include "tdres/oscillator.hpp"
#include "tdres/waveform.hpp"

namespace tdres {

/// Sampled response on a uniform grid, with the descriptors that produced it.
struct ResponseTrace {
  double t0 = 0.0;
  double dt = 0.0;
  std::vector<double> values;
  nlohmann::json input;
  nlohmann::json kernel;
  nlohmann::json quadrature;

  double time(std::size_t i) const { return t0 + dt * static_cast<double>(i); }
};

/// One sample of the extremes envelope at t_k = k * spacing.
struct EnvelopeSample {
  int k;
  double t;
  double value;
  int expected_sign;  // (-1)^(k+1)
};

struct Envelope {
  std::vector<EnvelopeSample> samples;
};

struct EnvelopeFit {
  double slope;
  double intercept;
  double max_relative_residual;
  int k_from;
  int k_to;
};

/// A local extremum of a response, located to sub-grid precision.
struct Extremum {
  double t;
  double value;
};

nlohmann::json quadrature_to_json(const QuadratureConfig& q);
QuadratureConfig quadrature_from_json(const nlohmann::json& j);

/// Convolution of `kernel` and `input` evaluated at one instant, t >= 0.
double zsr_at(const Waveform& kernel, const Waveform& input, double t,
              const QuadratureConfig& q = {});
double zsr_at(const ImpulseResponse& h, const Waveform& input, double t,
              const QuadratureConfig& q = {});

/// Integral of kernel(lambda) input(t - lambda) over lambda in [lo, hi].
double convolution_segment(const Waveform& kernel, const Waveform& input, double t, double lo,
                           double hi, const QuadratureConfig& q = {});

/// Zero-state response on the grid 0, dt, ..., horizon. For oscillatory
/// kernels dt must not exceed a 64th of the kernel period.
ResponseTrace zsr(const ImpulseResponse& h, const Waveform& input, double horizon, double dt,
                  const QuadratureConfig& q = {});

/// Response values at t_k = k * stride * (zero-crossing spacing of h), k = 1..k_max.
Envelope extreme_samples(const ImpulseResponse& h, const Waveform& input, int k_max,
                         const QuadratureConfig& q = {}, int stride = 1);
/// Same, with the Normalized kernel of `osc` (t_k = k pi / omega_d).
Envelope extreme_samples(const SecondOrderOscillator& osc, const Waveform& input, int k_max,
                         const QuadratureConfig& q = {}, int stride = 1);

/// Least-squares line through (t_k, |value_k|) for k in [k_from, k_to].
EnvelopeFit envelope_slope_fit(const Envelope& env, int k_from, int k_to);

/// Local extrema of |fn| on [lo, hi]: grid search with the given step, then a
/// parabolic vertex estimate re-evaluated through fn.
template <class Fn>
std::vector<Extremum> find_extrema(Fn&& fn, double lo, double hi, double step);

/// Local extrema of a sampled trace (parabolic interpolation, no re-evaluation).
std::vector<Extremum> trace_extrema(const ResponseTrace& trace);

struct SaturationOptions {
  KernelFlavor flavor = KernelFlavor::Normalized;
  double window_start = 8.0;  // in units of 1/gamma
  double window_end = 12.0;
};

/// Mean |local extreme| of the response over t in [8/gamma, 12/gamma].
double saturation_level(const SecondOrderOscillator& osc, const Waveform& input,
                        const QuadratureConfig& q = {}, const SaturationOptions& opts = {});

struct PeriodicTail {
  bool is_periodic;
  double measured_period;
  double max_relative_mismatch;
  double tolerance;
  double t_start;
};

/// Compares f_out(t) with f_out(t + T) past the kernel's effective length.
/// With the SimplifiedHS kernel the tail is exactly periodic after the cutoff;
/// with decaying kernels the tolerance is e^{-gamma t} at t = 12 / gamma.
PeriodicTail periodic_tail_check(const SecondOrderOscillator& osc, const Waveform& input,
                                 const QuadratureConfig& q = {},
                                 KernelFlavor flavor = KernelFlavor::SimplifiedHS);

struct BeatProfile {
  double beat_period;
  std::vector<double> minima;  // instants of the envelope minima
  std::vector<Extremum> extremes;
};

/// Beat period of the response to a unit sine at omega_drive, taken as the
/// median spacing between minima of the rectified-extremes envelope.
BeatProfile beat_profile(const SecondOrderOscillator& osc, double omega_drive, double horizon,
                         const QuadratureConfig& q = {});

// ---------------------------------------------------------------------------

template <class Fn>
std::vector<Extremum> find_extrema(Fn&& fn, double lo, double hi, double step) {
  std::vector<Extremum> out;
  if (!(hi > lo) || !(step > 0.0)) return out;
  const auto n = static_cast<std::size_t>((hi - lo) / step) + 1;
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = fn(lo + step * static_cast<double>(i));
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double a = v[i - 1];
    const double b = v[i];
    const double c = v[i + 1];
    if (!(std::abs(b) >= std::abs(a) && std::abs(b) > std::abs(c))) continue;
    const double curv = a - 2.0 * b + c;
    double offset = curv != 0.0 ? 0.5 * (a - c) / curv : 0.0;
    offset = std::clamp(offset, -1.0, 1.0);
    const double t_grid = lo + step * static_cast<double>(i);
    const double t_star = t_grid + offset * step;
    const double refined = fn(t_star);
    if (std::abs(refined) >= std::abs(b)) {
      out.push_back({t_star, refined});
    } else {
      out.push_back({t_grid, b});
    }
  }
  return out;
}

}  // namespace tdres
