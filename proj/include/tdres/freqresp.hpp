// Steady-state (phasor) amplitudes, resonance curves and half-power bandwidth.
#pragma once

#include <string>
#include <vector>

#include "tdres/convolve.hpp"
#include "tdres/oscillator.hpp"

namespace tdres {

/// v_m / sqrt(R^2 + (wL - 1/(wC))^2). Infinite at resonance when R = 0.
double steady_amplitude_exact(const RlcParams& p, double omega);

/// v_m / (2L sqrt(gamma^2 + (w - w0)^2)), valid for |w - w0| <= 0.2 w0.
double steady_amplitude_lorentzian(const RlcParams& p, double omega);

/// The RLC circuit with L = 1, v_m = 1 whose gamma and omega0 match `osc`.
RlcParams equivalent_circuit(const SecondOrderOscillator& osc);

enum class SweepMethod { Analytic, TimeDomain };

std::string to_string(SweepMethod m);
SweepMethod sweep_method_from_string(const std::string& name);

struct ResonanceCurve {
  std::vector<double> omegas;
  std::vector<double> amplitudes;
  SweepMethod method;
};

/// Analytic: the phasor amplitude of the equivalent circuit (unit v_m / L).
/// TimeDomain: the saturation level of the Normalized-kernel response to a
/// unit sine at each frequency.
ResonanceCurve resonance_sweep(const SecondOrderOscillator& osc, const std::vector<double>& omegas,
                               SweepMethod method, const QuadratureConfig& q = {});
/// Analytic amplitudes come from the phasor formula with the circuit's own v_m.
ResonanceCurve resonance_sweep(const RlcParams& p, const std::vector<double>& omegas,
                               SweepMethod method, const QuadratureConfig& q = {});

/// `points` equally spaced frequencies over [from, to].
std::vector<double> linear_grid(double from, double to, int points);

struct HalfPower {
  double omega1;
  double omega2;
  double delta_omega;
  double q_est;
  double omega_peak;
};

/// Crossings of peak / sqrt(2) by linear interpolation on either side of the peak.
HalfPower half_power(const ResonanceCurve& curve);

struct TransientDuration {
  double seconds;        // 1 / gamma
  double q_t_o_over_pi;  // (1/pi) Q T_o, identical to 1/gamma
};

TransientDuration transient_duration(const SecondOrderOscillator& osc);

/// Time for the extremes envelope of the response to `input` to reach
/// (1 - 1/e) of its saturation level, interpolated between successive extremes.
double envelope_rise_time(const SecondOrderOscillator& osc, const Waveform& input,
                          const QuadratureConfig& q = {});

}  // namespace tdres
