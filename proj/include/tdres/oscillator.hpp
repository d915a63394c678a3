// Second-order (and first-order) system models and their impulse responses.
#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "tdres/waveform.hpp"

namespace tdres {

/// Series RLC circuit driven by v_m sin(wt). Units: ohm, henry, farad, volt.
struct RlcParams {
  double R = 0.0;
  double L = 1.0;
  double C = 1.0;
  double v_m = 1.0;

  void validate() const;
};

struct DerivedQuantities {
  double q;        // omega0 / (2 gamma); +inf when lossless
  double omega_d;  // sqrt(omega0^2 - gamma^2)
  double t_o;      // 2 pi / omega0
  double t_d;      // 2 pi / omega_d
};

/// Underdamped oscillator x'' + 2 gamma x' + omega0^2 x = drive, 0 <= gamma < omega0.
class SecondOrderOscillator {
 public:
  SecondOrderOscillator(double gamma, double omega0);

  static SecondOrderOscillator from_q(double q, double omega0);

  double gamma() const { return gamma_; }
  double omega0() const { return omega0_; }
  double q() const;
  double omega_d() const;
  double natural_period() const;
  double damped_period() const;
  bool lossless() const { return gamma_ == 0.0; }

  nlohmann::json to_json() const;
  static SecondOrderOscillator from_json(const nlohmann::json& j);

 private:
  double gamma_;
  double omega0_;
};

/// gamma = R / 2L, omega0 = 1 / sqrt(LC). Throws when the circuit is not underdamped.
SecondOrderOscillator from_rlc(const RlcParams& p);
DerivedQuantities derived_quantities(const SecondOrderOscillator& osc);

enum class KernelFlavor { Exact, Normalized, SimplifiedHS, FirstOrder, Custom };

std::string to_string(KernelFlavor f);
KernelFlavor kernel_flavor_from_string(const std::string& name);

/// A system's impulse response: the evaluable waveform plus what is known
/// about its oscillation structure.
class ImpulseResponse {
 public:
  KernelFlavor flavor() const { return flavor_; }
  const Waveform& waveform() const { return waveform_; }
  double eval(double t) const { return waveform_.eval(t); }

  /// Oscillator the kernel was derived from (second-order flavors only).
  const std::optional<SecondOrderOscillator>& oscillator() const { return osc_; }
  /// Cut-off instant of the SimplifiedHS flavor.
  std::optional<double> cutoff() const { return cutoff_; }
  /// Spacing of the kernel's zero crossings, t_k = k * spacing.
  std::optional<double> zero_crossing_spacing() const;
  /// Oscillation period used to pick a generating interval.
  std::optional<double> period() const;
  /// Exponential damping rate (0 for lossless or windowed kernels).
  double damping() const;

  nlohmann::json to_json() const;

  /// Wraps an arbitrary waveform as a kernel, e.g. a multi-harmonic response.
  /// `period` is the oscillation period when it is not derivable from the waveform.
  static ImpulseResponse custom(Waveform w, std::optional<double> period = std::nullopt);

 private:
  ImpulseResponse(KernelFlavor flavor, Waveform w) : flavor_(flavor), waveform_(std::move(w)) {}

  friend ImpulseResponse impulse_response(const SecondOrderOscillator&, KernelFlavor);
  friend ImpulseResponse simplified_impulse_response(const SecondOrderOscillator&);
  friend ImpulseResponse first_order_impulse_response(double);

  KernelFlavor flavor_;
  Waveform waveform_;
  std::optional<SecondOrderOscillator> osc_;
  std::optional<double> cutoff_;
  std::optional<double> custom_period_;
  double rate_ = 0.0;
};

/// Exact: (omega0^2 / omega_d) e^{-gamma t} sin(omega_d t); Normalized drops the prefactor.
ImpulseResponse impulse_response(const SecondOrderOscillator& osc,
                                 KernelFlavor flavor = KernelFlavor::Normalized);

/// Undamped sin(omega0 t) cut to zero after the whole number of half-periods
/// nearest to 1/gamma (ties round up, at least one).
ImpulseResponse simplified_impulse_response(const SecondOrderOscillator& osc);

/// e^{-a t} for t >= 0.
ImpulseResponse first_order_impulse_response(double a);

}  // namespace tdres
