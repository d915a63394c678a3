// Zero-input / zero-state decomposition, closed-form oracles, Newton
// integration, the infinite-lower-limit tail and numeric Laplace checks.
#pragma once

#include <complex>
#include <functional>
#include <vector>

#include <json.hpp>

#include "tdres/convolve.hpp"
#include "tdres/oscillator.hpp"
#include "tdres/waveform.hpp"

namespace tdres {

/// y' + a y = A u(t), y(0) = y0.
struct FirstOrderProblem {
  double a = 1.0;
  double A = 0.0;
  double y0 = 0.0;
};

struct DecomposedSolution {
  std::vector<double> t;
  std::vector<double> zir;
  std::vector<double> zsr;
  std::vector<double> total;
};

/// zir = y0 e^{-at}, zsr = (A/a)(1 - e^{-at}), total = zir + zsr.
DecomposedSolution first_order_solve(const FirstOrderProblem& p, const std::vector<double>& grid);

/// Zero-state response of x'' + 2 gamma x' + omega0^2 x = g * drive, written as
/// a steady sinusoid plus e^{-gamma t}(K1 cos omega_d t + K2 sin omega_d t).
/// g = omega_d for the Normalized kernel and omega0^2 for the Exact kernel, so
/// that the result equals the convolution with that kernel.
struct ClosedFormSecondOrder {
  double K1;
  double K2;
  double steady_amplitude;
  double steady_phase;  // steady term is steady_amplitude * sin(omega t + steady_phase)
  double gamma;
  double omega_d;
  double omega;

  double eval(double t) const;
  double derivative(double t) const;
};

ClosedFormSecondOrder second_order_closed_form(const SecondOrderOscillator& osc,
                                               const wave::Sine& drive,
                                               KernelFlavor flavor = KernelFlavor::Normalized);

struct SecondOrderTrace {
  std::vector<double> t;
  std::vector<double> values;
  ClosedFormSecondOrder form;
};

SecondOrderTrace second_order_closed_form(const SecondOrderOscillator& osc, const wave::Sine& drive,
                                          const std::vector<double>& grid,
                                          KernelFlavor flavor = KernelFlavor::Normalized);

struct NewtonVelocity {
  double zir;    // v0
  double zsr;    // integral of F / m
  double total;
};

/// v(t) = v0 + integral_0^t F(s) / m(s) ds.
NewtonVelocity newton_velocity(const Waveform& force, const std::function<double(double)>& mass,
                               double v0, double t, const QuadratureConfig& q = {});
NewtonVelocity newton_velocity(const Waveform& force, double mass, double v0, double t,
                               const QuadratureConfig& q = {});

/// integral_0^infinity h(lambda) f(t - lambda) d lambda for a periodic input,
/// truncated at 40 / gamma (or at the cutoff of a windowed kernel).
double asymptotic_tail(const ImpulseResponse& h, const Waveform& input, double t,
                       const QuadratureConfig& q = {});

/// H(s) F_0(s) / (1 - e^{-sT}), F_0 the transform of one input period and
/// H(s) = omega0^2 / ((s + gamma)^2 + omega_d^2) for the Exact kernel
/// (times omega_d / omega0^2 for the Normalized kernel).
std::complex<double> laplace_periodic_output(const SecondOrderOscillator& osc,
                                             const Waveform& input, std::complex<double> s,
                                             const QuadratureConfig& q = {},
                                             KernelFlavor flavor = KernelFlavor::Exact);

/// integral_0^horizon f_out(t) e^{-st} dt of the simulated response.
std::complex<double> numeric_laplace_of_response(const SecondOrderOscillator& osc,
                                                 const Waveform& input, std::complex<double> s,
                                                 double horizon, const QuadratureConfig& q = {},
                                                 KernelFlavor flavor = KernelFlavor::Exact);

struct LaplaceCheck {
  std::complex<double> s;
  std::complex<double> formula;
  std::complex<double> numeric;
  double rel_err;
  KernelFlavor flavor;
  double horizon;

  nlohmann::json to_json() const;
};

/// Formula vs numeric transform truncated at 30 / gamma.
LaplaceCheck laplace_check(const SecondOrderOscillator& osc, const Waveform& input,
                           std::complex<double> s, const QuadratureConfig& q = {},
                           KernelFlavor flavor = KernelFlavor::Exact);

}  // namespace tdres
