#include "tdres/freqresp.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace tdres {

using std::numbers::pi;

double steady_amplitude_exact(const RlcParams& p, double omega) {
  p.validate();
  if (!(omega > 0.0)) throw std::invalid_argument("steady_amplitude_exact: omega must be > 0");
  const double x = omega * p.L - 1.0 / (omega * p.C);
  const double den = std::sqrt(p.R * p.R + x * x);
  if (den == 0.0) return std::numeric_limits<double>::infinity();
  return p.v_m / den;
}

double steady_amplitude_lorentzian(const RlcParams& p, double omega) {
  const auto osc = from_rlc(p);
  const double w0 = osc.omega0();
  if (!(omega > 0.0) || std::abs(omega - w0) > 0.2 * w0 * (1.0 + 1e-12)) {
    throw std::domain_error("steady_amplitude_lorentzian: valid only for |omega - omega0| <= 0.2 omega0");
  }
  const double d = omega - w0;
  const double den = 2.0 * p.L * std::sqrt(osc.gamma() * osc.gamma() + d * d);
  if (den == 0.0) return std::numeric_limits<double>::infinity();
  return p.v_m / den;
}

RlcParams equivalent_circuit(const SecondOrderOscillator& osc) {
  return {2.0 * osc.gamma(), 1.0, 1.0 / (osc.omega0() * osc.omega0()), 1.0};
}

std::string to_string(SweepMethod m) {
  return m == SweepMethod::Analytic ? "analytic" : "timedomain";
}

SweepMethod sweep_method_from_string(const std::string& name) {
  if (name == "analytic") return SweepMethod::Analytic;
  if (name == "timedomain") return SweepMethod::TimeDomain;
  throw std::invalid_argument("unknown sweep method '" + name + "'");
}

namespace {

void check_grid(const std::vector<double>& omegas) {
  if (omegas.empty()) throw std::invalid_argument("resonance_sweep: empty frequency grid");
  for (std::size_t i = 0; i < omegas.size(); ++i) {
    if (!(omegas[i] > 0.0)) throw std::invalid_argument("resonance_sweep: frequencies must be > 0");
    if (i > 0 && !(omegas[i] > omegas[i - 1])) {
      throw std::invalid_argument("resonance_sweep: frequencies must be strictly increasing");
    }
  }
}

ResonanceCurve sweep(const SecondOrderOscillator& osc, const RlcParams& circuit,
                     const std::vector<double>& omegas, SweepMethod method,
                     const QuadratureConfig& q) {
  check_grid(omegas);
  ResonanceCurve c{omegas, {}, method};
  c.amplitudes.reserve(omegas.size());
  if (method == SweepMethod::Analytic) {
    for (double w : omegas) c.amplitudes.push_back(steady_amplitude_exact(circuit, w));
    return c;
  }
  if (osc.lossless()) {
    throw std::domain_error("resonance_sweep: time-domain method needs gamma > 0");
  }
  for (double w : omegas) c.amplitudes.push_back(saturation_level(osc, sine(1.0, w), q));
  return c;
}

}  // namespace

ResonanceCurve resonance_sweep(const SecondOrderOscillator& osc, const std::vector<double>& omegas,
                               SweepMethod method, const QuadratureConfig& q) {
  return sweep(osc, equivalent_circuit(osc), omegas, method, q);
}

ResonanceCurve resonance_sweep(const RlcParams& p, const std::vector<double>& omegas,
                               SweepMethod method, const QuadratureConfig& q) {
  return sweep(from_rlc(p), p, omegas, method, q);
}

std::vector<double> linear_grid(double from, double to, int points) {
  if (points < 2) throw std::invalid_argument("linear_grid: need at least 2 points");
  if (!(to > from)) throw std::invalid_argument("linear_grid: need to > from");
  std::vector<double> g(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) g[static_cast<std::size_t>(i)] = from + (to - from) * i / (points - 1);
  return g;
}

HalfPower half_power(const ResonanceCurve& curve) {
  const auto& w = curve.omegas;
  const auto& a = curve.amplitudes;
  if (w.size() != a.size() || w.size() < 3) {
    throw std::invalid_argument("half_power: need at least 3 points of equal length");
  }
  std::size_t ip = 0;
  for (std::size_t i = 1; i < a.size(); ++i) {
    if (a[i] > a[ip]) ip = i;
  }
  if (!std::isfinite(a[ip])) throw std::domain_error("half_power: infinite peak (lossless curve)");
  if (ip == 0 || ip + 1 == a.size()) {
    throw std::domain_error("half_power: sweep range too narrow (peak at the grid edge)");
  }
  const double level = a[ip] / std::sqrt(2.0);
  auto cross = [&](std::size_t i, std::size_t j) {
    return w[i] + (level - a[i]) * (w[j] - w[i]) / (a[j] - a[i]);
  };
  std::optional<double> w1, w2;
  for (std::size_t i = ip; i > 0; --i) {
    if (a[i - 1] < level) {
      w1 = cross(i - 1, i);
      break;
    }
  }
  for (std::size_t i = ip; i + 1 < a.size(); ++i) {
    if (a[i + 1] < level) {
      w2 = cross(i, i + 1);
      break;
    }
  }
  if (!w1 || !w2) throw std::domain_error("half_power: sweep range too narrow");
  const double dw = *w2 - *w1;
  return {*w1, *w2, dw, w[ip] / dw, w[ip]};
}

TransientDuration transient_duration(const SecondOrderOscillator& osc) {
  if (osc.lossless()) throw std::domain_error("transient_duration: gamma = 0, no settling");
  return {1.0 / osc.gamma(), osc.q() * osc.natural_period() / pi};
}

double envelope_rise_time(const SecondOrderOscillator& osc, const Waveform& input,
                          const QuadratureConfig& q) {
  const double sat = saturation_level(osc, input, q);
  const double target = (1.0 - std::exp(-1.0)) * sat;
  const ImpulseResponse h = impulse_response(osc, KernelFlavor::Normalized);
  double step = osc.damped_period() / 16.0;
  if (auto p = input.period()) step = std::min(step, *p / 16.0);
  const auto ext = find_extrema([&](double t) { return zsr_at(h, input, t, q); }, 0.0,
                                4.0 / osc.gamma(), step);
  double prev_t = 0.0;
  double prev_v = 0.0;
  for (const auto& e : ext) {
    const double v = std::abs(e.value);
    if (v >= target) return prev_t + (target - prev_v) * (e.t - prev_t) / (v - prev_v);
    prev_t = e.t;
    prev_v = v;
  }
  throw std::runtime_error("envelope_rise_time: envelope did not reach the target level");
}

}  // namespace tdres
