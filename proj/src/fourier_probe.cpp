#include "tdres/fourier_probe.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tdres {

using std::numbers::pi;

std::vector<ProbeResult> harmonic_probe(const Waveform& input, const std::vector<int>& harmonics,
                                        double q_factor, const QuadratureConfig& q,
                                        bool calibrate) {
  const auto period = input.period();
  if (!period) throw std::invalid_argument("harmonic_probe: input must be periodic");
  if (harmonics.empty()) throw std::invalid_argument("harmonic_probe: no harmonics requested");
  if (!(q_factor >= kMinProbeQ)) {
    throw std::invalid_argument("harmonic_probe: Q must be >= 10 (bank selectivity insufficient)");
  }
  std::vector<ProbeResult> out;
  for (int k : harmonics) {
    if (k < 1) throw std::invalid_argument("harmonic_probe: harmonic indices must be >= 1");
    const double w0 = k * 2.0 * pi / *period;
    const auto osc = SecondOrderOscillator::from_q(q_factor, w0);
    ProbeResult r{k, w0, saturation_level(osc, input, q), std::nullopt, std::nullopt};
    if (calibrate) {
      r.calibration = saturation_level(osc, sine(1.0, w0), q);
      r.estimate = r.saturated / *r.calibration;
    }
    out.push_back(r);
  }
  return out;
}

double coefficient_estimate(const ProbeResult& probe, std::optional<double> calibration) {
  if (!calibration) throw std::invalid_argument("coefficient_estimate: missing calibration run");
  if (!(*calibration > 0.0)) throw std::invalid_argument("coefficient_estimate: calibration must be > 0");
  return probe.saturated / *calibration;
}

double coefficient_estimate(const ProbeResult& probe) {
  return coefficient_estimate(probe, probe.calibration);
}

namespace {

double projection(const Waveform& input, int k, double period, const QuadratureConfig& q,
                  double phase) {
  if (!(period > 0.0)) throw std::invalid_argument("direct_fourier: period must be > 0");
  if (k < 1) throw std::invalid_argument("direct_fourier: k must be >= 1");
  return 2.0 / period * inner_product(input, sine(1.0, 2.0 * pi * k / period, phase),
                                      Interval(0.0, period), q);
}

}  // namespace

double direct_fourier_coefficient(const Waveform& input, int k, double period,
                                  const QuadratureConfig& q) {
  return projection(input, k, period, q, 0.0);
}

double direct_fourier_cosine(const Waveform& input, int k, double period,
                             const QuadratureConfig& q) {
  return projection(input, k, period, q, pi / 2.0);
}

double direct_fourier_amplitude(const Waveform& input, int k, double period,
                                const QuadratureConfig& q) {
  return std::hypot(direct_fourier_coefficient(input, k, period, q),
                    direct_fourier_cosine(input, k, period, q));
}

double stretched_square_ratio(const SecondOrderOscillator& osc, double stretch,
                              const QuadratureConfig& q) {
  if (!(stretch > 0.0)) throw std::invalid_argument("stretched_square_ratio: stretch must be > 0");
  const double t_o = osc.natural_period();
  const double base = saturation_level(osc, square(1.0, t_o), q);
  return saturation_level(osc, square(1.0, stretch * t_o), q) / base;
}

}  // namespace tdres
