#include "tdres/convolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace tdres {

using std::numbers::pi;

nlohmann::json quadrature_to_json(const QuadratureConfig& q) {
  return {{"rule", to_string(q.rule)}, {"points", q.points}};
}

QuadratureConfig quadrature_from_json(const nlohmann::json& j) {
  QuadratureConfig q;
  if (!j.is_object()) throw std::invalid_argument("quadrature: expected an object");
  if (j.contains("rule")) q.rule = quadrature_rule_from_string(j.at("rule").get<std::string>());
  if (j.contains("points")) q.points = j.at("points").get<int>();
  q.validate();
  return q;
}

namespace {

std::optional<double> min_scale(std::optional<double> a, std::optional<double> b) {
  if (a && b) return std::min(*a, *b);
  return a ? a : b;
}

}  // namespace

double convolution_segment(const Waveform& kernel, const Waveform& input, double t, double lo,
                           double hi, const QuadratureConfig& q) {
  q.validate();
  if (hi == lo) return 0.0;
  std::vector<double> cuts;
  kernel.breakpoints(lo, hi, cuts);
  std::vector<double> in_cuts;
  input.breakpoints(t - hi, t - lo, in_cuts);
  for (double c : in_cuts) cuts.push_back(t - c);
  const auto scale = min_scale(kernel.time_scale(), input.time_scale());
  const bool sampled = kernel.contains_sampled() || input.contains_sampled();
  const QuadratureRule rule = sampled ? QuadratureRule::Trapezoid : q.rule;
  return integrate_piecewise([&](double lam) { return kernel.eval(lam) * input.eval(t - lam); },
                             lo, hi, cuts, scale, q, rule);
}

double zsr_at(const Waveform& kernel, const Waveform& input, double t, const QuadratureConfig& q) {
  if (!(t >= 0.0)) throw std::invalid_argument("zsr_at: t must be >= 0");
  return convolution_segment(kernel, input, t, 0.0, t, q);
}

double zsr_at(const ImpulseResponse& h, const Waveform& input, double t,
              const QuadratureConfig& q) {
  return zsr_at(h.waveform(), input, t, q);
}

ResponseTrace zsr(const ImpulseResponse& h, const Waveform& input, double horizon, double dt,
                  const QuadratureConfig& q) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw std::invalid_argument("zsr: horizon must be > 0");
  }
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("zsr: dt must be > 0");
  if (auto p = h.period()) {
    const double limit = *p / 64.0;
    if (dt > limit * (1.0 + 1e-12)) {
      throw std::invalid_argument("zsr: dt too coarse (" + std::to_string(dt) +
                                  " > kernel period / 64 = " + std::to_string(limit) + ")");
    }
  }
  q.validate();
  const auto n = static_cast<std::size_t>(std::floor(horizon / dt + 1e-9)) + 1;
  ResponseTrace tr;
  tr.dt = dt;
  tr.values.resize(std::max<std::size_t>(n, 2));
  for (std::size_t i = 0; i < tr.values.size(); ++i) {
    tr.values[i] = zsr_at(h, input, tr.time(i), q);
  }
  tr.input = input.to_json();
  tr.kernel = h.to_json();
  tr.quadrature = quadrature_to_json(q);
  return tr;
}

Envelope extreme_samples(const ImpulseResponse& h, const Waveform& input, int k_max,
                         const QuadratureConfig& q, int stride) {
  if (k_max < 1) throw std::invalid_argument("extreme_samples: k_max must be >= 1");
  if (stride < 1) throw std::invalid_argument("extreme_samples: stride must be >= 1");
  const auto spacing = h.zero_crossing_spacing();
  if (!spacing) throw std::invalid_argument("extreme_samples: kernel has no zero crossings");
  Envelope env;
  env.samples.reserve(static_cast<std::size_t>(k_max));
  for (int k = 1; k <= k_max; ++k) {
    const double t = k * stride * *spacing;
    env.samples.push_back({k, t, zsr_at(h, input, t, q), k % 2 == 1 ? 1 : -1});
  }
  return env;
}

Envelope extreme_samples(const SecondOrderOscillator& osc, const Waveform& input, int k_max,
                         const QuadratureConfig& q, int stride) {
  return extreme_samples(impulse_response(osc, KernelFlavor::Normalized), input, k_max, q, stride);
}

EnvelopeFit envelope_slope_fit(const Envelope& env, int k_from, int k_to) {
  if (k_to < k_from + 1) throw std::invalid_argument("envelope_slope_fit: need k_to >= k_from + 1");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::vector<std::pair<double, double>> pts;
  for (const auto& s : env.samples) {
    if (s.k < k_from || s.k > k_to) continue;
    const double y = std::abs(s.value);
    pts.emplace_back(s.t, y);
    sx += s.t;
    sy += y;
    sxx += s.t * s.t;
    sxy += s.t * y;
  }
  if (pts.size() < 2) throw std::invalid_argument("envelope_slope_fit: fewer than 2 points");
  const double n = static_cast<double>(pts.size());
  const double den = n * sxx - sx * sx;
  const double slope = (n * sxy - sx * sy) / den;
  const double intercept = (sy - slope * sx) / n;
  double resid = 0.0;
  for (const auto& [x, y] : pts) {
    const double fit = slope * x + intercept;
    const double ref = std::max(std::abs(y), std::numeric_limits<double>::min());
    resid = std::max(resid, std::abs(fit - y) / ref);
  }
  return {slope, intercept, resid, k_from, k_to};
}

std::vector<Extremum> trace_extrema(const ResponseTrace& trace) {
  std::vector<Extremum> out;
  const auto& v = trace.values;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    const double a = v[i - 1];
    const double b = v[i];
    const double c = v[i + 1];
    if (!(std::abs(b) >= std::abs(a) && std::abs(b) > std::abs(c))) continue;
    const double curv = a - 2.0 * b + c;
    double off = curv != 0.0 ? std::clamp(0.5 * (a - c) / curv, -1.0, 1.0) : 0.0;
    const double peak = b - 0.25 * (a - c) * off;
    out.push_back({trace.time(i) + off * trace.dt, std::abs(peak) >= std::abs(b) ? peak : b});
  }
  return out;
}

namespace {

ImpulseResponse kernel_for(const SecondOrderOscillator& osc, KernelFlavor flavor) {
  if (flavor == KernelFlavor::SimplifiedHS) return simplified_impulse_response(osc);
  return impulse_response(osc, flavor);
}

double shortest_period(const SecondOrderOscillator& osc, const Waveform& input) {
  double t = osc.damped_period();
  if (auto p = input.period()) t = std::min(t, *p);
  return t;
}

// Upward zero crossing of fn in [lo, hi] located on a grid of `step`, then bisected.
std::optional<double> upward_crossing(const auto& fn, double lo, double hi, double step,
                                      double target) {
  std::optional<double> best;
  double prev_t = lo;
  double prev_v = fn(lo);
  const auto n = static_cast<std::size_t>(std::ceil((hi - lo) / step));
  for (std::size_t i = 1; i <= n; ++i) {
    const double t = std::min(hi, lo + step * static_cast<double>(i));
    const double v = fn(t);
    if (prev_v < 0.0 && v >= 0.0) {
      double a = prev_t, b = t, fa = prev_v;
      for (int it = 0; it < 60 && b - a > 1e-13 * std::max(1.0, std::abs(b)); ++it) {
        const double m = 0.5 * (a + b);
        const double fm = fn(m);
        if ((fm < 0.0) == (fa < 0.0)) {
          a = m;
          fa = fm;
        } else {
          b = m;
        }
      }
      const double root = 0.5 * (a + b);
      if (!best || std::abs(root - target) < std::abs(*best - target)) best = root;
      if (!std::isfinite(target)) return best;
    }
    prev_t = t;
    prev_v = v;
  }
  return best;
}

}  // namespace

double saturation_level(const SecondOrderOscillator& osc, const Waveform& input,
                        const QuadratureConfig& q, const SaturationOptions& opts) {
  if (osc.lossless()) throw std::domain_error("saturation_level: gamma = 0, no saturation exists");
  if (!(opts.window_end > opts.window_start) || !(opts.window_start >= 0.0)) {
    throw std::invalid_argument("saturation_level: invalid window");
  }
  const ImpulseResponse h = kernel_for(osc, opts.flavor);
  const double lo = opts.window_start / osc.gamma();
  const double hi = opts.window_end / osc.gamma();
  const double step = shortest_period(osc, input) / 16.0;
  const auto ext = find_extrema([&](double t) { return zsr_at(h, input, t, q); }, lo, hi, step);
  if (ext.empty()) throw std::runtime_error("saturation_level: no extremes in the window");
  double acc = 0.0;
  for (const auto& e : ext) acc += std::abs(e.value);
  return acc / static_cast<double>(ext.size());
}

PeriodicTail periodic_tail_check(const SecondOrderOscillator& osc, const Waveform& input,
                                 const QuadratureConfig& q, KernelFlavor flavor) {
  const auto period = input.period();
  if (!period) throw std::invalid_argument("periodic_tail_check: input is not periodic");
  if (osc.lossless()) throw std::domain_error("periodic_tail_check: requires gamma > 0");
  const ImpulseResponse h = kernel_for(osc, flavor);
  const double T = *period;
  double t_start = 0.0;
  double tol = 1e-6;
  if (flavor == KernelFlavor::SimplifiedHS) {
    t_start = *h.cutoff();
  } else {
    t_start = 12.0 / osc.gamma();
    tol = std::exp(-osc.gamma() * t_start) + 1e-6;
  }
  auto f = [&](double t) { return zsr_at(h, input, t, q); };
  constexpr int kSamples = 32;
  double diff = 0.0;
  double scale = 0.0;
  for (int j = 0; j < kSamples; ++j) {
    const double t = t_start + T * j / kSamples;
    const double a = f(t);
    const double b = f(t + T);
    diff = std::max(diff, std::abs(a - b));
    scale = std::max(scale, std::abs(a));
  }
  const double mismatch = scale > 0.0 ? diff / scale : diff;

  const double step = std::min(T, osc.damped_period()) / 32.0;
  const auto first =
      upward_crossing(f, t_start, t_start + T + step, step, std::numeric_limits<double>::infinity());
  if (!first) throw std::runtime_error("periodic_tail_check: response has no zero crossing");
  const auto second = upward_crossing(f, *first + 0.75 * T, *first + 1.25 * T, step, *first + T);
  if (!second) throw std::runtime_error("periodic_tail_check: response has no zero crossing");
  return {mismatch < tol, *second - *first, mismatch, tol, t_start};
}

BeatProfile beat_profile(const SecondOrderOscillator& osc, double omega_drive, double horizon,
                         const QuadratureConfig& q) {
  if (!(omega_drive > 0.0)) throw std::invalid_argument("beat_profile: omega_drive must be > 0");
  const double detune = std::abs(omega_drive - osc.omega0());
  if (!(detune > 3.0 * osc.gamma())) {
    throw std::invalid_argument("beat_profile: drive not clearly detuned (|omega - omega0| <= 3 gamma)");
  }
  const double nominal = 2.0 * pi / detune;
  if (horizon < 3.0 * nominal) {
    throw std::invalid_argument("beat_profile: horizon shorter than 3 beat periods");
  }
  const ImpulseResponse h = impulse_response(osc, KernelFlavor::Normalized);
  const Waveform input = sine(1.0, omega_drive);
  const double step = std::min(osc.damped_period(), 2.0 * pi / omega_drive) / 16.0;
  BeatProfile out;
  out.extremes =
      find_extrema([&](double t) { return zsr_at(h, input, t, q); }, 0.0, horizon, step);

  const auto& e = out.extremes;
  // Neighbourhood and merge distance scale with the nominal beat period.
  const double reach = 0.25 * nominal;
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i].t - reach < 0.0 || e[i].t + reach > horizon) continue;
    const double v = std::abs(e[i].value);
    bool lowest = true;
    for (std::size_t j = 0; j < e.size() && lowest; ++j) {
      if (j != i && std::abs(e[j].t - e[i].t) <= reach && std::abs(e[j].value) < v) lowest = false;
    }
    if (!lowest) continue;
    if (!idx.empty() && e[i].t - e[idx.back()].t < 0.5 * nominal) {
      if (v < std::abs(e[idx.back()].value)) idx.back() = i;
      continue;
    }
    idx.push_back(i);
  }
  if (idx.size() < 2) throw std::runtime_error("beat_profile: no beats detected");
  std::vector<double> gaps;
  // Parabola through the neighbouring |extremes| places each minimum between samples.
  for (std::size_t i : idx) {
    double tm = e[i].t;
    if (i > 0 && i + 1 < e.size()) {
      const double x0 = e[i - 1].t, x1 = e[i].t, x2 = e[i + 1].t;
      const double y0 = std::abs(e[i - 1].value), y1 = std::abs(e[i].value),
                   y2 = std::abs(e[i + 1].value);
      const double d01 = (y1 - y0) / (x1 - x0);
      const double d12 = (y2 - y1) / (x2 - x1);
      const double a = (d12 - d01) / (x2 - x0);
      if (a > 0.0) tm = std::clamp(0.5 * (x0 + x1) - d01 / (2.0 * a), x0, x2);
    }
    out.minima.push_back(tm);
  }
  for (std::size_t i = 1; i < out.minima.size(); ++i) {
    gaps.push_back(out.minima[i] - out.minima[i - 1]);
  }
  std::sort(gaps.begin(), gaps.end());
  const std::size_t m = gaps.size();
  out.beat_period = m % 2 == 1 ? gaps[m / 2] : 0.5 * (gaps[m / 2 - 1] + gaps[m / 2]);
  return out;
}

}  // namespace tdres
