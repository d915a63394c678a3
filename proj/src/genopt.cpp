#include "tdres/genopt.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tdres/convolve.hpp"

namespace tdres {

std::string to_string(GenerationMode m) {
  return m == GenerationMode::HalfPeriod ? "half_period" : "full_period";
}

GeneratingInterval choose_generating_interval(const ImpulseResponse& h, double period,
                                              const QuadratureConfig& q) {
  if (!(period > 0.0) || !std::isfinite(period)) {
    throw std::invalid_argument("choose_generating_interval: period must be > 0");
  }
  const Waveform& w = h.waveform();
  constexpr int kProbe = 1024;
  bool pos = false;
  bool neg = false;
  for (int i = 1; i < kProbe; ++i) {
    const double v = w.eval(period * i / kProbe);
    pos = pos || v > 0.0;
    neg = neg || v < 0.0;
  }
  if (!(pos && neg)) throw std::domain_error("choose_generating_interval: kernel not oscillatory");

  const double half = period / 2.0;
  std::vector<double> cuts;
  w.breakpoints(0.0, half, cuts);
  std::vector<double> shifted;
  w.breakpoints(half, period, shifted);
  for (double c : shifted) cuts.push_back(c - half);
  std::vector<double> cuts_h = cuts;
  const auto scale = w.time_scale();
  const QuadratureRule rule = w.contains_sampled() ? QuadratureRule::Trapezoid : q.rule;
  const double num = integrate_piecewise(
      [&](double t) {
        const double s = w.eval(t + half) + w.eval(t);
        return s * s;
      },
      0.0, half, cuts, scale, q, rule);
  const double den = integrate_piecewise(
      [&](double t) {
        const double v = w.eval(t);
        return v * v;
      },
      0.0, half, cuts_h, scale, q, rule);
  if (!(den > 0.0)) throw std::domain_error("choose_generating_interval: kernel vanishes on [0, T/2]");
  const double defect = std::sqrt(num / den);
  const bool halfp = defect < kSymmetryTolerance;
  return {halfp ? half : period, period,
          halfp ? GenerationMode::HalfPeriod : GenerationMode::FullPeriod, defect};
}

GeneratingInterval choose_generating_interval(const ImpulseResponse& h, const QuadratureConfig& q) {
  const auto p = h.period();
  if (!p) throw std::domain_error("choose_generating_interval: kernel not oscillatory");
  return choose_generating_interval(h, *p, q);
}

Waveform optimal_input(const ImpulseResponse& h, const GeneratingInterval& gi, double target_norm,
                       const QuadratureConfig& q) {
  if (!(target_norm > 0.0)) throw std::invalid_argument("optimal_input: target norm must be > 0");
  const double hn = norm(h.waveform(), gi.interval(), q);
  if (!(hn > 0.0)) throw std::domain_error("optimal_input: kernel vanishes on the generating interval");
  Waveform reversed = wave::TimeReversed{h.waveform(), gi.length};
  return wave::PeriodicExtension{wave::Scaled{reversed, target_norm / hn}, gi.length,
                                 gi.mode == GenerationMode::HalfPeriod};
}

namespace {

Gram reversed_gram(const Waveform& f, const ImpulseResponse& h, const GeneratingInterval& gi,
                   const QuadratureConfig& q) {
  return gram(time_reverse_on_interval(f, gi.length), h.waveform(), gi.interval(), q);
}

}  // namespace

double s0(const Waveform& f, const ImpulseResponse& h, const GeneratingInterval& gi,
          const QuadratureConfig& q) {
  return std::abs(
      inner_product(time_reverse_on_interval(f, gi.length), h.waveform(), gi.interval(), q));
}

nlohmann::json OptimalityReport::to_json() const {
  return {{"s0", s0},
          {"bound", bound},
          {"gap_ratio", gap_ratio},
          {"f_norm", f_norm},
          {"h_norm", h_norm},
          {"predicted_extremes", predicted_extremes}};
}

OptimalityReport optimality_report(const Waveform& f, const ImpulseResponse& h,
                                   const GeneratingInterval& gi, const QuadratureConfig& q,
                                   int k_max) {
  const Gram g = reversed_gram(f, h, gi, q);
  OptimalityReport r{};
  r.s0 = std::abs(g.fg);
  r.f_norm = std::sqrt(g.ff);
  r.h_norm = std::sqrt(g.gg);
  r.bound = r.f_norm * r.h_norm;
  r.gap_ratio = r.bound > 0.0 ? r.s0 / r.bound : 0.0;
  for (int k = 1; k <= k_max; ++k) r.predicted_extremes.push_back((k % 2 == 1 ? 1 : -1) * r.s0 * k);
  return r;
}

std::vector<RankedInput> rank_inputs(const std::vector<Waveform>& candidates,
                                     const ImpulseResponse& h, const GeneratingInterval& gi,
                                     double target_norm, const QuadratureConfig& q) {
  if (candidates.size() < 2) throw std::invalid_argument("rank_inputs: need at least 2 candidates");
  if (!(target_norm > 0.0)) throw std::invalid_argument("rank_inputs: target norm must be > 0");
  std::vector<RankedInput> out;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    // Norm matching by K = target / ||f|| applied analytically: f -> -f and
    // f -> K f then leave s0 unchanged up to rounding.
    const Gram g = reversed_gram(candidates[i], h, gi, q);
    if (!(g.ff > 0.0)) {
      throw std::domain_error("rank_inputs: candidate " + std::to_string(i) +
                              " vanishes on the generating interval");
    }
    const double fn = std::sqrt(g.ff);
    const double hn = std::sqrt(g.gg);
    const double s = target_norm * std::abs(g.fg) / fn;
    out.push_back({i, s, hn > 0.0 ? std::abs(g.fg) / (fn * hn) : 0.0, 0.0});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const RankedInput& a, const RankedInput& b) { return a.s0 > b.s0; });
  const double best = out.front().s0;
  for (auto& r : out) r.miss = best > 0.0 ? (best - r.s0) / best : 0.0;
  return out;
}

PredictedVsSimulated predicted_vs_simulated(const ImpulseResponse& h, const Waveform& f,
                                            const GeneratingInterval& gi, int k_max,
                                            const QuadratureConfig& q) {
  if (k_max < 1) throw std::invalid_argument("predicted_vs_simulated: k_max must be >= 1");
  const double t_max = k_max * gi.length;
  if (h.damping() * t_max >= kLinearRegimeGuard) {
    throw std::domain_error("predicted_vs_simulated: gamma * t_k = " +
                            std::to_string(h.damping() * t_max) +
                            " leaves the linear-growth regime (limit 0.3)");
  }
  const double base = s0(f, h, gi, q);
  PredictedVsSimulated r{};
  r.max_rel_error = 0.0;
  for (int k = 1; k <= k_max; ++k) {
    const double t = k * gi.length;
    const double pred = base * k;
    const double sim = std::abs(zsr_at(h, f, t, q));
    const double err = pred > 0.0 ? std::abs(sim - pred) / pred : std::abs(sim);
    r.times.push_back(t);
    r.predicted.push_back(pred);
    r.simulated.push_back(sim);
    r.rel_error.push_back(err);
    r.max_rel_error = std::max(r.max_rel_error, err);
  }
  return r;
}

}  // namespace tdres
