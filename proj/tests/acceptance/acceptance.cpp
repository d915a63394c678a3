// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "tdres/convolve.hpp"
#include "tdres/fourier_probe.hpp"
#include "tdres/freqresp.hpp"
#include "tdres/genopt.hpp"
#include "tdres/oscillator.hpp"
#include "tdres/sysdecomp.hpp"
#include "tdres/waveform.hpp"

using namespace tdres;
using std::numbers::pi;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// ---------------------------------------------------------------------------

Outcome lossless_linear_growth() {
  const SecondOrderOscillator osc(0.0, 1.0);
  const auto env = extreme_samples(osc, sine(1.0, 1.0), 10);
  double worst = 0.0;
  bool alternating = true;
  for (const auto& s : env.samples) {
    worst = std::max(worst, std::abs(std::abs(s.value) / (s.k * pi / 2.0) - 1.0));
    alternating = alternating && (s.value > 0.0) == (s.expected_sign > 0);
  }
  return {worst < 0.01 && alternating,
          "max rel err " + fmt("%.2e", worst) + " (tol 1e-2), signs " +
              (alternating ? "alternate" : "DO NOT alternate")};
}

Outcome square_wave_extremes() {
  const SecondOrderOscillator osc(0.0, 1.0);
  const auto env = extreme_samples(osc, square(1.0, 2.0 * pi), 3);
  const double s0 = 2.0;
  double worst = 0.0;
  bool alternating = true;
  for (const auto& s : env.samples) {
    worst = std::max(worst, std::abs(std::abs(s.value) / (s0 * s.k) - 1.0));
    alternating = alternating && (s.value > 0.0) == (s.expected_sign > 0);
  }
  return {worst < 0.01 && alternating,
          "values " + fmt("%.5f", env.samples[0].value) + fmt(", %.5f", env.samples[1].value) +
              fmt(", %.5f", env.samples[2].value) + "; max rel err " + fmt("%.2e", worst) +
              " (tol 1e-2)"};
}

Outcome optimality_gap() {
  const double w = 1.0;
  const auto h = ImpulseResponse::custom(sine(1.0, w), 2.0 * pi / w);
  const auto gi = choose_generating_interval(h);
  const Waveform sq = square(1.0, 2.0 * pi / w);
  const double target = norm(sq, gi.interval());
  const auto ranked = rank_inputs({sine(1.0, w), sq}, h, gi, target);
  const double s_sine = ranked[0].index == 0 ? ranked[0].s0 : ranked[1].s0;
  const double s_square = ranked[0].index == 1 ? ranked[0].s0 : ranked[1].s0;
  const double miss = ranked[0].index == 0 ? ranked[1].miss : -1.0;
  const double e_sq = std::abs(s_square / (2.0 / w) - 1.0);
  const double e_sine = std::abs(s_sine / (pi / (w * std::sqrt(2.0))) - 1.0);
  const bool ok = e_sq < 0.002 && e_sine < 0.002 && std::abs(100.0 * miss - 9.95) <= 0.3;
  return {ok, "S0(square) " + fmt("%.6f", s_square) + ", S0(sine) " + fmt("%.6f", s_sine) +
                  ", miss " + fmt("%.3f%%", 100.0 * miss) + " (9.95 +/- 0.3)"};
}

Outcome bandwidth() {
  const auto osc = SecondOrderOscillator::from_q(10.0, 1.0);
  const double g = osc.gamma();
  const auto grid = linear_grid(1.0 - 5.0 * g, 1.0 + 5.0 * g, 201);
  const auto hp = half_power(resonance_sweep(osc, grid, SweepMethod::Analytic));
  const double ratio = hp.delta_omega / (2.0 * g);
  const bool ok = ratio >= 0.995 && ratio <= 1.005 && hp.q_est >= 9.9 && hp.q_est <= 10.1;
  return {ok, "delta_omega/2gamma " + fmt("%.5f", ratio) + " [0.995, 1.005], Q_est " +
                  fmt("%.4f", hp.q_est) + " [9.9, 10.1]"};
}

Outcome td_fd_consistency() {
  const auto osc = SecondOrderOscillator::from_q(10.0, 1.0);
  const double g = osc.gamma();
  const auto grid = linear_grid(1.0 - 3.0 * g, 1.0 + 3.0 * g, 25);
  const auto td = resonance_sweep(osc, grid, SweepMethod::TimeDomain);
  const double peak = *std::max_element(td.amplitudes.begin(), td.amplitudes.end());
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double d = grid[i] - 1.0;
    const double lorentz = g / std::sqrt(g * g + d * d);
    worst = std::max(worst, std::abs(td.amplitudes[i] / peak - lorentz));
  }
  return {worst < 0.03, "max |TD/peak - Lorentzian/peak| " + fmt("%.4f", worst) +
                            " of peak (tol 0.03), 25 frequencies over +/-3 gamma"};
}

Outcome saturation_and_settling() {
  const auto osc10 = SecondOrderOscillator::from_q(10.0, 1.0);
  const auto osc100 = SecondOrderOscillator::from_q(100.0, 1.0);
  const Waveform drive = sine(1.0, 1.0);
  const double sat = saturation_level(osc10, drive);
  const double e_sat = std::abs(sat * 2.0 * osc10.gamma() - 1.0);
  const double rise = envelope_rise_time(osc10, drive);
  const double e_rise = std::abs(rise * osc10.gamma() - 1.0);

  auto slope = [&](const SecondOrderOscillator& osc) {
    const auto env = extreme_samples(simplified_impulse_response(osc), drive, 2);
    return envelope_slope_fit(env, 1, 2).slope;
  };
  const double s10 = slope(osc10);
  const double s100 = slope(osc100);
  const double e_slope = std::abs(s10 / s100 - 1.0);
  const bool ok = e_sat < 0.02 && e_rise < 0.10 && e_slope < 0.02;
  return {ok, "saturation " + fmt("%.4f", sat) + " vs 10 (" + fmt("%.2f%%", 100 * e_sat) +
                  ", tol 2%), rise time " + fmt("%.3f", rise) + " vs 20 (" +
                  fmt("%.2f%%", 100 * e_rise) + ", tol 10%), h_S slope change " +
                  fmt("%.3f%%", 100 * e_slope) + " (tol 2%)"};
}

Outcome fourier_discovery() {
  const auto probes = harmonic_probe(square(1.0, 2.0 * pi), {1, 2, 3, 5}, 50.0);
  double worst = 0.0;
  double leak = 0.0;
  std::string vals;
  for (const auto& p : probes) {
    if (p.k == 2) {
      leak = p.saturated / probes[0].saturated;
      continue;
    }
    const double expect = 4.0 / (pi * p.k);
    worst = std::max(worst, std::abs(*p.estimate / expect - 1.0));
    vals += fmt(" %.4f", *p.estimate);
  }
  return {worst < 0.05 && leak < 0.02, "estimates" + vals + " (max rel err " +
                                           fmt("%.2f%%", 100 * worst) + ", tol 5%), k=2 leakage " +
                                           fmt("%.2f%%", 100 * leak) + " (tol 2%)"};
}

Outcome stretched_wave() {
  const auto osc = SecondOrderOscillator::from_q(50.0, 1.0);
  const double r = stretched_square_ratio(osc, 3.0);
  const double e = std::abs(r * 3.0 - 1.0);
  return {e < 0.05, "ratio " + fmt("%.4f", r) + " vs 1/3 (" + fmt("%.2f%%", 100 * e) + ", tol 5%)"};
}

// Random waveform from the constructor grammar.
Waveform random_waveform(std::mt19937_64& rng, int depth) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto r = [&](double lo, double hi) { return lo + (hi - lo) * u(rng); };
  const int leaves = 9;
  const int kinds = depth > 0 ? 15 : leaves;
  switch (std::uniform_int_distribution<int>(0, kinds - 1)(rng)) {
    case 0: return sine(r(-2, 2), r(0.2, 5), r(-pi, pi));
    case 1: return square(r(-2, 2), r(0.5, 8));
    case 2: return triangle(r(-2, 2), r(0.5, 8));
    case 3: return unit_step(r(-1, 4));
    case 4: return constant(r(-2, 2));
    case 5: return wave::Exponential{r(-2, 2), r(0.1, 3)};
    case 6: return wave::DampedSine{r(-2, 2), r(0.0, 0.5), r(0.3, 4)};
    case 7: {
      std::vector<double> s(static_cast<std::size_t>(std::uniform_int_distribution<int>(1, 8)(rng)));
      for (auto& x : s) x = r(-2, 2);
      return wave::PulseTrain{s, r(0.5, 6)};
    }
    case 8: {
      std::vector<double> s(static_cast<std::size_t>(std::uniform_int_distribution<int>(2, 40)(rng)));
      for (auto& x : s) x = r(-2, 2);
      return wave::Sampled{r(-1, 1), r(0.05, 0.5), s};
    }
    case 9: {
      const double a = r(-1, 3);
      return windowed(random_waveform(rng, depth - 1), a, a + r(0.2, 4));
    }
    case 10: return scaled(random_waveform(rng, depth - 1), r(-3, 3));
    case 11: return time_reverse_on_interval(random_waveform(rng, depth - 1), r(0.5, 5));
    case 12: return periodic_extend(random_waveform(rng, depth - 1), r(0.5, 5));
    case 13: return wave::PeriodicExtension{random_waveform(rng, depth - 1), r(0.5, 5), true};
    default: return sum({random_waveform(rng, depth - 1), random_waveform(rng, depth - 1)});
  }
}

Outcome cauchy_schwarz_suite() {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst_excess = 0.0;
  double worst_equality = 1.0;
  int sign_failures = 0;
  int equality_sign_failures = 0;
  int compared = 0;
  for (int i = 0; i < 200; ++i) {
    const Waveform f = random_waveform(rng, 2);
    const Waveform g = random_waveform(rng, 2);
    const double a = -1.0 + 4.0 * u(rng);
    const Interval iv(a, a + 0.3 + 6.0 * u(rng));
    const Gram gr = gram(f, g, iv);
    const double bound = std::sqrt(gr.ff * gr.gg);
    if (bound > 0.0) {
      worst_excess = std::max(worst_excess, (std::abs(gr.fg) - bound) / bound);
      ++compared;
    }
    const Gram neg = gram(scaled(f, -1.0), g, iv);
    if (neg.fg != -gr.fg) ++sign_failures;

    double K = -3.0 + 6.0 * u(rng);
    if (std::abs(K) < 0.1) K = 0.1;
    const Gram eq = gram(f, scaled(f, K), iv);
    const double eb = std::sqrt(eq.ff * eq.gg);
    if (eb > 0.0) {
      worst_equality = std::min(worst_equality, std::abs(eq.fg) / eb);
      if ((eq.fg > 0.0) != (K > 0.0)) ++equality_sign_failures;
    }
  }
  const bool ok = worst_excess <= 1e-9 && worst_equality >= 1.0 - 1e-6 && sign_failures == 0 &&
                  equality_sign_failures == 0;
  return {ok, std::to_string(compared) + " nonzero pairs, worst excess " +
                  fmt("%.2e", worst_excess) + " (tol 1e-9), worst equality gap ratio " +
                  fmt("%.12f", worst_equality) + ", sign failures " +
                  std::to_string(sign_failures + equality_sign_failures)};
}

Outcome optimal_input_certification() {
  const double w = 1.0;
  const double T = 2.0 * pi / w;
  struct Case {
    std::string name;
    ImpulseResponse h;
  };
  const std::vector<Case> cases{
      {"sine", ImpulseResponse::custom(sine(1.0, w), T)},
      {"damped Q=10", impulse_response(SecondOrderOscillator::from_q(10.0, w))},
      {"damped Q=100", impulse_response(SecondOrderOscillator::from_q(100.0, w))},
      {"two-harmonic", ImpulseResponse::custom(sum({sine(1.0, w), sine(0.3, 3.0 * w)}), T)},
  };
  bool ok = true;
  std::string detail;
  for (const auto& c : cases) {
    const auto gi = choose_generating_interval(c.h);
    const double Tk = gi.period;
    const Waveform best = optimal_input(c.h, gi, 1.0);
    const auto rep = optimality_report(best, c.h, gi);
    std::vector<Waveform> corpus{sine(1.0, 2.0 * pi / Tk), square(1.0, Tk), triangle(1.0, Tk),
                                 standard_waveform("bipolar_pulse", {{"period", Tk}, {"duty", 0.3}}),
                                 sine(1.0, 2.0 * pi / Tk, pi / 2.0)};
    std::vector<Waveform> all = corpus;
    all.push_back(best);
    const auto ranked = rank_inputs(all, c.h, gi, 1.0);
    bool beats = ranked.front().index == corpus.size();
    int strict = 0;
    for (const auto& r : ranked) {
      if (r.index == corpus.size()) continue;
      if (r.gap_ratio >= 1.0 - 1e-6) continue;  // proportional to the optimum
      ++strict;
      beats = beats && r.s0 < ranked.front().s0;
    }
    const bool case_ok = std::abs(rep.gap_ratio - 1.0) < 1e-6 && beats;
    ok = ok && case_ok;
    detail += c.name + " (" + to_string(gi.mode) + "): gap " + fmt("%.9f", rep.gap_ratio) + ", beats " +
              std::to_string(strict) + (beats ? " candidates; " : " candidates FAILED; ");
  }
  return {ok, detail};
}

Outcome zir_zsr_oracles() {
  // First order, A = 2 step.
  const auto h1 = first_order_impulse_response(1.0);
  const Waveform step = scaled(unit_step(), 2.0);
  const ResponseTrace t1 = zsr(h1, step, 10.0, 0.01);
  double e1 = 0.0;
  for (std::size_t i = 1; i < t1.values.size(); ++i) {
    const double cf = 2.0 * (1.0 - std::exp(-t1.time(i)));
    e1 = std::max(e1, std::abs(t1.values[i] - cf) / std::abs(cf));
  }
  // Second order, Q = 10, resonant unit sine.
  const auto osc = SecondOrderOscillator::from_q(10.0, 1.0);
  const auto h2 = impulse_response(osc);
  const double horizon = 10.0 / osc.gamma();
  const ResponseTrace t2 = zsr(h2, sine(1.0, 1.0), horizon, osc.damped_period() / 64.0);
  const auto form = second_order_closed_form(osc, wave::Sine{1.0, 1.0, 0.0});
  double diff = 0.0;
  double scale = 0.0;
  for (std::size_t i = 0; i < t2.values.size(); ++i) {
    const double cf = form.eval(t2.time(i));
    diff = std::max(diff, std::abs(t2.values[i] - cf));
    scale = std::max(scale, std::abs(cf));
  }
  const double e2 = diff / scale;
  return {e1 < 1e-4 && e2 < 1e-3, "first order max rel err " + fmt("%.2e", e1) +
                                      " (tol 1e-4), second order max err / max |closed form| " +
                                      fmt("%.2e", e2) + " (tol 1e-3)"};
}

Outcome beats() {
  const SecondOrderOscillator osc(0.0, 1.0);
  const double delta = 0.1;
  const double expected = 2.0 * pi / delta;
  const auto bp = beat_profile(osc, 1.0 + delta, 4.0 * expected);
  const double e = std::abs(bp.beat_period / expected - 1.0);
  const auto form = second_order_closed_form(osc, wave::Sine{1.0, 1.0 + delta, 0.0});
  double diff = 0.0;
  double scale = 0.0;
  for (const auto& x : bp.extremes) {
    diff = std::max(diff, std::abs(x.value - form.eval(x.t)));
    scale = std::max(scale, std::abs(x.value));
  }
  const double oracle = diff / scale;
  return {e < 0.05 && oracle < 1e-3, "beat period " + fmt("%.3f", bp.beat_period) + " vs " +
                                         fmt("%.3f", expected) + " (" + fmt("%.2f%%", 100 * e) +
                                         ", tol 5%), extremes vs closed form " + fmt("%.1e", oracle)};
}

Outcome laplace() {
  const auto osc = SecondOrderOscillator::from_q(10.0, 1.0);
  double worst = 0.0;
  std::string detail;
  for (double m : {1.0, 2.0}) {
    const auto c = laplace_check(osc, sine(1.0, 1.0), {m * osc.gamma(), 0.0});
    worst = std::max(worst, c.rel_err);
    detail += "s=" + fmt("%.2f", m * osc.gamma()) + ": formula " + fmt("%.6f", c.formula.real()) +
              ", numeric " + fmt("%.6f", c.numeric.real()) + ", rel err " + fmt("%.2e", c.rel_err) +
              "; ";
  }
  return {worst < 0.01, detail + "tol 1e-2"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"lossless linear growth", lossless_linear_growth},
      {"square-wave extremes", square_wave_extremes},
      {"square vs sine optimality gap", optimality_gap},
      {"half-power bandwidth", bandwidth},
      {"time-domain vs frequency-domain", td_fd_consistency},
      {"saturation and settling", saturation_and_settling},
      {"Fourier discovery", fourier_discovery},
      {"stretched-wave factor", stretched_wave},
      {"Cauchy-Schwarz property suite", cauchy_schwarz_suite},
      {"optimal-input certification", optimal_input_certification},
      {"ZIR/ZSR oracle equivalence", zir_zsr_oracles},
      {"beats", beats},
      {"Laplace check", laplace},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failures;
    std::printf("criterion %2zu %s  %s: %s [%.1fs]\n", i + 1, o.pass ? "PASS" : "FAIL",
                criteria[i].first.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
