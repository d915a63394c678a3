#include <doctest.h>

#include <cmath>
#include <numbers>

#include "tdres/convolve.hpp"

using namespace tdres;
using std::numbers::pi;

namespace {
const SecondOrderOscillator kQ10 = SecondOrderOscillator::from_q(10.0, 1.0);
const SecondOrderOscillator kLossless(0.0, 1.0);
}  // namespace

TEST_CASE("zsr against an independent ODE solve") {
  // Reference values from a tight-tolerance Runge-Kutta integration.
  const ImpulseResponse h = impulse_response(kQ10);
  CHECK(zsr_at(h, sine(1, 1), 5.0) == doctest::Approx(-1.0474520165325378).epsilon(1e-7));
  CHECK(zsr_at(h, sine(1, 1), 50.0) == doctest::Approx(-8.874701746184266).epsilon(1e-7));
  CHECK(zsr_at(h, sine(1, 1), 123.4) == doctest::Approx(6.363451199597427).epsilon(1e-7));
}

TEST_CASE("square input through a lossless kernel") {
  const ImpulseResponse h = impulse_response(kLossless);
  CHECK(zsr_at(h, square(1, 2 * pi), 2.5) == doctest::Approx(1 - std::cos(2.5)).epsilon(1e-7));
  const Envelope env = extreme_samples(kLossless, square(1, 2 * pi), 3);
  REQUIRE(env.samples.size() == 3);
  CHECK(env.samples[0].value == doctest::Approx(2.0).epsilon(1e-7));
  CHECK(env.samples[1].value == doctest::Approx(-4.0).epsilon(1e-7));
  CHECK(env.samples[2].value == doctest::Approx(6.0).epsilon(1e-7));
  CHECK(env.samples[1].expected_sign == -1);
}

TEST_CASE("resonant sine grows linearly with slope 1/2") {
  const Envelope env = extreme_samples(kLossless, sine(1, 1), 12);
  for (const auto& s : env.samples) {
    CHECK(s.t == doctest::Approx(s.k * pi));
    CHECK(s.value == doctest::Approx(s.expected_sign * s.k * pi / 2).epsilon(1e-8));
  }
  const EnvelopeFit fit = envelope_slope_fit(env, 1, 12);
  CHECK(fit.slope == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(fit.max_relative_residual < 1e-8);
}

TEST_CASE("zsr at t = 0 vanishes and the grid is uniform") {
  const ImpulseResponse h = impulse_response(kQ10);
  const ResponseTrace tr = zsr(h, sine(1, 1), 2.0, 0.05);
  REQUIRE(tr.values.size() == 41);
  CHECK(tr.values[0] == 0.0);
  CHECK(tr.time(40) == doctest::Approx(2.0));
  CHECK(tr.values[20] == doctest::Approx(zsr_at(h, sine(1, 1), 1.0)));
  CHECK_THROWS_AS(zsr(h, sine(1, 1), 2.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(zsr(h, sine(1, 1), 0.0, 0.01), std::invalid_argument);
}

TEST_CASE("quadrature refinement changes the response by < 1e-6") {
  const ImpulseResponse h = impulse_response(kQ10);
  QuadratureConfig fine;
  fine.points = 512;
  const Waveform in = square(1, 2 * pi);
  for (double t : {7.3, 31.0}) {
    const double a = zsr_at(h, in, t);
    const double b = zsr_at(h, in, t, fine);
    CHECK(std::abs(a - b) <= 1e-6 * std::max(1.0, std::abs(b)));
  }
}

TEST_CASE("sampled input uses the trapezoid and matches the analytic input") {
  const ImpulseResponse h = impulse_response(kQ10);
  std::vector<double> v;
  const double dt = 2 * pi / 2048;
  for (int i = 0; i <= 2048 * 3; ++i) v.push_back(std::sin(i * dt));
  const Waveform s = wave::Sampled{0.0, dt, v};
  CHECK(zsr_at(h, s, 10.0) == doctest::Approx(zsr_at(h, sine(1, 1), 10.0)).epsilon(1e-5));
}

TEST_CASE("find_extrema locates the peaks of a sine") {
  const auto ex = find_extrema([](double t) { return std::sin(t); }, 0.0, 10.0, 0.1);
  REQUIRE(ex.size() == 3);
  CHECK(ex[0].t == doctest::Approx(pi / 2).epsilon(1e-3));
  CHECK(ex[1].value == doctest::Approx(-1.0).epsilon(1e-6));
}

TEST_CASE("saturation level at resonance is Q for the normalized kernel") {
  // Steady amplitude omega_d / (2 gamma omega0) = 9.9875 for a unit drive at omega0.
  const double sat = saturation_level(kQ10, sine(1, 1));
  CHECK(sat == doctest::Approx(std::sqrt(0.9975) * 10.0).epsilon(2e-3));
}

TEST_CASE("periodic input gives a periodic tail") {
  const PeriodicTail pt = periodic_tail_check(kQ10, square(1, 2 * pi));
  CHECK(pt.is_periodic);
  CHECK(pt.measured_period == doctest::Approx(2 * pi).epsilon(1e-4));
  CHECK(pt.max_relative_mismatch <= pt.tolerance);
  const PeriodicTail dec = periodic_tail_check(kQ10, square(1, 2 * pi), {}, KernelFlavor::Normalized);
  CHECK(dec.is_periodic);
}

TEST_CASE("beats in a lossless oscillator") {
  const double delta = 0.3;
  const double expected = 2 * pi / delta;
  const BeatProfile bp = beat_profile(kLossless, 1.0 + delta, 4 * expected);
  CHECK(bp.beat_period == doctest::Approx(expected).epsilon(0.01));
  CHECK_THROWS_AS(beat_profile(kQ10, 1.1, 400.0), std::invalid_argument);
}

TEST_CASE("quadrature json") {
  QuadratureConfig q;
  q.rule = QuadratureRule::Trapezoid;
  q.points = 64;
  const QuadratureConfig back = quadrature_from_json(quadrature_to_json(q));
  CHECK(back.rule == q.rule);
  CHECK(back.points == 64);
}
