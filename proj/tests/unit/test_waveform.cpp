#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "tdres/waveform.hpp"

using namespace tdres;
using std::numbers::pi;

TEST_CASE("eval of the basic shapes") {
  CHECK(sine(1, 1).eval(pi / 2) == doctest::Approx(1.0));
  const double T = 2.0;
  const Waveform sq = square(1.0, T);
  CHECK(sq.eval(T / 4) == 1.0);
  CHECK(sq.eval(3 * T / 4) == -1.0);
  // Switching instants take the value on their left.
  CHECK(sq.eval(T / 2) == 1.0);
  CHECK(sq.eval(T) == -1.0);
  CHECK(sq.eval(0.0) == -1.0);
  const Waveform s = wave::Sampled{0.0, 1.0, {0.0, 2.0}};
  CHECK(s.eval(0.5) == doctest::Approx(1.0));
  CHECK(s.eval(-0.1) == 0.0);
  CHECK(s.eval(1.1) == 0.0);
  CHECK(triangle(2.0, 4.0).eval(1.0) == doctest::Approx(2.0));
  CHECK(triangle(2.0, 4.0).eval(3.0) == doctest::Approx(-2.0));
  CHECK(windowed(constant(3.0), 1.0, 2.0).eval(2.0) == 0.0);
  CHECK(windowed(constant(3.0), 1.0, 2.0).eval(1.0) == 3.0);
}

TEST_CASE("square wave takes only +A and -A") {
  const Waveform sq = square(1.5, 0.7);
  for (int i = -50; i < 500; ++i) {
    const double v = sq.eval(i * 0.0123);
    CHECK((v == 1.5 || v == -1.5));
  }
}

TEST_CASE("invariants are enforced at construction") {
  CHECK_THROWS_AS(square(1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(triangle(1.0, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(windowed(sine(1, 1), 2.0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(Waveform(wave::Sampled{0.0, 0.0, {1.0, 2.0}}), std::invalid_argument);
  CHECK_THROWS_AS(Waveform(wave::Sampled{0.0, 1.0, {1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(Interval(1.0, 1.0), std::invalid_argument);
}

TEST_CASE("norm examples") {
  const double w = 2.0;
  CHECK(norm(sine(1, w), {0, pi / w}) == doctest::Approx(std::sqrt(pi / (2 * w))).epsilon(1e-7));
  CHECK(norm(constant(0.0), {0, 3}) == 0.0);
  CHECK(norm(square(1, 2 * pi / w), {0, pi / w}) == doctest::Approx(std::sqrt(pi / w)).epsilon(1e-7));
}

TEST_CASE("inner product examples and properties") {
  const double w = 1.5;
  const Interval half(0, pi / w);
  const Waveform s = sine(1, w);
  CHECK(inner_product(s, s, half) == doctest::Approx(pi / (2 * w)).epsilon(1e-7));
  CHECK(inner_product(constant(1.0), s, half) == doctest::Approx(2 / w).epsilon(1e-7));
  CHECK(std::abs(inner_product(s, sine(1, w, pi / 2), {0, 2 * pi / w})) < 1e-12);

  const Waveform f = square(1.0, 3.0);
  const Waveform g = wave::DampedSine{1.0, 0.2, 2.0};
  const Interval iv(0.3, 7.1);
  const double n = norm(f, iv);
  CHECK(inner_product(f, f, iv) == doctest::Approx(n * n).epsilon(1e-7));
  CHECK(inner_product(f, g, iv) == doctest::Approx(inner_product(g, f, iv)).epsilon(1e-12));
  CHECK(inner_product(scaled(f, -2.5), g, iv) ==
        doctest::Approx(-2.5 * inner_product(f, g, iv)).epsilon(1e-7));
}

TEST_CASE("gram satisfies Cauchy-Schwarz and its equality case") {
  const Waveform f = sum({triangle(1.0, 2.0), wave::Exponential{0.5, 0.3}});
  const Waveform g = wave::PulseTrain{{1.0, -0.5, 0.0, 2.0}, 1.7};
  const Interval iv(-0.4, 5.0);
  const Gram gr = gram(f, g, iv);
  CHECK(std::abs(gr.fg) <= std::sqrt(gr.ff * gr.gg) * (1 + 1e-9));
  const Gram eq = gram(f, scaled(f, -3.0), iv);
  CHECK(std::abs(eq.fg) / std::sqrt(eq.ff * eq.gg) == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(eq.fg < 0.0);
}

TEST_CASE("scale_to_norm") {
  const double w = 1.0;
  const Interval iv(0, pi / w);
  // Oracle: sqrt(pi/w) / sqrt(pi/(2w)) = sqrt(2).
  const Waveform k = scale_to_norm(sine(1, w), std::sqrt(pi / w), iv);
  CHECK(k.as<wave::Scaled>()->factor == doctest::Approx(std::sqrt(2.0)).epsilon(1e-7));
  CHECK(norm(k, iv) == doctest::Approx(std::sqrt(pi / w)).epsilon(1e-6));

  const Waveform f = triangle(1.3, 2.2);
  CHECK(scale_to_norm(f, norm(f, iv), iv).as<wave::Scaled>()->factor == doctest::Approx(1.0));

  const double unit = norm(square(1, 2 * pi / w), iv);
  CHECK(scale_to_norm(square(2, 2 * pi / w), unit, iv).as<wave::Scaled>()->factor ==
        doctest::Approx(0.5).epsilon(1e-12));

  CHECK_THROWS_WITH_AS(scale_to_norm(constant(0.0), 1.0, iv),
                       "scale_to_norm: waveform vanishes on the interval", std::invalid_argument);
  CHECK_THROWS_AS(scale_to_norm(sine(1, 1), -1.0, iv), std::invalid_argument);
}

TEST_CASE("periodic extension") {
  const double w = 1.3;
  const Waveform ext = periodic_extend(sine(1, w), 2 * pi / w);
  for (double t : {0.1, 2.0, 17.3, 40.0}) CHECK(ext.eval(t) == doctest::Approx(std::sin(w * t)));

  const double T = 2.0;
  const Waveform half = periodic_extend(windowed(square(1, T), 0, T / 2), T / 2);
  for (double t : {0.3, 0.99, 2.7, 9.5}) CHECK(half.eval(t) == 1.0);
  // Copy boundaries inherit the square's left value at its own t = 0.
  CHECK(half.eval(1.0) == -1.0);

  const double g = 0.05;
  const double wd = std::sqrt(1 - g * g);
  const double Td = 2 * pi / wd;
  const Waveform h = periodic_extend(wave::DampedSine{1.0, g, wd}, Td);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, Td);
  for (int i = 0; i < 100; ++i) {
    const double x = u(rng);
    CHECK(h.eval(Td + x) == doctest::Approx(h.eval(x)).epsilon(1e-12));
  }
  CHECK(h.period() == doctest::Approx(Td));
  CHECK_THROWS_AS(periodic_extend(sine(1, 1), 0.0), std::invalid_argument);
}

TEST_CASE("antiperiodic extension flips every other copy") {
  const Waveform a = wave::PeriodicExtension{sine(1, 1), pi, true};
  for (double t : {0.5, 3.5, 7.0, 11.0}) CHECK(a.eval(t) == doctest::Approx(std::sin(t)).epsilon(1e-12));
  CHECK(*a.period() == doctest::Approx(2 * pi));
}

TEST_CASE("time reversal") {
  const double w = 1.0;
  const Waveform r = time_reverse_on_interval(sine(1, w), pi / w);
  for (double t : {0.1, 1.0, 2.5}) CHECK(r.eval(t) == doctest::Approx(std::sin(w * t)));

  const double T = 4.0;
  const Waveform st = time_reverse_on_interval(unit_step(T / 2), T);
  CHECK(st.eval(0.0) == 1.0);
  CHECK(st.eval(T / 2) == 1.0);
  CHECK(st.eval(T / 2 + 0.01) == 0.0);

  const double g = 0.05;
  const double wd = std::sqrt(1 - g * g);
  const double Td = 2 * pi / wd;
  const Waveform h = wave::DampedSine{1.0, g, wd};
  CHECK(time_reverse_on_interval(h, Td).eval(0.0) == doctest::Approx(h.eval(Td)));
  CHECK_THROWS_AS(time_reverse_on_interval(h, 0.0), std::invalid_argument);
}

TEST_CASE("standard_waveform") {
  const double w = 1.0;
  const Waveform sq = standard_waveform("square", {{"amplitude", 1.0}, {"period", 2 * pi / w}});
  CHECK(sq.eval(pi / 2) == 1.0);
  const Waveform s = standard_waveform("sine", {{"amplitude", 2.0}, {"omega", 0.9975}});
  CHECK(s.eval(1.0) == doctest::Approx(2.0 * std::sin(0.9975)));
  const Waveform stretched = standard_waveform("square", {{"period", 3 * 2 * pi}});
  CHECK(*stretched.period() == doctest::Approx(6 * pi));
  const Waveform bp = standard_waveform("bipolar_pulse", {{"period", 10.0}, {"duty", 0.3}});
  CHECK(bp.eval(2.5) == 1.0);
  CHECK(bp.eval(7.5) == -1.0);
  CHECK(bp.eval(0.5) == 0.0);
  CHECK_THROWS_AS(standard_waveform("square", {{"period", -1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(standard_waveform("sawtooth", {{"period", 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(standard_waveform("sine", {}), std::invalid_argument);
}

TEST_CASE("sum period is the common multiple") {
  CHECK(*sum({sine(1, 1), sine(0.3, 3)}).period() == doctest::Approx(2 * pi));
  CHECK(*sum({square(1, 2.0), triangle(1, 3.0)}).period() == doctest::Approx(6.0));
  CHECK_FALSE(sum({sine(1, 1), wave::Exponential{1, 1}}).period().has_value());
}

TEST_CASE("json round trip") {
  const Waveform w = sum({wave::PeriodicExtension{
                              wave::Scaled{wave::TimeReversed{wave::DampedSine{1, 0.1, 2}, 3.0}, 2.0},
                              3.0, true},
                          wave::Sampled{0.5, 0.25, {1, 2, 3}}, windowed(square(1, 2), 0.1, 4.0)});
  const Waveform back = Waveform::from_json(w.to_json());
  CHECK(back.to_json() == w.to_json());
  for (double t : {0.0, 0.7, 1.9, 5.5, 12.0}) CHECK(back.eval(t) == w.eval(t));
  CHECK_THROWS_AS(Waveform::from_json({{"kind", "square"}, {"params", {{"period", "x"}}}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(Waveform::from_json({{"kind", "blob"}}), std::invalid_argument);
}

TEST_CASE("square norm converges under panel doubling") {
  QuadratureConfig q2;
  q2.points = 512;
  const Waveform sq = square(1.0, 2.3);
  const Interval iv(0.17, 9.4);
  CHECK(std::abs(norm(sq, iv) - norm(sq, iv, q2)) / norm(sq, iv, q2) < 1e-6);
}
