#include <doctest.h>

#include <cmath>
#include <numbers>

#include "tdres/oscillator.hpp"

using namespace tdres;
using std::numbers::pi;

TEST_CASE("derived quantities") {
  const auto osc = SecondOrderOscillator::from_q(10.0, 1.0);
  CHECK(osc.gamma() == doctest::Approx(0.05));
  const DerivedQuantities d = derived_quantities(osc);
  CHECK(d.q == doctest::Approx(10.0));
  CHECK(d.omega_d == doctest::Approx(std::sqrt(1 - 0.0025)).epsilon(1e-14));
  CHECK(d.t_o == doctest::Approx(2 * pi));
  CHECK(d.t_d == doctest::Approx(2 * pi / std::sqrt(0.9975)));

  const SecondOrderOscillator lossless(0.0, 2.0);
  CHECK(std::isinf(lossless.q()));
  CHECK(lossless.lossless());
  CHECK(lossless.omega_d() == 2.0);
}

TEST_CASE("rlc mapping") {
  const auto osc = from_rlc({0.1, 1.0, 1.0, 1.0});
  CHECK(osc.gamma() == doctest::Approx(0.05));
  CHECK(osc.omega0() == doctest::Approx(1.0));
  CHECK(from_rlc({2.0, 4.0, 0.25, 1.0}).omega0() == doctest::Approx(1.0));
  CHECK_THROWS_AS(from_rlc({-1.0, 1.0, 1.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(from_rlc({0.0, 0.0, 1.0, 1.0}), std::invalid_argument);
}

TEST_CASE("only underdamped systems are accepted") {
  CHECK_THROWS_AS(SecondOrderOscillator(1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(SecondOrderOscillator(0.1, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(SecondOrderOscillator(-0.1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(SecondOrderOscillator::from_q(0.5, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(SecondOrderOscillator::from_q(0.0, 1.0), std::invalid_argument);
}

TEST_CASE("json forms") {
  const auto a = SecondOrderOscillator::from_json({{"q", 10}, {"omega0", 1}});
  const auto b = SecondOrderOscillator::from_json({{"gamma", 0.05}, {"omega0", 1}});
  const auto c = SecondOrderOscillator::from_json({{"R", 0.1}, {"L", 1}, {"C", 1}});
  CHECK(a.gamma() == doctest::Approx(b.gamma()));
  CHECK(c.gamma() == doctest::Approx(b.gamma()));
  const auto back = SecondOrderOscillator::from_json(a.to_json());
  CHECK(back.gamma() == a.gamma());
  CHECK(back.omega0() == a.omega0());
  CHECK_THROWS_AS(SecondOrderOscillator::from_json({{"q", "ten"}, {"omega0", 1}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(SecondOrderOscillator::from_json({{"omega0", 1}}), std::invalid_argument);
}

TEST_CASE("kernels") {
  const auto osc = SecondOrderOscillator::from_q(10.0, 1.0);
  const double wd = osc.omega_d();
  const ImpulseResponse hn = impulse_response(osc, KernelFlavor::Normalized);
  const ImpulseResponse he = impulse_response(osc, KernelFlavor::Exact);
  for (double t : {0.3, 4.0, 17.0}) {
    const double ref = std::exp(-0.05 * t) * std::sin(wd * t);
    CHECK(hn.eval(t) == doctest::Approx(ref).epsilon(1e-13));
    CHECK(he.eval(t) == doctest::Approx(ref / wd).epsilon(1e-13));
  }
  CHECK(hn.eval(-0.1) == 0.0);
  CHECK(*hn.zero_crossing_spacing() == doctest::Approx(pi / wd));
  CHECK(*hn.period() == doctest::Approx(2 * pi / wd));
  CHECK(hn.damping() == doctest::Approx(0.05));
}

TEST_CASE("simplified kernel cuts at a whole number of half periods") {
  const auto osc = SecondOrderOscillator::from_q(10.0, 1.0);
  const ImpulseResponse hs = simplified_impulse_response(osc);
  // 1/gamma = 20 is nearest to 6 half periods of pi.
  CHECK(*hs.cutoff() == doctest::Approx(6 * pi));
  CHECK(hs.eval(1.0) == doctest::Approx(std::sin(1.0)));
  CHECK(hs.eval(6 * pi + 0.1) == 0.0);
  CHECK(*hs.zero_crossing_spacing() == doctest::Approx(pi));
  CHECK_THROWS_AS(simplified_impulse_response(SecondOrderOscillator(0.0, 1.0)), std::domain_error);
}

TEST_CASE("first order and custom kernels") {
  const ImpulseResponse h = first_order_impulse_response(2.0);
  CHECK(h.eval(0.5) == doctest::Approx(std::exp(-1.0)));
  CHECK_FALSE(h.zero_crossing_spacing().has_value());
  CHECK_THROWS_AS(first_order_impulse_response(0.0), std::invalid_argument);

  const ImpulseResponse c =
      ImpulseResponse::custom(sum({sine(1, 1), sine(0.3, 3)}), 2 * pi);
  CHECK(*c.zero_crossing_spacing() == doctest::Approx(pi));
  CHECK_THROWS_AS(ImpulseResponse::custom(sine(1, 1), -1.0), std::invalid_argument);

  CHECK(kernel_flavor_from_string(to_string(KernelFlavor::SimplifiedHS)) ==
        KernelFlavor::SimplifiedHS);
  CHECK_THROWS_AS(kernel_flavor_from_string("bogus"), std::invalid_argument);
}
