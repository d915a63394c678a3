// Composite quadrature over piecewise-smooth integrands.
//
// The integration range is split at caller-supplied breakpoints (jumps and
// kinks of the integrand). Each smooth piece gets its own composite rule, and
// the piece endpoints are sampled slightly inside the piece so that a jump at
// a breakpoint contributes its one-sided limit instead of whichever value the
// boundary convention of the waveform happens to pick.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace tdres {

enum class QuadratureRule { Trapezoid, Simpson };

/// Panel density for all integrals in the library. `points` is the number of
/// panels spanned by the shortest characteristic time scale of the integrand
/// (for oscillatory integrands: panels per shortest period).
struct QuadratureConfig {
  QuadratureRule rule = QuadratureRule::Simpson;
  int points = 256;

  void validate() const {
    if (points < 16) {
      throw std::invalid_argument("quadrature points must be >= 16, got " + std::to_string(points));
    }
  }
};

std::string to_string(QuadratureRule rule);
QuadratureRule quadrature_rule_from_string(const std::string& name);

namespace detail {

inline int panel_count(double length, std::optional<double> scale, const QuadratureConfig& cfg,
                       QuadratureRule rule) {
  int n = 16;
  if (scale && *scale > 0.0) {
    const double h_max = *scale / cfg.points;
    const double raw = std::ceil(length / h_max);
    n = raw > 1e9 ? 1'000'000'000 : static_cast<int>(raw);
  }
  if (rule == QuadratureRule::Simpson) {
    n = std::max(n, 2);
    if (n % 2 != 0) ++n;
  } else {
    n = std::max(n, 1);
  }
  return n;
}

template <class F>
double integrate_piece(F& f, double a, double b, int n, QuadratureRule rule) {
  const double len = b - a;
  const double nudge =
      std::max(len * 1e-12, 64.0 * std::numeric_limits<double>::epsilon() *
                                std::max({std::abs(a), std::abs(b), 1.0}));
  if (len <= 4.0 * nudge) return 0.0;
  const double h = len / n;
  const double fa = f(a + nudge);
  const double fb = f(b - nudge);
  if (rule == QuadratureRule::Trapezoid) {
    double interior = 0.0;
    for (int i = 1; i < n; ++i) interior += f(a + i * h);
    return h * (0.5 * (fa + fb) + interior);
  }
  double odd = 0.0;
  double even = 0.0;
  for (int i = 1; i < n; ++i) {
    const double v = f(a + i * h);
    if (i % 2 != 0) {
      odd += v;
    } else {
      even += v;
    }
  }
  return h / 3.0 * (fa + fb + 4.0 * odd + 2.0 * even);
}

}  // namespace detail

/// Integrates `f` over [a, b]. `cuts` may be unsorted, contain duplicates and
/// points outside (a, b); it is consumed. `scale` is the shortest time scale
/// of the integrand, or nullopt when every piece is a low-order polynomial.
template <class F>
double integrate_piecewise(F&& f, double a, double b, std::vector<double>& cuts,
                           std::optional<double> scale, const QuadratureConfig& cfg,
                           QuadratureRule rule) {
  if (!(b > a)) {
    if (a == b) return 0.0;
    throw std::invalid_argument("integration interval must satisfy end >= start");
  }
  std::erase_if(cuts, [a, b](double c) { return !(c > a && c < b); });
  std::sort(cuts.begin(), cuts.end());
  const double merge_tol = 1e-13 * std::max({std::abs(a), std::abs(b), b - a});

  double total = 0.0;
  double left = a;
  auto emit = [&](double right) {
    if (right - left <= merge_tol) return;
    total += detail::integrate_piece(f, left, right,
                                     detail::panel_count(right - left, scale, cfg, rule), rule);
    left = right;
  };
  for (double c : cuts) emit(c);
  emit(b);
  return total;
}

}  // namespace tdres
