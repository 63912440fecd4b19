#include <cmath>

#include "doctest.h"
#include "mbpower/ode.hpp"

using namespace mbpower;

TEST_CASE("dopri5 integrates exponential decay") {
  OdeControl ctrl;
  ctrl.rel_tol = 1e-10;
  ctrl.max_step = 0.5;
  const auto sol = integrate_dopri5(
      [](double, std::span<const double> y, std::span<double> d) { d[0] = -0.3 * y[0]; }, 0.0,
      10.0, {2.0}, ctrl);
  CHECK(sol.t.front() == 0.0);
  CHECK(sol.t.back() == 10.0);
  CHECK(sol.y.back()[0] == doctest::Approx(2.0 * std::exp(-3.0)).epsilon(1e-9));
  for (std::size_t k = 1; k < sol.t.size(); ++k) CHECK(sol.t[k] - sol.t[k - 1] <= 0.5 + 1e-15);
}

TEST_CASE("dopri5 harmonic oscillator keeps phase") {
  OdeControl ctrl;
  ctrl.rel_tol = 1e-9;
  ctrl.abs_tol = 1e-12;
  ctrl.max_step = 10.0;
  const auto sol = integrate_dopri5(
      [](double, std::span<const double> y, std::span<double> d) {
        d[0] = y[1];
        d[1] = -y[0];
      },
      0.0, 2.0 * 3.14159265358979323846, {1.0, 0.0}, ctrl);
  CHECK(sol.y.back()[0] == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(std::abs(sol.y.back()[1]) < 1e-7);
}

TEST_CASE("dopri5 reports step underflow on blow-up") {
  OdeControl ctrl;
  ctrl.min_step = 1e-6;
  // y' = y^2 from y=1 blows up at t=1.
  CHECK_THROWS_AS(integrate_dopri5([](double, std::span<const double> y,
                                      std::span<double> d) { d[0] = y[0] * y[0]; },
                                   0.0, 2.0, {1.0}, ctrl),
                  StepUnderflow);
}
