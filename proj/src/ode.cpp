#include "mbpower/ode.hpp"

#include <algorithm>
#include <cmath>

namespace mbpower {

namespace {

// Dormand & Prince (1980) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// b - b*, the embedded 4th order error weights.
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

}  // namespace

OdeSolution integrate_dopri5(const OdeRhs& rhs, double t0, double t1, std::vector<double> y0,
                             const OdeControl& ctrl,
                             const std::function<void(double, std::span<const double>)>& check) {
  if (!(ctrl.rel_tol > 0.0) || !(ctrl.max_step > 0.0))
    throw Error("ODE tolerances must be positive");
  const std::size_t n = y0.size();
  OdeSolution sol;
  sol.t.push_back(t0);
  sol.y.push_back(y0);
  if (t1 <= t0 || n == 0) return sol;

  std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), ynew(n);
  std::vector<double>& y = y0;
  double t = t0;
  rhs(t, y, k1);

  // Initial step from the first-derivative scale, bounded by max_step.
  double h = ctrl.max_step;
  {
    double d0 = 0.0, d1 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double sc = ctrl.abs_tol + ctrl.rel_tol * std::abs(y[i]);
      d0 = std::max(d0, std::abs(y[i]) / sc);
      d1 = std::max(d1, std::abs(k1[i]) / sc);
    }
    if (d0 > 1e-5 && d1 > 1e-5) h = std::min(h, 0.01 * d0 / d1);
  }

  double err_prev = 1e-4;
  bool last_rejected = false;
  int steps = 0;
  while (t < t1) {
    if (++steps > ctrl.max_steps) throw StepUnderflow("ODE step budget exhausted", t);
    bool final_step = false;
    if (t + h >= t1) {
      h = t1 - t;
      final_step = true;
    }

    auto stage = [&](auto combine) {
      for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * combine(i);
    };
    stage([&](std::size_t i) { return a21 * k1[i]; });
    rhs(t + c2 * h, tmp, k2);
    stage([&](std::size_t i) { return a31 * k1[i] + a32 * k2[i]; });
    rhs(t + c3 * h, tmp, k3);
    stage([&](std::size_t i) { return a41 * k1[i] + a42 * k2[i] + a43 * k3[i]; });
    rhs(t + c4 * h, tmp, k4);
    stage([&](std::size_t i) {
      return a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i];
    });
    rhs(t + c5 * h, tmp, k5);
    stage([&](std::size_t i) {
      return a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i];
    });
    rhs(t + h, tmp, k6);
    for (std::size_t i = 0; i < n; ++i)
      ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    rhs(t + h, ynew, k7);

    double err = 0.0;
    bool finite = true;
    for (std::size_t i = 0; i < n; ++i) {
      const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                            e7 * k7[i]);
      const double sc = ctrl.abs_tol + ctrl.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      if (!std::isfinite(ynew[i])) finite = false;
      err = std::max(err, sc > 0.0 ? std::abs(e) / sc : std::abs(e));
    }
    if (!finite) err = 1e10;

    if (err <= 1.0) {
      t = final_step ? t1 : t + h;
      y.swap(ynew);
      k1.swap(k7);
      if (check) check(t, y);
      sol.t.push_back(t);
      sol.y.push_back(y);
      // PI controller (Hairer, Norsett & Wanner II.4).
      double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.7 / 5) * std::pow(err_prev, 0.4 / 5);
      fac = std::clamp(fac, 0.2, 5.0);
      if (last_rejected) fac = std::min(fac, 1.0);
      h = std::min(h * fac, ctrl.max_step);
      err_prev = std::max(err, 1e-4);
      last_rejected = false;
    } else {
      ++sol.rejected_steps;
      h *= std::max(0.2, 0.9 * std::pow(err, -1.0 / 5));
      last_rejected = true;
      if (h < ctrl.min_step) throw StepUnderflow("ODE step size underflow", t);
    }
  }
  return sol;
}

}  // namespace mbpower
