#pragma once

#include <functional>
#include <span>
#include <vector>

#include "mbpower/common.hpp"

namespace mbpower {

struct OdeControl {
  double rel_tol = 1e-8;
  double abs_tol = 0.0;   // added to rel_tol * |y| in the error scale
  double max_step = 1.0;  // in units of the independent variable
  double min_step = 1e-12;
  int max_steps = 1000000;
};

/// Right-hand side dy/dt = f(t, y), written into dydt.
using OdeRhs = std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;

/// Accepted steps of an integration, including both endpoints.
struct OdeSolution {
  std::vector<double> t;
  std::vector<std::vector<double>> y;
  int rejected_steps = 0;
};

/// Thrown when the adaptive step collapses below OdeControl::min_step.
class StepUnderflow : public Error {
 public:
  StepUnderflow(const std::string& what, double at) : Error(what), at_(at) {}
  double at() const { return at_; }

 private:
  double at_;
};

/// Dormand-Prince 5(4) with local extrapolation and PI step control.
/// The optional check is called on each accepted state and may throw.
OdeSolution integrate_dopri5(const OdeRhs& rhs, double t0, double t1, std::vector<double> y0,
                             const OdeControl& ctrl,
                             const std::function<void(double, std::span<const double>)>& check = {});

}  // namespace mbpower
