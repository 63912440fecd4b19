#pragma once

#include <functional>
#include <vector>

namespace mbpower {

struct NelderMeadOptions {
  std::vector<double> initial_step;  // per coordinate
  int max_evals = 5000;
  double x_tol = 1e-3;      // simplex extent, per coordinate
  double f_tol_rel = 1e-9;  // (f_worst - f_best) / |f_best|
};

struct NelderMeadResult {
  std::vector<double> x;
  double f = 0.0;
  int evals = 0;
  int iterations = 0;
  bool converged = false;
};

/// Minimizes f with the classic Nelder-Mead simplex (reflection 1,
/// expansion 2, contraction 1/2, shrink 1/2). Deterministic.
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> x0, const NelderMeadOptions& opts);

}  // namespace mbpower
