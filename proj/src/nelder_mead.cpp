#include "mbpower/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mbpower/common.hpp"

namespace mbpower {

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> x0, const NelderMeadOptions& opts) {
  const std::size_t n = x0.size();
  if (n == 0) throw Error("Nelder-Mead needs at least one dimension");
  if (opts.initial_step.size() != n) throw Error("initial step size does not match dimension");

  NelderMeadResult res;
  auto eval = [&](const std::vector<double>& x) {
    ++res.evals;
    const double v = f(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::max();
  };

  std::vector<std::vector<double>> simplex(n + 1, x0);
  for (std::size_t k = 0; k < n; ++k) simplex[k + 1][k] += opts.initial_step[k];
  std::vector<double> fv(n + 1);
  for (std::size_t k = 0; k <= n; ++k) fv[k] = eval(simplex[k]);

  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n), xr(n), xe(n), xc(n);
  auto sort_simplex = [&] {
    std::iota(order.begin(), order.end(), 0);
    // Stable on ties so the run is reproducible.
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
    std::vector<std::vector<double>> s(n + 1);
    std::vector<double> v(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
      s[k] = std::move(simplex[order[k]]);
      v[k] = fv[order[k]];
    }
    simplex.swap(s);
    fv.swap(v);
  };
  auto point = [&](double t, std::vector<double>& out) {
    for (std::size_t c = 0; c < n; ++c) out[c] = centroid[c] + t * (simplex[n][c] - centroid[c]);
  };

  while (true) {
    sort_simplex();
    double extent = 0.0;
    for (std::size_t k = 1; k <= n; ++k)
      for (std::size_t c = 0; c < n; ++c)
        extent = std::max(extent, std::abs(simplex[k][c] - simplex[0][c]));
    const double spread = std::abs(fv[n] - fv[0]);
    if (extent < opts.x_tol && spread <= opts.f_tol_rel * std::max(std::abs(fv[0]), 1e-300)) {
      res.converged = true;
      break;
    }
    if (res.evals >= opts.max_evals) break;
    ++res.iterations;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t c = 0; c < n; ++c) centroid[c] += simplex[k][c] / static_cast<double>(n);

    point(-1.0, xr);
    const double fr = eval(xr);
    if (fr < fv[0]) {
      point(-2.0, xe);
      const double fe = eval(xe);
      if (fe < fr) {
        simplex[n] = xe;
        fv[n] = fe;
      } else {
        simplex[n] = xr;
        fv[n] = fr;
      }
    } else if (fr < fv[n - 1]) {
      simplex[n] = xr;
      fv[n] = fr;
    } else {
      const bool outside = fr < fv[n];
      point(outside ? -0.5 : 0.5, xc);
      const double fc = eval(xc);
      if (fc < std::min(fr, fv[n])) {
        simplex[n] = xc;
        fv[n] = fc;
      } else {
        for (std::size_t k = 1; k <= n; ++k) {
          for (std::size_t c = 0; c < n; ++c)
            simplex[k][c] = simplex[0][c] + 0.5 * (simplex[k][c] - simplex[0][c]);
          fv[k] = eval(simplex[k]);
        }
      }
    }
  }
  res.x = simplex[0];
  res.f = fv[0];
  return res;
}

}  // namespace mbpower
