#include "mbpower/optimizer.hpp"

#include <cmath>
#include <future>
#include <limits>
#include <random>

#include "mbpower/nelder_mead.hpp"
#include "mbpower/nli.hpp"

namespace mbpower {

double analytic_opt_power(double eta, double p_ase) {
  if (!(eta > 0.0) || !(p_ase > 0.0)) throw Error("analytic optimum needs eta > 0 and p_ase > 0");
  return std::cbrt(p_ase / (2.0 * eta));
}

Evaluation evaluate(const LinkSpec& link, const LaunchSpectrum& spec, const ThroughputCurve& curve) {
  Evaluation ev;
  ev.launch_w = eval_launch(spec, link.grid);
  const std::vector<PowerProfile> profiles = span_profiles(link, ev.launch_w);
  const std::vector<double> ase = ase_accumulate(link, ev.launch_w, profiles);
  const std::vector<double> nli = nli_power(link, ev.launch_w, compute_eta(link, profiles, link.grid));

  ev.reports.reserve(link.grid.size());
  for (std::size_t i = 0; i < link.grid.size(); ++i) {
    const Channel& ch = link.grid[i];
    try {
      ev.reports.push_back(make_report(ch.index, ch.f_center_thz, ev.launch_w[i], ase[i], nli[i],
                                       ch.symbol_rate_gbaud, curve));
    } catch (const Error& e) {
      throw Error("channel " + std::to_string(ch.index) + ": " + e.what());
    }
  }
  ev.total_tbps = total_throughput(ev.reports);
  return ev;
}

double flat_start_dbm(const LinkSpec& link) {
  LinkSpec off = link;
  off.isrs_enabled = false;
  const ExplicitPowers flat{std::vector<double>(link.grid.size(), 1e-3)};
  const Evaluation ev = evaluate(off, flat, ShannonCurve{});
  const ChannelReport& mid = ev.reports[link.grid.size() / 2];
  if (!(mid.p_nli > 0.0)) return 0.0;  // no nonlinearity: no interior optimum
  const double eta = mid.p_nli / (mid.p_launch * mid.p_launch * mid.p_launch);
  return w_to_dbm(analytic_opt_power(eta, mid.p_ase));
}

double rule_residual_db(const std::vector<ChannelReport>& reports) {
  double worst = 0.0;
  for (const ChannelReport& r : reports)
    worst = std::max(worst, std::abs(gap_3db(r) - constants::kThreeDb));
  return worst;
}

std::vector<double> shifted_halton(std::size_t index, std::size_t dim, std::uint64_t seed) {
  static constexpr int kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29,
                                    31, 37, 41, 43, 47, 53, 59, 61, 67, 71};
  if (dim > std::size(kPrimes)) throw Error("Halton dimension too large");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::vector<double> out(dim);
  for (std::size_t d = 0; d < dim; ++d) {
    const int base = kPrimes[d];
    double f = 1.0, r = 0.0;
    for (std::size_t i = index + 1; i > 0; i /= base) {
      f /= base;
      r += f * static_cast<double>(i % base);
    }
    out[d] = std::fmod(r + uni(rng), 1.0);
  }
  return out;
}

namespace {

PerBandCubic to_cubic(const BandPlan& plan, const std::vector<double>& x) {
  PerBandCubic c;
  for (std::size_t b = 0; b < plan.size(); ++b)
    c.bands[plan.bands()[b].name] = {x[4 * b], x[4 * b + 1], x[4 * b + 2], x[4 * b + 3]};
  return c;
}

ExplicitPowers clamped(const LaunchSpectrum& spec, const ChannelGrid& grid, const PowerBounds& b) {
  ExplicitPowers out{eval_launch(spec, grid)};
  for (double& p : out.powers_w) p = dbm_to_w(b.clamp(w_to_dbm(p)));
  return out;
}

struct RestartOutcome {
  NelderMeadResult nm;
  int evals = 0;
  int iterations = 0;
};

}  // namespace

OptimizationResult optimize_throughput(const LinkSpec& link, const ThroughputCurve& curve,
                                       const OptimizeOptions& opts) {
  const std::size_t dim = 4 * link.plan.size();
  auto objective = [&](const std::vector<double>& x) {
    try {
      return -evaluate(link, clamped(to_cubic(link.plan, x), link.grid, opts.bounds), curve)
                  .total_tbps;
    } catch (const Error&) {
      return std::numeric_limits<double>::infinity();
    }
  };

  std::vector<double> start(dim, 0.0);
  const double s = opts.bounds.clamp(flat_start_dbm(link));
  for (std::size_t b = 0; b < link.plan.size(); ++b) start[4 * b] = s;

  auto run_restart = [&](int r) {
    std::vector<double> x0 = start;
    if (r > 0) {
      const std::vector<double> u = shifted_halton(static_cast<std::size_t>(r - 1), dim, opts.seed);
      for (std::size_t d = 0; d < dim; ++d) x0[d] += (2.0 * u[d] - 1.0) * opts.restart_spread_db;
    }
    NelderMeadOptions nmo;
    nmo.initial_step.assign(dim, opts.initial_step_db);
    nmo.x_tol = opts.x_tol_db;
    nmo.f_tol_rel = opts.f_tol_relative;

    RestartOutcome out;
    int budget = opts.max_evals;
    // Re-seed the simplex at each converged point until it stops improving.
    for (int round = 0; round < 5 && budget > 0; ++round) {
      nmo.max_evals = budget;
      NelderMeadResult nm = nelder_mead(objective, round == 0 ? x0 : out.nm.x, nmo);
      budget -= nm.evals;
      out.evals += nm.evals;
      out.iterations += nm.iterations;
      const bool improved =
          round == 0 || nm.f < out.nm.f - opts.f_tol_relative * std::abs(out.nm.f);
      if (round == 0 || nm.f < out.nm.f) out.nm = nm;
      if (!improved || !nm.converged) {
        out.nm.converged = nm.converged;
        break;
      }
    }
    return out;
  };

  const int restarts = std::max(1, opts.restarts);
  std::vector<RestartOutcome> outcomes(restarts);
  if (opts.threads > 1) {
    std::vector<std::future<RestartOutcome>> futures;
    for (int r = 0; r < restarts; ++r) futures.push_back(std::async(std::launch::async, run_restart, r));
    for (int r = 0; r < restarts; ++r) outcomes[r] = futures[r].get();
  } else {
    for (int r = 0; r < restarts; ++r) outcomes[r] = run_restart(r);
  }

  int best = 0;
  OptimizationResult res;
  for (int r = 0; r < restarts; ++r) {
    res.evaluations += outcomes[r].evals;
    res.iterations += outcomes[r].iterations;
    if (outcomes[r].nm.f < outcomes[best].nm.f) best = r;
  }
  const PerBandCubic cubic = to_cubic(link.plan, outcomes[best].nm.x);
  Evaluation ev = evaluate(link, clamped(cubic, link.grid, opts.bounds), curve);
  res.best_spectrum = cubic;
  res.best_total = ev.total_tbps;
  res.reports = std::move(ev.reports);
  res.converged = outcomes[best].nm.converged;
  res.restarts_used = restarts;
  res.residual_db = rule_residual_db(res.reports);
  return res;
}

OptimizationResult enforce_3db(const LinkSpec& link, const ThroughputCurve& curve,
                               const EnforceOptions& opts) {
  if (!(opts.damping > 0.0) || opts.damping > 1.0) throw Error("damping must lie in (0, 1]");
  const std::size_t n = link.grid.size();
  std::vector<double> p_dbm(n, opts.bounds.clamp(flat_start_dbm(link)));
  auto powers = [&] {
    ExplicitPowers e;
    e.powers_w.resize(n);
    for (std::size_t i = 0; i < n; ++i) e.powers_w[i] = dbm_to_w(p_dbm[i]);
    return e;
  };

  OptimizationResult res;
  Evaluation ev = evaluate(link, powers(), curve);
  res.evaluations = 1;
  while (true) {
    res.residual_db = rule_residual_db(ev.reports);
    if (res.residual_db <= opts.tol_db) {
      res.converged = true;
      break;
    }
    if (res.iterations >= opts.max_iters) break;
    ++res.iterations;
    for (std::size_t b = 0; b < link.plan.size(); ++b) {
      const std::vector<std::size_t> members = link.grid.band_members(link.plan.bands()[b].name);
      if (b > 0) {
        ev = evaluate(link, powers(), curve);
        ++res.evaluations;
      }
      for (std::size_t i : members) {
        const ChannelReport& r = ev.reports[i];
        if (!(r.p_nli > 0.0)) continue;
        // Noiseless (attenuated) channels have a zero-power fixed point.
        const double eta = r.p_nli / (r.p_launch * r.p_launch * r.p_launch);
        const double target =
            r.p_ase > 0.0 ? w_to_dbm(analytic_opt_power(eta, r.p_ase)) : opts.bounds.min_dbm;
        p_dbm[i] = opts.bounds.clamp(p_dbm[i] + opts.damping * (target - p_dbm[i]));
      }
    }
    ev = evaluate(link, powers(), curve);
    ++res.evaluations;
  }
  res.best_spectrum = powers();
  res.best_total = ev.total_tbps;
  res.reports = std::move(ev.reports);
  return res;
}

}  // namespace mbpower
