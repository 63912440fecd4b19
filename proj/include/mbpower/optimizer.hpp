#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "mbpower/metrics.hpp"
#include "mbpower/noise.hpp"
#include "mbpower/spectrum.hpp"

namespace mbpower {

struct Evaluation {
  std::vector<double> launch_w;
  std::vector<ChannelReport> reports;
  double total_tbps = 0.0;
};

struct OptimizationResult {
  LaunchSpectrum best_spectrum;
  double best_total = 0.0;  // Tb/s
  std::vector<ChannelReport> reports;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
  int restarts_used = 0;
  double residual_db = 0.0;  // max |gap_3db - 3.01 dB| over channels
};

struct PowerBounds {
  double min_dbm = -15.0;
  double max_dbm = 15.0;
  double clamp(double dbm) const { return std::clamp(dbm, min_dbm, max_dbm); }
};

struct OptimizeOptions {
  int restarts = 4;
  int max_evals = 6000;  // per restart
  double x_tol_db = 0.01;
  double f_tol_relative = 1e-7;
  std::uint64_t seed = 1;
  double initial_step_db = 1.5;
  double restart_spread_db = 3.0;
  PowerBounds bounds;
  int threads = 1;
};

struct EnforceOptions {
  double tol_db = 0.05;
  int max_iters = 200;
  double damping = 0.5;
  PowerBounds bounds;
};

/// Cube-root optimum of P_NLI = eta P^3 against fixed ASE.
double analytic_opt_power(double eta, double p_ase);

/// Full link evaluation: per-span ISRS profiles, ASE, NLI, per-channel reports.
Evaluation evaluate(const LinkSpec& link, const LaunchSpectrum& spec, const ThroughputCurve& curve);

/// Flat launch at the ISRS-off analytic optimum of the center channel, in dBm.
double flat_start_dbm(const LinkSpec& link);

/// Maximizes total throughput over per-band cubic launch spectra.
OptimizationResult optimize_throughput(const LinkSpec& link, const ThroughputCurve& curve,
                                       const OptimizeOptions& opts = {});

/// Drives every channel to P_NLI = P_ASE / 2 by a damped block Gauss-Seidel
/// fixed point on explicit per-channel powers, one band per block.
OptimizationResult enforce_3db(const LinkSpec& link, const ThroughputCurve& curve,
                               const EnforceOptions& opts = {});

/// Largest |gap_3db - 3.0103 dB| over the reports.
double rule_residual_db(const std::vector<ChannelReport>& reports);

/// Low-discrepancy point in [0,1)^dim: Halton sequence with a seeded
/// Cranley-Patterson shift.
std::vector<double> shifted_halton(std::size_t index, std::size_t dim, std::uint64_t seed);

}  // namespace mbpower
