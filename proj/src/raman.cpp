#include "mbpower/raman.hpp"

#include <cmath>
#include <sstream>

#include "mbpower/ode.hpp"

namespace mbpower {

double RamanGainSpec::cr(double df_thz) const {
  if (df_thz <= 0.0) return 0.0;
  if (const auto* tri = std::get_if<TriangularGain>(&profile))
    return df_thz <= tri->cutoff_thz ? tri->slope * df_thz : 0.0;
  const auto& pts = std::get<TabulatedGain>(profile).points;
  if (pts.empty() || df_thz > pts.back().first) return 0.0;
  if (df_thz <= pts.front().first) {
    // Ramp from the implicit Cr(0) = 0 to the first tabulated point.
    return pts.front().first > 0.0 ? pts.front().second * df_thz / pts.front().first
                                   : pts.front().second;
  }
  auto hi = std::upper_bound(pts.begin(), pts.end(), df_thz,
                             [](double v, const auto& p) { return v < p.first; });
  auto lo = hi - 1;
  if (hi == pts.end()) return lo->second;
  const double t = (df_thz - lo->first) / (hi->first - lo->first);
  return lo->second + t * (hi->second - lo->second);
}

void RamanGainSpec::validate() const {
  if (const auto* tri = std::get_if<TriangularGain>(&profile)) {
    if (tri->slope < 0.0) throw Error("Raman slope must be non-negative");
    if (tri->cutoff_thz < 0.0) throw Error("Raman cutoff must be non-negative");
    return;
  }
  const auto& pts = std::get<TabulatedGain>(profile).points;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    if (pts[k].first < 0.0 || pts[k].second < 0.0)
      throw Error("Raman table entries must be non-negative");
    if (k > 0 && !(pts[k].first > pts[k - 1].first))
      throw Error("Raman table frequency offsets must be strictly increasing");
  }
  if (!pts.empty() && pts.front().first == 0.0 && pts.front().second != 0.0)
    throw Error("Raman gain must vanish at zero frequency offset");
}

void FiberSpan::validate(const ChannelGrid& grid) const {
  if (!(length_km > 0.0)) throw Error("span length must be positive");
  for (const Channel& ch : grid.channels()) {
    if (!(alpha_db_per_km(ch.f_center_thz) > 0.0))
      throw Error("fiber loss must be positive at " + std::to_string(ch.f_center_thz) + " THz");
    if (!(gamma(ch.f_center_thz) >= 0.0))
      throw Error("fiber nonlinearity must be non-negative");
  }
  raman.validate();
}

FiberSpan without_raman(const FiberSpan& span) {
  FiberSpan out = span;
  out.raman.profile = TriangularGain{0.0, 0.0};
  return out;
}

namespace {

bool has_coupling(const RamanGainSpec& r) {
  if (const auto* tri = std::get_if<TriangularGain>(&r.profile))
    return tri->slope > 0.0 && tri->cutoff_thz > 0.0;
  for (const auto& p : std::get<TabulatedGain>(r.profile).points)
    if (p.second > 0.0) return true;
  return false;
}

}  // namespace

PowerProfile propagate(const FiberSpan& span, const std::vector<double>& input_powers,
                       const ChannelGrid& grid, const RamanControl& ctrl) {
  const std::size_t n = grid.size();
  if (input_powers.size() != n) throw Error("input power count does not match the grid");
  for (double p : input_powers)
    if (!(p > 0.0) || !std::isfinite(p)) throw Error("span input powers must be positive");
  if (!(ctrl.rel_tol > 0.0) || !(ctrl.max_step_km > 0.0))
    throw Error("Raman solver tolerances must be positive");

  std::vector<double> alpha(n);
  for (std::size_t i = 0; i < n; ++i) alpha[i] = span.alpha(grid[i].f_center_thz);

  // coupling[i*n + j]: gain (positive, from higher j) or depletion (negative,
  // to lower j) of channel i per watt of channel j.
  const bool coupled = has_coupling(span.raman);
  std::vector<double> coupling;
  if (coupled) {
    coupling.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double fi = grid[i].f_center_thz;
      for (std::size_t j = 0; j < n; ++j) {
        const double fj = grid[j].f_center_thz;
        if (fj > fi) {
          coupling[i * n + j] = span.raman.cr(fj - fi);
        } else if (fj < fi) {
          const double k = span.raman.photon_flux_correction ? fi / fj : 1.0;
          coupling[i * n + j] = -k * span.raman.cr(fi - fj);
        }
      }
    }
  }

  OdeRhs rhs = [&](double, std::span<const double> p, std::span<double> dp) {
    for (std::size_t i = 0; i < n; ++i) {
      double g = -alpha[i];
      if (coupled) {
        const double* row = &coupling[i * n];
        for (std::size_t j = 0; j < n; ++j) g += row[j] * p[j];
      }
      dp[i] = p[i] * g;
    }
  };
  auto check = [](double z, std::span<const double> p) {
    for (double v : p) {
      if (!(v > 0.0) || !std::isfinite(v)) {
        std::ostringstream msg;
        msg << "non-positive or non-finite channel power at z = " << z << " km";
        throw Error(msg.str());
      }
    }
  };

  OdeControl oc;
  oc.rel_tol = ctrl.rel_tol;
  oc.max_step = ctrl.max_step_km;
  OdeSolution sol;
  try {
    sol = integrate_dopri5(rhs, 0.0, span.length_km, input_powers, oc, check);
  } catch (const StepUnderflow& e) {
    std::ostringstream msg;
    msg << "Raman solver failed at z = " << e.at() << " km: " << e.what();
    throw Error(msg.str());
  }
  return PowerProfile{std::move(sol.t), std::move(sol.y)};
}

std::vector<double> triangular_profile(const FiberSpan& span,
                                       const std::vector<double>& input_powers,
                                       const ChannelGrid& grid, double z_km) {
  const auto* tri = std::get_if<TriangularGain>(&span.raman.profile);
  if (!tri) throw Error("triangular_profile needs a triangular Raman gain");
  if (z_km < 0.0 || z_km > span.length_km) throw Error("z outside the span");
  if (input_powers.size() != grid.size()) throw Error("input power count does not match the grid");
  if (grid.empty()) return {};
  if (tri->slope > 0.0 && grid.f_max_thz() - grid.f_min_thz() > tri->cutoff_thz)
    throw Error("comb is wider than the Raman gain cutoff");

  const double f_mid = 0.5 * (grid.f_min_thz() + grid.f_max_thz());
  const double a = span.alpha(f_mid);
  const double leff = (1.0 - std::exp(-a * z_km)) / a;
  double p_tot = 0.0;
  for (double p : input_powers) p_tot += p;
  const double k = p_tot * tri->slope * leff;

  double denom = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j)
    denom += input_powers[j] * std::exp(-k * (grid[j].f_center_thz - f_mid));
  std::vector<double> out(grid.size());
  const double loss = std::exp(-a * z_km);
  for (std::size_t i = 0; i < grid.size(); ++i)
    out[i] = input_powers[i] * loss * p_tot * std::exp(-k * (grid[i].f_center_thz - f_mid)) / denom;
  return out;
}

double effective_length(const PowerProfile& profile, std::size_t channel) {
  double sum = 0.0;
  for (std::size_t k = 1; k < profile.z_km.size(); ++k)
    sum += 0.5 * (profile.rho(k - 1, channel) + profile.rho(k, channel)) *
           (profile.z_km[k] - profile.z_km[k - 1]);
  return sum;
}

double net_gain(const PowerProfile& profile, std::size_t channel) {
  return profile.rho(profile.z_km.size() - 1, channel);
}

}  // namespace mbpower
