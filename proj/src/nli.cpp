#include "mbpower/nli.hpp"

#include <cmath>

namespace mbpower {

namespace {
constexpr double kSpeedOfLightNmPerPs = 299792.458;
}

double beta2_at(const FiberSpan& span, double f_thz) {
  const double lambda_nm = kSpeedOfLightNmPerPs / f_thz;  // THz = 1/ps
  const double d = span.d_ref + span.s_ref * (lambda_nm - span.lambda_ref_nm);
  return -d * lambda_nm * lambda_nm / (2.0 * constants::kPi * kSpeedOfLightNmPerPs);
}

NliCoefficients compute_span_eta(const FiberSpan& span, const PowerProfile& profile,
                                 const ChannelGrid& grid) {
  using constants::kPi;
  const std::size_t n = grid.size();
  if (profile.channels() != n) throw Error("profile does not match the channel grid");

  // SI throughout: m, s, Hz, 1/(W m).
  std::vector<double> leff(n), leff_a(n), bw(n), f_hz(n);
  for (std::size_t i = 0; i < n; ++i) {
    leff[i] = effective_length(profile, i) * 1e3;
    leff_a[i] = 1.0 / span.alpha(grid[i].f_center_thz) * 1e3;
    bw[i] = grid[i].symbol_rate_hz();
    f_hz[i] = grid[i].f_center_hz();
  }
  auto beta2_si = [&](double f_thz) {
    const double b2 = std::abs(beta2_at(span, f_thz)) * 1e-27;
    if (!(b2 > 0.0))
      throw Error("zero local dispersion at " + std::to_string(f_thz) +
                  " THz; the closed-form NLI needs nonzero beta2");
    return b2;
  };
  auto gamma_si = [&](double f_thz) { return span.gamma(f_thz) * 1e-3; };

  NliCoefficients out;
  out.eta_spm.resize(n);
  out.eta_xpm.assign(n, std::vector<double>(n, 0.0));
  constexpr double kPrefactor = 16.0 / 27.0 / (2.0 * kPi);
  for (std::size_t i = 0; i < n; ++i) {
    const double fi = grid[i].f_center_thz;
    const double g = gamma_si(fi);
    const double b2 = beta2_si(fi);
    const double bi2 = bw[i] * bw[i];
    out.eta_spm[i] = kPrefactor * g * g * leff[i] * leff[i] / (b2 * leff_a[i] * bi2) *
                     std::asinh(0.5 * kPi * kPi * b2 * leff_a[i] * bi2);

    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double fm = 0.5 * (fi + grid[j].f_center_thz);
      const double df = std::abs(f_hz[i] - f_hz[j]);
      const double half = 0.5 * bw[j];
      if (df <= half)
        throw Error("channels " + std::to_string(grid[i].index) + " and " +
                    std::to_string(grid[j].index) + " overlap in the NLI model");
      const double gm = gamma_si(fm);
      const double b2m = beta2_si(fm);
      out.eta_xpm[i][j] = kPrefactor * gm * gm * leff[j] * leff[j] /
                          (b2m * leff_a[j] * bw[j] * bw[j]) * std::log((df + half) / (df - half));
    }
  }
  return out;
}

std::vector<NliCoefficients> compute_eta(const LinkSpec& link,
                                         const std::vector<PowerProfile>& profiles,
                                         const ChannelGrid& grid) {
  if (profiles.size() != link.spans.size()) throw Error("need one profile per span");
  std::vector<NliCoefficients> out;
  out.reserve(profiles.size());
  for (std::size_t s = 0; s < profiles.size(); ++s) {
    std::size_t same = s;
    for (std::size_t r = 0; r < s; ++r)
      if (link.spans[r] == link.spans[s] && profiles[r].z_km == profiles[s].z_km &&
          profiles[r].powers == profiles[s].powers) {
        same = r;
        break;
      }
    if (same != s)
      out.push_back(out[same]);
    else
      out.push_back(compute_span_eta(link.spans[s], profiles[s], grid));
  }
  return out;
}

std::vector<double> nli_power(const LinkSpec& link, const std::vector<double>& launch,
                              const std::vector<NliCoefficients>& etas) {
  const std::size_t n = launch.size();
  if (etas.size() != link.spans.size()) throw Error("need one coefficient set per span");
  std::vector<double> sq(n);
  for (std::size_t j = 0; j < n; ++j) sq[j] = launch[j] * launch[j];
  std::vector<double> out(n, 0.0);
  for (const NliCoefficients& eta : etas) {
    for (std::size_t i = 0; i < n; ++i) {
      double xpm = 0.0;
      const auto& row = eta.eta_xpm[i];
      for (std::size_t j = 0; j < n; ++j) xpm += row[j] * sq[j];
      out[i] += launch[i] * (eta.eta_spm[i] * sq[i] + xpm);
    }
  }
  return out;
}

}  // namespace mbpower
