#include "mbpower/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "mbpower/nli.hpp"

namespace mbpower {

namespace {

void check_inputs(const PowerProfile& profile, const ChannelGrid& grid,
                  const std::vector<double>& launch, std::size_t channel, int points) {
  if (grid.size() > kOracleMaxChannels)
    throw Error("the GN integral oracle is limited to " + std::to_string(kOracleMaxChannels) +
                " channels");
  if (channel >= grid.size()) throw Error("oracle channel index out of range");
  if (launch.size() != grid.size() || profile.channels() != grid.size())
    throw Error("oracle inputs do not match the channel grid");
  if (points < 3) throw Error("oracle needs at least 3 points per axis");
}

}  // namespace

double gn_integral_at(const FiberSpan& span, const PowerProfile& profile,
                      const ChannelGrid& grid, const std::vector<double>& launch,
                      std::size_t channel, int points_per_axis) {
  using cd = std::complex<double>;
  check_inputs(profile, grid, launch, channel, points_per_axis);
  const std::size_t nch = grid.size();
  const std::size_t nz = profile.z_km.size();
  const double f0 = grid[channel].f_center_hz();

  // Flat-top PSD of width symbol rate, frequencies relative to f0.
  std::vector<double> lo(nch), hi(nch), psd(nch);
  for (std::size_t c = 0; c < nch; ++c) {
    const double b = grid[c].symbol_rate_hz();
    lo[c] = grid[c].f_center_hz() - f0 - 0.5 * b;
    hi[c] = grid[c].f_center_hz() - f0 + 0.5 * b;
    psd[c] = launch[c] / b;
  }
  std::vector<std::vector<double>> log_rho(nch, std::vector<double>(nz));
  for (std::size_t c = 0; c < nch; ++c)
    for (std::size_t k = 0; k < nz; ++k) log_rho[c][k] = std::log(profile.rho(k, c));

  // Field amplitude sqrt(rho1 rho2 rho3 / rho) for every channel triple.
  const int cc = static_cast<int>(channel);
  std::vector<std::vector<double>> amp(nch * nch * nch);
  auto amplitude = [&](int c1, int c2, int c3) -> const std::vector<double>& {
    auto& a = amp[(c1 * nch + c2) * nch + c3];
    if (a.empty()) {
      a.resize(nz);
      for (std::size_t k = 0; k < nz; ++k)
        a[k] = std::exp(0.5 * (log_rho[c1][k] + log_rho[c2][k] + log_rho[c3][k] - log_rho[cc][k]));
    }
    return a;
  };

  // Midpoint cells over the comb; a cell straddling a channel edge counts
  // with the fraction it overlaps, which keeps the rule second order.
  const int n = points_per_axis;
  const double x0 = lo.front(), x1 = hi.back();
  const double h = (x1 - x0) / n;
  struct Share {
    int c;
    double w;
  };
  auto shares = [&](double f, std::vector<Share>& out) {
    out.clear();
    for (std::size_t c = 0; c < nch; ++c) {
      const double w = std::clamp(std::min(f - lo[c], hi[c] - f) / h + 0.5, 0.0, 1.0);
      if (w > 0.0) out.push_back({static_cast<int>(c), w});
    }
  };
  std::vector<double> x(n);
  std::vector<std::vector<Share>> own(n);
  for (int k = 0; k < n; ++k) {
    x[k] = x0 + (k + 0.5) * h;
    shares(x[k], own[k]);
  }

  const double four_pi2 = 4.0 * constants::kPi * constants::kPi;
  std::vector<Share> third;
  double sum = 0.0;
  for (int a = 0; a < n; ++a) {
    if (own[a].empty()) continue;
    for (int b = 0; b < n; ++b) {
      if (own[b].empty()) continue;
      shares(x[a] + x[b], third);
      if (third.empty()) continue;

      const double fmid_thz = (f0 + 0.5 * (x[a] + x[b])) * 1e-12;
      const double beta2 = beta2_at(span, fmid_thz) * 1e-24;  // s^2/km
      const double kz = four_pi2 * beta2 * x[a] * x[b];       // rad/km
      const double gamma = span.gamma(fmid_thz) * 1e-3;       // 1/(W m)

      for (const Share& s1 : own[a])
        for (const Share& s2 : own[b])
          for (const Share& s3 : third) {
            const std::vector<double>& w = amplitude(s1.c, s2.c, s3.c);
            // Exact integral of a log-linear amplitude times exp(j kz z) per segment.
            cd kernel = 0.0;
            cd prev = w[0] * std::polar(1.0, kz * profile.z_km[0]);
            for (std::size_t k = 1; k < nz; ++k) {
              const double dz = profile.z_km[k] - profile.z_km[k - 1];
              const cd next = w[k] * std::polar(1.0, kz * profile.z_km[k]);
              const cd rate(std::log(w[k] / w[k - 1]) / dz, kz);
              if (std::abs(rate) * dz < 1e-6)
                kernel += 0.5 * (prev + next) * dz;
              else
                kernel += (next - prev) / rate;
              prev = next;
            }
            const double lk = std::abs(kernel) * 1e3;  // m
            sum += s1.w * s2.w * s3.w * gamma * gamma * psd[s1.c] * psd[s2.c] * psd[s3.c] * lk * lk;
          }
    }
  }
  const double g_nli = 16.0 / 27.0 * sum * h * h;
  return g_nli * grid[channel].symbol_rate_hz();
}

OracleResult gn_integral(const FiberSpan& span, const PowerProfile& profile,
                         const ChannelGrid& grid, const std::vector<double>& launch,
                         std::size_t channel, const QuadratureSpec& quad) {
  check_inputs(profile, grid, launch, channel, quad.points_per_axis);
  OracleResult r;
  r.p_nli_coarse_w = gn_integral_at(span, profile, grid, launch, channel, quad.points_per_axis);
  r.p_nli_w = gn_integral_at(span, profile, grid, launch, channel, 2 * quad.points_per_axis);
  r.converged = r.p_nli_w == 0.0
                    ? r.p_nli_coarse_w == 0.0
                    : std::abs(r.p_nli_w - r.p_nli_coarse_w) <= 0.01 * std::abs(r.p_nli_w);
  return r;
}

}  // namespace mbpower
