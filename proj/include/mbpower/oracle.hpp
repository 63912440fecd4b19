#pragma once

#include <vector>

#include "mbpower/raman.hpp"
#include "mbpower/spectrum.hpp"

namespace mbpower {

struct QuadratureSpec {
  int points_per_axis = 1200;  // resolves the ~0.4 GHz XPM kernel ridge
};

struct OracleResult {
  double p_nli_w = 0.0;         // at 2 * points_per_axis (refined)
  double p_nli_coarse_w = 0.0;  // at points_per_axis
  bool converged = false;       // refined and coarse agree within 1 %
};

inline constexpr std::size_t kOracleMaxChannels = 5;

/// Brute-force GN-model NLI power of one channel over one span: the double
/// integral over (f1, f2) of the flat-top channel PSDs times the squared link
/// kernel built from `profile`, evaluated at the channel center and scaled by
/// its symbol rate. Test-time reference only; limited to five channels.
OracleResult gn_integral(const FiberSpan& span, const PowerProfile& profile,
                         const ChannelGrid& grid, const std::vector<double>& launch,
                         std::size_t channel, const QuadratureSpec& quad = {});

/// Single-resolution evaluation behind gn_integral.
double gn_integral_at(const FiberSpan& span, const PowerProfile& profile,
                      const ChannelGrid& grid, const std::vector<double>& launch,
                      std::size_t channel, int points_per_axis);

}  // namespace mbpower
