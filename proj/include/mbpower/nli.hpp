#pragma once

#include <vector>

#include "mbpower/noise.hpp"
#include "mbpower/raman.hpp"

namespace mbpower {

/// Per-span NLI efficiencies: P_NLI,i = eta_spm[i] P_i^3 + sum_j eta_xpm[i][j] P_i P_j^2.
struct NliCoefficients {
  std::vector<double> eta_spm;               // 1/W^2
  std::vector<std::vector<double>> eta_xpm;  // 1/W^2, zero diagonal
};

/// Group-velocity dispersion in ps^2/km at f, from the span's D/S model.
double beta2_at(const FiberSpan& span, double f_thz);

/// Closed-form incoherent GN coefficients for one span. ISRS enters through the
/// per-channel effective lengths of `profile`.
NliCoefficients compute_span_eta(const FiberSpan& span, const PowerProfile& profile,
                                 const ChannelGrid& grid);

/// One NliCoefficients per span of the link.
std::vector<NliCoefficients> compute_eta(const LinkSpec& link,
                                         const std::vector<PowerProfile>& profiles,
                                         const ChannelGrid& grid);

/// Accumulated NLI power per channel in W, incoherent across spans.
std::vector<double> nli_power(const LinkSpec& link, const std::vector<double>& launch,
                              const std::vector<NliCoefficients>& etas);

}  // namespace mbpower
