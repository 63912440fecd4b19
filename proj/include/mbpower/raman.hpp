#pragma once

#include <variant>
#include <vector>

#include "mbpower/common.hpp"
#include "mbpower/spectrum.hpp"

namespace mbpower {

/// Cr(df) = slope * df for 0 <= df <= cutoff, zero beyond.
struct TriangularGain {
  double slope = 0.028;  // 1/(W km THz)
  double cutoff_thz = 14.0;
  bool operator==(const TriangularGain&) const = default;
};

/// (df in THz, Cr in 1/(W km)) pairs, linear in between, zero past the last point.
struct TabulatedGain {
  std::vector<std::pair<double, double>> points;
  bool operator==(const TabulatedGain&) const = default;
};

struct RamanGainSpec {
  std::variant<TriangularGain, TabulatedGain> profile = TriangularGain{};
  bool photon_flux_correction = true;

  /// Gain coefficient in 1/(W km) seen by the lower-frequency channel of a
  /// pair separated by df >= 0.
  double cr(double df_thz) const;
  void validate() const;
  bool operator==(const RamanGainSpec&) const = default;
};

struct FiberSpan {
  double length_km = 100.0;
  Table alpha_db_per_km{0.2};    // over THz
  double d_ref = 16.7;           // ps/(nm km)
  double s_ref = 0.06;           // ps/(nm^2 km)
  double lambda_ref_nm = 1550.0;
  Table gamma{1.3};              // 1/(W km), over THz
  RamanGainSpec raman;

  /// Attenuation in 1/km at f.
  double alpha(double f_thz) const { return db_per_km_to_neper(alpha_db_per_km(f_thz)); }
  void validate(const ChannelGrid& grid) const;
  bool operator==(const FiberSpan&) const = default;
};

/// Copy of the span with all Raman coupling removed.
FiberSpan without_raman(const FiberSpan& span);

/// Per-channel power along one span; powers[k][i] is channel i at z_km[k].
struct PowerProfile {
  std::vector<double> z_km;
  std::vector<std::vector<double>> powers;

  std::size_t channels() const { return powers.empty() ? 0 : powers.front().size(); }
  double length_km() const { return z_km.back(); }
  /// Normalized power P_i(z_k) / P_i(0).
  double rho(std::size_t k, std::size_t i) const { return powers[k][i] / powers[0][i]; }
};

struct RamanControl {
  double rel_tol = 1e-8;
  double max_step_km = 1.0;
};

/// Solves the coupled ISRS power equations over one span with adaptive RK.
PowerProfile propagate(const FiberSpan& span, const std::vector<double>& input_powers,
                       const ChannelGrid& grid, const RamanControl& ctrl = {});

/// Closed-form power-conserving solution for a triangular gain profile with
/// frequency-flat loss (taken at the comb center). Requires the whole comb to
/// lie within the gain cutoff.
std::vector<double> triangular_profile(const FiberSpan& span,
                                       const std::vector<double>& input_powers,
                                       const ChannelGrid& grid, double z_km);

/// Integral of P_i(z)/P_i(0) over the span (trapezoidal on the profile grid).
double effective_length(const PowerProfile& profile, std::size_t channel);

/// P_i(L) / P_i(0).
double net_gain(const PowerProfile& profile, std::size_t channel);

}  // namespace mbpower
